#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "records.hpp"

namespace chargeaudit {

enum class MatchStatus { Matched, Unresolved, DroppedIncomplete, DroppedDuplicate };

std::string_view to_string(MatchStatus s);

struct MatchResult {
  PsaRecord psa;
  std::vector<CourtCase> matched_cases;  // ordered by court_number
  MatchStatus status = MatchStatus::Unresolved;
  std::size_t candidate_count = 0;
  std::string note;
};

struct CompletenessSplit {
  std::vector<PsaRecord> kept;
  std::vector<PsaRecord> dropped;
};

CompletenessSplit filter_complete(std::vector<PsaRecord> records);

/// sfid, administration date and the multiset of normalized booking charges.
std::string duplicate_key(const PsaRecord& r);

struct Deduplicated {
  std::vector<PsaRecord> unique;      // ordered by (key, record_id)
  std::vector<PsaRecord> duplicates;  // the copies that were dropped
};

/// Keeps the record with the smallest record_id for every duplicate key.
Deduplicated deduplicate(std::vector<PsaRecord> records);

// Court cases grouped by sfid; each group ordered by court_number.
class CaseIndex {
 public:
  explicit CaseIndex(std::span<const CourtCase> cases);
  std::span<const CourtCase* const> cases_for(const std::string& sfid) const;

 private:
  std::unordered_map<std::string, std::vector<const CourtCase*>> by_sfid_;
};

inline constexpr int kWindowDaysBefore = 1;
inline constexpr int kWindowDaysAfter = 2;

/// Same sfid and court arrest date within [psa - 1 day, psa + 2 days].
bool in_match_window(const Date& psa_arrest, const Date& court_arrest);

std::vector<CourtCase> find_candidates(const PsaRecord& psa, const CaseIndex& index);
std::vector<CourtCase> find_candidates(const PsaRecord& psa, std::span<const CourtCase> cases);

/// Narrows candidates by the first, then the second listed booking charge.
MatchResult resolve_match(const PsaRecord& psa, std::vector<CourtCase> candidates);

struct LinkageOutcome {
  std::vector<MatchResult> matched;
  std::vector<MatchResult> unresolved;
  std::vector<PsaRecord> incomplete;
  std::vector<PsaRecord> duplicates;

  std::size_t total() const {
    return matched.size() + unresolved.size() + incomplete.size() + duplicates.size();
  }
};

LinkageOutcome link_records(std::vector<PsaRecord> records, std::span<const CourtCase> cases);

}  // namespace chargeaudit
