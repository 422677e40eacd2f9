#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "engine.hpp"
#include "linkage.hpp"
#include "records.hpp"

namespace chargeaudit {

struct DispositionPolicy {
  int conviction_threshold = 159;  // codes strictly above are convictions
  int plea_to_other_code = 72;
  bool companion_zero_rule = true;
  std::vector<int> pending_codes;  // codes that do not close a charge

  static DispositionPolicy from_json_text(std::string_view text,
                                          std::string_view source = "disposition");
  static DispositionPolicy load(const std::string& path);
  void validate() const;
};

bool is_terminal(const std::optional<int>& code, const DispositionPolicy& policy);
bool fully_disposed(const CourtCase& c, const DispositionPolicy& policy);
bool has_plea_to_other(const CourtCase& c, const DispositionPolicy& policy);

/// `context` is the case the charge belongs to; it only matters for the
/// companion-zero rule.
bool is_conviction(int code, const CourtCase& context, const DispositionPolicy& policy);

std::vector<ChargeCode> conviction_charges(const CourtCase& c, const DispositionPolicy& policy);

/// Union over the matched cases, deduplicated by normalized text. Throws
/// NotDisposedError when any matched case still has an open charge.
std::vector<ChargeCode> conviction_charges(const MatchResult& match,
                                           const DispositionPolicy& policy);

/// Booked charges across the matched cases, deduplicated by normalized text.
std::vector<ChargeCode> court_booking_charges(const MatchResult& match);

/// FTA/NCA from the record; NVCA recomputed from the record's factors with
/// current-offense violence taken from `charges`.
PsaResult booking_assess(const PsaRecord& psa, std::span<const ChargeCode> charges,
                         const EngineConfig& engine);

/// As booking_assess over conviction charges, with extradition off.
PsaResult counterfactual_assess(const PsaRecord& psa, std::span<const ChargeCode> conv_charges,
                                const EngineConfig& engine);

struct AuditDeltas {
  bool exclusion_lost = false;
  bool bumpup_lost = false;
  bool nvca_lost = false;
  int recommendation_delta = 0;  // booking final rank minus conviction final rank

  bool operator==(const AuditDeltas&) const = default;
};

AuditDeltas compute_deltas(const PsaResult& booking, const PsaResult& conviction);

struct AuditPair {
  std::string record_id;
  std::string sfid;
  std::string group = "all";
  std::vector<std::string> court_numbers;
  std::vector<ChargeCode> booking_charges;
  std::vector<ChargeCode> conviction_charges;
  PsaResult booking;
  PsaResult conviction;
  AuditDeltas deltas;
  bool plea_other_only = false;  // plea noted but nothing on the original case convicted
};

enum class BookingSource { CourtRecords, PsaForm };
enum class GroupRule { None, AnyB };

std::string_view to_string(BookingSource s);
std::string_view to_string(GroupRule g);
std::optional<GroupRule> parse_group_rule(std::string_view text);

/// sfid -> "B" / "non-B". An individual is B if any of their court cases says B.
std::map<std::string, std::string> group_labels(std::span<const CourtCase> cases);

struct AuditOptions {
  DispositionPolicy policy;
  BookingSource booking_source = BookingSource::CourtRecords;
  GroupRule group_rule = GroupRule::AnyB;
};

struct AuditBuild {
  std::vector<AuditPair> pairs;
  std::vector<MatchResult> not_disposed;
  std::vector<RowError> errors;
};

/// `groups` is consulted only under GroupRule::AnyB; sfids missing from it are non-B.
AuditBuild build_audit_pairs(std::span<const MatchResult> matches, const EngineConfig& engine,
                             const AuditOptions& options,
                             const std::map<std::string, std::string>& groups = {});

/// Pairs kept under the plea-to-other sensitivity rule.
std::vector<AuditPair> sensitivity_subset(std::span<const AuditPair> pairs);

}  // namespace chargeaudit
