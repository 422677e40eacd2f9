#include "linkage.hpp"

#include <algorithm>

namespace chargeaudit {

std::string_view to_string(MatchStatus s) {
  switch (s) {
    case MatchStatus::Matched: return "matched";
    case MatchStatus::Unresolved: return "unresolved";
    case MatchStatus::DroppedIncomplete: return "dropped_incomplete";
    case MatchStatus::DroppedDuplicate: return "dropped_duplicate";
  }
  return "unresolved";
}

CompletenessSplit filter_complete(std::vector<PsaRecord> records) {
  CompletenessSplit out;
  for (auto& r : records) {
    (r.complete() ? out.kept : out.dropped).push_back(std::move(r));
  }
  return out;
}

std::string duplicate_key(const PsaRecord& r) {
  std::vector<std::string> charges;
  charges.reserve(r.booking_charges.size());
  for (const auto& c : r.booking_charges) {
    charges.push_back(normalize_charge_text(c.raw.empty() ? c.canonical() : c.raw));
  }
  std::sort(charges.begin(), charges.end());
  std::string key = r.sfid;
  key += '\x1f';
  key += r.psa_date ? format_date(*r.psa_date) : std::string();
  for (const auto& c : charges) {
    key += '\x1f';
    key += c;
  }
  return key;
}

Deduplicated deduplicate(std::vector<PsaRecord> records) {
  std::vector<std::pair<std::string, PsaRecord>> keyed;
  keyed.reserve(records.size());
  for (auto& r : records) keyed.emplace_back(duplicate_key(r), std::move(r));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    if (a.second.record_id != b.second.record_id) return a.second.record_id < b.second.record_id;
    return a.second.source_line < b.second.source_line;
  });
  Deduplicated out;
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    if (i > 0 && keyed[i].first == keyed[i - 1].first) {
      out.duplicates.push_back(std::move(keyed[i].second));
    } else {
      out.unique.push_back(std::move(keyed[i].second));
    }
  }
  return out;
}

CaseIndex::CaseIndex(std::span<const CourtCase> cases) {
  for (const auto& c : cases) by_sfid_[c.sfid].push_back(&c);
  for (auto& [sfid, group] : by_sfid_) {
    std::sort(group.begin(), group.end(), [](const CourtCase* a, const CourtCase* b) {
      return a->court_number < b->court_number;
    });
  }
}

std::span<const CourtCase* const> CaseIndex::cases_for(const std::string& sfid) const {
  auto it = by_sfid_.find(sfid);
  if (it == by_sfid_.end()) return {};
  return it->second;
}

bool in_match_window(const Date& psa_arrest, const Date& court_arrest) {
  const int offset = days_between(psa_arrest, court_arrest);
  return offset >= -kWindowDaysBefore && offset <= kWindowDaysAfter;
}

std::vector<CourtCase> find_candidates(const PsaRecord& psa, const CaseIndex& index) {
  std::vector<CourtCase> out;
  if (!psa.arrest_date) return out;
  for (const CourtCase* c : index.cases_for(psa.sfid)) {
    if (in_match_window(*psa.arrest_date, c->arrest_date)) out.push_back(*c);
  }
  return out;
}

std::vector<CourtCase> find_candidates(const PsaRecord& psa, std::span<const CourtCase> cases) {
  return find_candidates(psa, CaseIndex(cases));
}

MatchResult resolve_match(const PsaRecord& psa, std::vector<CourtCase> candidates) {
  std::sort(candidates.begin(), candidates.end(),
            [](const CourtCase& a, const CourtCase& b) { return a.court_number < b.court_number; });
  MatchResult result;
  result.psa = psa;
  result.candidate_count = candidates.size();
  if (candidates.empty()) {
    result.status = MatchStatus::Unresolved;
    result.note = "no court case with this sfid in the arrest-date window";
    return result;
  }

  std::vector<CourtCase> survivors = std::move(candidates);
  const std::size_t filters = std::min<std::size_t>(2, psa.booking_charges.size());
  for (std::size_t k = 0; k < filters && survivors.size() > 1; ++k) {
    const ChargeCode& listed = psa.booking_charges[k];
    std::vector<CourtCase> next;
    for (auto& c : survivors) {
      if (c.contains_offense(listed)) next.push_back(std::move(c));
    }
    if (next.empty()) {
      result.status = MatchStatus::Unresolved;
      result.note = std::string(k == 0 ? "first" : "second") +
                    " listed charge not found in any of " + std::to_string(result.candidate_count) +
                    " candidate cases";
      return result;
    }
    survivors = std::move(next);
  }
  result.status = MatchStatus::Matched;
  result.matched_cases = std::move(survivors);
  return result;
}

LinkageOutcome link_records(std::vector<PsaRecord> records, std::span<const CourtCase> cases) {
  LinkageOutcome out;
  auto split = filter_complete(std::move(records));
  out.incomplete = std::move(split.dropped);
  std::sort(out.incomplete.begin(), out.incomplete.end(),
            [](const PsaRecord& a, const PsaRecord& b) { return a.record_id < b.record_id; });
  auto dedup = deduplicate(std::move(split.kept));
  out.duplicates = std::move(dedup.duplicates);

  const CaseIndex index(cases);
  for (const auto& psa : dedup.unique) {
    auto m = resolve_match(psa, find_candidates(psa, index));
    (m.status == MatchStatus::Matched ? out.matched : out.unresolved).push_back(std::move(m));
  }
  return out;
}

}  // namespace chargeaudit
