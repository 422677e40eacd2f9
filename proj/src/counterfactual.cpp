#include "counterfactual.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "errors.hpp"
#include "fileio.hpp"

namespace chargeaudit {

using nlohmann::json;

DispositionPolicy DispositionPolicy::from_json_text(std::string_view text,
                                                    std::string_view source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(std::string(source) + ": expected an object");
  DispositionPolicy p;
  try {
    p.conviction_threshold = j.value("conviction_threshold", p.conviction_threshold);
    p.plea_to_other_code = j.value("plea_to_other_code", p.plea_to_other_code);
    p.companion_zero_rule = j.value("companion_zero_rule", p.companion_zero_rule);
    if (j.contains("pending_codes")) p.pending_codes = j.at("pending_codes").get<std::vector<int>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  p.validate();
  return p;
}

DispositionPolicy DispositionPolicy::load(const std::string& path) {
  return from_json_text(read_text_file(path, "disposition policy"), path);
}

void DispositionPolicy::validate() const {
  if (conviction_threshold <= 0) throw ConfigError("conviction_threshold must be positive");
  if (plea_to_other_code > conviction_threshold) {
    throw ConfigError("plea_to_other_code would itself count as a conviction");
  }
}

bool is_terminal(const std::optional<int>& code, const DispositionPolicy& policy) {
  if (!code) return false;
  return std::find(policy.pending_codes.begin(), policy.pending_codes.end(), *code) ==
         policy.pending_codes.end();
}

bool fully_disposed(const CourtCase& c, const DispositionPolicy& policy) {
  return std::all_of(c.charges.begin(), c.charges.end(),
                     [&](const CourtCharge& ch) { return is_terminal(ch.disposition, policy); });
}

bool has_plea_to_other(const CourtCase& c, const DispositionPolicy& policy) {
  return std::any_of(c.charges.begin(), c.charges.end(), [&](const CourtCharge& ch) {
    return ch.disposition && *ch.disposition == policy.plea_to_other_code;
  });
}

bool is_conviction(int code, const CourtCase& context, const DispositionPolicy& policy) {
  if (code > policy.conviction_threshold) return true;
  return policy.companion_zero_rule && code == 0 && fully_disposed(context, policy) &&
         has_plea_to_other(context, policy);
}

namespace {

void append_unique(std::vector<ChargeCode>& out, std::set<std::string>& seen,
                   const ChargeCode& c) {
  if (seen.insert(normalize_charge_text(c.canonical())).second) out.push_back(c);
}

}  // namespace

std::vector<ChargeCode> conviction_charges(const CourtCase& c, const DispositionPolicy& policy) {
  std::vector<ChargeCode> out;
  std::set<std::string> seen;
  for (const auto& ch : c.charges) {
    if (ch.disposition && is_conviction(*ch.disposition, c, policy)) append_unique(out, seen, ch.code);
  }
  return out;
}

std::vector<ChargeCode> conviction_charges(const MatchResult& match,
                                           const DispositionPolicy& policy) {
  if (match.status != MatchStatus::Matched) {
    throw NotDisposedError("record " + match.psa.record_id + " is not matched");
  }
  std::vector<ChargeCode> out;
  std::set<std::string> seen;
  for (const auto& c : match.matched_cases) {
    if (!fully_disposed(c, policy)) {
      throw NotDisposedError("court case " + c.court_number + " has undisposed charges");
    }
    for (const auto& ch : c.charges) {
      if (ch.disposition && is_conviction(*ch.disposition, c, policy)) {
        append_unique(out, seen, ch.code);
      }
    }
  }
  return out;
}

std::vector<ChargeCode> court_booking_charges(const MatchResult& match) {
  std::vector<ChargeCode> out;
  std::set<std::string> seen;
  for (const auto& c : match.matched_cases) {
    for (const auto& ch : c.charges) {
      if (ch.booked) append_unique(out, seen, ch.code);
    }
  }
  return out;
}

PsaResult booking_assess(const PsaRecord& psa, std::span<const ChargeCode> charges,
                         const EngineConfig& engine) {
  if (!psa.fta || !psa.nca) {
    throw SchemaError("record " + psa.record_id + " has no FTA/NCA scores");
  }
  return assess_with_factors(*psa.fta, *psa.nca, psa.factors, charges, psa.extradited, engine);
}

PsaResult counterfactual_assess(const PsaRecord& psa, std::span<const ChargeCode> conv_charges,
                                const EngineConfig& engine) {
  if (!psa.fta || !psa.nca) {
    throw SchemaError("record " + psa.record_id + " has no FTA/NCA scores");
  }
  return assess_with_factors(*psa.fta, *psa.nca, psa.factors, conv_charges, false, engine);
}

AuditDeltas compute_deltas(const PsaResult& booking, const PsaResult& conviction) {
  AuditDeltas d;
  d.exclusion_lost = booking.exclusion && !conviction.exclusion;
  d.bumpup_lost = booking.bumpup && !conviction.bumpup;
  d.nvca_lost = booking.subscores.nvca_flag && !conviction.subscores.nvca_flag;
  d.recommendation_delta = rank(booking.final_level) - rank(conviction.final_level);
  return d;
}

std::string_view to_string(BookingSource s) {
  return s == BookingSource::CourtRecords ? "court" : "psa";
}

std::string_view to_string(GroupRule g) { return g == GroupRule::AnyB ? "race" : "none"; }

std::optional<GroupRule> parse_group_rule(std::string_view text) {
  if (text == "race" || text == "any_b") return GroupRule::AnyB;
  if (text == "none") return GroupRule::None;
  return std::nullopt;
}

std::map<std::string, std::string> group_labels(std::span<const CourtCase> cases) {
  std::map<std::string, std::string> out;
  for (const auto& c : cases) {
    auto& label = out[c.sfid];
    if (c.race == Race::B) {
      label = "B";
    } else if (label.empty()) {
      label = "non-B";
    }
  }
  return out;
}

AuditBuild build_audit_pairs(std::span<const MatchResult> matches, const EngineConfig& engine,
                             const AuditOptions& options,
                             const std::map<std::string, std::string>& groups) {
  AuditBuild out;
  for (const auto& m : matches) {
    if (m.status != MatchStatus::Matched) continue;
    const bool disposed = std::all_of(m.matched_cases.begin(), m.matched_cases.end(),
                                      [&](const CourtCase& c) { return fully_disposed(c, options.policy); });
    if (!disposed) {
      out.not_disposed.push_back(m);
      continue;
    }
    try {
      AuditPair p;
      p.record_id = m.psa.record_id;
      p.sfid = m.psa.sfid;
      for (const auto& c : m.matched_cases) p.court_numbers.push_back(c.court_number);
      if (options.booking_source == BookingSource::CourtRecords) {
        p.booking_charges = court_booking_charges(m);
      }
      if (p.booking_charges.empty()) p.booking_charges = m.psa.booking_charges;
      p.conviction_charges = conviction_charges(m, options.policy);
      p.booking = booking_assess(m.psa, p.booking_charges, engine);
      p.conviction = counterfactual_assess(m.psa, p.conviction_charges, engine);
      p.deltas = compute_deltas(p.booking, p.conviction);
      const bool plea = std::any_of(m.matched_cases.begin(), m.matched_cases.end(),
                                    [&](const CourtCase& c) { return has_plea_to_other(c, options.policy); });
      p.plea_other_only = plea && p.conviction_charges.empty();
      if (options.group_rule == GroupRule::AnyB) {
        auto it = groups.find(m.psa.sfid);
        p.group = it == groups.end() ? "non-B" : it->second;
      }
      out.pairs.push_back(std::move(p));
    } catch (const Error& e) {
      out.errors.push_back({"psa", m.psa.source_line, m.psa.record_id + ": " + e.what()});
    }
  }
  return out;
}

std::vector<AuditPair> sensitivity_subset(std::span<const AuditPair> pairs) {
  std::vector<AuditPair> out;
  for (const auto& p : pairs) {
    if (!p.plea_other_only) out.push_back(p);
  }
  return out;
}

}  // namespace chargeaudit
