#include "oracle.hpp"

#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace chargeaudit::oracle {

namespace {

constexpr int kChainLimit = 4;

bool same_prefix_list(const std::vector<std::string>& want, const std::vector<std::string>& have) {
  if (want.size() > have.size()) return false;
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (want[i] != have[i]) return false;
  }
  return true;
}

bool instance_of(const ChargeCode& pat, const ChargeCode& c) {
  if (pat.statute != c.statute) return false;
  if (pat.derivative != c.derivative) return false;
  if (pat.derivative == Derivative::None && pat.prefix != c.prefix) return false;
  if (!same_prefix_list(pat.subdivisions, c.subdivisions)) return false;
  const bool both_bodies = pat.body != CodeBody::Unspecified && c.body != CodeBody::Unspecified;
  if (both_bodies && pat.body_text != c.body_text) return false;
  if (pat.charge_class != ChargeClass::Unspecified && pat.charge_class != c.charge_class) {
    return false;
  }
  if (pat.degree.has_value() && c.degree.has_value() && *pat.degree != *c.degree) return false;
  return true;
}

// The charge followed by successive base offenses (derivative stripped or
// alias target), at most kChainLimit steps.
std::vector<ChargeCode> chain(const ChargeCode& c, const ChargeCatalog& catalog) {
  std::vector<ChargeCode> out{c};
  while (static_cast<int>(out.size()) <= kChainLimit) {
    const ChargeCode& last = out.back();
    std::optional<ChargeCode> next;
    if (last.derivative != Derivative::None) {
      ChargeCode b = last;
      b.derivative = Derivative::None;
      b.prefix = "";
      next = b;
    } else {
      for (const auto& a : catalog.aliases()) {
        if (!instance_of(a.pattern, last)) continue;
        ChargeCode b = a.base;
        if (b.charge_class == ChargeClass::Unspecified) b.charge_class = last.charge_class;
        if (!b.degree.has_value()) b.degree = last.degree;
        next = b;
        break;
      }
    }
    if (!next) break;
    out.push_back(*next);
  }
  return out;
}

bool listed(const ChargeCode& c, ChargeCategory cat, const ChargeCatalog& catalog) {
  for (const auto& p : catalog.patterns()) {
    if (p.category != cat) continue;
    if (cat == ChargeCategory::Bumpup && p.ambiguous_policy.has_value()) {
      const bool on = catalog.options().ambiguous_override.has_value()
                          ? *catalog.options().ambiguous_override
                          : *p.ambiguous_policy;
      if (!on) continue;
    }
    if (instance_of(p.pattern, c)) return true;
  }
  return false;
}

bool listed_any_form(const ChargeCode& c, ChargeCategory cat, const ChargeCatalog& catalog) {
  for (const auto& form : chain(c, catalog)) {
    if (listed(form, cat, catalog)) return true;
  }
  return false;
}

std::string label(const ChargeCode& c) {
  return normalize_charge_text(c.raw.empty() ? c.canonical() : c.raw);
}

// Smallest label among charges satisfying `pred`, empty when none do.
template <typename Pred>
std::optional<std::string> first_hit(std::span<const ChargeCode> charges, Pred pred) {
  std::optional<std::string> best;
  for (const auto& c : charges) {
    if (!pred(c)) continue;
    std::string l = label(c);
    if (!best || l < *best) best = l;
  }
  return best;
}

int value_of(Factor f, const RiskFactors& r, int young_max) {
  if (f == Factor::YoungAtArrest) {
    if (!r.age_at_arrest.has_value()) return 0;
    return *r.age_at_arrest <= young_max ? 1 : 0;
  }
  if (f == Factor::PendingCharge) return r.pending_charge ? 1 : 0;
  if (f == Factor::PriorMisdemeanorConviction) return r.prior_misdemeanor_conviction ? 1 : 0;
  if (f == Factor::PriorFelonyConviction) return r.prior_felony_conviction ? 1 : 0;
  if (f == Factor::PriorConviction) return r.prior_conviction ? 1 : 0;
  if (f == Factor::PriorViolentConvictions) return r.prior_violent_convictions;
  if (f == Factor::FtasPastTwoYears) return r.ftas_past_two_years;
  if (f == Factor::FtaOlderThanTwoYears) return r.fta_older_than_two_years ? 1 : 0;
  if (f == Factor::PriorIncarceration) return r.prior_incarceration ? 1 : 0;
  return r.current_offense_violent ? 1 : 0;
}

int weighted_sum(const std::vector<WeightTerm>& terms, const RiskFactors& r, int young_max) {
  int sum = 0;
  for (const auto& t : terms) {
    int v = value_of(t.factor, r, young_max);
    if (t.cap.has_value() && v > *t.cap) v = *t.cap;
    sum += v * t.weight;
  }
  return sum;
}

int to_scaled(const ScaledPrediction& p, int raw, const char* what) {
  if (raw > p.max_raw || raw < p.breakpoints[0]) {
    throw ConfigError(std::string(what) + " raw score " + std::to_string(raw) +
                      " outside breakpoint table domain");
  }
  int count = 0;
  for (int b : p.breakpoints) count += raw >= b ? 1 : 0;
  return count;
}

}  // namespace

bool violent(const ChargeCode& c, const ChargeCatalog& catalog) {
  if (catalog.options().violent_includes_derivatives) {
    return listed_any_form(c, ChargeCategory::Violent, catalog);
  }
  return listed(c, ChargeCategory::Violent, catalog);
}

bool exclusion_listed(const ChargeCode& c, const ChargeCatalog& catalog) {
  return listed_any_form(c, ChargeCategory::Exclusion, catalog);
}

bool bumpup_listed(const ChargeCode& c, const ChargeCatalog& catalog) {
  return listed_any_form(c, ChargeCategory::Bumpup, catalog);
}

bool nvca_flag(const RiskFactors& f, const WeightConfig& w) {
  return weighted_sum(w.nvca, f, w.young_age_max) >= w.nvca_threshold;
}

SubScores subscores(const RiskFactors& f, const WeightConfig& w) {
  SubScores s;
  s.fta = to_scaled(w.fta, weighted_sum(w.fta.terms, f, w.young_age_max), "FTA");
  s.nca = to_scaled(w.nca, weighted_sum(w.nca.terms, f, w.young_age_max), "NCA");
  s.nvca_flag = nvca_flag(f, w);
  return s;
}

PsaResult assess(const SubScores& s, std::span<const ChargeCode> charges, bool extradited,
                 const DmfConfig& dmf, const ChargeCatalog& catalog) {
  PsaResult r;
  r.subscores = s;

  // Exclusions.
  auto excl = first_hit(charges, [&](const ChargeCode& c) { return exclusion_listed(c, catalog); });
  auto viol = first_hit(charges, [&](const ChargeCode& c) { return violent(c, catalog); });
  if (extradited) {
    r.exclusion = true;
    r.exclusion_reason = "extradited";
  } else if (excl) {
    r.exclusion = true;
    r.exclusion_reason = "exclusion-list:" + *excl;
  } else if (s.nvca_flag && viol) {
    r.exclusion = true;
    r.exclusion_reason = "violent+nvca:" + *viol;
  }

  // Decision matrix.
  const DmfCell& cell = dmf.cell(s.fta, s.nca);
  if (cell.split) {
    bool serious = false;
    for (const auto& c : charges) {
      if (c.charge_class == ChargeClass::Felony) serious = true;
      if (c.charge_class == ChargeClass::Misdemeanor && violent(c, catalog)) serious = true;
    }
    r.initial = serious ? SupervisionLevel::ReleaseNotRecommended : SupervisionLevel::SfpdpAcm;
  } else if (cell.level.has_value()) {
    r.initial = *cell.level;
  } else {
    throw ConfigError("decision matrix cell (" + std::to_string(s.fta) + "," +
                      std::to_string(s.nca) + ") is missing");
  }

  // Bump-up.
  auto bump = first_hit(charges, [&](const ChargeCode& c) { return bumpup_listed(c, catalog); });
  if (bump) {
    r.bumpup = true;
    r.bumpup_reason = "bumpup-list:" + *bump;
  } else if (s.nvca_flag && !viol) {
    r.bumpup = true;
    r.bumpup_reason = "nvca-nonviolent";
  }

  int level = static_cast<int>(r.initial);
  if (r.exclusion) {
    level = 4;
  } else if (r.bumpup && level < 4) {
    level += 1;
  }
  r.final_level = static_cast<SupervisionLevel>(level);
  return r;
}

PsaResult assess_with_factors(int fta, int nca, RiskFactors f, std::span<const ChargeCode> charges,
                              bool extradited, const EngineConfig& engine) {
  f.current_offense_violent = false;
  for (const auto& c : charges) {
    if (violent(c, engine.catalog)) f.current_offense_violent = true;
  }
  SubScores s;
  s.fta = fta;
  s.nca = nca;
  s.nvca_flag = nvca_flag(f, engine.weights);
  return oracle::assess(s, charges, extradited, engine.dmf, engine.catalog);
}

}  // namespace chargeaudit::oracle
