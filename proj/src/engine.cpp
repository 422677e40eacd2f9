#include "engine.hpp"

#include <algorithm>

#include <json.hpp>

#include "errors.hpp"
#include "fileio.hpp"

namespace chargeaudit {

using nlohmann::json;

namespace {

json parse_json(std::string_view text, std::string_view source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
}

int factor_value(Factor f, const RiskFactors& r, int young_age_max) {
  switch (f) {
    case Factor::YoungAtArrest: return r.age_at_arrest && *r.age_at_arrest <= young_age_max ? 1 : 0;
    case Factor::PendingCharge: return r.pending_charge;
    case Factor::PriorMisdemeanorConviction: return r.prior_misdemeanor_conviction;
    case Factor::PriorFelonyConviction: return r.prior_felony_conviction;
    case Factor::PriorConviction: return r.prior_conviction;
    case Factor::PriorViolentConvictions: return r.prior_violent_convictions;
    case Factor::FtasPastTwoYears: return r.ftas_past_two_years;
    case Factor::FtaOlderThanTwoYears: return r.fta_older_than_two_years;
    case Factor::PriorIncarceration: return r.prior_incarceration;
    case Factor::CurrentOffenseViolent: return r.current_offense_violent;
  }
  return 0;
}

bool is_count(Factor f) {
  return f == Factor::PriorViolentConvictions || f == Factor::FtasPastTwoYears;
}

std::vector<WeightTerm> read_terms(const json& j, std::string_view where) {
  std::vector<WeightTerm> terms;
  if (!j.contains("terms")) return terms;
  for (const auto& t : j.at("terms")) {
    WeightTerm term;
    const auto name = t.at("factor").get<std::string>();
    auto f = parse_factor(name);
    if (!f) throw ConfigError(std::string(where) + ": unknown factor '" + name + "'");
    term.factor = *f;
    term.weight = t.at("weight").get<int>();
    if (t.contains("cap")) {
      term.cap = t.at("cap").get<int>();
      if (*term.cap < 0) throw ConfigError(std::string(where) + ": negative cap");
    }
    terms.push_back(term);
  }
  return terms;
}

ScaledPrediction read_scaled(const json& j, std::string_view where) {
  ScaledPrediction p;
  p.terms = read_terms(j, where);
  const auto& bp = j.at("breakpoints");
  if (!bp.is_array() || bp.size() != 6) {
    throw ConfigError(std::string(where) + ": breakpoints must list 6 integers");
  }
  for (std::size_t i = 0; i < 6; ++i) p.breakpoints[i] = bp[i].get<int>();
  p.max_raw = j.at("max_raw").get<int>();
  return p;
}

std::pair<int, int> reachable_range(std::span<const WeightTerm> terms, std::string_view where) {
  int lo = 0, hi = 0;
  for (const auto& t : terms) {
    int vmax = 1;
    if (is_count(t.factor)) {
      if (!t.cap && t.weight != 0) {
        throw ConfigError(std::string(where) + ": count factor needs a cap so every raw score is covered");
      }
      vmax = t.cap.value_or(0);
    }
    int a = 0, b = t.weight * vmax;
    lo += std::min(a, b);
    hi += std::max(a, b);
  }
  return {lo, hi};
}

void validate_scaled(const ScaledPrediction& p, std::string_view where) {
  for (std::size_t i = 1; i < 6; ++i) {
    if (p.breakpoints[i] < p.breakpoints[i - 1]) {
      throw ConfigError(std::string(where) + ": breakpoints must be non-decreasing");
    }
  }
  if (p.max_raw < p.breakpoints[5]) {
    throw ConfigError(std::string(where) + ": max_raw below last breakpoint");
  }
  auto [lo, hi] = reachable_range(p.terms, where);
  if (lo < p.breakpoints[0] || hi > p.max_raw) {
    throw ConfigError(std::string(where) + ": breakpoint table does not cover reachable raw scores [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

int scale(const ScaledPrediction& p, int raw, std::string_view what) {
  if (raw < p.breakpoints[0] || raw > p.max_raw) {
    throw ConfigError(std::string(what) + " raw score " + std::to_string(raw) +
                      " outside breakpoint table domain");
  }
  int scaled = 1;
  for (int k = 1; k < 6; ++k) {
    if (raw >= p.breakpoints[k]) scaled = k + 1;
  }
  return scaled;
}

DmfCell read_cell(const json& v, std::string_view where) {
  DmfCell c;
  if (v.is_null()) return c;
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "split") {
      c.split = true;
      return c;
    }
    c.level = parse_level(s);
  } else if (v.is_number_integer()) {
    const int r = v.get<int>();
    if (r >= 1 && r <= 4) c.level = level_from_rank(r);
  }
  if (!c.level) throw ConfigError(std::string(where) + ": invalid DMF cell " + v.dump());
  return c;
}

// Lowest and highest level a cell can produce.
std::pair<int, int> cell_span(const DmfCell& c) {
  if (c.split) return {rank(SupervisionLevel::SfpdpAcm), rank(SupervisionLevel::ReleaseNotRecommended)};
  return {rank(*c.level), rank(*c.level)};
}

bool felony_or_violent_misdemeanor(std::span<const ChargeCode> charges, const ChargeCatalog& catalog) {
  for (const auto& c : charges) {
    if (c.charge_class == ChargeClass::Felony) return true;
    if (c.charge_class == ChargeClass::Misdemeanor && catalog.is_violent(c)) return true;
  }
  return false;
}

}  // namespace

std::string_view to_label(SupervisionLevel l) {
  switch (l) {
    case SupervisionLevel::OrNas: return "OR-NAS";
    case SupervisionLevel::OrMinimum: return "OR-Minimum";
    case SupervisionLevel::SfpdpAcm: return "SFPDP-ACM";
    case SupervisionLevel::ReleaseNotRecommended: return "Release Not Recommended";
  }
  return "OR-NAS";
}

std::optional<SupervisionLevel> parse_level(std::string_view text) {
  std::string t;
  for (char c : text) {
    if (c == ' ' || c == '-' || c == '_') continue;
    t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (t == "1" || t == "ornas") return SupervisionLevel::OrNas;
  if (t == "2" || t == "orminimum") return SupervisionLevel::OrMinimum;
  if (t == "3" || t == "sfpdpacm") return SupervisionLevel::SfpdpAcm;
  if (t == "4" || t == "releasenotrecommended") return SupervisionLevel::ReleaseNotRecommended;
  return std::nullopt;
}

SupervisionLevel level_from_rank(int r) {
  return static_cast<SupervisionLevel>(std::clamp(r, 1, 4));
}

bool RiskFactors::valid() const {
  if ((age_at_arrest && *age_at_arrest < 0) || prior_violent_convictions < 0 || ftas_past_two_years < 0) return false;
  if ((prior_misdemeanor_conviction || prior_felony_conviction) && !prior_conviction) return false;
  return true;
}

std::optional<Factor> parse_factor(std::string_view name) {
  if (name == "age_at_arrest" || name == "young_at_arrest") return Factor::YoungAtArrest;
  if (name == "pending_charge") return Factor::PendingCharge;
  if (name == "prior_misdemeanor_conviction") return Factor::PriorMisdemeanorConviction;
  if (name == "prior_felony_conviction") return Factor::PriorFelonyConviction;
  if (name == "prior_conviction") return Factor::PriorConviction;
  if (name == "prior_violent_convictions") return Factor::PriorViolentConvictions;
  if (name == "ftas_past_two_years") return Factor::FtasPastTwoYears;
  if (name == "fta_older_than_two_years") return Factor::FtaOlderThanTwoYears;
  if (name == "prior_incarceration") return Factor::PriorIncarceration;
  if (name == "current_offense_violent") return Factor::CurrentOffenseViolent;
  return std::nullopt;
}

WeightConfig WeightConfig::from_json_text(std::string_view text, std::string_view source) {
  const json j = parse_json(text, source);
  WeightConfig w;
  try {
    w.label = j.value("label", "");
    w.young_age_max = j.value("young_age_max", 22);
    w.fta = read_scaled(j.at("fta"), std::string(source) + ".fta");
    w.nca = read_scaled(j.at("nca"), std::string(source) + ".nca");
    w.nvca = read_terms(j.at("nvca"), std::string(source) + ".nvca");
    w.nvca_threshold = j.at("nvca").at("threshold").get<int>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  w.validate();
  return w;
}

WeightConfig WeightConfig::load(const std::string& path) {
  return from_json_text(read_text_file(path, "weights"), path);
}

void WeightConfig::validate() const {
  validate_scaled(fta, "weights.fta");
  validate_scaled(nca, "weights.nca");
  reachable_range(nvca, "weights.nvca");
}

int raw_score(std::span<const WeightTerm> terms, const RiskFactors& f, int young_age_max) {
  int total = 0;
  for (const auto& t : terms) {
    int v = factor_value(t.factor, f, young_age_max);
    if (t.cap) v = std::min(v, *t.cap);
    total += t.weight * v;
  }
  return total;
}

SubScores compute_subscores(const RiskFactors& factors, const WeightConfig& w) {
  SubScores s;
  s.fta = scale(w.fta, raw_score(w.fta.terms, factors, w.young_age_max), "FTA");
  s.nca = scale(w.nca, raw_score(w.nca.terms, factors, w.young_age_max), "NCA");
  s.nvca_flag = compute_nvca_flag(factors, w);
  return s;
}

bool compute_nvca_flag(const RiskFactors& factors, const WeightConfig& w) {
  return raw_score(w.nvca, factors, w.young_age_max) >= w.nvca_threshold;
}

DmfConfig DmfConfig::from_json_text(std::string_view text, std::string_view source) {
  const json j = parse_json(text, source);
  DmfConfig dmf;
  try {
    dmf.label_ = j.value("label", "");
    const auto& rows = j.at("cells");
    if (!rows.is_array() || rows.size() != 6) {
      throw ConfigError(std::string(source) + ": cells must be a 6x6 array (rows = FTA 1..6)");
    }
    for (int r = 0; r < 6; ++r) {
      const auto& row = rows[r];
      if (!row.is_array() || row.size() != 6) {
        throw ConfigError(std::string(source) + ": row " + std::to_string(r + 1) + " must have 6 cells");
      }
      for (int c = 0; c < 6; ++c) dmf.cells_[r][c] = read_cell(row[c], source);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  return dmf;
}

DmfConfig DmfConfig::load(const std::string& path) {
  return from_json_text(read_text_file(path, "DMF"), path);
}

const DmfCell& DmfConfig::cell(int fta, int nca) const {
  if (fta < 1 || fta > 6 || nca < 1 || nca > 6) {
    throw ConfigError("sub-scores (" + std::to_string(fta) + "," + std::to_string(nca) +
                      ") outside the 6x6 decision matrix");
  }
  return cells_[fta - 1][nca - 1];
}

void DmfConfig::set_cell(int fta, int nca, DmfCell c) {
  cell(fta, nca);
  cells_[fta - 1][nca - 1] = c;
}

bool DmfConfig::complete() const {
  for (const auto& row : cells_) {
    for (const auto& c : row) {
      if (!c.split && !c.level) return false;
    }
  }
  return true;
}

bool DmfConfig::monotone() const {
  if (!complete()) return false;
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) {
      auto here = cell_span(cells_[r][c]);
      if (r + 1 < 6 && cell_span(cells_[r + 1][c]).first < here.second) return false;
      if (c + 1 < 6 && cell_span(cells_[r][c + 1]).first < here.second) return false;
    }
  }
  return true;
}

std::vector<ChargeCode> ordered_charges(std::span<const ChargeCode> charges) {
  std::vector<std::pair<std::string, const ChargeCode*>> keyed;
  keyed.reserve(charges.size());
  for (const auto& c : charges) {
    keyed.emplace_back(normalize_charge_text(c.raw.empty() ? c.canonical() : c.raw), &c);
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<ChargeCode> out;
  out.reserve(keyed.size());
  for (const auto& k : keyed) out.push_back(*k.second);
  return out;
}

namespace {

std::string charge_label(const ChargeCode& c) {
  return normalize_charge_text(c.raw.empty() ? c.canonical() : c.raw);
}

}  // namespace

RuleHit check_exclusion(std::span<const ChargeCode> charges, bool extradited, bool nvca_flag,
                        const ChargeCatalog& catalog) {
  if (extradited) return {true, "extradited"};
  const auto ordered = ordered_charges(charges);
  for (const auto& c : ordered) {
    if (catalog.is_exclusion_charge(c)) return {true, "exclusion-list:" + charge_label(c)};
  }
  if (nvca_flag) {
    for (const auto& c : ordered) {
      if (catalog.is_violent(c)) return {true, "violent+nvca:" + charge_label(c)};
    }
  }
  return {};
}

SupervisionLevel initial_recommendation(const SubScores& s, std::span<const ChargeCode> charges,
                                        const DmfConfig& dmf, const ChargeCatalog& catalog) {
  const DmfCell& c = dmf.cell(s.fta, s.nca);
  if (c.split) {
    return felony_or_violent_misdemeanor(charges, catalog) ? SupervisionLevel::ReleaseNotRecommended
                                                           : SupervisionLevel::SfpdpAcm;
  }
  if (!c.level) {
    throw ConfigError("decision matrix cell (" + std::to_string(s.fta) + "," +
                      std::to_string(s.nca) + ") is missing");
  }
  return *c.level;
}

RuleHit check_bumpup(std::span<const ChargeCode> charges, bool nvca_flag,
                     const ChargeCatalog& catalog) {
  const auto ordered = ordered_charges(charges);
  for (const auto& c : ordered) {
    if (catalog.is_bumpup_charge(c)) return {true, "bumpup-list:" + charge_label(c)};
  }
  if (nvca_flag && std::none_of(ordered.begin(), ordered.end(),
                                [&](const ChargeCode& c) { return catalog.is_violent(c); })) {
    return {true, "nvca-nonviolent"};
  }
  return {};
}

PsaResult assess(const SubScores& s, std::span<const ChargeCode> charges, bool extradited,
                 const DmfConfig& dmf, const ChargeCatalog& catalog) {
  PsaResult r;
  r.subscores = s;
  auto excl = check_exclusion(charges, extradited, s.nvca_flag, catalog);
  r.exclusion = excl.fired;
  r.exclusion_reason = std::move(excl.reason);
  r.initial = initial_recommendation(s, charges, dmf, catalog);
  auto bump = check_bumpup(charges, s.nvca_flag, catalog);
  r.bumpup = bump.fired;
  r.bumpup_reason = std::move(bump.reason);
  if (r.exclusion) {
    r.final_level = SupervisionLevel::ReleaseNotRecommended;
  } else if (r.bumpup) {
    r.final_level = level_from_rank(rank(r.initial) + 1);
  } else {
    r.final_level = r.initial;
  }
  return r;
}

PsaResult assess_with_factors(int fta, int nca, RiskFactors factors,
                              std::span<const ChargeCode> charges, bool extradited,
                              const EngineConfig& engine) {
  factors.current_offense_violent = std::any_of(
      charges.begin(), charges.end(), [&](const ChargeCode& c) { return engine.catalog.is_violent(c); });
  SubScores s{fta, nca, compute_nvca_flag(factors, engine.weights)};
  return assess(s, charges, extradited, engine.dmf, engine.catalog);
}

}  // namespace chargeaudit
