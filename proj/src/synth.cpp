#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "counterfactual.hpp"
#include "errors.hpp"
#include "fileio.hpp"
#include "oracle.hpp"

namespace chargeaudit {

using nlohmann::json;

namespace {

constexpr int kMaxTries = 1000;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g_); }
  bool chance(double p) { return std::bernoulli_distribution(std::clamp(p, 0.0, 1.0))(g_); }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    std::shuffle(v.begin(), v.end(), g_);
  }
  // Index drawn from unnormalized weights.
  std::size_t weighted(const std::vector<double>& w) {
    return std::discrete_distribution<std::size_t>(w.begin(), w.end())(g_);
  }

 private:
  std::mt19937_64 g_;
};

std::size_t count_of(double rate, std::size_t base) {
  return static_cast<std::size_t>(std::llround(rate * static_cast<double>(base)));
}

const std::vector<std::string> kNeutralCharges = {
    "459 PC F",       "484(A) PC M",   "10851(A) VC F", "11350(A) HS F", "11377(A) HS M",
    "647(F) PC M",    "148(A)(1) PC M", "23152(A) VC M", "594(B)(1) PC F", "496(A) PC F",
    "12500(A) VC M",  "853.7 PC M",    "11364 HS M",    "602 PC M",      "470(D) PC F",
    "530.5(A) PC F",  "11378 HS F",    "14601.1(A) VC M", "415 PC M",    "466 PC M",
};

const std::vector<std::string> kFirstNames = {"ALEX", "JORDAN", "CASEY", "RILEY", "MORGAN", "TAYLOR",
                                              "JAMIE", "DREW", "SAM", "ROBIN", "AVERY", "QUINN"};
const std::vector<std::string> kLastNames = {"SMITH", "LEE", "GARCIA", "NGUYEN", "BROWN", "JONES",
                                             "LOPEZ", "CHEN", "WILLIAMS", "DAVIS", "MARTIN", "WONG"};

const std::vector<int> kDismissalCodes = {1, 5, 10, 14, 22, 31, 45, 60, 88, 101, 120, 140, 155};

struct Pools {
  std::vector<ChargeCode> exclusion;
  std::vector<ChargeCode> bumpup;
  std::vector<ChargeCode> violent;
  std::vector<ChargeCode> neutral;
};

ChargeCode concrete_charge(const ChargeCode& pattern, bool felony, const ChargeCatalog& catalog) {
  std::string text = pattern.canonical();
  if (pattern.charge_class == ChargeClass::Unspecified) text += felony ? " F" : " M";
  return catalog.parse(text);
}

Pools build_pools(const ChargeCatalog& catalog) {
  Pools pools;
  std::set<std::string> seen;
  for (const auto& p : catalog.patterns()) {
    for (bool felony : {true, false}) {
      ChargeCode c;
      try {
        c = concrete_charge(p.pattern, felony, catalog);
      } catch (const Error&) {
        continue;
      }
      if (!seen.insert(c.canonical()).second) continue;
      if (oracle::exclusion_listed(c, catalog)) {
        pools.exclusion.push_back(c);
      } else if (oracle::bumpup_listed(c, catalog)) {
        pools.bumpup.push_back(c);
      } else if (oracle::violent(c, catalog)) {
        pools.violent.push_back(c);
      }
    }
  }
  for (const auto& text : kNeutralCharges) {
    ChargeCode c = catalog.parse(text);
    if (!oracle::exclusion_listed(c, catalog) && !oracle::bumpup_listed(c, catalog) &&
        !oracle::violent(c, catalog)) {
      pools.neutral.push_back(c);
    }
  }
  if (pools.neutral.size() < 4) throw ConfigError("catalog leaves too few neutral charges");
  if (pools.exclusion.empty() && pools.bumpup.empty() && pools.violent.empty()) {
    throw ConfigError("catalog has no listed charges to plant");
  }
  return pools;
}

struct Person {
  std::string sfid;
  std::string name;
  Date dob;
  bool black = false;
  Race race = Race::W;
  std::vector<Date> arrests;
};

enum class Role { Audit, NotDisposed, Unmatched, Incomplete };

struct Slot {
  std::size_t person = 0;
  Date arrest;
  Role role = Role::Audit;
  Scenario scenario = Scenario::None;
  bool plea = false;
};

class Generator {
 public:
  Generator(const GeneratorConfig& cfg, const EngineConfig& engine, const DispositionPolicy& policy)
      : cfg_(cfg),
        engine_(engine),
        rng_(cfg.seed),
        pools_(build_pools(engine.catalog)),
        plea_code_(policy.plea_to_other_code),
        threshold_(policy.conviction_threshold) {
    for (int code : kDismissalCodes) {
      if (code != 0 && code != policy.plea_to_other_code && code <= threshold_ &&
          is_terminal(code, policy)) {
        dismissal_codes_.push_back(code);
      }
    }
    if (dismissal_codes_.empty()) throw ConfigError("disposition policy leaves no dismissal code");
  }

  SyntheticData run();

 private:
  void plan_people(std::size_t base_records);
  void plan_roles(const PlantedCounts& n);
  PsaRecord blank_record(const Slot& slot, std::size_t index);
  RiskFactors draw_factors(bool black, int age);
  std::vector<ChargeCode> draw_charges(bool need_listed);
  ChargeCode draw_listed();
  bool contains_same(const std::vector<ChargeCode>& list, const ChargeCode& c) const;
  ChargeCode fresh_neutral(const std::vector<ChargeCode>& avoid, bool misdemeanor_only);
  int conviction_code() { return rng_.uniform(threshold_ + 1, threshold_ + 40); }
  int dismissal_code() { return rng_.pick(dismissal_codes_); }
  Race case_label(const Person& p);
  CourtCase new_case(const Person& p, const Date& psa_arrest, int offset);
  void add_decoys(const Person& p, const PsaRecord& r, int count);
  void label_record(PsaRecord& r);
  void build_audit(const Slot& slot, PsaRecord& r, CourtCase& c, TruthRow& t);

  const GeneratorConfig& cfg_;
  const EngineConfig& engine_;
  Rng rng_;
  Pools pools_;
  std::vector<Person> people_;
  std::vector<Slot> slots_;
  std::vector<CourtCase> cases_;
  int plea_code_;
  int threshold_;
  std::vector<int> dismissal_codes_;
};

void Generator::plan_people(std::size_t base_records) {
  const Date start = *parse_date(cfg_.start_date);
  std::size_t assigned = 0;
  while (assigned < base_records) {
    Person p;
    p.sfid = fmt::format("SF{:06d}", people_.size() + 1);
    p.name = rng_.pick(kLastNames) + ", " + rng_.pick(kFirstNames);
    p.black = rng_.chance(cfg_.black_fraction);
    if (p.black) {
      p.race = Race::B;
    } else {
      static const std::vector<Race> races = {Race::W, Race::H, Race::C, Race::O, Race::U};
      p.race = races[rng_.weighted({0.45, 0.30, 0.10, 0.10, 0.05})];
    }
    const std::size_t size =
        std::min<std::size_t>(1 + rng_.weighted({0.60, 0.25, 0.15}), base_records - assigned);
    std::vector<int> blocks(36);
    for (int i = 0; i < 36; ++i) blocks[static_cast<std::size_t>(i)] = i;
    rng_.shuffle(blocks);
    blocks.resize(size);
    std::sort(blocks.begin(), blocks.end());
    for (int b : blocks) p.arrests.push_back(add_days(start, b * 10 + rng_.uniform(0, 2)));
    const int age = rng_.uniform(18, 60);
    p.dob = add_days(p.arrests.front(), -(age * 365 + rng_.uniform(0, 364)));
    for (const auto& d : p.arrests) {
      Slot s;
      s.person = people_.size();
      s.arrest = d;
      slots_.push_back(s);
    }
    assigned += size;
    people_.push_back(std::move(p));
  }
}

void Generator::plan_roles(const PlantedCounts& n) {
  std::vector<Slot*> order;
  for (auto& s : slots_) order.push_back(&s);
  rng_.shuffle(order);
  std::size_t k = 0;
  auto take = [&](std::size_t count, Role role, Scenario sc) {
    for (std::size_t i = 0; i < count; ++i, ++k) {
      order[k]->role = role;
      order[k]->scenario = sc;
    }
  };
  take(n.incomplete, Role::Incomplete, Scenario::None);
  take(n.unmatched, Role::Unmatched, Scenario::None);
  take(n.matched - n.disposed, Role::NotDisposed, Scenario::None);
  const std::size_t audit_begin = k;
  take(n.affected, Role::Audit, Scenario::Affected);
  take(n.saturated, Role::Audit, Scenario::Saturated);
  take(n.disposed - n.affected - n.saturated, Role::Audit, Scenario::Clean);
  std::vector<Slot*> audit(order.begin() + static_cast<std::ptrdiff_t>(audit_begin), order.end());
  rng_.shuffle(audit);
  for (std::size_t i = 0; i < n.plea_other && i < audit.size(); ++i) audit[i]->plea = true;
}

RiskFactors Generator::draw_factors(bool black, int age) {
  const double m = black ? cfg_.black_history_shift : 1.0;
  auto p = [&](double base) { return std::min(0.95, base * m); };
  RiskFactors f;
  f.age_at_arrest = age;
  f.pending_charge = rng_.chance(p(0.30));
  f.prior_misdemeanor_conviction = rng_.chance(p(0.40));
  f.prior_felony_conviction = rng_.chance(p(0.30));
  f.prior_conviction = f.prior_misdemeanor_conviction || f.prior_felony_conviction;
  f.prior_violent_convictions =
      f.prior_conviction ? static_cast<int>(rng_.weighted({1.0, p(0.25), p(0.12)})) : 0;
  f.ftas_past_two_years = static_cast<int>(rng_.weighted({1.0, p(0.35), p(0.20)}));
  f.fta_older_than_two_years = rng_.chance(p(0.30));
  f.prior_incarceration = rng_.chance(p(0.25));
  return f;
}

ChargeCode Generator::draw_listed() {
  std::vector<const std::vector<ChargeCode>*> lists;
  std::vector<double> w;
  if (!pools_.exclusion.empty()) lists.push_back(&pools_.exclusion), w.push_back(0.35);
  if (!pools_.bumpup.empty()) lists.push_back(&pools_.bumpup), w.push_back(0.35);
  if (!pools_.violent.empty()) lists.push_back(&pools_.violent), w.push_back(0.30);
  return rng_.pick(*lists[rng_.weighted(w)]);
}

bool Generator::contains_same(const std::vector<ChargeCode>& list, const ChargeCode& c) const {
  return std::any_of(list.begin(), list.end(),
                     [&](const ChargeCode& x) { return same_offense(x, c); });
}

ChargeCode Generator::fresh_neutral(const std::vector<ChargeCode>& avoid, bool misdemeanor_only) {
  for (int i = 0; i < kMaxTries; ++i) {
    const ChargeCode& c = rng_.pick(pools_.neutral);
    if (misdemeanor_only && c.charge_class != ChargeClass::Misdemeanor) continue;
    if (!contains_same(avoid, c)) return c;
  }
  throw ConfigError("neutral charge pool exhausted");
}

std::vector<ChargeCode> Generator::draw_charges(bool need_listed) {
  std::vector<ChargeCode> out;
  if (need_listed) out.push_back(draw_listed());
  const int extra = need_listed ? rng_.uniform(0, 2) : rng_.uniform(1, 3);
  for (int i = 0; i < extra; ++i) {
    ChargeCode c = rng_.chance(0.2) ? draw_listed() : rng_.pick(pools_.neutral);
    if (!contains_same(out, c)) out.push_back(c);
  }
  if (!need_listed && rng_.chance(0.5)) rng_.shuffle(out);
  return out;
}

Race Generator::case_label(const Person& p) {
  if (p.black) {
    if (rng_.chance(cfg_.black_label_stability)) return Race::B;
    static const std::vector<Race> noise = {Race::W, Race::H, Race::Missing};
    return rng_.pick(noise);
  }
  if (rng_.chance(cfg_.other_label_stability)) return p.race;
  static const std::vector<Race> noise = {Race::W, Race::H, Race::O, Race::U, Race::Missing, Race::B};
  return noise[rng_.weighted({0.35, 0.30, 0.12, 0.08, 0.12, 0.03})];
}

CourtCase Generator::new_case(const Person& p, const Date& psa_arrest, int offset) {
  CourtCase c;
  c.court_number = fmt::format("C{:07d}", cases_.size() + 1000001);
  c.sfid = p.sfid;
  c.name = p.name;
  c.dob = p.dob;
  c.arrest_date = add_days(psa_arrest, offset);
  c.race = case_label(p);
  return c;
}

void Generator::add_decoys(const Person& p, const PsaRecord& r, int count) {
  std::vector<ChargeCode> avoid;
  if (!r.booking_charges.empty()) avoid.push_back(r.booking_charges.front());
  for (int i = 0; i < count; ++i) {
    CourtCase d = new_case(p, *r.arrest_date, rng_.uniform(-1, 2));
    const int n = rng_.uniform(1, 2);
    std::vector<ChargeCode> used = avoid;
    for (int k = 0; k < n; ++k) {
      ChargeCode c = fresh_neutral(used, false);
      used.push_back(c);
      d.charges.push_back({c, true, true, dismissal_code()});
    }
    cases_.push_back(std::move(d));
  }
}

PsaRecord Generator::blank_record(const Slot& slot, std::size_t index) {
  const Person& p = people_[slot.person];
  PsaRecord r;
  r.record_id = fmt::format("R{:06d}", index + 1);
  r.sfid = p.sfid;
  r.name = p.name;
  r.dob = p.dob;
  r.arrest_date = slot.arrest;
  r.psa_date = add_days(slot.arrest, rng_.uniform(0, 1));
  const int age = days_between(p.dob, slot.arrest) / 365;
  r.factors = draw_factors(p.black, age);
  r.extradited = rng_.chance(cfg_.extradited_rate);
  return r;
}

void Generator::label_record(PsaRecord& r) {
  const SubScores s = oracle::subscores(r.factors, engine_.weights);
  r.fta = s.fta;
  r.nca = s.nca;
  const PsaResult res = oracle::assess_with_factors(s.fta, s.nca, r.factors, r.booking_charges,
                                                    r.extradited, engine_);
  r.nvca = res.subscores.nvca_flag;
  r.recorded_exclusion = res.exclusion;
  r.recorded_bumpup = res.bumpup;
  r.recorded_recommendation = res.final_level;
}

Scenario classify(const PsaResult& b, const PsaResult& c) {
  const int delta = rank(b.final_level) - rank(c.final_level);
  const bool lost = (b.exclusion && !c.exclusion) || (b.bumpup && !c.bumpup) ||
                    (b.subscores.nvca_flag && !c.subscores.nvca_flag);
  if (delta > 0) return Scenario::Affected;
  if (delta < 0) return Scenario::None;
  return lost ? Scenario::Saturated : Scenario::Clean;
}

void Generator::build_audit(const Slot& slot, PsaRecord& r, CourtCase& court, TruthRow& t) {
  const Person& p = people_[slot.person];
  const bool overbooked = slot.scenario != Scenario::Clean;
  for (int attempt = 0; attempt < kMaxTries; ++attempt) {
    PsaRecord cand = blank_record(slot, 0);
    cand.record_id = r.record_id;
    cand.booking_charges = draw_charges(overbooked);
    if (slot.scenario == Scenario::Clean) cand.extradited = false;

    std::vector<CourtCharge> charges;
    std::vector<ChargeCode> conviction;
    if (slot.plea) {
      const std::size_t plea_at =
          static_cast<std::size_t>(rng_.uniform(0, static_cast<int>(cand.booking_charges.size()) - 1));
      for (std::size_t i = 0; i < cand.booking_charges.size(); ++i) {
        charges.push_back({cand.booking_charges[i], true, true,
                           i == plea_at ? plea_code_ : dismissal_code()});
      }
    } else {
      std::vector<bool> kept(cand.booking_charges.size(), true);
      if (overbooked) {
        kept[0] = false;
        for (std::size_t i = 1; i < kept.size(); ++i) kept[i] = !rng_.chance(0.3);
      }
      const bool any_kept = std::find(kept.begin(), kept.end(), true) != kept.end();
      const bool companion = any_kept && rng_.chance(cfg_.companion_rate);
      for (std::size_t i = 0; i < kept.size(); ++i) {
        const ChargeCode& c = cand.booking_charges[i];
        int code = kept[i] ? (companion ? 0 : conviction_code()) : dismissal_code();
        charges.push_back({c, true, true, code});
        if (kept[i]) conviction.push_back(c);
      }
      if (overbooked && rng_.chance(0.4)) {
        // Charge reduced rather than dropped: a lesser filed charge is convicted.
        ChargeCode lesser;
        if (rng_.chance(0.3) && !pools_.bumpup.empty()) {
          lesser = rng_.pick(pools_.bumpup);
        } else {
          lesser = fresh_neutral(cand.booking_charges, true);
        }
        if (!contains_same(cand.booking_charges, lesser)) {
          charges.push_back({lesser, false, true, conviction_code()});
          conviction.push_back(lesser);
        }
      }
      if (companion) {
        std::vector<ChargeCode> avoid = cand.booking_charges;
        avoid.insert(avoid.end(), conviction.begin(), conviction.end());
        charges.push_back({fresh_neutral(avoid, false), false, true, plea_code_});
      }
    }

    const SubScores s = oracle::subscores(cand.factors, engine_.weights);
    const PsaResult booked = oracle::assess_with_factors(s.fta, s.nca, cand.factors,
                                                         cand.booking_charges, cand.extradited, engine_);
    const PsaResult convicted =
        oracle::assess_with_factors(s.fta, s.nca, cand.factors, conviction, false, engine_);
    if (classify(booked, convicted) != slot.scenario) continue;

    r = std::move(cand);
    label_record(r);
    court = new_case(p, *r.arrest_date, rng_.pick(std::vector<int>{-1, 0, 0, 0, 0, 1, 2}));
    court.charges = std::move(charges);
    t.scenario = slot.scenario;
    t.plea_other_only = slot.plea;
    t.booking_final = booked.final_level;
    t.conviction_final = convicted.final_level;
    t.conviction_charges = std::move(conviction);
    return;
  }
  throw ConfigError(fmt::format("could not realise a {} record after {} tries",
                                to_string(slot.scenario), kMaxTries));
}

SyntheticData Generator::run() {
  PlantedCounts n;
  n.rows = static_cast<std::size_t>(cfg_.n_records);
  n.incomplete = count_of(cfg_.incomplete_rate, n.rows);
  const std::size_t complete = n.rows - n.incomplete;
  n.duplicates = count_of(cfg_.duplicate_rate, complete);
  n.unique = complete - n.duplicates;
  n.unmatched = count_of(cfg_.unmatched_rate, n.unique);
  n.matched = n.unique - n.unmatched;
  n.disposed = count_of(cfg_.disposed_rate, n.matched);
  n.affected = count_of(cfg_.affected_rate, n.disposed);
  n.saturated = count_of(cfg_.overbooking_rate, n.disposed) - n.affected;
  n.plea_other = count_of(cfg_.plea_other_rate, n.disposed);

  plan_people(n.unique + n.incomplete);
  plan_roles(n);

  std::vector<PsaRecord> rows;
  std::vector<TruthRow> truth;
  std::vector<std::size_t> unique_rows;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    const Slot& slot = slots_[i];
    const Person& person = people_[slot.person];
    PsaRecord r = blank_record(slot, i);
    TruthRow t;
    t.record_id = r.record_id;
    t.sfid = r.sfid;
    switch (slot.role) {
      case Role::Audit: {
        CourtCase c;
        build_audit(slot, r, c, t);
        t.status = TruthStatus::Audit;
        t.court_number = c.court_number;
        cases_.push_back(std::move(c));
        if (rng_.chance(cfg_.decoy_rate)) add_decoys(person, r, 1);
        break;
      }
      case Role::NotDisposed: {
        r.booking_charges = draw_charges(rng_.chance(0.3));
        label_record(r);
        CourtCase c = new_case(person, *r.arrest_date, rng_.uniform(-1, 2));
        const int open =
            rng_.uniform(0, static_cast<int>(r.booking_charges.size()) - 1);
        for (int k = 0; k < static_cast<int>(r.booking_charges.size()); ++k) {
          std::optional<int> code;
          if (k != open) code = rng_.chance(0.5) ? conviction_code() : dismissal_code();
          c.charges.push_back({r.booking_charges[static_cast<std::size_t>(k)], true, true, code});
        }
        t.status = TruthStatus::NotDisposed;
        t.court_number = c.court_number;
        cases_.push_back(std::move(c));
        if (rng_.chance(cfg_.decoy_rate)) add_decoys(person, r, 1);
        break;
      }
      case Role::Unmatched:
        r.booking_charges = draw_charges(rng_.chance(0.3));
        label_record(r);
        t.status = TruthStatus::Unmatched;
        if (rng_.chance(0.5)) add_decoys(person, r, 2);
        break;
      case Role::Incomplete: {
        r.booking_charges = draw_charges(rng_.chance(0.3));
        label_record(r);
        t.status = TruthStatus::Incomplete;
        switch (rng_.uniform(0, 5)) {
          case 0: r.sfid.clear(); break;
          case 1: r.arrest_date.reset(); break;
          case 2: r.psa_date.reset(); break;
          case 3: r.fta.reset(); break;
          case 4: r.nca.reset(); break;
          default: r.nvca.reset(); break;
        }
        t.sfid = r.sfid;
        break;
      }
    }
    if (slot.role != Role::Incomplete) unique_rows.push_back(rows.size());
    if (!t.booking_final && r.recorded_recommendation) t.booking_final = r.recorded_recommendation;
    rows.push_back(std::move(r));
    truth.push_back(std::move(t));
  }

  for (std::size_t d = 0; d < n.duplicates; ++d) {
    const PsaRecord& base = rows[rng_.pick(unique_rows)];
    PsaRecord copy = base;
    copy.record_id = fmt::format("R{:06d}", slots_.size() + d + 1);
    rng_.shuffle(copy.booking_charges);
    TruthRow t;
    t.record_id = copy.record_id;
    t.sfid = copy.sfid;
    t.status = TruthStatus::Duplicate;
    t.duplicate_of = base.record_id;
    rows.push_back(std::move(copy));
    truth.push_back(std::move(t));
  }

  const auto groups = group_labels(cases_);
  for (auto& t : truth) {
    auto it = groups.find(t.sfid);
    t.group = it == groups.end() ? "non-B" : it->second;
  }

  rng_.shuffle(rows);
  rng_.shuffle(cases_);
  std::sort(truth.begin(), truth.end(),
            [](const TruthRow& a, const TruthRow& b) { return a.record_id < b.record_id; });

  SyntheticData out;
  out.psa = std::move(rows);
  out.court = std::move(cases_);
  out.truth = std::move(truth);
  out.planted = n;
  return out;
}

}  // namespace

std::string_view to_string(TruthStatus s) {
  switch (s) {
    case TruthStatus::Audit: return "audit";
    case TruthStatus::NotDisposed: return "not_disposed";
    case TruthStatus::Unmatched: return "unmatched";
    case TruthStatus::Incomplete: return "incomplete";
    case TruthStatus::Duplicate: return "duplicate";
  }
  return "audit";
}

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::None: return "";
    case Scenario::Clean: return "clean";
    case Scenario::Affected: return "affected";
    case Scenario::Saturated: return "saturated";
  }
  return "";
}

GeneratorConfig GeneratorConfig::from_json_text(std::string_view text, std::string_view source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(std::string(source) + ": expected an object");
  GeneratorConfig c;
  static const std::set<std::string> known = {
      "n_records", "seed", "incomplete_rate", "duplicate_rate", "unmatched_rate",
      "disposed_rate", "overbooking_rate", "affected_rate", "plea_other_rate",
      "companion_rate", "decoy_rate", "extradited_rate", "black_fraction",
      "black_history_shift", "black_label_stability", "other_label_stability", "start_date"};
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) throw ConfigError(std::string(source) + ": unknown key '" + k + "'");
  }
  try {
    c.n_records = j.value("n_records", c.n_records);
    c.seed = j.value("seed", c.seed);
    c.incomplete_rate = j.value("incomplete_rate", c.incomplete_rate);
    c.duplicate_rate = j.value("duplicate_rate", c.duplicate_rate);
    c.unmatched_rate = j.value("unmatched_rate", c.unmatched_rate);
    c.disposed_rate = j.value("disposed_rate", c.disposed_rate);
    c.overbooking_rate = j.value("overbooking_rate", c.overbooking_rate);
    c.affected_rate = j.value("affected_rate", c.affected_rate);
    c.plea_other_rate = j.value("plea_other_rate", c.plea_other_rate);
    c.companion_rate = j.value("companion_rate", c.companion_rate);
    c.decoy_rate = j.value("decoy_rate", c.decoy_rate);
    c.extradited_rate = j.value("extradited_rate", c.extradited_rate);
    c.black_fraction = j.value("black_fraction", c.black_fraction);
    c.black_history_shift = j.value("black_history_shift", c.black_history_shift);
    c.black_label_stability = j.value("black_label_stability", c.black_label_stability);
    c.other_label_stability = j.value("other_label_stability", c.other_label_stability);
    c.start_date = j.value("start_date", c.start_date);
  } catch (const json::exception& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  c.validate();
  return c;
}

GeneratorConfig GeneratorConfig::load(const std::string& path) {
  return from_json_text(read_text_file(path, "generator config"), path);
}

void GeneratorConfig::validate() const {
  if (n_records < 0) throw ConfigError("n_records must be non-negative");
  const std::pair<const char*, double> rates[] = {
      {"incomplete_rate", incomplete_rate}, {"duplicate_rate", duplicate_rate},
      {"unmatched_rate", unmatched_rate},   {"disposed_rate", disposed_rate},
      {"overbooking_rate", overbooking_rate}, {"affected_rate", affected_rate},
      {"plea_other_rate", plea_other_rate}, {"companion_rate", companion_rate},
      {"decoy_rate", decoy_rate},           {"extradited_rate", extradited_rate},
      {"black_fraction", black_fraction},   {"black_label_stability", black_label_stability},
      {"other_label_stability", other_label_stability}};
  for (const auto& [name, v] : rates) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0,1]");
  }
  if (affected_rate > overbooking_rate) {
    throw ConfigError("affected_rate cannot exceed overbooking_rate");
  }
  if (!(black_history_shift > 0.0)) throw ConfigError("black_history_shift must be positive");
  if (!parse_date(start_date)) throw ConfigError("start_date must be YYYY-MM-DD");
}

std::string GeneratorConfig::to_json() const {
  json j = {{"n_records", n_records},
            {"seed", seed},
            {"incomplete_rate", incomplete_rate},
            {"duplicate_rate", duplicate_rate},
            {"unmatched_rate", unmatched_rate},
            {"disposed_rate", disposed_rate},
            {"overbooking_rate", overbooking_rate},
            {"affected_rate", affected_rate},
            {"plea_other_rate", plea_other_rate},
            {"companion_rate", companion_rate},
            {"decoy_rate", decoy_rate},
            {"extradited_rate", extradited_rate},
            {"black_fraction", black_fraction},
            {"black_history_shift", black_history_shift},
            {"black_label_stability", black_label_stability},
            {"other_label_stability", other_label_stability},
            {"start_date", start_date}};
  return j.dump(2);
}

}  // namespace chargeaudit

namespace chargeaudit {

SyntheticData generate(const GeneratorConfig& config, const EngineConfig& engine,
                       const DispositionPolicy& policy) {
  config.validate();
  policy.validate();
  return Generator(config, engine, policy).run();
}

void write_truth(std::ostream& out, const std::vector<TruthRow>& truth) {
  csv::write_row(out, {"record_id", "sfid", "status", "duplicate_of", "court_number", "scenario",
                       "plea_other_only", "group", "booking_final", "conviction_final",
                       "conviction_charges"});
  for (const auto& t : truth) {
    auto level = [](const std::optional<SupervisionLevel>& l) {
      return l ? std::string(to_label(*l)) : std::string();
    };
    csv::write_row(out, {t.record_id, t.sfid, std::string(to_string(t.status)), t.duplicate_of,
                         t.court_number, std::string(to_string(t.scenario)),
                         format_bool(t.plea_other_only), t.group, level(t.booking_final),
                         level(t.conviction_final), join_charge_list(t.conviction_charges)});
  }
}

void write_synthetic(const SyntheticData& data, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir + "': " + ec.message());
  const std::filesystem::path base(dir);
  std::ostringstream psa, court, truth;
  write_psa_records(psa, data.psa);
  write_court_cases(court, data.court);
  write_truth(truth, data.truth);
  write_text_file((base / "psa.csv").string(), psa.str());
  write_text_file((base / "court.csv").string(), court.str());
  write_text_file((base / "truth.csv").string(), truth.str());
}

}  // namespace chargeaudit
