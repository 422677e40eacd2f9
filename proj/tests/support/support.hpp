#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "counterfactual.hpp"
#include "engine.hpp"
#include "pipeline.hpp"
#include "records.hpp"

#ifndef CHARGEAUDIT_TEST_DATA_DIR
#error "CHARGEAUDIT_TEST_DATA_DIR must point at the shipped configuration"
#endif

namespace testsupport {

using namespace chargeaudit;

inline const LoadedConfig& shipped_config() {
  static const LoadedConfig cfg = load_config(ConfigPaths::in_dir(CHARGEAUDIT_TEST_DATA_DIR));
  return cfg;
}

inline const EngineConfig& engine() { return shipped_config().engine; }

inline std::vector<ChargeCode> charges(std::initializer_list<const char*> texts) {
  std::vector<ChargeCode> out;
  for (const char* t : texts) out.push_back(engine().catalog.parse(t));
  return out;
}

inline Date day(const char* iso) { return *parse_date(iso); }

inline CourtCharge court_charge(const char* code, std::optional<int> disposition,
                                bool booked = true, bool filed = true) {
  CourtCharge c;
  c.code = engine().catalog.parse(code);
  c.booked = booked;
  c.filed = filed;
  c.disposition = disposition;
  return c;
}

inline CourtCase court_case(std::string number, std::string sfid, const char* arrest,
                            std::vector<CourtCharge> cs, Race race = Race::W) {
  CourtCase c;
  c.court_number = std::move(number);
  c.sfid = std::move(sfid);
  c.arrest_date = day(arrest);
  c.race = race;
  c.charges = std::move(cs);
  return c;
}

inline PsaRecord psa_record(std::string id, std::string sfid, const char* date,
                            std::vector<ChargeCode> booked, int fta = 2, int nca = 3) {
  PsaRecord r;
  r.record_id = std::move(id);
  r.sfid = std::move(sfid);
  r.arrest_date = day(date);
  r.psa_date = day(date);
  r.fta = fta;
  r.nca = nca;
  r.nvca = false;
  r.booking_charges = std::move(booked);
  return r;
}

// Charge texts drawn for random engine inputs: catalog patterns with a class
// attached, their attempted forms, aliases, and charges on no list.
inline std::vector<std::string> charge_pool() {
  std::vector<std::string> pool;
  for (const auto& p : engine().catalog.patterns()) {
    std::string base = p.pattern.canonical();
    if (p.pattern.charge_class == ChargeClass::Unspecified) {
      pool.push_back(base + " F");
      pool.push_back(base + " M");
    } else {
      pool.push_back(base);
    }
    if (p.pattern.derivative == Derivative::None && p.pattern.body == CodeBody::PC) {
      pool.push_back("664/" + pool.back());
    }
  }
  for (const auto& a : engine().catalog.aliases()) pool.push_back(a.pattern.canonical() + " F");
  for (const char* neutral : {"459 PC F", "459 PC M", "484(A) PC M", "11350(A) HS F",
                              "23152(A) VC M", "10851(A) VC F", "602 PC M", "470(D) PC F",
                              "166(C)(1) PC M", "148(A)(1) PC M"}) {
    pool.push_back(neutral);
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  return pool;
}

struct RandomInput {
  SubScores s;
  std::vector<ChargeCode> charges;
  bool extradited = false;
};

class InputSampler {
 public:
  explicit InputSampler(std::uint64_t seed) : rng_(seed) {
    for (const auto& t : charge_pool()) parsed_.push_back(engine().catalog.parse(t));
  }

  RandomInput next() {
    RandomInput in;
    in.s.fta = uniform(1, 6);
    in.s.nca = uniform(1, 6);
    in.s.nvca_flag = uniform(0, 1) == 1;
    in.extradited = uniform(0, 19) == 0;
    const int k = uniform(0, 4);
    for (int i = 0; i < k; ++i) in.charges.push_back(pick());
    return in;
  }

  ChargeCode pick() { return parsed_[static_cast<std::size_t>(uniform(0, static_cast<int>(parsed_.size()) - 1))]; }

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  const std::vector<ChargeCode>& pool() const { return parsed_; }

 private:
  std::mt19937_64 rng_;
  std::vector<ChargeCode> parsed_;
};

// Exact two-sided p of the rank-sum statistic by enumerating every split of
// the pooled midranks. P(|W - mean| >= |w_obs - mean|).
inline double exact_rank_sum_p(std::span<const double> a, std::span<const double> b) {
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t n = pooled.size();
  const std::size_t n1 = a.size();

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return pooled[x] < pooled[y]; });
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    const double mid = (static_cast<double>(i + j) / 2.0) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mid;
    i = j + 1;
  }

  double observed = 0.0;
  for (std::size_t i = 0; i < n1; ++i) observed += rank[i];
  const double mean = static_cast<double>(n1) * static_cast<double>(n + 1) / 2.0;
  const double dev = std::fabs(observed - mean);

  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(n1), true);
  std::size_t total = 0;
  std::size_t extreme = 0;
  do {
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (pick[i]) w += rank[i];
    }
    ++total;
    if (std::fabs(w - mean) >= dev - 1e-9) ++extreme;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return static_cast<double>(extreme) / static_cast<double>(total);
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("chargeaudit_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testsupport
