#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "errors.hpp"

namespace chargeaudit {

namespace {

double two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

TestResult two_proportion_test(long x1, long n1, long x2, long n2) {
  if (n1 <= 0 || n2 <= 0) throw EmptyInputError("two_proportion_test: empty sample");
  if (x1 < 0 || x1 > n1 || x2 < 0 || x2 > n2) {
    throw DegenerateInputError("two_proportion_test: count outside [0, n]");
  }
  const double p1 = static_cast<double>(x1) / static_cast<double>(n1);
  const double p2 = static_cast<double>(x2) / static_cast<double>(n2);
  const double pooled = static_cast<double>(x1 + x2) / static_cast<double>(n1 + n2);
  if (x1 + x2 == 0 || x1 + x2 == n1 + n2) {
    throw DegenerateInputError("two_proportion_test: pooled proportion is 0 or 1");
  }
  const double se = std::sqrt(pooled * (1.0 - pooled) *
                              (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
  TestResult r;
  r.statistic = (p1 - p2) / se;
  r.p_value = two_sided_p(r.statistic);
  return r;
}

std::vector<double> midranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

WilcoxonResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw EmptyInputError("wilcoxon_rank_sum: empty sample");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = midranks(pooled);

  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double n = n1 + n2;

  WilcoxonResult r;
  for (std::size_t i = 0; i < a.size(); ++i) r.rank_sum += ranks[i];
  r.mean = n1 * (n + 1.0) / 2.0;

  std::map<double, std::size_t> ties;
  for (double v : pooled) ++ties[v];
  double tie_sum = 0.0;
  for (const auto& [v, t] : ties) {
    const double td = static_cast<double>(t);
    tie_sum += td * td * td - td;
  }
  r.untied_variance = n1 * n2 * (n + 1.0) / 12.0;
  r.variance = n > 1.0 ? n1 * n2 / 12.0 * ((n + 1.0) - tie_sum / (n * (n - 1.0))) : 0.0;
  if (ties.size() < 2 || r.variance <= 0.0) {
    throw DegenerateInputError("wilcoxon_rank_sum: all values identical");
  }
  const double diff = r.rank_sum - r.mean;
  const double corrected = std::max(0.0, std::abs(diff) - 0.5);
  r.z = (diff < 0 ? -corrected : corrected) / std::sqrt(r.variance);
  r.p_value = two_sided_p(r.z);
  return r;
}

std::vector<bool> bonferroni(std::span<const double> pvalues, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DegenerateInputError("bonferroni: alpha outside (0,1)");
  std::vector<bool> flags(pvalues.size(), false);
  if (pvalues.empty()) return flags;
  const double cut = alpha / static_cast<double>(pvalues.size());
  for (std::size_t i = 0; i < pvalues.size(); ++i) flags[i] = pvalues[i] <= cut;
  return flags;
}

SourceRates source_rates(std::span<const AuditPair> pairs, bool booking) {
  SourceRates s;
  s.n = pairs.size();
  if (pairs.empty()) return s;
  std::size_t ex = 0, bu = 0, nv = 0;
  long rank_total = 0;
  for (const auto& p : pairs) {
    const PsaResult& r = booking ? p.booking : p.conviction;
    ex += r.exclusion;
    bu += r.bumpup;
    nv += r.subscores.nvca_flag;
    rank_total += rank(r.final_level);
  }
  const double n = static_cast<double>(pairs.size());
  s.exclusion = static_cast<double>(ex) / n;
  s.bumpup = static_cast<double>(bu) / n;
  s.nvca = static_cast<double>(nv) / n;
  s.mean_recommendation = static_cast<double>(rank_total) / n;
  return s;
}

namespace {

template <typename Pred>
ComponentTest proportion_component(std::string name, std::span<const AuditPair> pairs, Pred has,
                                   double alpha) {
  ComponentTest t;
  t.component = std::move(name);
  t.test = "two_proportion_z";
  const long nn = static_cast<long>(pairs.size());
  long x1 = 0, x2 = 0;
  for (const auto& p : pairs) {
    x1 += has(p.booking);
    x2 += has(p.conviction);
  }
  try {
    auto r = two_proportion_test(x1, nn, x2, nn);
    t.statistic = r.statistic;
    t.p_value = r.p_value;
    t.significant = r.p_value < alpha;
  } catch (const Error& e) {
    t.note = e.what();
  }
  return t;
}

RateTable make_table(std::string group, std::span<const AuditPair> pairs, double alpha) {
  RateTable t;
  t.group = std::move(group);
  t.booking = source_rates(pairs, true);
  t.conviction = source_rates(pairs, false);
  t.tests.push_back(proportion_component(
      "exclusion", pairs, [](const PsaResult& r) { return r.exclusion; }, alpha));
  t.tests.push_back(proportion_component(
      "bumpup", pairs, [](const PsaResult& r) { return r.bumpup; }, alpha));
  t.tests.push_back(proportion_component(
      "nvca", pairs, [](const PsaResult& r) { return r.subscores.nvca_flag; }, alpha));

  ComponentTest w;
  w.component = "recommendation";
  w.test = "wilcoxon_rank_sum";
  std::vector<double> a, b;
  for (const auto& p : pairs) {
    a.push_back(rank(p.booking.final_level));
    b.push_back(rank(p.conviction.final_level));
  }
  try {
    auto r = wilcoxon_rank_sum(a, b);
    w.statistic = r.z;
    w.p_value = r.p_value;
    w.significant = r.p_value < alpha;
  } catch (const Error& e) {
    w.note = e.what();
  }
  t.tests.push_back(std::move(w));
  return t;
}

std::vector<std::string> group_names(std::span<const AuditPair> pairs) {
  std::set<std::string> names;
  for (const auto& p : pairs) names.insert(p.group);
  return {names.begin(), names.end()};
}

std::vector<AuditPair> in_group(std::span<const AuditPair> pairs, const std::string& g) {
  std::vector<AuditPair> out;
  for (const auto& p : pairs) {
    if (g == "all" || p.group == g) out.push_back(p);
  }
  return out;
}

}  // namespace

std::vector<RateTable> rate_tables(std::span<const AuditPair> pairs, bool by_group, double alpha) {
  if (pairs.empty()) throw EmptyInputError("rate_tables: no audit pairs");
  std::vector<RateTable> tables;
  tables.push_back(make_table("all", pairs, alpha));
  if (by_group) {
    for (const auto& g : group_names(pairs)) {
      if (g == "all") continue;
      tables.push_back(make_table(g, in_group(pairs, g), alpha));
    }
  }
  std::vector<double> ps;
  for (const auto& t : tables) {
    for (const auto& c : t.tests) {
      if (c.p_value) ps.push_back(*c.p_value);
    }
  }
  const auto flags = bonferroni(ps, alpha);
  std::size_t k = 0;
  for (auto& t : tables) {
    for (auto& c : t.tests) {
      if (c.p_value) c.bonferroni_significant = flags[k++];
    }
  }
  return tables;
}

AffectedTable proportion_affected(std::span<const AuditPair> pairs, std::string group) {
  if (pairs.empty()) throw EmptyInputError("proportion_affected: no audit pairs");
  AffectedTable t;
  t.group = std::move(group);
  t.n = pairs.size();
  std::size_t ex = 0, bu = 0, nv = 0, rec = 0;
  for (const auto& p : pairs) {
    ex += p.deltas.exclusion_lost;
    bu += p.deltas.bumpup_lost;
    nv += p.deltas.nvca_lost;
    rec += p.deltas.recommendation_delta > 0;
  }
  const double n = static_cast<double>(pairs.size());
  t.exclusion = static_cast<double>(ex) / n;
  t.bumpup = static_cast<double>(bu) / n;
  t.nvca = static_cast<double>(nv) / n;
  t.recommendation = static_cast<double>(rec) / n;
  return t;
}

std::vector<AffectedTable> affected_tables(std::span<const AuditPair> pairs, bool by_group) {
  std::vector<AffectedTable> out;
  out.push_back(proportion_affected(pairs, "all"));
  if (by_group) {
    for (const auto& g : group_names(pairs)) {
      if (g == "all") continue;
      out.push_back(proportion_affected(in_group(pairs, g), g));
    }
  }
  return out;
}

ConsistencyMatrix race_consistency(std::span<const CourtCase> cases) {
  ConsistencyMatrix m;
  for (Race r : {Race::B, Race::C, Race::F, Race::H, Race::I, Race::J, Race::O, Race::U, Race::W}) {
    m.categories.push_back(r);
  }
  const std::size_t k = m.categories.size();
  auto index_of = [&](Race r) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < k; ++i) {
      if (m.categories[i] == r) return i;
    }
    return std::nullopt;
  };

  std::map<std::string, std::vector<Race>> by_person;
  for (const auto& c : cases) by_person[c.sfid].push_back(c.race);

  std::vector<std::vector<double>> sums(k, std::vector<double>(k, 0.0));
  m.row_individuals.assign(k, 0);
  for (const auto& [sfid, labels] : by_person) {
    if (labels.size() <= 1) continue;
    ++m.individuals;
    std::vector<double> share(k, 0.0);
    for (Race r : labels) {
      if (auto i = index_of(r)) share[*i] += 1.0;
    }
    for (auto& s : share) s = 100.0 * s / static_cast<double>(labels.size());
    for (std::size_t i = 0; i < k; ++i) {
      if (share[i] == 0.0) continue;
      ++m.row_individuals[i];
      for (std::size_t j = 0; j < k; ++j) sums[i][j] += share[j];
    }
  }
  m.values.assign(k, std::vector<double>(k, kNaN));
  for (std::size_t i = 0; i < k; ++i) {
    if (m.row_individuals[i] == 0) continue;
    for (std::size_t j = 0; j < k; ++j) {
      m.values[i][j] = sums[i][j] / static_cast<double>(m.row_individuals[i]);
    }
  }
  return m;
}

double agreement_rate(std::span<const int> reproduced, std::span<const int> recorded,
                      std::optional<std::span<const bool>> mask) {
  if (reproduced.size() != recorded.size()) {
    throw LengthMismatchError("agreement_rate: columns differ in length");
  }
  if (mask && mask->size() != reproduced.size()) {
    throw LengthMismatchError("agreement_rate: mask length differs from columns");
  }
  std::size_t n = 0, agree = 0;
  for (std::size_t i = 0; i < reproduced.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    ++n;
    agree += reproduced[i] == recorded[i];
  }
  if (n == 0) throw EmptyInputError("agreement_rate: nothing to compare");
  return static_cast<double>(agree) / static_cast<double>(n);
}

double Histogram::fraction(int level_rank) const {
  if (total == 0 || level_rank < 1 || level_rank > 4) return 0.0;
  return static_cast<double>(counts[static_cast<std::size_t>(level_rank - 1)]) /
         static_cast<double>(total);
}

std::vector<Histogram> initial_distribution(std::span<const AuditPair> pairs,
                                            std::span<const std::string> groups) {
  std::vector<Histogram> out;
  for (const auto& g : groups) {
    Histogram h;
    h.group = g;
    for (const auto& p : pairs) {
      if (g != "all" && p.group != g) continue;
      ++h.counts[static_cast<std::size_t>(rank(p.booking.initial) - 1)];
      ++h.total;
    }
    h.empty = h.total == 0;
    out.push_back(h);
  }
  return out;
}

}  // namespace chargeaudit
