#include <doctest.h>

#include <cmath>
#include <limits>

#include "errors.hpp"
#include "stats.hpp"
#include "support.hpp"

using namespace chargeaudit;
using namespace testsupport;

TEST_CASE("two-proportion test") {
  auto eq = two_proportion_test(20, 100, 10, 50);
  CHECK(eq.statistic == doctest::Approx(0.0));
  CHECK(eq.p_value == doctest::Approx(1.0));

  // Reference values from an independent arbitrary-precision computation.
  auto r = two_proportion_test(30, 100, 10, 100);
  CHECK(std::fabs(r.statistic - 3.535533905932737622) < 1e-10);
  CHECK(std::fabs(r.p_value - 0.00040695201744495893956) < 1e-10);

  auto u = two_proportion_test(45, 120, 30, 150);
  CHECK(std::fabs(u.statistic - 3.1901290063135498413) < 1e-10);
  CHECK(std::fabs(u.p_value - 0.0014220929725245870465) < 1e-10);

  CHECK_THROWS_AS(two_proportion_test(0, 10, 0, 10), DegenerateInputError);
  CHECK_THROWS_AS(two_proportion_test(0, 0, 1, 10), EmptyInputError);
}

TEST_CASE("midranks") {
  std::vector<double> v{3, 1, 3, 2, 3};
  CHECK(midranks(v) == std::vector<double>{4, 1, 4, 2, 4});
}

TEST_CASE("rank-sum test against a reference implementation") {
  // p from scipy mannwhitneyu(method="asymptotic", use_continuity=True).
  struct Case {
    std::vector<double> a, b;
    double w, p, abs_z;
  };
  const std::vector<Case> cases{
      {{1, 2, 2, 3, 4, 4, 4}, {2, 3, 3, 4, 1, 1}, 54.5, 0.4611820840343156, 0.7369017758390556},
      {{4, 4, 3, 4, 2, 4, 3, 4, 1, 4},
       {3, 2, 2, 1, 3, 2, 1, 2, 4},
       125.0,
       0.03712503385686678,
       2.0843864005185475},
      {{0.5, 1.7, 2.2, 3.9, 4.1}, {2.0, 5.5, 6.1, 7.3}, 18.0, 0.11134688653314041, 1.592168332809066}};
  for (const auto& c : cases) {
    auto r = wilcoxon_rank_sum(c.a, c.b);
    CHECK(r.rank_sum == doctest::Approx(c.w));
    CHECK(r.p_value == doctest::Approx(c.p).epsilon(1e-9));
    CHECK(std::fabs(r.z) == doctest::Approx(c.abs_z).epsilon(1e-9));
  }
}

TEST_CASE("rank-sum edge cases") {
  std::vector<double> a{1, 2, 3, 4};
  auto same = wilcoxon_rank_sum(a, a);
  CHECK(same.rank_sum == doctest::Approx(same.mean));
  CHECK(same.p_value == doctest::Approx(1.0));

  std::vector<double> tied_a{1, 1, 2, 2, 2, 3, 4, 4};
  std::vector<double> tied_b{1, 2, 2, 3, 3, 3, 4};
  auto t = wilcoxon_rank_sum(tied_a, tied_b);
  CHECK(t.variance < t.untied_variance);

  std::vector<double> flat{2, 2, 2};
  CHECK_THROWS_AS(wilcoxon_rank_sum(flat, flat), DegenerateInputError);
  CHECK_THROWS_AS(wilcoxon_rank_sum(std::vector<double>{}, a), EmptyInputError);
}

TEST_CASE("exact permutation helper") {
  // a={1,2} vs b={3,4}: 2 of the 6 splits are as extreme.
  std::vector<double> a{1, 2};
  std::vector<double> b{3, 4};
  CHECK(exact_rank_sum_p(a, b) == doctest::Approx(1.0 / 3.0));
  std::vector<double> c{1, 2, 3};
  std::vector<double> d{4, 5, 6};
  CHECK(exact_rank_sum_p(c, d) == doctest::Approx(0.1));
}

TEST_CASE("bonferroni") {
  CHECK(bonferroni(std::vector<double>{0.0005, 0.02}, 0.001) == std::vector<bool>{true, false});
  CHECK(bonferroni(std::vector<double>{1.0, 1.0, 1.0}, 0.05) == std::vector<bool>{false, false, false});
  CHECK(bonferroni(std::vector<double>{0.0009}, 0.001) == std::vector<bool>{true});
  CHECK(bonferroni(std::vector<double>{0.0011}, 0.001) == std::vector<bool>{false});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK(bonferroni(std::vector<double>{nan, 0.0001}, 0.001) == std::vector<bool>{false, true});
}

namespace {

AuditPair pair_with(bool excl_b, bool excl_c, int final_b, int final_c, std::string group = "all") {
  AuditPair p;
  p.group = std::move(group);
  p.booking.exclusion = excl_b;
  p.conviction.exclusion = excl_c;
  p.booking.final_level = level_from_rank(final_b);
  p.conviction.final_level = level_from_rank(final_c);
  p.booking.initial = level_from_rank(std::min(final_b, 3));
  p.conviction.initial = level_from_rank(std::min(final_c, 3));
  p.deltas = compute_deltas(p.booking, p.conviction);
  return p;
}

}  // namespace

TEST_CASE("proportion affected") {
  std::vector<AuditPair> four{pair_with(true, false, 4, 4), pair_with(false, false, 2, 2),
                              pair_with(false, false, 3, 3), pair_with(false, false, 1, 1)};
  auto t = proportion_affected(four);
  CHECK(t.exclusion == doctest::Approx(0.25));
  CHECK(t.recommendation == doctest::Approx(0.0));

  std::vector<AuditPair> wrong_way{pair_with(false, false, 2, 3)};
  CHECK(proportion_affected(wrong_way).recommendation == doctest::Approx(0.0));

  std::vector<AuditPair> same{pair_with(false, false, 2, 2), pair_with(true, true, 4, 4)};
  auto s = proportion_affected(same);
  CHECK(s.exclusion == 0.0);
  CHECK(s.bumpup == 0.0);
  CHECK(s.nvca == 0.0);
  CHECK(s.recommendation == 0.0);

  CHECK_THROWS_AS(proportion_affected(std::vector<AuditPair>{}), EmptyInputError);
}

TEST_CASE("rate tables") {
  std::vector<AuditPair> pairs;
  for (int i = 0; i < 40; ++i) pairs.push_back(pair_with(i < 20, i < 5, i < 20 ? 4 : 2, i < 5 ? 4 : 2, i % 2 ? "B" : "non-B"));
  auto tables = rate_tables(pairs, true);
  REQUIRE(tables.size() == 3);
  CHECK(tables[0].group == "all");
  CHECK(tables[1].group == "B");
  CHECK(tables[0].booking.exclusion == doctest::Approx(0.5));
  CHECK(tables[0].conviction.exclusion == doctest::Approx(0.125));
  CHECK_THROWS_AS(rate_tables(std::vector<AuditPair>{}, false), EmptyInputError);
}

TEST_CASE("consistency matrix") {
  std::vector<CourtCase> cases{
      court_case("C1", "P1", "2017-01-01", {}, Race::B),
      court_case("C2", "P1", "2017-02-01", {}, Race::B),
      court_case("C3", "P1", "2017-03-01", {}, Race::W),
      court_case("C4", "P2", "2017-01-01", {}, Race::B),
      court_case("C5", "P2", "2017-02-01", {}, Race::B)};
  auto m = race_consistency(cases);
  CHECK(m.individuals == 2);
  const auto b = static_cast<std::size_t>(std::find(m.categories.begin(), m.categories.end(), Race::B) - m.categories.begin());
  const auto w = static_cast<std::size_t>(std::find(m.categories.begin(), m.categories.end(), Race::W) - m.categories.begin());
  CHECK(m.values[b][b] == doctest::Approx((2.0 / 3.0 + 1.0) / 2.0 * 100.0));
  CHECK(m.values[b][w] == doctest::Approx((1.0 / 3.0) / 2.0 * 100.0));
  CHECK(m.values[w][b] == doctest::Approx(2.0 / 3.0 * 100.0));
  CHECK(m.values[w][w] == doctest::Approx(1.0 / 3.0 * 100.0));

  auto with_single = cases;
  with_single.push_back(court_case("C6", "P3", "2017-01-01", {}, Race::W));
  auto m2 = race_consistency(with_single);
  CHECK(m2.individuals == m.individuals);
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    for (std::size_t j = 0; j < m.values[i].size(); ++j) {
      if (std::isnan(m.values[i][j])) {
        CHECK(std::isnan(m2.values[i][j]));
      } else {
        CHECK(m2.values[i][j] == m.values[i][j]);
      }
    }
  }
}

TEST_CASE("stable labels give a diagonal matrix") {
  std::vector<CourtCase> cases;
  int n = 0;
  for (Race r : {Race::B, Race::W, Race::H}) {
    for (int k = 0; k < 3; ++k) cases.push_back(court_case("C" + std::to_string(++n), std::string(to_string(r)), "2017-01-01", {}, r));
  }
  auto m = race_consistency(cases);
  for (std::size_t i = 0; i < m.categories.size(); ++i) {
    if (m.row_individuals[i] == 0) continue;
    CHECK(m.values[i][i] == doctest::Approx(100.0));
  }
}

TEST_CASE("agreement rate") {
  std::vector<int> a(1000, 1);
  std::vector<int> b = a;
  CHECK(agreement_rate(a, b) == doctest::Approx(1.0));
  b[17] = 0;
  CHECK(agreement_rate(a, b) == doctest::Approx(0.999));

  std::vector<int> x{1, 1, 0, 0};
  std::vector<int> y{1, 0, 0, 1};
  bool keep[] = {true, true, true, false};
  CHECK(agreement_rate(x, y, std::span<const bool>(keep)) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(agreement_rate(x, std::vector<int>{1}), LengthMismatchError);
}

TEST_CASE("initial distribution") {
  std::vector<AuditPair> pairs{pair_with(false, false, 1, 1, "B"), pair_with(false, false, 2, 2, "B"),
                               pair_with(false, false, 3, 3, "B")};
  std::vector<std::string> groups{"all", "non-B"};
  auto h = initial_distribution(pairs, groups);
  REQUIRE(h.size() == 2);
  double total = 0;
  for (int r = 1; r <= 4; ++r) total += h[0].fraction(r);
  CHECK(total == doctest::Approx(1.0));
  CHECK(h[1].empty);
  CHECK(h[1].total == 0);
}
