#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "counterfactual.hpp"
#include "records.hpp"

namespace chargeaudit {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Pooled two-sample z test; two-sided p. Throws DegenerateInputError when
/// the pooled proportion is 0 or 1.
TestResult two_proportion_test(long x1, long n1, long x2, long n2);

struct WilcoxonResult {
  double rank_sum = 0.0;  // W, rank sum of the first sample (midranks)
  double mean = 0.0;
  double variance = 0.0;          // tie-corrected
  double untied_variance = 0.0;
  double z = 0.0;                 // continuity-corrected, signed as W - mean
  double p_value = 1.0;
};

/// Normal approximation with tie correction and continuity correction.
/// Throws DegenerateInputError when every value is identical.
WilcoxonResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b);

/// Midranks (1-based) of the pooled values.
std::vector<double> midranks(std::span<const double> values);

/// flag i <=> p_i <= alpha / m. NaN p-values are never flagged.
std::vector<bool> bonferroni(std::span<const double> pvalues, double alpha);

struct SourceRates {
  std::size_t n = 0;
  double exclusion = 0.0;
  double bumpup = 0.0;
  double nvca = 0.0;
  double mean_recommendation = 0.0;
};

struct ComponentTest {
  std::string component;  // exclusion | bumpup | nvca | recommendation
  std::string test;       // two_proportion_z | wilcoxon_rank_sum
  std::optional<double> statistic;
  std::optional<double> p_value;  // empty when the test is undefined
  std::string note;
  bool significant = false;             // p < alpha
  bool bonferroni_significant = false;  // across every test in the run
};

struct RateTable {
  std::string group;
  SourceRates booking;
  SourceRates conviction;
  std::vector<ComponentTest> tests;
};

inline constexpr double kDefaultAlpha = 0.001;

SourceRates source_rates(std::span<const AuditPair> pairs, bool booking);

/// One table for all pairs, then one per group label in sorted order when
/// `by_group`. Throws EmptyInputError on no pairs.
std::vector<RateTable> rate_tables(std::span<const AuditPair> pairs, bool by_group,
                                   double alpha = kDefaultAlpha);

struct AffectedTable {
  std::string group;
  std::size_t n = 0;
  double exclusion = 0.0;
  double bumpup = 0.0;
  double nvca = 0.0;
  double recommendation = 0.0;  // booking final strictly higher
};

AffectedTable proportion_affected(std::span<const AuditPair> pairs, std::string group = "all");
std::vector<AffectedTable> affected_tables(std::span<const AuditPair> pairs, bool by_group);

struct ConsistencyMatrix {
  std::vector<Race> categories;             // rows and columns
  std::vector<std::vector<double>> values;  // percent; NaN for rows with no individuals
  std::vector<std::size_t> row_individuals;
  std::size_t individuals = 0;  // individuals with more than one record
};

/// Missing labels count toward each individual's record total but have no column.
ConsistencyMatrix race_consistency(std::span<const CourtCase> cases);

/// Throws LengthMismatchError on unequal lengths, EmptyInputError when the
/// masked subset is empty.
double agreement_rate(std::span<const int> reproduced, std::span<const int> recorded,
                      std::optional<std::span<const bool>> mask = std::nullopt);

struct Histogram {
  std::string group;
  std::array<std::size_t, 4> counts{};
  std::size_t total = 0;
  bool empty = true;
  double fraction(int level_rank) const;
};

/// Booking-side initial recommendation per requested group; "all" matches every pair.
std::vector<Histogram> initial_distribution(std::span<const AuditPair> pairs,
                                            std::span<const std::string> groups);

}  // namespace chargeaudit
