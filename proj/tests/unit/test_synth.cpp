#include <doctest.h>

#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "linkage.hpp"
#include "stats.hpp"
#include "synth.hpp"
#include "support.hpp"

using namespace chargeaudit;
using namespace testsupport;

namespace {

std::string serialize(const SyntheticData& d) {
  std::ostringstream out;
  write_psa_records(out, d.psa);
  write_court_cases(out, d.court);
  write_truth(out, d.truth);
  return out.str();
}

GeneratorConfig small(std::uint64_t seed, int n = 600) {
  GeneratorConfig g;
  g.seed = seed;
  g.n_records = n;
  return g;
}

}  // namespace

TEST_CASE("zero records") {
  auto d = generate(small(1, 0), engine(), shipped_config().policy);
  CHECK(d.psa.empty());
  CHECK(d.court.empty());
  CHECK(d.truth.empty());
}

TEST_CASE("same seed, same bytes") {
  auto a = generate(small(9), engine(), shipped_config().policy);
  auto b = generate(small(9), engine(), shipped_config().policy);
  auto c = generate(small(10), engine(), shipped_config().policy);
  CHECK(serialize(a) == serialize(b));
  CHECK(serialize(a) != serialize(c));
}

TEST_CASE("invalid settings") {
  GeneratorConfig g = small(1);
  g.duplicate_rate = 1.5;
  CHECK_THROWS_AS(generate(g, engine(), shipped_config().policy), ConfigError);
  g = small(1);
  g.affected_rate = 0.5;
  g.overbooking_rate = 0.2;
  CHECK_THROWS_AS(g.validate(), ConfigError);
  CHECK_THROWS_AS(GeneratorConfig::from_json_text(R"({"no_such_key": 1})"), ConfigError);
}

TEST_CASE("planted counts are recovered by linkage") {
  auto d = generate(small(3, 1000), engine(), shipped_config().policy);
  auto link = link_records(d.psa, d.court);
  CHECK(link.total() == d.psa.size());
  CHECK(link.incomplete.size() == d.planted.incomplete);
  CHECK(link.duplicates.size() == d.planted.duplicates);
  CHECK(link.unresolved.size() == d.planted.unmatched);
  CHECK(link.matched.size() == d.planted.matched);

  std::map<std::string, const TruthRow*> truth;
  for (const auto& t : d.truth) truth[t.record_id] = &t;
  for (const auto& m : link.matched) {
    const TruthRow* t = truth.at(m.psa.record_id);
    REQUIRE(m.matched_cases.size() == 1);
    CHECK(m.matched_cases[0].court_number == t->court_number);
  }
}

TEST_CASE("no overbooking, no deltas") {
  GeneratorConfig g = small(4, 800);
  g.overbooking_rate = 0.0;
  g.affected_rate = 0.0;
  auto d = generate(g, engine(), shipped_config().policy);
  auto link = link_records(d.psa, d.court);
  auto build = build_audit_pairs(link.matched, engine(), AuditOptions{shipped_config().policy});
  REQUIRE_FALSE(build.pairs.empty());
  for (const auto& p : build.pairs) {
    if (p.plea_other_only) continue;
    CHECK(p.deltas == AuditDeltas{});
  }
}

TEST_CASE("ground truth agrees with the audit") {
  auto d = generate(small(5, 1500), engine(), shipped_config().policy);
  auto link = link_records(d.psa, d.court);
  auto build = build_audit_pairs(link.matched, engine(), AuditOptions{shipped_config().policy});
  CHECK(build.pairs.size() == d.planted.disposed);
  std::map<std::string, const TruthRow*> truth;
  for (const auto& t : d.truth) truth[t.record_id] = &t;
  std::size_t affected = 0;
  for (const auto& p : build.pairs) {
    const TruthRow* t = truth.at(p.record_id);
    CHECK(t->status == TruthStatus::Audit);
    CHECK(p.booking.final_level == t->booking_final);
    CHECK(p.conviction.final_level == t->conviction_final);
    if (p.deltas.recommendation_delta > 0) ++affected;
  }
  CHECK(affected == d.planted.affected);
}

TEST_CASE("large corpus recovers planted rates") {
  GeneratorConfig g = small(12, 10000);
  auto d = generate(g, engine(), shipped_config().policy);
  auto link = link_records(d.psa, d.court);
  auto build = build_audit_pairs(link.matched, engine(), AuditOptions{shipped_config().policy},
                                 group_labels(d.court));
  const double disposed = static_cast<double>(build.pairs.size()) /
                          static_cast<double>(link.matched.size());
  CHECK(std::fabs(disposed - g.disposed_rate) <= 0.005);
  const double affected = proportion_affected(build.pairs).recommendation;
  CHECK(std::fabs(affected - g.affected_rate) <= 0.02);

  // Group shift in criminal history shows up as more mass at levels 3-4.
  std::vector<std::string> groups{"B", "non-B"};
  auto h = initial_distribution(build.pairs, groups);
  REQUIRE(h.size() == 2);
  CHECK(h[0].fraction(3) + h[0].fraction(4) > h[1].fraction(3) + h[1].fraction(4));

  // Stable B labels give a B diagonal near the planted stability.
  auto m = race_consistency(d.court);
  CHECK(m.values[0][0] == doctest::Approx(98.0).epsilon(0.02));
}
