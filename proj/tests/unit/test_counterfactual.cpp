#include <doctest.h>

#include "counterfactual.hpp"
#include "errors.hpp"
#include "support.hpp"

using namespace chargeaudit;
using namespace testsupport;

namespace {

const DispositionPolicy& policy() { return shipped_config().policy; }

std::vector<std::string> texts(const std::vector<ChargeCode>& cs) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(normalize_charge_text(c.canonical()));
  return out;
}

MatchResult matched(PsaRecord p, std::vector<CourtCase> cases) {
  MatchResult m;
  m.psa = std::move(p);
  m.matched_cases = std::move(cases);
  m.status = MatchStatus::Matched;
  return m;
}

}  // namespace

TEST_CASE("conviction threshold") {
  CourtCase c = court_case("C1", "S1", "2017-01-01", {court_charge("459 PC F", 160)});
  CHECK(is_conviction(160, c, policy()));
  CHECK_FALSE(is_conviction(159, c, policy()));
  CourtCase plea = court_case("C2", "S1", "2017-01-01", {court_charge("459 PC F", 72)});
  CHECK_FALSE(is_conviction(72, plea, policy()));
}

TEST_CASE("companion zero rule") {
  CourtCase c = court_case("C1", "S1", "2017-01-01",
                           {court_charge("459 PC F", 0), court_charge("470(D) PC F", 72)});
  CHECK(is_conviction(0, c, policy()));
  CHECK(texts(conviction_charges(c, policy())) == std::vector<std::string>{"459 PC F"});

  CourtCase lone_zero = court_case("C2", "S1", "2017-01-01", {court_charge("459 PC F", 0)});
  CHECK_FALSE(is_conviction(0, lone_zero, policy()));
}

TEST_CASE("disposition completeness") {
  CHECK(fully_disposed(court_case("C1", "S1", "2017-01-01",
                                  {court_charge("459 PC F", 0), court_charge("602 PC M", 200)}),
                       policy()));
  CHECK_FALSE(fully_disposed(court_case("C1", "S1", "2017-01-01",
                                        {court_charge("459 PC F", std::nullopt),
                                         court_charge("602 PC M", 200)}),
                             policy()));
}

TEST_CASE("conviction sets") {
  CourtCase c = court_case("C1", "S1", "2017-01-01",
                           {court_charge("187(A) PC F", 10), court_charge("240 PC M", 160)});
  CHECK(texts(conviction_charges(c, policy())) == std::vector<std::string>{"240 PC M"});

  CourtCase dismissed = court_case("C2", "S1", "2017-01-01",
                                   {court_charge("187(A) PC F", 10), court_charge("240 PC M", 22)});
  CHECK(conviction_charges(dismissed, policy()).empty());

  CourtCase plea_only = court_case("C3", "S1", "2017-01-01",
                                   {court_charge("187(A) PC F", 72), court_charge("240 PC M", 10)});
  CHECK(conviction_charges(plea_only, policy()).empty());
}

TEST_CASE("open cases cannot be audited") {
  auto m = matched(psa_record("R1", "S1", "2017-01-01", charges({"459 PC F"})),
                   {court_case("C1", "S1", "2017-01-01", {court_charge("459 PC F", std::nullopt)})});
  CHECK_THROWS_AS(conviction_charges(m, policy()), NotDisposedError);
}

TEST_CASE("union over several matched cases") {
  auto m = matched(psa_record("R1", "S1", "2017-01-01", charges({"459 PC F"})),
                   {court_case("C1", "S1", "2017-01-01", {court_charge("459 PC F", 200)}),
                    court_case("C2", "S1", "2017-01-02",
                               {court_charge("459 PC F", 180), court_charge("602 PC M", 170)})});
  CHECK(texts(conviction_charges(m, policy())) == std::vector<std::string>{"459 PC F", "602 PC M"});
}

TEST_CASE("counterfactual assessment") {
  PsaRecord p = psa_record("R1", "S1", "2017-01-01", charges({"459 PC F"}), 2, 3);
  const auto booked = charges({"459 PC F", "602 PC M"});
  CHECK(booking_assess(p, booked, engine()) == counterfactual_assess(p, booked, engine()));

  PsaResult empty = counterfactual_assess(p, {}, engine());
  CHECK(empty.final_level == SupervisionLevel::OrNas);
  CHECK_FALSE(empty.exclusion);
  CHECK_FALSE(empty.bumpup);
}

TEST_CASE("saturated at the top level") {
  // Cell (6,4) is already Release Not Recommended; losing the exclusion changes nothing.
  PsaRecord p = psa_record("R1", "S1", "2017-01-01", {}, 6, 4);
  auto b = booking_assess(p, charges({"187(A) PC F", "459 PC F"}), engine());
  auto c = counterfactual_assess(p, charges({"459 PC F"}), engine());
  auto d = compute_deltas(b, c);
  CHECK(d.exclusion_lost);
  CHECK(d.recommendation_delta == 0);
  CHECK(b.final_level == c.final_level);
}

TEST_CASE("exclusion at booking becomes bump-up at conviction") {
  // SFPDP-ACM cell: exclusion under the felony, bump-up under the misdemeanor.
  PsaRecord p = psa_record("R1", "S1", "2017-01-01", {}, 4, 4);
  auto b = booking_assess(p, charges({"273.5 PC F"}), engine());
  auto c = counterfactual_assess(p, charges({"273.5(A) PC M"}), engine());
  CHECK(b.exclusion);
  CHECK(c.bumpup);
  CHECK(b.final_level == SupervisionLevel::ReleaseNotRecommended);
  CHECK(c.final_level == SupervisionLevel::ReleaseNotRecommended);
  auto d = compute_deltas(b, c);
  CHECK(d.exclusion_lost);
  CHECK(d.recommendation_delta == 0);
}

TEST_CASE("bump-up lost") {
  PsaRecord p = psa_record("R1", "S1", "2017-01-01", {}, 2, 3);
  auto b = booking_assess(p, charges({"273.5(A) PC M"}), engine());
  auto c = counterfactual_assess(p, charges({"602 PC M"}), engine());
  auto d = compute_deltas(b, c);
  CHECK_FALSE(d.exclusion_lost);
  CHECK(d.bumpup_lost);
  CHECK(d.recommendation_delta == rank(b.final_level) - rank(c.final_level));
  CHECK(d.recommendation_delta == 1);
}

TEST_CASE("audit pairs") {
  CHECK(build_audit_pairs({}, engine(), AuditOptions{policy()}).pairs.empty());

  std::vector<MatchResult> ms{
      matched(psa_record("R1", "S1", "2017-01-01", charges({"459 PC F"})),
              {court_case("C1", "S1", "2017-01-01",
                          {court_charge("187(A) PC F", 10), court_charge("459 PC F", 200)},
                          Race::B)}),
      matched(psa_record("R2", "S2", "2017-01-01", charges({"459 PC F"})),
              {court_case("C2", "S2", "2017-01-01", {court_charge("459 PC F", std::nullopt)})}),
      matched(psa_record("R3", "S3", "2017-01-01", charges({"459 PC F"})),
              {court_case("C3", "S3", "2017-01-01", {court_charge("459 PC F", 72)})})};
  std::vector<CourtCase> all;
  for (const auto& m : ms) all.insert(all.end(), m.matched_cases.begin(), m.matched_cases.end());

  auto build = build_audit_pairs(ms, engine(), AuditOptions{policy()}, group_labels(all));
  REQUIRE(build.pairs.size() == 2);
  CHECK(build.not_disposed.size() == 1);
  CHECK(build.pairs[0].group == "B");
  CHECK(build.pairs[0].deltas.exclusion_lost);
  CHECK(build.pairs[1].group == "non-B");
  CHECK(build.pairs[1].plea_other_only);
  CHECK(sensitivity_subset(build.pairs).size() == 1);
}

TEST_CASE("policy validation") {
  CHECK_THROWS_AS(DispositionPolicy::from_json_text(R"({"conviction_threshold": 0})"), ConfigError);
  CHECK_THROWS_AS(DispositionPolicy::from_json_text("{"), ConfigError);
}
