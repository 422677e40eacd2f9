#include <doctest.h>

#include "linkage.hpp"
#include "support.hpp"

using namespace chargeaudit;
using namespace testsupport;

TEST_CASE("completeness filter") {
  PsaRecord full = psa_record("R1", "S1", "2017-01-05", charges({"459 PC F"}));
  PsaRecord no_nca = full;
  no_nca.record_id = "R2";
  no_nca.nca.reset();
  PsaRecord no_arrest = full;
  no_arrest.record_id = "R3";
  no_arrest.arrest_date.reset();
  auto split = filter_complete({full, no_nca, no_arrest});
  REQUIRE(split.kept.size() == 1);
  CHECK(split.kept[0].record_id == "R1");
  CHECK(split.dropped.size() == 2);
}

TEST_CASE("duplicates share sfid, date and charges") {
  PsaRecord a = psa_record("R2", "S1", "2017-01-05", charges({"459 PC F", "602 PC M"}));
  PsaRecord b = a;
  b.record_id = "R1";
  b.booking_charges = charges({"602 PC M", "459 PC F"});
  PsaRecord c = a;
  c.record_id = "R3";
  c.booking_charges = charges({"459 PC F"});

  auto d = deduplicate({a, b, c});
  REQUIRE(d.unique.size() == 2);
  REQUIRE(d.duplicates.size() == 1);
  CHECK(d.duplicates[0].record_id == "R2");

  auto again = deduplicate(d.unique);
  CHECK(again.duplicates.empty());
  CHECK(again.unique.size() == d.unique.size());
}

TEST_CASE("match window is one day before to two days after") {
  const Date psa = day("2017-03-10");
  std::vector<int> accepted;
  for (int off = -2; off <= 3; ++off) {
    if (in_match_window(psa, add_days(psa, off))) accepted.push_back(off);
  }
  CHECK(accepted == std::vector<int>{-1, 0, 1, 2});
}

TEST_CASE("candidate lookup") {
  PsaRecord p = psa_record("R1", "S1", "2017-03-10", charges({"459 PC F"}));
  std::vector<CourtCase> cases{
      court_case("C3", "S1", "2017-03-12", {court_charge("459 PC F", 200)}),
      court_case("C2", "S1", "2017-03-08", {court_charge("459 PC F", 200)}),
      court_case("C1", "S2", "2017-03-10", {court_charge("459 PC F", 200)})};
  auto found = find_candidates(p, cases);
  REQUIRE(found.size() == 1);
  CHECK(found[0].court_number == "C3");
  CaseIndex index(cases);
  CHECK(find_candidates(p, index).size() == 1);
}

TEST_CASE("resolution rules") {
  PsaRecord p = psa_record("R1", "S1", "2017-03-10", charges({"211 PC F", "459 PC F"}));

  auto none = resolve_match(p, {});
  CHECK(none.status == MatchStatus::Unresolved);

  auto one = resolve_match(p, {court_case("C1", "S1", "2017-03-10", {court_charge("602 PC M", 0)})});
  CHECK(one.status == MatchStatus::Matched);
  CHECK(one.matched_cases.size() == 1);

  auto top = resolve_match(
      p, {court_case("C1", "S1", "2017-03-10", {court_charge("602 PC M", 200)}),
          court_case("C2", "S1", "2017-03-11", {court_charge("211 PC F", 200)})});
  REQUIRE(top.status == MatchStatus::Matched);
  REQUIRE(top.matched_cases.size() == 1);
  CHECK(top.matched_cases[0].court_number == "C2");

  auto second = resolve_match(
      p, {court_case("C1", "S1", "2017-03-10", {court_charge("211 PC F", 200)}),
          court_case("C2", "S1", "2017-03-11",
                     {court_charge("211 PC F", 200), court_charge("459 PC F", 10)})});
  REQUIRE(second.matched_cases.size() == 1);
  CHECK(second.matched_cases[0].court_number == "C2");

  auto both = resolve_match(
      p, {court_case("C1", "S1", "2017-03-10",
                     {court_charge("211 PC F", 200), court_charge("459 PC F", 10)}),
          court_case("C2", "S1", "2017-03-11",
                     {court_charge("211 PC F", 200), court_charge("459 PC F", 10)})});
  CHECK(both.status == MatchStatus::Matched);
  CHECK(both.matched_cases.size() == 2);

  auto neither = resolve_match(
      p, {court_case("C1", "S1", "2017-03-10", {court_charge("602 PC M", 200)}),
          court_case("C2", "S1", "2017-03-11", {court_charge("484 PC M", 200)})});
  CHECK(neither.status == MatchStatus::Unresolved);
  CHECK(neither.candidate_count == 2);
}

TEST_CASE("linkage conserves records") {
  std::vector<PsaRecord> recs{
      psa_record("R1", "S1", "2017-03-10", charges({"459 PC F"})),
      psa_record("R2", "S1", "2017-03-10", charges({"459 PC F"})),
      psa_record("R3", "S2", "2017-04-01", charges({"602 PC M"})),
      psa_record("R4", "S3", "2017-04-01", charges({"602 PC M"}))};
  recs[3].fta.reset();
  std::vector<CourtCase> cases{court_case("C1", "S1", "2017-03-11", {court_charge("459 PC F", 200)})};
  auto out = link_records(recs, cases);
  CHECK(out.total() == recs.size());
  CHECK(out.matched.size() == 1);
  CHECK(out.duplicates.size() == 1);
  CHECK(out.incomplete.size() == 1);
  CHECK(out.unresolved.size() == 1);
}
