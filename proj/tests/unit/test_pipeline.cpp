#include <doctest.h>

#include <fstream>

#include "csv.hpp"
#include "errors.hpp"
#include "fileio.hpp"
#include "pipeline.hpp"
#include "support.hpp"

using namespace chargeaudit;
using namespace testsupport;

namespace {

const char* kHeader =
    "record_id,sfid,arrest_date,psa_date,fta,nca,nvca,booking_charges,recorded_exclusion,"
    "recorded_bumpup,recorded_recommendation\n";

std::string write(const std::filesystem::path& dir, const std::string& name, const std::string& body) {
  const auto path = (dir / name).string();
  write_text_file(path, body);
  return path;
}

}  // namespace

TEST_CASE("score three records") {
  auto dir = scratch_dir("score3");
  auto psa = write(dir, "psa.csv",
                   std::string(kHeader) +
                       "R1,S1,2017-01-01,2017-01-01,2,3,false,,,,\n"
                       "R2,S2,2017-01-01,2017-01-01,5,4,false,459 PC F,,,\n"
                       "R3,S3,2017-01-01,2017-01-01,1,1,false,187(A) PC F,,,\n");
  auto rep = run_score(psa, shipped_config(), (dir / "out").string(), false);
  CHECK(rep.get("scored") == 3);
  CHECK(rep.row_errors.empty());
  auto t = csv::Table::read_file((dir / "out" / "scores.csv").string());
  REQUIRE(t.size() == 3);
  CHECK(t.get(0, "final") == "OR-NAS");
  CHECK(t.get(1, "final") == "Release Not Recommended");
  CHECK(t.get(2, "exclusion") == "true");
}

TEST_CASE("a record outside the matrix is a row error") {
  auto dir = scratch_dir("score_bad");
  auto psa = write(dir, "psa.csv",
                   std::string(kHeader) +
                       "R1,S1,2017-01-01,2017-01-01,2,3,false,,,,\n"
                       "R2,S2,2017-01-01,2017-01-01,7,3,false,,,,\n"
                       "R3,S3,2017-01-01,2017-01-01,1,1,false,,,,\n");
  auto rep = run_score(psa, shipped_config(), (dir / "out").string(), false);
  CHECK(rep.get("scored") == 2);
  REQUIRE(rep.row_errors.size() == 1);
  CHECK(rep.row_errors[0].line == 3);
  CHECK_FALSE(rep.empty_result);
}

TEST_CASE("missing columns are a schema error") {
  auto dir = scratch_dir("schema");
  auto psa = write(dir, "psa.csv", "record_id,sfid\nR1,S1\n");
  CHECK_THROWS_AS(run_score(psa, shipped_config(), (dir / "out").string(), false), SchemaError);
}

TEST_CASE("empty court file leaves everything unresolved") {
  auto dir = scratch_dir("empty_court");
  auto psa = write(dir, "psa.csv",
                   std::string(kHeader) + "R1,S1,2017-01-01,2017-01-01,2,3,false,459 PC F,,,\n");
  auto court = write(dir, "court.csv", "court_number,sfid,arrest_date,charge,disposition\n");
  AuditRunOptions o;
  o.psa_path = psa;
  o.court_path = court;
  o.out_dir = (dir / "out").string();
  auto rep = run_audit(o, shipped_config());
  CHECK(rep.empty_result);
  CHECK(rep.get("unresolved") == 1);
  CHECK(rep.get("audited") == 0);
}

TEST_CASE("validation counts one planted discrepancy per thousand") {
  auto dir = scratch_dir("validate1000");
  std::string body = kHeader;
  for (int i = 0; i < 1000; ++i) {
    const std::string rec = i == 500 ? "OR-Minimum" : "OR-NAS";
    body += "R" + std::to_string(i) + ",S" + std::to_string(i) +
            ",2017-01-01,2017-01-01,2,3,false,459 PC M,false,false," + rec + "\n";
  }
  auto psa = write(dir, "psa.csv", body);
  auto rep = run_validate(psa, "", shipped_config(), (dir / "out").string());
  auto t = csv::Table::read_file((dir / "out" / "validation.csv").string());
  bool seen = false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.get(i, "component") != "recommendation") continue;
    seen = true;
    CHECK(t.get(i, "compared") == "1000");
    CHECK(t.get(i, "agreed") == "999");
    CHECK(std::stod(std::string(t.get(i, "agreement_rate"))) == doctest::Approx(0.999));
  }
  CHECK(seen);
}

TEST_CASE("schema text documents the files") {
  const std::string s = schema_text();
  for (const char* name : {"psa.csv", "court.csv", "truth.csv", "scores.csv", "audit_pairs.csv",
                           "rates.csv", "affected.csv", "validation.csv", "consistency.csv"}) {
    CHECK(s.find(name) != std::string::npos);
  }
}
