#include <doctest.h>

#include <chargeaudit/chargeaudit.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#ifndef CHARGEAUDIT_TEST_DATA_DIR
#error "CHARGEAUDIT_TEST_DATA_DIR must point at the shipped configuration"
#endif

namespace {

struct Engine {
  ca_engine* e = nullptr;
  Engine() { REQUIRE(ca_engine_load(CHARGEAUDIT_TEST_DATA_DIR, nullptr, &e) == CA_OK); }
  ~Engine() { ca_engine_free(e); }
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(ca_version()).size() > 0);
  CHECK(std::string(ca_status_name(CA_OK)) == "ok");
  CHECK(std::strlen(ca_schema_text()) > 100);
}

TEST_CASE("bad config directory") {
  ca_engine* e = nullptr;
  CHECK(ca_engine_load("/nonexistent/dir", nullptr, &e) != CA_OK);
  CHECK(e == nullptr);
  CHECK(std::strlen(ca_last_error_message()) > 0);
  CHECK(ca_engine_load(nullptr, nullptr, &e) == CA_ERR_INVALID_ARGUMENT);
}

TEST_CASE("assess through the C interface") {
  Engine eng;
  ca_assess_input in{2, 3, 0, nullptr, 0};
  ca_assess_output out{};
  REQUIRE(ca_assess(eng.e, &in, &out) == CA_OK);
  CHECK(out.initial_level == 1);
  CHECK(out.final_level == 1);

  in = {1, 1, 0, "187(A) PC F;459 PC F", 0};
  REQUIRE(ca_assess(eng.e, &in, &out) == CA_OK);
  CHECK(out.exclusion == 1);
  CHECK(out.final_level == 4);
  CHECK(std::string(out.exclusion_reason) == "exclusion-list:187(A) PC F");

  in = {9, 1, 0, nullptr, 0};
  CHECK(ca_assess(eng.e, &in, &out) == CA_ERR_CONFIG);
  in = {1, 1, 0, "PC F", 0};
  CHECK(ca_assess(eng.e, &in, &out) == CA_ERR_PARSE);
}

TEST_CASE("charge helpers") {
  Engine eng;
  size_t needed = 0;
  char small[4];
  CHECK(ca_charge_normalize(" 240  pc m", small, sizeof small, &needed) == CA_ERR_INVALID_ARGUMENT);
  std::vector<char> buf(needed);
  REQUIRE(ca_charge_normalize(" 240  pc m", buf.data(), buf.size(), &needed) == CA_OK);
  CHECK(std::string(buf.data()) == "240 PC M");

  int v = 0, x = 0, b = 0;
  REQUIRE(ca_charge_flags(eng.e, "240 PC M", &v, &x, &b) == CA_OK);
  CHECK(v == 1);
  CHECK(x == 0);
  CHECK(b == 0);
}

TEST_CASE("ambiguous bump-up override") {
  ca_engine_options opts{1, -1};
  ca_engine* e = nullptr;
  REQUIRE(ca_engine_load(CHARGEAUDIT_TEST_DATA_DIR, &opts, &e) == CA_OK);
  int v = 0, x = 0, b = 0;
  REQUIRE(ca_charge_flags(e, "417.4 PC M", &v, &x, &b) == CA_OK);
  CHECK(b == 1);
  ca_engine_free(e);
}

TEST_CASE("statistics through the C interface") {
  double z = 0, p = 0;
  REQUIRE(ca_two_proportion_test(30, 100, 10, 100, &z, &p) == CA_OK);
  CHECK(std::fabs(z - 3.535533905932737622) < 1e-10);
  CHECK(ca_two_proportion_test(0, 10, 0, 10, &z, &p) == CA_ERR_DEGENERATE_INPUT);

  const double a[] = {0.5, 1.7, 2.2, 3.9, 4.1};
  const double bb[] = {2.0, 5.5, 6.1, 7.3};
  double w = 0;
  REQUIRE(ca_wilcoxon_rank_sum(a, 5, bb, 4, &w, &z, &p) == CA_OK);
  CHECK(w == doctest::Approx(18.0));
  CHECK(p == doctest::Approx(0.11134688653314041));
}

TEST_CASE("report handles") {
  Engine eng;
  const std::string out = std::string(CHARGEAUDIT_TEST_SCRATCH) + "/capi_sim";
  ca_report* r = nullptr;
  REQUIRE(ca_run_simulate(eng.e, R"({"n_records": 200, "seed": 3})", out.c_str(), &r) == CA_OK);
  CHECK(ca_report_count_size(r) > 0);
  const char* name = nullptr;
  long long value = 0;
  REQUIRE(ca_report_count_at(r, 0, &name, &value) == CA_OK);
  CHECK(std::string(name) == "psa_rows");
  CHECK(value == 200);
  CHECK(ca_report_count_at(r, 999, &name, &value) == CA_ERR_INVALID_ARGUMENT);
  CHECK(ca_report_output_size(r) >= 3);
  ca_report_free(r);

  r = nullptr;
  CHECK(ca_run_simulate(eng.e, R"({"duplicate_rate": 2})", out.c_str(), &r) == CA_ERR_CONFIG);
  CHECK(r == nullptr);
}
