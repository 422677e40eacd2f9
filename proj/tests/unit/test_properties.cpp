#include <doctest.h>

#include "engine.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace chargeaudit;
using testsupport::engine;
using testsupport::InputSampler;

namespace {

PsaResult run(const testsupport::RandomInput& in) {
  return assess(in.s, in.charges, in.extradited, engine().dmf, engine().catalog);
}

}  // namespace

TEST_CASE("engine matches the oracle on random inputs") {
  InputSampler sampler(2024);
  int disagreements = 0;
  for (int i = 0; i < 3000; ++i) {
    auto in = sampler.next();
    if (run(in) != oracle::assess(in.s, in.charges, in.extradited, engine().dmf, engine().catalog)) {
      ++disagreements;
    }
  }
  CHECK(disagreements == 0);
}

TEST_CASE("exclusion always yields the top level") {
  InputSampler sampler(5);
  for (int i = 0; i < 2000; ++i) {
    auto r = run(sampler.next());
    if (r.exclusion) CHECK(r.final_level == SupervisionLevel::ReleaseNotRecommended);
  }
}

TEST_CASE("bump-up never goes past the top level and adds at most one") {
  InputSampler sampler(6);
  for (int i = 0; i < 2000; ++i) {
    auto r = run(sampler.next());
    if (r.exclusion) continue;
    const int step = rank(r.final_level) - rank(r.initial);
    CHECK(step >= 0);
    CHECK(step <= 1);
    CHECK(step == ((r.bumpup && r.initial != SupervisionLevel::ReleaseNotRecommended) ? 1 : 0));
  }
}

TEST_CASE("adding charges never lowers the final level") {
  InputSampler sampler(7);
  for (int i = 0; i < 2000; ++i) {
    auto small = sampler.next();
    auto big = small;
    const int extra = sampler.uniform(1, 3);
    for (int k = 0; k < extra; ++k) big.charges.push_back(sampler.pick());
    const auto a = run(small);
    const auto b = run(big);
    CHECK(rank(a.final_level) <= rank(b.final_level));
    if (a.exclusion) CHECK(b.exclusion);
  }
}
