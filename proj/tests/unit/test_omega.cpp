#include "catch_amalgamated.hpp"

#include <random>

#include "igasv/omega.hpp"
#include "oracle.hpp"

using namespace igasv;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using I = Integrand;

namespace {

std::vector<OmegaKey> sample_keys() {
  return {
      OmegaKey{{0, I::V0Squared}},
      OmegaKey{{2, I::LambdaSqV0Sq}, {-2, I::One}},
      OmegaKey{{1, I::RhoLambdaV0Sq}, {-1, I::V0}},
      OmegaKey{{1, I::RhoLambdaV0Sq}, {0, I::TwoRhoLambdaV0}, {-1, I::V0}},
      OmegaKey{{1, I::RhoLambdaV0Sq}, {1, I::RhoLambdaV0Sq}, {-2, I::One}},
      OmegaKey{{2, I::LambdaSqV0Sq}, {-1, I::V0}, {-1, I::V0}},
      OmegaKey{{-1, I::TwoV0}, {2, I::V0Squared}},
  };
}

OmegaState run(const std::vector<OmegaKey>& keys, double v0, const ParamSchedule& s) {
  OmegaState st(keys, v0);
  st.advance_through(s);
  return st;
}

}  // namespace

TEST_CASE("zero vol of vol kills every lambda term", "[omega]") {
  const ParamSchedule s(TimeGrid({0.0, 0.2, 0.7}), {{3.0, 0.1, 0.0, -0.5}, {1.0, 0.2, 0.0, 0.4}});
  const auto keys = sample_keys();
  const OmegaState st = run(keys, 0.15, s);
  for (std::size_t i = 1; i < 6; ++i) CHECK(st.value(keys[i]) == 0.0);
  CHECK(st.value(keys[0]) > 0.0);
  CHECK(st.value(keys[6]) > 0.0);
}

TEST_CASE("single interval against nested quadrature", "[omega]") {
  const ParamSchedule s = ParamSchedule::constant({4.19, 0.0639, 1.71, -0.40}, 1.0 / 12);
  const auto keys = sample_keys();
  const OmegaState st = run(keys, 0.0649, s);
  for (const auto& k : keys) {
    const double want = oracle::nested_quadrature(s, 0.0649, oracle::levels_of(k), 1.0 / 12);
    CHECK_THAT(st.value(k), WithinRel(want, 1e-10));
  }
}

TEST_CASE("three intervals against nested quadrature", "[omega]") {
  const ParamSchedule s(TimeGrid({0.0, 0.1, 0.35, 0.6}),
                        {{2.0, 0.1, 1.2, -0.6}, {0.7, 0.25, 2.4, 0.3}, {6.0, 0.05, 0.4, -0.9}});
  const auto keys = sample_keys();
  const OmegaState st = run(keys, 0.2, s);
  for (const auto& k : keys) {
    const double want = oracle::nested_quadrature(s, 0.2, oracle::levels_of(k), 0.6);
    CHECK_THAT(st.value(k), WithinRel(want, 1e-9) || WithinAbs(want, 1e-14));
  }
  CHECK_THAT(st.v0(), WithinRel(oracle::proxy_vol(s, 0.2, 0.6), 1e-14));
  CHECK_THAT(st.kappa_integral(), WithinRel(oracle::kappa_integral(s, 0.6), 1e-14));
}

TEST_CASE("grid refinement leaves the values unchanged", "[omega]") {
  const ModelParams p{2.5, 0.09, 1.4, -0.55};
  const auto keys = sample_keys();
  const OmegaState one = run(keys, 0.11, ParamSchedule::constant(p, 0.8));
  const OmegaState two = run(keys, 0.11, ParamSchedule(TimeGrid({0.0, 0.3, 0.8}), {p, p}));
  const OmegaState five =
      run(keys, 0.11, ParamSchedule(TimeGrid({0.0, 0.1, 0.2, 0.45, 0.5, 0.8}), {p, p, p, p, p}));
  for (const auto& k : keys) {
    CHECK_THAT(two.value(k), WithinRel(one.value(k), 1e-12));
    CHECK_THAT(five.value(k), WithinRel(one.value(k), 1e-12));
  }
}

TEST_CASE("prefixes are tracked and the state only moves forward", "[omega]") {
  const auto keys = sample_keys();
  OmegaState st(keys, 0.1);
  CHECK(st.time() == 0.0);
  CHECK(st.value(keys[3].prefix(2)) == 0.0);
  CHECK_THROWS_AS(st.value(OmegaKey{{3, I::One}}), std::out_of_range);

  const ModelParams p{1.5, 0.12, 0.9, -0.3};
  const OmegaState next = omega_advance(st, p, 0.4);
  st.advance(p, 0.4);
  for (const auto& k : keys) CHECK(st.value(k) == next.value(k));
  CHECK(st.time() == 0.4);
  CHECK_THROWS_AS(st.advance(p, 0.4), std::domain_error);
  CHECK_THROWS_AS(st.advance(p, 0.3), std::domain_error);

  // intervals ending at or before time() are skipped; one straddling it is an error
  OmegaState a(keys, 0.1);
  a.advance(p, 0.5);
  CHECK_NOTHROW(a.advance_through(ParamSchedule(TimeGrid({0.0, 0.5, 0.9}), {p, p})));
  CHECK(a.time() == 0.9);
  OmegaState b(keys, 0.1);
  b.advance(p, 0.5);
  CHECK_THROWS_AS(b.advance_through(ParamSchedule(TimeGrid({0.0, 0.6, 0.9}), {p, p})), std::domain_error);

  CHECK_THROWS_AS(OmegaKey(std::vector<OmegaFactor>{}), std::domain_error);
  CHECK_THROWS_AS(OmegaKey({{0, I::One}, {0, I::One}, {0, I::One}, {0, I::One}}), std::domain_error);
  CHECK_THROWS_AS(OmegaState(keys, 0.0), std::invalid_argument);
}
