#include "catch_amalgamated.hpp"

#include <cmath>
#include <random>

#include "igasv/phi.hpp"
#include "oracle.hpp"

using namespace igasv;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("single-level closed forms over the whole interval", "[phi]") {
  const IntervalData iv{0.25, 0.75, 3.0, 0.1, 0.2};
  PhiEvaluator phi(iv);
  for (int m = 0; m <= 4; ++m) {
    CHECK_THAT(phi(PhiKey{{0, m, 0}}), WithinRel(0.5 / (m + 1), 1e-14));
  }
  for (int n : {-2, -1, 1, 2}) {
    const double expected = std::expm1(n * 3.0 * 0.5) / (n * 3.0);
    CHECK_THAT(phi(PhiKey{{n, 0, 0}}), WithinRel(expected, 1e-14));
  }
}

TEST_CASE("random key ((2,1,1),(-1,0,2)) against nested quadrature", "[phi]") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> k(0.5, 8.0), th(0.01, 0.3), v(0.01, 0.3), len(0.05, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double t0 = 0.3;
    const IntervalData iv{t0, t0 + len(rng), k(rng), th(rng), v(rng)};
    PhiEvaluator phi(iv);
    const std::vector<PhiTriple> key{{2, 1, 1}, {-1, 0, 2}};
    CHECK_THAT(phi.evaluate(key), WithinRel(oracle::phi_quadrature(iv, key, t0), 1e-10));
  }
}

TEST_CASE("random keys of depth 1 to 3, both evaluation modes", "[phi]") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> n(-2, 2), m(0, 2), p(0, 2), depth(1, 3);
  std::uniform_real_distribution<double> th(0.01, 0.3), v(0.01, 0.3), u(0.0, 1.0);
  int series = 0;
  for (int i = 0; i < 150; ++i) {
    // kappa dT spans both sides of the series threshold
    const double kdt = std::pow(10.0, -4.0 + 5.0 * u(rng));
    const double dt = 0.05 + 0.9 * u(rng);
    const IntervalData iv{0.0, dt, kdt / dt, th(rng), v(rng)};
    std::vector<PhiTriple> key;
    const int d = depth(rng);
    for (int j = 0; j < d; ++j) key.push_back({n(rng), m(rng), p(rng)});
    PhiEvaluator phi(iv);
    const double got = phi.evaluate(key);
    const double want = oracle::phi_quadrature(iv, key, 0.0);
    series += phi.series_mode();
    INFO("kappa dT = " << kdt << ", depth " << d);
    CHECK_THAT(got, WithinRel(want, 1e-10) || WithinAbs(want, 1e-14));
  }
  CHECK(series > 10);
}

TEST_CASE("evaluation at an interior time", "[phi]") {
  const IntervalData iv{1.0, 1.5, 2.5, 0.08, 0.12};
  const std::vector<PhiTriple> key{{1, 0, 2}, {-1, 1, 1}};
  for (double t : {1.1, 1.25, 1.49}) {
    PhiEvaluator phi(iv, t);
    CHECK_THAT(phi.evaluate(key), WithinRel(oracle::phi_quadrature(iv, key, t), 1e-10));
  }
  PhiEvaluator at_end(iv, 1.5);
  CHECK_THAT(at_end.evaluate(key), WithinAbs(0.0, 1e-16));
}

TEST_CASE("memoisation and malformed keys", "[phi]") {
  const IntervalData iv{0.0, 0.5, 2.0, 0.1, 0.2};
  PhiEvaluator phi(iv);
  const std::vector<PhiTriple> key{{2, 0, 2}, {-1, 0, 1}, {-1, 0, 1}};
  const double first = phi.evaluate(key);
  const std::size_t cached = phi.cache_size();
  CHECK(cached > 0);
  CHECK(phi.evaluate(key) == first);
  CHECK(phi.cache_size() == cached);

  CHECK_THROWS_AS(phi.evaluate(std::vector<PhiTriple>{}), std::domain_error);
  CHECK_THROWS_AS(phi(PhiKey{{0, -1, 0}}), std::domain_error);
  CHECK_THROWS_AS(phi(PhiKey{{0, 0, -1}}), std::domain_error);
  CHECK_THROWS_AS(PhiEvaluator(iv, 0.6), std::domain_error);
  CHECK_THROWS_AS(PhiEvaluator(IntervalData{0.0, 0.5, 0.0, 0.1, 0.2}), std::domain_error);
}
