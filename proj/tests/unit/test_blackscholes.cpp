#include "catch_amalgamated.hpp"

#include <cmath>
#include <random>

#include "igasv/blackscholes.hpp"
#include "oracle.hpp"

using namespace igasv;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// |a - b| <= rel |b|, with a floor for values that underflow in double.
bool close_rel(double a, double b, double rel, double floor = 1e-280) {
  return std::abs(a - b) <= rel * std::abs(b) + floor;
}

}  // namespace

TEST_CASE("put price limits and references", "[blackscholes]") {
  const BsContext itm(1.2, 1.0, 0.0, 0.0);
  CHECK(put_price_xy(itm, 0.0, 0.0) == Catch::Approx(0.2).epsilon(1e-15));
  CHECK_THROWS_AS(put_price_xy(itm, 0.0, -1e-3), std::domain_error);

  // x = log 100, K = 100, sigma sqrt(T) = 0.2; 40-digit reference
  const BsContext atm(100.0, 1.0, 0.0, 0.0);
  CHECK_THAT(put_price_xy(atm, std::log(100.0), 0.04), WithinRel(7.965567455405796293, 1e-12));

  CHECK_THROWS_AS(BsContext(0.0, 1.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(BsContext(1.0, 0.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("put-call parity and monotonicity", "[blackscholes]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(1e-4, 1.0), uk(0.5, 2.0), ud(-0.05, 0.05);
  for (int i = 0; i < 500; ++i) {
    const double x = ux(rng), y = uy(rng);
    const BsContext ctx(std::exp(x) * uk(rng), 1.0, ud(rng), ud(rng));
    const double parity = ctx.discounted_strike() - std::exp(x - ctx.for_discount);
    CHECK_THAT(put_price_xy(ctx, x, y) - call_price_xy(ctx, x, y), WithinAbs(parity, 1e-14));
    CHECK(put_price_xy(ctx, x, y * 1.01) >= put_price_xy(ctx, x, y));
  }
}

TEST_CASE("put price is convex in the spot", "[blackscholes]") {
  const BsContext ctx(1.0, 1.0, 0.01, 0.02);
  const double y = 0.04;
  const double h = 1e-3;
  for (double s = 0.5; s <= 2.0; s += 0.01) {
    const double second = put_price_xy(ctx, std::log(s + h), y) - 2 * put_price_xy(ctx, std::log(s), y) +
                          put_price_xy(ctx, std::log(s - h), y);
    CHECK(second >= -1e-10);
  }
}

TEST_CASE("greeks against 50-digit finite differences", "[blackscholes]") {
  SECTION("fixed point x = 0, y = 0.04, K = 1.1") {
    const BsContext ctx(1.1, 1.0, 0.0, 0.0);
    const auto g = expansion_greeks(ctx, 0.0, 0.04);
    const auto fd = oracle::fd_greeks(ctx, 0.0, 0.04);
    CHECK_THAT(g.dy, WithinRel(fd.dy, 1e-6));
    CHECK_THAT(g.dxdy, WithinRel(fd.dxdy, 1e-6));
    CHECK_THAT(g.dx2dy, WithinRel(fd.dx2dy, 1e-6));
    CHECK_THAT(g.dy2, WithinRel(fd.dy2, 1e-6));
    CHECK_THAT(g.dx2dy2, WithinRel(fd.dx2dy2, 1e-6));
    CHECK(greek_xy(ctx, 0.0, 0.04, 2, 2) == g.dx2dy2);
  }
  SECTION("random points") {
    std::mt19937_64 rng(17);
    // strikes within 6 standard deviations of the forward; beyond that every greek underflows
    std::uniform_real_distribution<double> ux(-1.0, 1.0), uy(1e-4, 1.0), uz(-6.0, 6.0), ud(-0.05, 0.05);
    for (int i = 0; i < 100; ++i) {
      const double x = ux(rng), y = uy(rng), dd = ud(rng), df = ud(rng);
      const BsContext ctx(std::exp(x - df + dd + uz(rng) * std::sqrt(y)), 1.0, dd, df);
      const auto g = expansion_greeks(ctx, x, y);
      const auto fd = oracle::fd_greeks(ctx, x, y);
      CHECK(close_rel(g.dy, fd.dy, 1e-6));
      CHECK(close_rel(g.dxdy, fd.dxdy, 1e-6));
      CHECK(close_rel(g.dx2dy, fd.dx2dy, 1e-6));
      CHECK(close_rel(g.dy2, fd.dy2, 1e-6));
      CHECK(close_rel(g.dx2dy2, fd.dx2dy2, 1e-6));
      // dP/dy = (P_xx - P_x) / 2
      CHECK(close_rel(g.dy, fd.half_dxx_minus_dx, 1e-12));
    }
  }
}

TEST_CASE("greek identity at x = 0, y = 0.09", "[blackscholes]") {
  const BsContext ctx(1.0, 1.0, 0.0, 0.0);
  const auto fd = oracle::fd_greeks(ctx, 0.0, 0.09);
  CHECK_THAT(greek_xy(ctx, 0.0, 0.09, 0, 1), WithinRel(fd.half_dxx_minus_dx, 1e-12));
}

TEST_CASE("greek domain", "[blackscholes]") {
  const BsContext ctx(1.0, 1.0, 0.0, 0.0);
  CHECK_THROWS_AS(greek_xy(ctx, 0.0, 0.04, 1, 0), std::domain_error);
  CHECK_THROWS_AS(greek_xy(ctx, 0.0, 0.04, 3, 1), std::domain_error);
  CHECK_THROWS_AS(greek_xy(ctx, 0.0, 0.0, 0, 1), std::domain_error);
  // deep in the money the normal density vanishes
  const double y = 0.04;
  CHECK_THAT(greek_xy(ctx, std::log(1.0) - 10 * std::sqrt(y), y, 0, 1), WithinAbs(0.0, 1e-12));
}

TEST_CASE("implied vol inversion", "[blackscholes]") {
  const BsContext ctx(1.05, 0.5, 0.01, 0.02);
  const double spot = 1.0;
  CHECK_THAT(implied_vol_put(ctx, spot, put_price_xy(ctx, 0.0, 0.2 * 0.2 * 0.5)), WithinAbs(0.2, 1e-10));

  const double lower = std::max(ctx.discounted_strike() - spot * std::exp(-ctx.for_discount), 0.0);
  CHECK_THROWS_AS(implied_vol_put(ctx, spot, lower), std::domain_error);
  CHECK_THROWS_AS(implied_vol_put(ctx, spot, ctx.discounted_strike()), std::domain_error);

  for (double sigma = 0.01; sigma <= 1.0; sigma += 0.0137) {
    for (double k : {0.8, 1.0, 1.3}) {
      const BsContext c(k, 0.75, 0.005, 0.03);
      const double p = put_price_xy(c, 0.0, sigma * sigma * 0.75);
      // deep in the money the time value drowns in the rounding of the put price itself
      const double time_value = p - std::max(c.discounted_strike() - std::exp(-c.for_discount), 0.0);
      if (time_value < 1e-10) continue;
      CHECK_THAT(implied_vol_put(c, 1.0, p), WithinAbs(sigma, 1e-9));
    }
  }

  // AUD/USD 1M ATM at 6.38%, price from a 40-digit reference
  const double iv = implied_vol(0.009109132038170522322, 0.9335, 0.9356, 1.0 / 12, 0.0021, 0.028);
  CHECK_THAT(iv, WithinAbs(0.0638, 1e-10));
}

TEST_CASE("normal distribution helpers", "[blackscholes]") {
  CHECK(norm_cdf(0.0) == 0.5);
  CHECK_THAT(norm_cdf(-10.0), WithinRel(7.619853024160526e-24, 1e-13));
  CHECK_THAT(norm_pdf(1.0), WithinRel(0.24197072451914337, 1e-15));
}
