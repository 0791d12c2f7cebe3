#include "igasv/blackscholes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace igasv {

namespace {

constexpr double kMinVol = 1e-6;
constexpr double kMaxVol = 5.0;

struct Moneyness {
  double log_k;   // log of discounted strike
  double log_f;   // log of discounted spot
  double sqrt_y;
  double d;       // first N argument of the put
};

Moneyness moneyness(const BsContext& ctx, double x, double y) {
  Moneyness m{};
  m.log_k = std::log(ctx.strike) - ctx.dom_discount;
  m.log_f = x - ctx.for_discount;
  m.sqrt_y = std::sqrt(y);
  m.d = (m.log_k - m.log_f) / m.sqrt_y + 0.5 * m.sqrt_y;
  return m;
}

void require_positive_variance(double y) {
  if (!(y > 0.0) || !std::isfinite(y)) {
    throw std::domain_error("greeks need positive integrated variance, got " + std::to_string(y));
  }
}

// Probabilists' Hermite polynomials He_0..He_4.
double hermite(int n, double z) {
  switch (n) {
    case 0: return 1.0;
    case 1: return z;
    case 2: return z * z - 1.0;
    case 3: return z * (z * z - 3.0);
    case 4: {
      const double z2 = z * z;
      return z2 * (z2 - 6.0) + 3.0;
    }
    default: throw std::domain_error("hermite order out of range");
  }
}

// d^i/dx^i of dP/dy:  e^{log_k} n(d) He_i(d) / (2 y^{(i+1)/2}).
double dx_pow_dy(const Moneyness& m, double density_term, int i) {
  return density_term * hermite(i, m.d) / (2.0 * std::pow(m.sqrt_y, i + 1));
}

}  // namespace

BsContext::BsContext(double k, double t, double dd, double df)
    : strike(k), maturity(t), dom_discount(dd), for_discount(df) {
  if (!(strike > 0.0) || !std::isfinite(strike)) {
    throw std::invalid_argument("strike must be positive");
  }
  if (!(maturity > 0.0) || !std::isfinite(maturity)) {
    throw std::invalid_argument("maturity must be positive");
  }
  if (!std::isfinite(dom_discount) || !std::isfinite(for_discount)) {
    throw std::invalid_argument("discount integrals must be finite");
  }
}

double BsContext::discounted_strike() const { return strike * std::exp(-dom_discount); }

double norm_cdf(double z) { return 0.5 * std::erfc(-z * std::numbers::sqrt2 * 0.5); }

double norm_pdf(double z) { return std::exp(-0.5 * z * z) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2); }

double put_price_xy(const BsContext& ctx, double x, double y) {
  if (y < 0.0 || std::isnan(y)) {
    throw std::domain_error("integrated variance must be non-negative");
  }
  const double kd = ctx.discounted_strike();
  const double fd = std::exp(x - ctx.for_discount);
  if (y == 0.0) return std::max(kd - fd, 0.0);
  const Moneyness m = moneyness(ctx, x, y);
  return kd * norm_cdf(m.d) - fd * norm_cdf(m.d - m.sqrt_y);
}

double call_price_xy(const BsContext& ctx, double x, double y) {
  if (y < 0.0 || std::isnan(y)) {
    throw std::domain_error("integrated variance must be non-negative");
  }
  const double kd = ctx.discounted_strike();
  const double fd = std::exp(x - ctx.for_discount);
  if (y == 0.0) return std::max(fd - kd, 0.0);
  const Moneyness m = moneyness(ctx, x, y);
  return fd * norm_cdf(m.sqrt_y - m.d) - kd * norm_cdf(-m.d);
}

double greek_xy(const BsContext& ctx, double x, double y, int i, int j) {
  require_positive_variance(y);
  const Moneyness m = moneyness(ctx, x, y);
  const double density_term = std::exp(m.log_k) * norm_pdf(m.d);
  if (j == 1 && i >= 0 && i <= 2) return dx_pow_dy(m, density_term, i);
  // d2P/dy2 = (d^2/dx^2 - d/dx) dP/dy / 2 by the heat-equation identity.
  if (j == 2 && i == 0) {
    return 0.5 * (dx_pow_dy(m, density_term, 2) - dx_pow_dy(m, density_term, 1));
  }
  if (j == 2 && i == 2) {
    return 0.5 * (dx_pow_dy(m, density_term, 4) - dx_pow_dy(m, density_term, 3));
  }
  throw std::domain_error("unsupported greek order (" + std::to_string(i) + ", " +
                          std::to_string(j) + ")");
}

ExpansionGreeks expansion_greeks(const BsContext& ctx, double x, double y) {
  require_positive_variance(y);
  const Moneyness m = moneyness(ctx, x, y);
  const double density_term = std::exp(m.log_k) * norm_pdf(m.d);
  double h[5];
  for (int i = 0; i < 5; ++i) h[i] = dx_pow_dy(m, density_term, i);
  return ExpansionGreeks{
      .dy = h[0],
      .dxdy = h[1],
      .dx2dy = h[2],
      .dy2 = 0.5 * (h[2] - h[1]),
      .dx2dy2 = 0.5 * (h[4] - h[3]),
  };
}

double implied_vol_put(const BsContext& ctx, double spot, double put_price) {
  if (!(spot > 0.0)) throw std::invalid_argument("spot must be positive");
  const double x = std::log(spot);
  const double kd = ctx.discounted_strike();
  const double fd = spot * std::exp(-ctx.for_discount);
  const double lower = std::max(kd - fd, 0.0);
  if (!(put_price > lower) || !(put_price < kd)) {
    throw std::domain_error("put price " + std::to_string(put_price) +
                            " outside no-arbitrage bounds (" + std::to_string(lower) + ", " +
                            std::to_string(kd) + ")");
  }
  // Invert on the out-of-the-money side so the target keeps full relative precision.
  const bool use_call = kd > fd;
  const double target = use_call ? put_price - kd + fd : put_price;
  const auto price_at = [&](double vol) {
    const double y = vol * vol * ctx.maturity;
    return use_call ? call_price_xy(ctx, x, y) : put_price_xy(ctx, x, y);
  };

  double lo = kMinVol;
  double hi = kMaxVol;
  double f_lo = price_at(lo) - target;
  double f_hi = price_at(hi) - target;
  if (f_lo > 0.0) {
    if (f_lo <= 1e-12) return lo;
    throw std::domain_error("implied vol below search bracket");
  }
  if (f_hi < 0.0) {
    if (f_hi >= -1e-12) return hi;
    throw std::domain_error("implied vol above search bracket");
  }

  // Safeguarded Newton on log price over the bracket [lo, hi]; price is increasing in vol.
  // Log space keeps the steps useful when far out-of-the-money prices vary over many
  // orders of magnitude.
  double vol = 0.5 * (lo + hi);
  const double atm_guess = std::sqrt(2.0 * std::abs(std::log(fd / kd)) / ctx.maturity);
  if (atm_guess > lo && atm_guess < hi) vol = std::max(atm_guess, 0.05);
  const double log_target = std::log(target);
  for (int iter = 0; iter < 200; ++iter) {
    const double p = price_at(vol);
    if (p == target) return vol;
    if (p < target) {
      lo = vol;
    } else {
      hi = vol;
    }
    const double y = vol * vol * ctx.maturity;
    // dPrice/dvol = dP/dy * 2 vol T (same for the call by parity)
    const double vega = greek_xy(ctx, x, y, 0, 1) * 2.0 * vol * ctx.maturity;
    double next = p > 0.0 && vega > 0.0 ? vol - (std::log(p) - log_target) * p / vega : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - vol) <= 1e-15 * std::max(1.0, vol) || hi - lo <= 4e-16 * hi) {
      return next;
    }
    vol = next;
  }
  return vol;
}

double implied_vol(double put_price, double spot, double strike, double maturity,
                   double r_dom_eq, double r_for_eq) {
  const BsContext ctx(strike, maturity, r_dom_eq * maturity, r_for_eq * maturity);
  return implied_vol_put(ctx, spot, put_price);
}

}  // namespace igasv
