#pragma once

// Black-Scholes put kernel in (log-spot x, integrated variance y) coordinates.
//
//   P(x, y) = K e^{-Dd} N(d) - e^x e^{-Df} N(d - sqrt(y)),
//   d = log(K e^{-Dd} / (e^x e^{-Df})) / sqrt(y) + sqrt(y) / 2,
//
// with Dd, Df the integrated domestic and foreign short rates.

namespace igasv {

struct BsContext {
  BsContext(double strike, double maturity, double dom_discount, double for_discount);

  double strike;        // K
  double maturity;      // T, years
  double dom_discount;  // integral of r_d over [0, T]
  double for_discount;  // integral of r_f over [0, T]

  /// Discounted strike K e^{-Dd}.
  double discounted_strike() const;
};

double put_price_xy(const BsContext& ctx, double x, double y);
double call_price_xy(const BsContext& ctx, double x, double y);

/// d^{i+j} P / dx^i dy^j for (i, j) in {(0,1), (1,1), (2,1), (0,2), (2,2)}.
double greek_xy(const BsContext& ctx, double x, double y, int i, int j);

/// The five greeks the second-order expansion needs, sharing one density evaluation.
struct ExpansionGreeks {
  double dy = 0.0;
  double dxdy = 0.0;
  double dx2dy = 0.0;
  double dy2 = 0.0;
  double dx2dy2 = 0.0;
};

ExpansionGreeks expansion_greeks(const BsContext& ctx, double x, double y);

/// Annualised volatility reproducing a put price. Throws std::domain_error when the
/// price is not strictly inside (max(K e^{-Dd} - S e^{-Df}, 0), K e^{-Dd}).
double implied_vol_put(const BsContext& ctx, double spot, double put_price);

/// Same, quoted with equivalent constant rates.
double implied_vol(double put_price, double spot, double strike, double maturity,
                   double r_dom_eq, double r_for_eq);

/// Standard normal CDF via erfc.
double norm_cdf(double z);
double norm_pdf(double z);

}  // namespace igasv
