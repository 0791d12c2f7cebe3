#pragma once

// Reference computations for the tests. Nothing here calls the library's
// recursions: nested integrals are done by adaptive quadrature or as ODEs, and
// Black-Scholes derivatives by finite differences in 50-digit arithmetic.

#include <functional>
#include <vector>

#include "igasv/blackscholes.hpp"
#include "igasv/omega.hpp"
#include "igasv/phi.hpp"
#include "igasv/termstructure.hpp"

namespace igasv::oracle {

/// int_0^t kappa, summed interval by interval.
double kappa_integral(const ParamSchedule& s, double t);

/// v_{0,t} = e^{-K(t)} (v0 + int_0^t kappa theta e^{K(s)} ds), the inner integral by quadrature.
double proxy_vol_quadrature(const ParamSchedule& s, double v0, double t);

/// v_{0,t} from the per-interval exponential relaxation.
double proxy_vol(const ParamSchedule& s, double v0, double t);

/// One level of a nested time integral: e^{n K(u)} l(params(u), v_{0,u}).
struct Level {
  int n;
  std::function<double(const ModelParams&, double v)> l;
};

/// int_0^T g1(s1) int_{s1}^T g2(s2) ... ds, levels listed outermost first.
double nested_quadrature(const ParamSchedule& s, double v0, const std::vector<Level>& levels, double T);

/// Same integral as a forward ODE system: J1' = g1, Jk' = gk J_{k-1}, with v and K
/// integrated alongside.
double nested_ode(const ParamSchedule& s, double v0, const std::vector<Level>& levels, double T);

/// The oracle's own translation of an OmegaKey into levels.
std::vector<Level> levels_of(const OmegaKey& key);

struct Coefficients {
  double psi = 0.0;
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double b0 = 0.0;
};

/// The second-order coefficients written out as time integrals.
Coefficients coefficients_by_quadrature(const ParamSchedule& s, double v0, double T);
Coefficients coefficients_by_ode(const ParamSchedule& s, double v0, double T);

/// phi over [t, t_end] of one interval by nested quadrature.
double phi_quadrature(const IntervalData& iv, const std::vector<PhiTriple>& key, double t);

/// Derivatives of the put price by central differences of a 50-digit Black-Scholes
/// formula on a 3x3 stencil.
struct FdGreeks {
  double dx = 0.0;
  double dxx = 0.0;
  double dy = 0.0;
  double dxdy = 0.0;
  double dx2dy = 0.0;
  double dy2 = 0.0;
  double dx2dy2 = 0.0;
  double half_dxx_minus_dx = 0.0;  // formed before rounding; dx and dxx nearly cancel in the money
};
FdGreeks fd_greeks(const BsContext& ctx, double x, double y);

/// Put price in 50-digit arithmetic, rounded to double.
double put_price_reference(const BsContext& ctx, double x, double y);

}  // namespace igasv::oracle
