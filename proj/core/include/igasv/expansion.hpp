#pragma once

// Second-order vol-of-vol expansion of the put price under piecewise-constant
// IGa parameters:
//
//   P = P_BS(x0, psi) + a0 P_y + a1 P_xy + a2 P_xxy + b0 P_yy + b2 P_xxyy,
//
// every greek taken at (x0, psi).

#include <array>
#include <vector>

#include "igasv/blackscholes.hpp"
#include "igasv/omega.hpp"
#include "igasv/termstructure.hpp"

namespace igasv {

/// Kappa values below this are rejected: the per-interval closed forms divide by kappa.
inline constexpr double kMinKappa = 1e-8;

/// Deterministic proxy path v_{0,t}: exponential relaxation towards theta_i on each interval.
double v0_at(const ParamSchedule& schedule, double v0, double t);

class ExpansionCoefficients {
 public:
  ExpansionCoefficients() = default;
  /// b2 is always a1^2 / 2.
  ExpansionCoefficients(double psi, double a0, double a1, double a2, double b0);

  double psi() const noexcept { return psi_; }
  double a0() const noexcept { return a0_; }
  double a1() const noexcept { return a1_; }
  double a2() const noexcept { return a2_; }
  double b0() const noexcept { return b0_; }
  double b2() const noexcept { return b2_; }

 private:
  double psi_ = 0.0;
  double a0_ = 0.0;
  double a1_ = 0.0;
  double a2_ = 0.0;
  double b0_ = 0.0;
  double b2_ = 0.0;
};

/// The five nested integrals behind (psi, a0, a1, a2 first term, a2 second term, b0).
const std::array<OmegaKey, 6>& expansion_omega_keys();

/// An ω state at t = 0 tracking every key the coefficients need.
OmegaState initial_expansion_state(double v0);

/// Reads the sextuple off a state advanced to the horizon.
ExpansionCoefficients coefficients_from_state(const OmegaState& state);

/// Coefficients at horizon T; the schedule is truncated at T or extended flat past its end.
ExpansionCoefficients coefficients(const ParamSchedule& schedule, double v0, double T);

/// Expansion price from precomputed coefficients.
double expansion_put(const ExpansionCoefficients& c, const BsContext& ctx, double x0);
double expansion_call(const ExpansionCoefficients& c, const BsContext& ctx, double x0);

double price_put_expansion(const ModelState& state, const ParamSchedule& schedule,
                           const BsContext& ctx);
double price_call_expansion(const ModelState& state, const ParamSchedule& schedule,
                            const BsContext& ctx);

}  // namespace igasv
