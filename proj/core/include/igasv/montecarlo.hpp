#pragma once

// Monte Carlo oracle: the volatility is simulated with the pathwise adapted
// linearization of its strong solution and the spot is integrated out through
// the conditional Black-Scholes (mixing) representation
//
//   P = E[ P_BS(x0 + int rho V dB - 1/2 int rho^2 V^2 dt, int (1 - rho^2) V^2 dt) ].

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "igasv/blackscholes.hpp"
#include "igasv/termstructure.hpp"

namespace igasv {

struct McConfig {
  std::size_t paths = 200'000;
  double steps_per_year = 8.0 * 365.0;  // minimum density; every interval gets >= 1 step
  std::uint64_t seed = 20140617;
  bool antithetic = false;
  unsigned threads = 0;          // 0: hardware concurrency
  std::size_t block_size = 4096;  // samples per reduction block; fixes the summation order

  void validate() const;
};

struct McEstimate {
  double price = 0.0;
  double std_error = 0.0;
  std::size_t paths = 0;  // simulated paths (two per sample when antithetic)
};

/// One step of the volatility scheme:
///   delta = (kappa + lambda^2/2) dt - lambda dB
///   V'    = V e^{-delta} + kappa theta dt (1 - e^{-delta}) / delta
double step_vol(double v, double kappa, double theta, double lambda, double dt, double dB);

McEstimate mc_price_put(const ModelState& state, const ParamSchedule& schedule,
                        const BsContext& ctx, const McConfig& cfg);

/// Prices many puts from one set of paths; contracts may have different maturities.
std::vector<McEstimate> mc_price_puts(const ModelState& state, const ParamSchedule& schedule,
                                      std::span<const BsContext> contracts, const McConfig& cfg);

struct VolMoments {
  double mean = 0.0;
  double mean_std_error = 0.0;
  double variance = 0.0;
  double variance_std_error = 0.0;
  std::size_t paths = 0;
};

/// Sample mean and variance of V_T (antithetic flag ignored).
VolMoments mc_terminal_vol_moments(double v0, const ParamSchedule& schedule, double T,
                                   const McConfig& cfg);

/// Time grid used by the simulation up to `horizon`: every boundary of `schedule`
/// and every entry of `marks`, each interval split uniformly at steps_per_year.
std::vector<double> simulation_times(const ParamSchedule& schedule, std::span<const double> marks,
                                     double horizon, double steps_per_year);

}  // namespace igasv
