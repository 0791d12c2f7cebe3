#pragma once

// Time grids, piecewise-constant parameter schedules and rate curves.
//
// Every object here is immutable once constructed. Integrals of step
// functions are evaluated exactly as sums over interval overlaps.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace igasv {

/// Ordered year-fraction boundaries 0 = T0 < T1 < ... < TN.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> boundaries);

  /// Grid {0, m1, m2, ...} built from strictly increasing positive maturities.
  static TimeGrid from_maturities(std::span<const double> maturities);

  std::size_t intervals() const noexcept { return boundaries_.size() - 1; }
  double start(std::size_t i) const { return boundaries_.at(i); }
  double end(std::size_t i) const { return boundaries_.at(i + 1); }
  double horizon() const noexcept { return boundaries_.back(); }
  std::span<const double> boundaries() const noexcept { return boundaries_; }

  /// Index of the interval [Ti, Ti+1) holding t; t == horizon maps to the last one.
  std::size_t interval_index(double t) const;

  /// Union of both boundary sets (duplicates within 1e-14 collapse).
  TimeGrid merged(const TimeGrid& other) const;

  bool operator==(const TimeGrid&) const = default;

 private:
  std::vector<double> boundaries_;
};

/// Integral of a step function with `values[i]` on interval i, over [t0, t1].
double integrate_step(const TimeGrid& grid, std::span<const double> values,
                      double t0, double t1);

/// IGa parameters on one interval of a schedule.
struct ModelParams {
  double kappa = 0.0;   // mean-reversion speed, 1/years
  double theta = 0.0;   // mean-reversion level, volatility units
  double lambda = 0.0;  // vol of vol, 1/sqrt(years)
  double rho = 0.0;     // spot/vol correlation

  bool operator==(const ModelParams&) const = default;
};

/// Throws std::invalid_argument unless kappa > 0, theta > 0, lambda >= 0, |rho| < 1.
void validate(const ModelParams& p);

/// Piecewise-constant (kappa, theta, lambda, rho) term structure.
class ParamSchedule {
 public:
  ParamSchedule(TimeGrid grid, std::vector<ModelParams> params);

  /// A schedule with the same parameters on [0, horizon].
  static ParamSchedule constant(const ModelParams& p, double horizon);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t intervals() const noexcept { return params_.size(); }
  const ModelParams& interval(std::size_t i) const { return params_.at(i); }
  std::span<const ModelParams> params() const noexcept { return params_; }
  const ModelParams& at(double t) const { return params_[grid_.interval_index(t)]; }
  double horizon() const noexcept { return grid_.horizon(); }

  /// Schedule restricted to [0, horizon]: cut inside an interval, or the last
  /// interval extended flat when horizon lies beyond the grid.
  ParamSchedule truncated(double horizon) const;

  /// Same parameters on a finer grid (every boundary of `grid()` must appear in `finer`).
  ParamSchedule refined(const TimeGrid& finer) const;

  bool operator==(const ParamSchedule&) const = default;

 private:
  TimeGrid grid_;
  std::vector<ModelParams> params_;
};

/// Piecewise-constant short rate.
class RateCurve {
 public:
  RateCurve(TimeGrid grid, std::vector<double> rates);

  static RateCurve flat(double rate, double horizon);

  /// Piecewise-constant forwards reproducing r_eq(T) * T at each maturity.
  static RateCurve from_equivalent_rates(std::span<const double> maturities,
                                         std::span<const double> equivalent_rates);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::span<const double> rates() const noexcept { return rates_; }

  double integral(double t0, double t1) const;
  /// (1/T) * integral over [0, T].
  double equivalent_rate(double maturity) const;

 private:
  TimeGrid grid_;
  std::vector<double> rates_;
};

/// Spot and initial volatility.
struct ModelState {
  ModelState(double spot, double v0);

  double spot;
  double v0;

  double log_spot() const;
};

/// "1M" -> 1/12, "3M" -> 0.25, "1Y" -> 1.0, "2W" -> 14/365; also accepts "ON".
double tenor_to_years(std::string_view tenor);

}  // namespace igasv
