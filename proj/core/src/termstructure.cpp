#include "igasv/termstructure.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <stdexcept>
#include <string>

namespace igasv {

namespace {

constexpr double kBoundaryTol = 1e-14;

void check_range(const TimeGrid& grid, double t0, double t1) {
  if (!(t0 >= 0.0) || !(t1 >= t0) || t1 > grid.horizon() * (1.0 + kBoundaryTol)) {
    throw std::domain_error("integration range [" + std::to_string(t0) + ", " +
                            std::to_string(t1) + "] outside grid [0, " +
                            std::to_string(grid.horizon()) + "]");
  }
}

}  // namespace

TimeGrid::TimeGrid(std::vector<double> boundaries) : boundaries_(std::move(boundaries)) {
  if (boundaries_.size() < 2) {
    throw std::invalid_argument("time grid needs at least one interval");
  }
  if (boundaries_.front() != 0.0) {
    throw std::invalid_argument("time grid must start at 0");
  }
  for (std::size_t i = 1; i < boundaries_.size(); ++i) {
    if (!(boundaries_[i] > boundaries_[i - 1]) || !std::isfinite(boundaries_[i])) {
      throw std::invalid_argument("time grid must be strictly increasing");
    }
  }
}

TimeGrid TimeGrid::from_maturities(std::span<const double> maturities) {
  std::vector<double> b;
  b.reserve(maturities.size() + 1);
  b.push_back(0.0);
  for (double m : maturities) {
    if (!(m > b.back())) {
      throw std::domain_error("maturities must be positive and strictly increasing");
    }
    b.push_back(m);
  }
  return TimeGrid(std::move(b));
}

std::size_t TimeGrid::interval_index(double t) const {
  if (!(t >= 0.0) || t > horizon() * (1.0 + kBoundaryTol)) {
    throw std::domain_error("time " + std::to_string(t) + " outside grid");
  }
  auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), t);
  auto idx = static_cast<std::size_t>(std::distance(boundaries_.begin(), it));
  return std::min(idx == 0 ? 0 : idx - 1, intervals() - 1);
}

TimeGrid TimeGrid::merged(const TimeGrid& other) const {
  std::vector<double> all;
  all.reserve(boundaries_.size() + other.boundaries_.size());
  std::merge(boundaries_.begin(), boundaries_.end(), other.boundaries_.begin(),
             other.boundaries_.end(), std::back_inserter(all));
  std::vector<double> out;
  out.reserve(all.size());
  for (double t : all) {
    if (out.empty() || t - out.back() > kBoundaryTol * std::max(1.0, t)) {
      out.push_back(t);
    }
  }
  return TimeGrid(std::move(out));
}

double integrate_step(const TimeGrid& grid, std::span<const double> values, double t0,
                      double t1) {
  if (values.size() != grid.intervals()) {
    throw std::invalid_argument("step function needs one value per interval");
  }
  check_range(grid, t0, t1);
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.intervals(); ++i) {
    const double lo = std::max(t0, grid.start(i));
    const double hi = std::min(t1, grid.end(i));
    if (hi > lo) sum += values[i] * (hi - lo);
  }
  return sum;
}

void validate(const ModelParams& p) {
  if (!(p.kappa > 0.0) || !std::isfinite(p.kappa)) {
    throw std::invalid_argument("kappa must be positive");
  }
  if (!(p.theta > 0.0) || !std::isfinite(p.theta)) {
    throw std::invalid_argument("theta must be positive");
  }
  if (!(p.lambda >= 0.0) || !std::isfinite(p.lambda)) {
    throw std::invalid_argument("lambda must be non-negative");
  }
  if (!(std::abs(p.rho) < 1.0)) {
    throw std::invalid_argument("rho must lie in (-1, 1)");
  }
}

ParamSchedule::ParamSchedule(TimeGrid grid, std::vector<ModelParams> params)
    : grid_(std::move(grid)), params_(std::move(params)) {
  if (params_.size() != grid_.intervals()) {
    throw std::invalid_argument("schedule needs one parameter set per interval");
  }
  for (const auto& p : params_) validate(p);
}

ParamSchedule ParamSchedule::constant(const ModelParams& p, double horizon) {
  return ParamSchedule(TimeGrid({0.0, horizon}), {p});
}

ParamSchedule ParamSchedule::truncated(double horizon) const {
  if (!(horizon > 0.0)) throw std::domain_error("horizon must be positive");
  const auto b = grid_.boundaries();
  if (horizon >= grid_.horizon()) {
    std::vector<double> nb(b.begin(), b.end());
    nb.back() = horizon;
    return ParamSchedule(TimeGrid(std::move(nb)), params_);
  }
  std::vector<double> nb{0.0};
  std::vector<ModelParams> np;
  for (std::size_t i = 0; i < intervals(); ++i) {
    np.push_back(params_[i]);
    if (grid_.end(i) >= horizon * (1.0 - kBoundaryTol)) {
      nb.push_back(horizon);
      break;
    }
    nb.push_back(grid_.end(i));
  }
  return ParamSchedule(TimeGrid(std::move(nb)), std::move(np));
}

ParamSchedule ParamSchedule::refined(const TimeGrid& finer) const {
  if (std::abs(finer.horizon() - grid_.horizon()) > kBoundaryTol * grid_.horizon()) {
    throw std::invalid_argument("refined grid must share the horizon");
  }
  const auto fb = finer.boundaries();
  for (double b : grid_.boundaries()) {
    const bool present = std::any_of(fb.begin(), fb.end(), [b](double t) {
      return std::abs(t - b) <= kBoundaryTol * std::max(1.0, b);
    });
    if (!present) throw std::invalid_argument("refined grid must contain every boundary of the schedule");
  }
  std::vector<ModelParams> np;
  np.reserve(finer.intervals());
  for (std::size_t i = 0; i < finer.intervals(); ++i) {
    const double mid = 0.5 * (finer.start(i) + finer.end(i));
    np.push_back(at(mid));
  }
  return ParamSchedule(finer, std::move(np));
}

RateCurve::RateCurve(TimeGrid grid, std::vector<double> rates)
    : grid_(std::move(grid)), rates_(std::move(rates)) {
  if (rates_.size() != grid_.intervals()) {
    throw std::invalid_argument("rate curve needs one rate per interval");
  }
  for (double r : rates_) {
    if (!std::isfinite(r)) throw std::invalid_argument("rates must be finite");
  }
}

RateCurve RateCurve::flat(double rate, double horizon) {
  return RateCurve(TimeGrid({0.0, horizon}), {rate});
}

RateCurve RateCurve::from_equivalent_rates(std::span<const double> maturities,
                                           std::span<const double> equivalent_rates) {
  if (maturities.size() != equivalent_rates.size() || maturities.empty()) {
    throw std::domain_error("maturities and equivalent rates must be non-empty and aligned");
  }
  TimeGrid grid = TimeGrid::from_maturities(maturities);
  std::vector<double> fwd(maturities.size());
  double prev_t = 0.0;
  double prev_integral = 0.0;
  for (std::size_t i = 0; i < maturities.size(); ++i) {
    const double integral = equivalent_rates[i] * maturities[i];
    fwd[i] = (integral - prev_integral) / (maturities[i] - prev_t);
    prev_t = maturities[i];
    prev_integral = integral;
  }
  return RateCurve(std::move(grid), std::move(fwd));
}

double RateCurve::integral(double t0, double t1) const {
  return integrate_step(grid_, rates_, t0, t1);
}

double RateCurve::equivalent_rate(double maturity) const {
  if (!(maturity > 0.0)) throw std::domain_error("maturity must be positive");
  return integral(0.0, maturity) / maturity;
}

ModelState::ModelState(double s, double v) : spot(s), v0(v) {
  if (!(spot > 0.0) || !std::isfinite(spot)) {
    throw std::invalid_argument("spot must be positive");
  }
  if (!(v0 > 0.0) || !std::isfinite(v0)) {
    throw std::invalid_argument("initial volatility must be positive");
  }
}

double ModelState::log_spot() const { return std::log(spot); }

double tenor_to_years(std::string_view tenor) {
  if (tenor == "ON") return 1.0 / 365.0;
  if (tenor.size() < 2) throw std::invalid_argument("bad tenor '" + std::string(tenor) + "'");
  int count = 0;
  const auto* first = tenor.data();
  const auto* last = tenor.data() + tenor.size() - 1;
  auto [ptr, ec] = std::from_chars(first, last, count);
  if (ec != std::errc() || ptr != last || count <= 0) {
    throw std::invalid_argument("bad tenor '" + std::string(tenor) + "'");
  }
  switch (tenor.back()) {
    case 'D': return count / 365.0;
    case 'W': return 7.0 * count / 365.0;
    case 'M': return count / 12.0;
    case 'Y': return static_cast<double>(count);
    default: throw std::invalid_argument("bad tenor unit in '" + std::string(tenor) + "'");
  }
}

}  // namespace igasv
