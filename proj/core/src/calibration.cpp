#include "igasv/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "igasv/expansion.hpp"

namespace igasv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// A slice counts as converged when a restart from its best point lowers the loss
// by less than this fraction, or by less than (0.1bp)^2 per quote.
constexpr double kRestartRelTolerance = 1e-2;
constexpr double kRestartAbsTolerancePerQuote = 1e-10;
constexpr std::size_t kMaxRestarts = 3;

double quote_vol(const Slice& s, const std::string& label, double fallback) {
  for (const auto& q : s.quotes) {
    if (q.label == label) return q.vol;
  }
  return fallback;
}

double atm_vol(const Slice& s) { return quote_vol(s, "ATM", s.quotes[s.quotes.size() / 2].vol); }

double skew_sign(const Slice& s) {
  const double call = quote_vol(s, "25C", s.quotes.back().vol);
  const double put = quote_vol(s, "25P", s.quotes.front().vol);
  return call >= put ? 1.0 : -1.0;
}

ModelParams params_from(std::span<const double> x) { return {x[0], x[1], x[2], x[3]}; }

std::vector<Bound> slice_bounds(const ParamBounds& b, bool with_v0) {
  std::vector<Bound> out;
  if (with_v0) out.push_back(b.v0);
  out.insert(out.end(), {b.kappa, b.theta, b.lambda, b.rho});
  return out;
}

std::vector<double> clamp_into(std::vector<double> x, std::span<const Bound> bounds) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], bounds[i].lo, bounds[i].hi);
  return x;
}

// Start points: the heuristic guess, the previous slice's fit when there is one,
// then seeded perturbations of the guess in logistic coordinates.
std::vector<std::vector<double>> start_points(const std::vector<double>& guess,
                                              const std::optional<std::vector<double>>& previous,
                                              std::span<const Bound> bounds, int count,
                                              std::uint64_t seed) {
  std::vector<std::vector<double>> starts{clamp_into(guess, bounds)};
  if (previous && static_cast<int>(starts.size()) < count) starts.push_back(clamp_into(*previous, bounds));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  while (static_cast<int>(starts.size()) < count) {
    std::vector<double> x(guess.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = to_bounded(to_unbounded(starts[0][i], bounds[i]) + normal(rng), bounds[i]);
    }
    starts.push_back(std::move(x));
  }
  return starts;
}

OptimizeResult multistart(const Objective& f, const std::vector<std::vector<double>>& starts,
                          std::span<const Bound> bounds, std::size_t budget, std::size_t quotes) {
  const double abs_tolerance = kRestartAbsTolerancePerQuote * static_cast<double>(quotes);
  const std::size_t restart_budget = std::max<std::size_t>(1, budget / 10);
  const std::size_t restart_total = std::min(budget, kMaxRestarts * restart_budget);
  OptimizeOptions opts;
  opts.max_evals = std::max<std::size_t>(1, (budget - restart_total) / starts.size());
  OptimizeResult best;
  best.value = std::numeric_limits<double>::infinity();
  std::size_t evals = 0;
  for (const auto& s : starts) {
    OptimizeResult r = minimize_bounded(f, s, bounds, opts);
    evals += r.evals;
    if (r.value < best.value) best = std::move(r);
  }
  // Restart test: a fresh small simplex at the best point must not find a
  // materially lower loss.
  OptimizeOptions restart;
  restart.max_evals = restart_budget;
  restart.initial_step = 0.05;
  bool stable = false;
  for (std::size_t i = 0; i < kMaxRestarts && !stable; ++i) {
    OptimizeResult r = minimize_bounded(f, best.x, bounds, restart);
    evals += r.evals;
    stable = r.converged ||
             best.value - r.value < kRestartRelTolerance * best.value + abs_tolerance;
    if (r.value < best.value) best = std::move(r);
  }
  best.converged = stable;
  best.evals = evals;
  return best;
}

}  // namespace

BsContext Slice::context(const Quote& q) const {
  return BsContext(q.strike, maturity, r_dom * maturity, r_for * maturity);
}

void VolSurface::validate() const {
  if (!(spot > 0.0) || !std::isfinite(spot)) throw std::invalid_argument("spot must be positive");
  if (slices.empty()) throw std::invalid_argument("surface has no slices");
  double prev_t = 0.0;
  for (std::size_t i = 0; i < slices.size(); ++i) {
    const auto& s = slices[i];
    const std::string where = "slice " + std::to_string(i) + " (" + s.tenor + ")";
    if (!(s.maturity > prev_t) || !std::isfinite(s.maturity)) {
      throw std::invalid_argument(where + ": maturities must be positive and strictly increasing");
    }
    prev_t = s.maturity;
    if (!std::isfinite(s.r_dom) || !std::isfinite(s.r_for)) {
      throw std::invalid_argument(where + ": rates must be finite");
    }
    if (s.quotes.empty()) throw std::invalid_argument(where + ": no quotes");
    double prev_k = 0.0;
    for (std::size_t j = 0; j < s.quotes.size(); ++j) {
      const auto& q = s.quotes[j];
      const std::string qwhere = where + " quote " + std::to_string(j) + " (" + q.label + ")";
      if (!(q.strike > prev_k) || !std::isfinite(q.strike)) {
        throw std::invalid_argument(qwhere + ": strikes must be positive and strictly increasing");
      }
      prev_k = q.strike;
      if (!(q.vol > 0.0 && q.vol < 2.0)) {
        throw std::invalid_argument(qwhere + ": vol must lie in (0, 2) as a decimal");
      }
    }
  }
}

std::vector<double> VolSurface::maturities() const {
  std::vector<double> out;
  for (const auto& s : slices) out.push_back(s.maturity);
  return out;
}

namespace {

std::vector<double> model_vols(const ExpansionCoefficients& c, const Slice& slice, double spot) {
  const double x0 = std::log(spot);
  std::vector<double> vols;
  vols.reserve(slice.quotes.size());
  for (const auto& q : slice.quotes) {
    const BsContext ctx = slice.context(q);
    double vol = kNaN;
    if (c.psi() > 0.0) {
      try {
        vol = implied_vol_put(ctx, spot, expansion_put(c, ctx, x0));
      } catch (const std::domain_error&) {
        vol = kNaN;
      }
    }
    vols.push_back(vol);
  }
  return vols;
}

}  // namespace

std::vector<double> slice_model_vols(const OmegaState& start, const ModelParams& params,
                                     const Slice& slice, double spot) {
  return model_vols(coefficients_from_state(omega_advance(start, params, slice.maturity)), slice, spot);
}

double slice_objective(const OmegaState& start, const ModelParams& params, const Slice& slice,
                       double spot) {
  const auto vols = slice_model_vols(start, params, slice, spot);
  double loss = 0.0;
  for (std::size_t j = 0; j < vols.size(); ++j) {
    if (std::isnan(vols[j])) {
      loss += kQuotePenalty;
    } else {
      const double e = vols[j] - slice.quotes[j].vol;
      loss += e * e;
    }
  }
  return loss;
}

ErrorStats error_stats(const std::vector<double>& errors) {
  std::vector<double> abs_bp;
  for (double e : errors) {
    if (std::isfinite(e)) abs_bp.push_back(std::abs(e) * 1e4);
  }
  ErrorStats s;
  if (abs_bp.empty()) return s;
  std::sort(abs_bp.begin(), abs_bp.end());
  const std::size_t n = abs_bp.size();
  s.median_abs_bp = n % 2 ? abs_bp[n / 2] : 0.5 * (abs_bp[n / 2 - 1] + abs_bp[n / 2]);
  double sum = 0.0;
  for (double v : abs_bp) sum += v;
  s.mean_abs_bp = sum / static_cast<double>(n);
  return s;
}

CalibrationResult evaluate_fit(const VolSurface& surface, double v0, const ParamSchedule& schedule) {
  surface.validate();
  const auto mats = surface.maturities();
  // Put every slice maturity on the parameter grid so the state can stop there.
  const ParamSchedule extended = schedule.truncated(std::max(schedule.horizon(), mats.back()));
  const ParamSchedule fine = extended.refined(extended.grid().merged(TimeGrid::from_maturities(mats)));

  CalibrationResult r{v0, schedule, {}, {}, {}, 0.0, true, false};
  OmegaState state = initial_expansion_state(v0);
  std::vector<double> errors;
  for (std::size_t k = 0; k < surface.slices.size(); ++k) {
    const Slice& s = surface.slices[k];
    state.advance_through(fine.truncated(s.maturity));
    const auto vols = model_vols(coefficients_from_state(state), s, surface.spot);
    SliceFit fit;
    for (std::size_t j = 0; j < vols.size(); ++j) {
      const auto& q = s.quotes[j];
      const double err = vols[j] - q.vol;
      r.quotes.push_back({k, s.tenor, q.label, s.maturity, q.strike, q.vol, vols[j], err});
      errors.push_back(err);
      fit.loss += std::isnan(err) ? kQuotePenalty : err * err;
    }
    fit.converged = true;
    r.total_loss += fit.loss;
    r.slices.push_back(fit);
  }
  r.stats = error_stats(errors);
  return r;
}

CalibrationResult calibrate(const VolSurface& surface, const CalibrationOptions& options) {
  surface.validate();
  if (options.multistarts < 1) throw std::invalid_argument("need at least one start point");
  const auto& slices = surface.slices;
  const double spot = surface.spot;
  const ParamBounds& pb = options.bounds;

  const double v0_guess = atm_vol(slices.front());

  double v0 = v0_guess;
  std::vector<ModelParams> fitted;
  std::vector<SliceFit> fits;
  std::optional<OmegaState> state;
  std::optional<std::vector<double>> previous;

  for (std::size_t k = 0; k < slices.size(); ++k) {
    const Slice& slice = slices[k];
    const bool first = k == 0;
    const auto bounds = slice_bounds(pb, first);
    // theta from the longest maturity fitted so far, so slice k depends on slices <= k only
    std::vector<double> guess{2.0, atm_vol(slice), 1.0, 0.3 * skew_sign(slice)};
    if (first) guess.insert(guess.begin(), v0_guess);

    Objective f;
    if (first) {
      f = [&](std::span<const double> x) {
        return slice_objective(initial_expansion_state(x[0]), params_from(x.subspan(1)), slice, spot);
      };
    } else {
      const OmegaState start = *state;
      f = [&slice, spot, start](std::span<const double> x) {
        return slice_objective(start, params_from(x), slice, spot);
      };
    }
    const auto starts = start_points(guess, previous, bounds, options.multistarts, options.seed + k);
    // the first slice also fits v0, so it gets a budget scaled by its extra dimension
    const std::size_t budget = first ? options.max_evals_per_slice * 5 / 4 : options.max_evals_per_slice;
    const OptimizeResult best = multistart(f, starts, bounds, budget, slice.quotes.size());

    std::span<const double> x(best.x);
    if (first) {
      v0 = x[0];
      x = x.subspan(1);
      state.emplace(initial_expansion_state(v0));
    }
    const ModelParams p = params_from(x);
    fitted.push_back(p);
    fits.push_back({best.value, best.evals, best.converged});
    state->advance(p, slice.maturity);
    previous = std::vector<double>(x.begin(), x.end());
  }

  ParamSchedule schedule(TimeGrid::from_maturities(surface.maturities()), fitted);
  CalibrationResult result = evaluate_fit(surface, v0, schedule);

  if (options.global_polish) {
    std::vector<Bound> bounds{pb.v0};
    std::vector<double> x0{v0};
    for (const auto& p : fitted) {
      bounds.insert(bounds.end(), {pb.kappa, pb.theta, pb.lambda, pb.rho});
      x0.insert(x0.end(), {p.kappa, p.theta, p.lambda, p.rho});
    }
    const Objective total = [&](std::span<const double> x) {
      OmegaState s = initial_expansion_state(x[0]);
      double loss = 0.0;
      for (std::size_t k = 0; k < slices.size(); ++k) {
        const ModelParams p = params_from(x.subspan(1 + 4 * k, 4));
        loss += slice_objective(s, p, slices[k], spot);
        s.advance(p, slices[k].maturity);
      }
      return loss;
    };
    OptimizeOptions opts;
    opts.max_evals = options.polish_evals;
    opts.initial_step = 0.1;
    const OptimizeResult polished = minimize_bounded(total, x0, bounds, opts);
    if (polished.value < result.total_loss) {
      std::vector<ModelParams> refit;
      for (std::size_t k = 0; k < slices.size(); ++k) {
        refit.push_back(params_from(std::span<const double>(polished.x).subspan(1 + 4 * k, 4)));
      }
      CalibrationResult candidate =
          evaluate_fit(surface, polished.x[0], ParamSchedule(schedule.grid(), refit));
      if (candidate.total_loss < result.total_loss) {
        fits = candidate.slices;
        result = std::move(candidate);
        result.polished = true;
      }
    }
  }

  // Slice fits keep their optimizer bookkeeping; losses come from the final parameters.
  for (std::size_t k = 0; k < fits.size() && !result.polished; ++k) {
    result.slices[k].evals = fits[k].evals;
    result.slices[k].converged = fits[k].converged;
  }
  result.converged = true;
  for (const auto& s : fits) result.converged = result.converged && s.converged;
  return result;
}

ErrorReport error_report(const CalibrationResult& result, const VolSurface& surface,
                         const std::optional<McConfig>& mc) {
  ErrorReport report;
  std::vector<double> cal_errors;
  for (const auto& q : result.quotes) {
    report.rows.push_back({q, std::nullopt, std::nullopt, std::nullopt});
    cal_errors.push_back(q.error);
  }
  report.calibration_stats = error_stats(cal_errors);
  if (!mc) return report;

  std::vector<BsContext> contracts;
  for (const auto& q : result.quotes) {
    const Slice& s = surface.slices.at(q.slice);
    contracts.push_back(BsContext(q.strike, s.maturity, s.r_dom * s.maturity, s.r_for * s.maturity));
  }
  const auto estimates =
      mc_price_puts(ModelState(surface.spot, result.v0), result.schedule, contracts, *mc);
  std::vector<double> exp_errors;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    auto& row = report.rows[i];
    try {
      const double vol = implied_vol_put(contracts[i], surface.spot, estimates[i].price);
      const double y = vol * vol * contracts[i].maturity;
      const double vega = greek_xy(contracts[i], std::log(surface.spot), y, 0, 1) * 2.0 * vol *
                          contracts[i].maturity;
      row.mc_vol = vol;
      row.mc_vol_std_error = estimates[i].std_error / vega;
      row.expansion_error = row.quote.model_vol - vol;
      exp_errors.push_back(*row.expansion_error);
    } catch (const std::domain_error&) {
      // MC price without an implied vol; the cell stays empty
    }
  }
  report.expansion_stats = error_stats(exp_errors);
  return report;
}

}  // namespace igasv
