#pragma once

// Bootstrap calibration of V0 and a piecewise-constant (kappa, theta, lambda, rho)
// schedule to an implied-volatility surface, slice by slice.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "igasv/blackscholes.hpp"
#include "igasv/montecarlo.hpp"
#include "igasv/omega.hpp"
#include "igasv/optimizer.hpp"
#include "igasv/termstructure.hpp"

namespace igasv {

struct Quote {
  std::string label;  // 10P, 25P, ATM, 25C, 10C
  double strike = 0.0;
  double vol = 0.0;   // decimal
};

struct Slice {
  std::string tenor;
  double maturity = 0.0;  // years
  double r_dom = 0.0;     // equivalent constant rates, decimal per year
  double r_for = 0.0;
  std::vector<Quote> quotes;

  BsContext context(const Quote& q) const;
};

struct VolSurface {
  double spot = 0.0;
  std::string day_count = "ACT/simple";
  std::vector<Slice> slices;

  /// Throws std::invalid_argument naming the offending slice or quote.
  void validate() const;
  std::vector<double> maturities() const;
};

/// Box the calibrated parameters live in.
struct ParamBounds {
  Bound kappa{0.05, 20.0};
  Bound theta{0.001, 1.0};
  Bound lambda{0.01, 5.0};
  Bound rho{-0.99, 0.99};
  Bound v0{0.001, 1.0};
};

inline constexpr double kQuotePenalty = 1e4;

/// Sum over the slice of (model implied vol - market vol)^2, with the model price from
/// the expansion; `start` holds the ω state at the previous slice maturity. Quotes whose
/// model price has no implied vol add kQuotePenalty each.
double slice_objective(const OmegaState& start, const ModelParams& params, const Slice& slice,
                       double spot);

/// Model implied vols of a slice (NaN where the expansion price has none).
std::vector<double> slice_model_vols(const OmegaState& start, const ModelParams& params,
                                     const Slice& slice, double spot);

struct CalibrationOptions {
  std::size_t max_evals_per_slice = 2000;  // the first slice gets 5/4 of this
  int multistarts = 3;
  std::uint64_t seed = 7;
  bool global_polish = false;
  std::size_t polish_evals = 6000;
  ParamBounds bounds{};
};

struct QuoteResult {
  std::size_t slice = 0;
  std::string tenor;
  std::string label;
  double maturity = 0.0;
  double strike = 0.0;
  double market_vol = 0.0;
  double model_vol = 0.0;  // NaN when no implied vol exists
  double error = 0.0;      // model - market, decimal vol
};

struct SliceFit {
  double loss = 0.0;
  std::size_t evals = 0;
  bool converged = false;
};

struct ErrorStats {
  double median_abs_bp = 0.0;
  double mean_abs_bp = 0.0;
};

ErrorStats error_stats(const std::vector<double>& errors);

struct CalibrationResult {
  double v0 = 0.0;
  ParamSchedule schedule;
  std::vector<QuoteResult> quotes;
  std::vector<SliceFit> slices;
  ErrorStats stats;
  double total_loss = 0.0;
  bool converged = false;
  bool polished = false;
};

/// Per-quote errors of a given (v0, schedule) against a surface.
CalibrationResult evaluate_fit(const VolSurface& surface, double v0, const ParamSchedule& schedule);

CalibrationResult calibrate(const VolSurface& surface, const CalibrationOptions& options = {});

struct ReportRow {
  QuoteResult quote;
  std::optional<double> mc_vol;
  std::optional<double> mc_vol_std_error;  // delta-method, from the price standard error
  std::optional<double> expansion_error;   // expansion vol - MC vol
};

struct ErrorReport {
  std::vector<ReportRow> rows;
  ErrorStats calibration_stats;
  std::optional<ErrorStats> expansion_stats;
};

/// Calibration errors of `result`, plus expansion-vs-MC errors when `mc` is given.
ErrorReport error_report(const CalibrationResult& result, const VolSurface& surface,
                         const std::optional<McConfig>& mc = std::nullopt);

}  // namespace igasv
