#pragma once

// Box-bounded derivative-free minimisation: GSL's Nelder-Mead simplex run in
// logistic coordinates, x = lo + (hi - lo) / (1 + e^{-u}).

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace igasv {

struct Bound {
  double lo;
  double hi;
};

struct OptimizeOptions {
  std::size_t max_evals = 2000;
  double initial_step = 0.5;    // simplex size in logistic coordinates
  double size_tolerance = 1e-9;  // stop once the simplex is this small
};

struct OptimizeResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evals = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

double to_unbounded(double x, const Bound& b);
double to_bounded(double u, const Bound& b);

/// Minimises f over the box. Exceptions and non-finite values from f count as +huge.
OptimizeResult minimize_bounded(const Objective& f, std::span<const double> x0,
                                std::span<const Bound> bounds, const OptimizeOptions& options);

}  // namespace igasv
