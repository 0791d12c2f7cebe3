#include "igasv/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

namespace igasv {

namespace {

constexpr double kHuge = 1e300;

struct Context {
  const Objective* f;
  std::span<const Bound> bounds;
  std::vector<double> x;
  std::size_t evals = 0;
  std::vector<double> best_x;
  double best = std::numeric_limits<double>::infinity();
};

double trampoline(const gsl_vector* u, void* params) {
  auto& ctx = *static_cast<Context*>(params);
  for (std::size_t i = 0; i < ctx.x.size(); ++i) ctx.x[i] = to_bounded(gsl_vector_get(u, i), ctx.bounds[i]);
  ++ctx.evals;
  double v = kHuge;
  try {
    v = (*ctx.f)(ctx.x);
  } catch (const std::exception&) {
    v = kHuge;
  }
  if (!std::isfinite(v)) v = kHuge;
  if (v < ctx.best) {
    ctx.best = v;
    ctx.best_x = ctx.x;
  }
  return v;
}

struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};

}  // namespace

double to_unbounded(double x, const Bound& b) {
  const double width = b.hi - b.lo;
  // keep clear of the edges, where the logit is infinite
  const double z = std::clamp((x - b.lo) / width, 1e-9, 1.0 - 1e-9);
  return std::log(z / (1.0 - z));
}

double to_bounded(double u, const Bound& b) {
  return b.lo + (b.hi - b.lo) / (1.0 + std::exp(-u));
}

OptimizeResult minimize_bounded(const Objective& f, std::span<const double> x0,
                                std::span<const Bound> bounds, const OptimizeOptions& options) {
  const std::size_t n = x0.size();
  if (n == 0 || bounds.size() != n) throw std::invalid_argument("optimizer needs one bound per variable");
  for (const auto& b : bounds) {
    if (!(b.hi > b.lo)) throw std::invalid_argument("optimizer bound with hi <= lo");
  }
  gsl_set_error_handler_off();

  Context ctx{&f, bounds, std::vector<double>(n), 0, {}, std::numeric_limits<double>::infinity()};
  std::unique_ptr<gsl_vector, VectorDeleter> u(gsl_vector_alloc(n));
  std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(n));
  for (std::size_t i = 0; i < n; ++i) {
    gsl_vector_set(u.get(), i, to_unbounded(x0[i], bounds[i]));
    gsl_vector_set(step.get(), i, options.initial_step);
  }
  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> m(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
  gsl_multimin_function fn{&trampoline, n, &ctx};
  gsl_multimin_fminimizer_set(m.get(), &fn, u.get(), step.get());

  bool converged = false;
  while (ctx.evals < options.max_evals) {
    if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m.get()), options.size_tolerance) ==
        GSL_SUCCESS) {
      converged = true;
      break;
    }
  }

  OptimizeResult out;
  out.x = ctx.best_x.empty() ? std::vector<double>(x0.begin(), x0.end()) : ctx.best_x;
  out.value = ctx.best;
  out.evals = ctx.evals;
  out.converged = converged;
  return out;
}

}  // namespace igasv
