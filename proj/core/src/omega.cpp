#include "igasv/omega.hpp"

#include <cmath>
#include <stdexcept>

namespace igasv {

double integrand_scale(Integrand l, const ModelParams& p) {
  switch (l) {
    case Integrand::V0Squared: return 1.0;
    case Integrand::LambdaSqV0Sq: return p.lambda * p.lambda;
    case Integrand::RhoLambdaV0Sq: return p.rho * p.lambda;
    case Integrand::TwoRhoLambdaV0: return 2.0 * p.rho * p.lambda;
    case Integrand::V0: return 1.0;
    case Integrand::TwoV0: return 2.0;
    case Integrand::One: return 1.0;
  }
  throw std::domain_error("unknown integrand");
}

int integrand_power(Integrand l) {
  switch (l) {
    case Integrand::V0Squared:
    case Integrand::LambdaSqV0Sq:
    case Integrand::RhoLambdaV0Sq: return 2;
    case Integrand::TwoRhoLambdaV0:
    case Integrand::V0:
    case Integrand::TwoV0: return 1;
    case Integrand::One: return 0;
  }
  throw std::domain_error("unknown integrand");
}

OmegaKey::OmegaKey(std::initializer_list<OmegaFactor> factors) : factors_(factors) {
  if (factors_.empty() || factors_.size() > kMaxOmegaDepth) {
    throw std::domain_error("omega key must hold 1 to 3 factors");
  }
}

OmegaKey::OmegaKey(std::vector<OmegaFactor> factors) : factors_(std::move(factors)) {
  if (factors_.empty() || factors_.size() > kMaxOmegaDepth) {
    throw std::domain_error("omega key must hold 1 to 3 factors");
  }
}

OmegaKey OmegaKey::prefix(std::size_t n) const {
  if (n == 0 || n > factors_.size()) throw std::domain_error("bad omega prefix length");
  return OmegaKey(std::vector<OmegaFactor>(factors_.begin(), factors_.begin() + static_cast<std::ptrdiff_t>(n)));
}

OmegaState::OmegaState(std::span<const OmegaKey> keys, double v0) : v0_(v0) {
  if (!(v0 > 0.0)) throw std::invalid_argument("initial volatility must be positive");
  for (const auto& key : keys) {
    for (std::size_t n = 1; n <= key.depth(); ++n) values_.emplace(key.prefix(n), 0.0);
  }
}

double OmegaState::value(const OmegaKey& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw std::out_of_range("omega key is not tracked by this state");
  return it->second;
}

// w_{0,Ti+1}^{(L..1)} = sum_{k=0}^{L} w_{0,Ti}^{(L..k+1)} e_{0,Ti}^{n_k+..+n_1}
//                        l_{k,i} .. l_{1,i} phi_{Ti,Ti+1}^{(n_k,0,p_k),..,(n_1,0,p_1)}
// with the empty prefix valued 1 and the k = 0 term the old value itself.
void OmegaState::advance(const ModelParams& params, double t_next) {
  validate(params);
  if (!(t_next > time_)) throw std::domain_error("omega state can only move forward in time");
  const IntervalData iv{time_, t_next, params.kappa, params.theta, v0_};
  PhiEvaluator phi(iv);

  std::map<OmegaKey, double> next;
  for (const auto& [key, old_value] : values_) {
    const auto f = key.factors();
    const std::size_t depth = f.size();
    double value = old_value;
    for (std::size_t k = 1; k <= depth; ++k) {
      // tail = innermost k factors, i.e. f[depth-k .. depth-1]
      const double outer = k == depth ? 1.0 : values_.at(key.prefix(depth - k));
      if (outer == 0.0) continue;
      int exponent = 0;
      double scale = 1.0;
      std::vector<PhiTriple> tail;
      tail.reserve(k);
      for (std::size_t j = depth - k; j < depth; ++j) {
        exponent += f[j].kappa_multiple;
        scale *= integrand_scale(f[j].integrand, params);
        tail.push_back({f[j].kappa_multiple, 0, integrand_power(f[j].integrand)});
      }
      if (scale == 0.0) continue;
      value += outer * std::exp(exponent * kappa_integral_) * scale * phi.evaluate(tail);
    }
    next.emplace(key, value);
  }
  values_ = std::move(next);

  const double dt = t_next - time_;
  v0_ = params.theta + (v0_ - params.theta) * std::exp(-params.kappa * dt);
  kappa_integral_ += params.kappa * dt;
  time_ = t_next;
}

void OmegaState::advance_through(const ParamSchedule& schedule) {
  const auto& grid = schedule.grid();
  for (std::size_t i = 0; i < schedule.intervals(); ++i) {
    if (grid.end(i) <= time_) continue;
    if (grid.start(i) < time_ - 1e-14) {
      throw std::domain_error("schedule interval straddles the omega state time");
    }
    advance(schedule.interval(i), grid.end(i));
  }
}

OmegaState omega_advance(const OmegaState& state, const ModelParams& params, double t_next) {
  OmegaState out = state;
  out.advance(params, t_next);
  return out;
}

}  // namespace igasv
