#pragma once

// Nested time-integral operators of the expansion coefficients,
//
//   w_{t,T}^{(k,l)}         = int_t^T e^{int_0^u k} l_u du
//   w_{t,T}^{(kn,ln),...}   = w_{t,T}^{(kn, ln * w_{.,T}^{(kn-1,ln-1),...})}
//
// accumulated exactly across the intervals of a piecewise-constant schedule.
// Factors are listed outermost first.

#include <cstddef>
#include <initializer_list>
#include <map>
#include <span>
#include <vector>

#include "igasv/phi.hpp"
#include "igasv/termstructure.hpp"

namespace igasv {

/// Integrands appearing in the second-order coefficients; each is a per-interval
/// constant times a power of the proxy volatility v0.
enum class Integrand {
  V0Squared,       // v0^2
  LambdaSqV0Sq,    // lambda^2 v0^2
  RhoLambdaV0Sq,   // rho lambda v0^2
  TwoRhoLambdaV0,  // 2 rho lambda v0
  V0,              // v0
  TwoV0,           // 2 v0
  One,             // 1
};

double integrand_scale(Integrand l, const ModelParams& p);
int integrand_power(Integrand l);

struct OmegaFactor {
  int kappa_multiple = 0;
  Integrand integrand = Integrand::One;

  auto operator<=>(const OmegaFactor&) const = default;
};

class OmegaKey {
 public:
  OmegaKey(std::initializer_list<OmegaFactor> factors);
  explicit OmegaKey(std::vector<OmegaFactor> factors);

  std::span<const OmegaFactor> factors() const noexcept { return factors_; }
  std::size_t depth() const noexcept { return factors_.size(); }
  /// The first `n` (outermost) factors.
  OmegaKey prefix(std::size_t n) const;

  auto operator<=>(const OmegaKey&) const = default;

 private:
  std::vector<OmegaFactor> factors_;
};

inline constexpr std::size_t kMaxOmegaDepth = 3;

/// Values w_{0,Ti}^{key} for a set of keys (and all their prefixes) at the current
/// grid time Ti, together with v0_{Ti} and int_0^{Ti} kappa.
class OmegaState {
 public:
  OmegaState(std::span<const OmegaKey> keys, double v0);

  double time() const noexcept { return time_; }
  double v0() const noexcept { return v0_; }
  double kappa_integral() const noexcept { return kappa_integral_; }

  double value(const OmegaKey& key) const;

  /// Moves the state from time() to t_next with parameters constant on the step.
  void advance(const ModelParams& params, double t_next);

  /// Advances across every interval of `schedule` that starts at or after time().
  void advance_through(const ParamSchedule& schedule);

 private:
  std::map<OmegaKey, double> values_;
  double time_ = 0.0;
  double v0_ = 0.0;
  double kappa_integral_ = 0.0;
};

/// Functional form of OmegaState::advance.
OmegaState omega_advance(const OmegaState& state, const ModelParams& params, double t_next);

}  // namespace igasv
