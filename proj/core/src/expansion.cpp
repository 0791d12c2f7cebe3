#include "igasv/expansion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace igasv {

namespace {

using I = Integrand;

void check_kappas(const ParamSchedule& schedule) {
  for (const auto& p : schedule.params()) {
    if (p.kappa < kMinKappa) {
      throw std::domain_error("kappa " + std::to_string(p.kappa) + " too small for the expansion");
    }
  }
}

}  // namespace

double v0_at(const ParamSchedule& schedule, double v0, double t) {
  if (!(t >= 0.0) || t > schedule.horizon()) {
    throw std::domain_error("time " + std::to_string(t) + " outside schedule");
  }
  const auto& grid = schedule.grid();
  double v = v0;
  for (std::size_t i = 0; i < schedule.intervals(); ++i) {
    const auto& p = schedule.interval(i);
    const double t_end = std::min(t, grid.end(i));
    v = p.theta + (v - p.theta) * std::exp(-p.kappa * (t_end - grid.start(i)));
    if (t <= grid.end(i)) break;
  }
  return v;
}

ExpansionCoefficients::ExpansionCoefficients(double psi, double a0, double a1, double a2, double b0)
    : psi_(psi), a0_(a0), a1_(a1), a2_(a2), b0_(b0), b2_(0.5 * a1 * a1) {}

const std::array<OmegaKey, 6>& expansion_omega_keys() {
  static const std::array<OmegaKey, 6> keys{
      OmegaKey{{0, I::V0Squared}},
      OmegaKey{{2, I::LambdaSqV0Sq}, {-2, I::One}},
      OmegaKey{{1, I::RhoLambdaV0Sq}, {-1, I::V0}},
      OmegaKey{{1, I::RhoLambdaV0Sq}, {0, I::TwoRhoLambdaV0}, {-1, I::V0}},
      OmegaKey{{1, I::RhoLambdaV0Sq}, {1, I::RhoLambdaV0Sq}, {-2, I::One}},
      OmegaKey{{2, I::LambdaSqV0Sq}, {-1, I::V0}, {-1, I::V0}},
  };
  return keys;
}

OmegaState initial_expansion_state(double v0) {
  return OmegaState(expansion_omega_keys(), v0);
}

ExpansionCoefficients coefficients_from_state(const OmegaState& state) {
  const auto& k = expansion_omega_keys();
  return ExpansionCoefficients(state.value(k[0]), state.value(k[1]), 2.0 * state.value(k[2]),
                               2.0 * state.value(k[3]) + 2.0 * state.value(k[4]),
                               4.0 * state.value(k[5]));
}

ExpansionCoefficients coefficients(const ParamSchedule& schedule, double v0, double T) {
  if (!(T > 0.0)) throw std::domain_error("expansion horizon must be positive");
  const ParamSchedule cut = schedule.truncated(T);
  check_kappas(cut);
  OmegaState state = initial_expansion_state(v0);
  state.advance_through(cut);
  return coefficients_from_state(state);
}

double expansion_put(const ExpansionCoefficients& c, const BsContext& ctx, double x0) {
  const ExpansionGreeks g = expansion_greeks(ctx, x0, c.psi());
  return put_price_xy(ctx, x0, c.psi()) + c.a0() * g.dy + c.a1() * g.dxdy + c.a2() * g.dx2dy +
         c.b0() * g.dy2 + c.b2() * g.dx2dy2;
}

double expansion_call(const ExpansionCoefficients& c, const BsContext& ctx, double x0) {
  // put-call parity
  return expansion_put(c, ctx, x0) + std::exp(x0 - ctx.for_discount) - ctx.discounted_strike();
}

double price_put_expansion(const ModelState& state, const ParamSchedule& schedule,
                           const BsContext& ctx) {
  return expansion_put(coefficients(schedule, state.v0, ctx.maturity), ctx, state.log_spot());
}

double price_call_expansion(const ModelState& state, const ParamSchedule& schedule,
                            const BsContext& ctx) {
  return expansion_call(coefficients(schedule, state.v0, ctx.maturity), ctx, state.log_spot());
}

}  // namespace igasv
