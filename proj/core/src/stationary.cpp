#include "igasv/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/inverse_gamma.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

namespace igasv {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::domain_error(std::string(what) + " must be positive");
}

void require_point(double x) {
  if (!(x > 0.0)) throw std::domain_error("density needs x > 0");
}

template <class F>
double integrate_half_line(F f) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-14);
}

// E[Y] / sqrt(E[Y^2]) for the generalized Chi law with shape k = beta theta.
double chi_mean_ratio(double k) {
  return 1.0 / (boost::math::tgamma_delta_ratio(k, 0.5) * std::sqrt(k));
}

}  // namespace

IgaStationary::IgaStationary(double beta, double theta) : beta_(beta), theta_(theta) {
  require_positive(beta, "beta");
  require_positive(theta, "theta");
}

double IgaStationary::mean() const { return theta_; }

double IgaStationary::variance() const {
  if (!(beta_ > 1.0)) throw std::domain_error("IGa stationary variance needs beta > 1");
  return theta_ * theta_ / (beta_ - 1.0);
}

double IgaStationary::quantile(double p) const {
  return boost::math::quantile(boost::math::inverse_gamma_distribution<double>(alpha(), scale()), p);
}

HestonVolStationary::HestonVolStationary(double beta, double theta) : beta_(beta), theta_(theta) {
  require_positive(beta, "beta");
  require_positive(theta, "theta");
}

double HestonVolStationary::b() const { return 1.0 / std::sqrt(2.0 * beta_); }

double HestonVolStationary::mean() const { return chi_mean_ratio(feller()) * std::sqrt(theta_); }

double HestonVolStationary::variance() const {
  const double m = mean();
  return theta_ - m * m;
}

double HestonVolStationary::quantile(double p) const {
  // Y^2 ~ Gamma(shape beta theta, scale 1 / beta)
  const boost::math::gamma_distribution<double> var_law(feller(), 1.0 / beta_);
  return std::sqrt(boost::math::quantile(var_law, p));
}

double iga_vol_density(const IgaStationary& law, double x) {
  require_point(x);
  const double a = law.alpha();
  const double s = law.scale();
  return std::exp(a * std::log(s) - std::lgamma(a) - (a + 1.0) * std::log(x) - s / x);
}

double heston_vol_density(const HestonVolStationary& law, double x) {
  require_point(x);
  const double nu = law.nu();
  const double b = law.b();
  const double z = x / b;
  return std::exp(-(0.5 * nu - 1.0) * std::log(2.0) - std::log(b) - std::lgamma(0.5 * nu) +
                  (nu - 1.0) * std::log(z) - 0.5 * z * z);
}

double iga_density_moment(const IgaStationary& law, int k) {
  return integrate_half_line([&](double x) { return x > 0.0 ? std::pow(x, k) * iga_vol_density(law, x) : 0.0; });
}

double heston_density_moment(const HestonVolStationary& law, int k) {
  return integrate_half_line([&](double x) {
    if (!(x > 0.0) || !std::isfinite(x)) return 0.0;
    return std::pow(x, k) * heston_vol_density(law, x);
  });
}

MatchedLaw match_moments(StationaryModel model, double mean, double std_dev) {
  require_positive(mean, "target mean");
  require_positive(std_dev, "target standard deviation");
  if (model == StationaryModel::IGa) {
    // theta = mean, theta^2 / (beta - 1) = std^2
    return {1.0 + mean * mean / (std_dev * std_dev), mean};
  }
  const double theta = mean * mean + std_dev * std_dev;
  const double target = mean / std::sqrt(theta);
  // The ratio rises monotonically from 0 to 1 as beta theta goes from 0 to infinity.
  const double lo = 1e-4;
  const double hi = 1e4;
  auto f = [&](double log_k) { return chi_mean_ratio(std::exp(log_k)) - target; };
  if (f(std::log(lo)) > 0.0 || f(std::log(hi)) < 0.0) {
    throw std::domain_error("Heston moment targets outside the attainable range");
  }
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, std::log(lo), std::log(hi), [](double x, double y) { return std::abs(x - y) <= 1e-13; }, iters);
  const double k = std::exp(0.5 * (a + b));
  return {k / theta, theta};
}

double feller_ratio(double kappa, double theta, double lambda) {
  if (!(lambda > 0.0)) throw std::domain_error("Feller ratio needs lambda > 0");
  return 2.0 * kappa * theta / (lambda * lambda);
}

std::vector<double> density_grid(const IgaStationary& iga, const HestonVolStationary& heston,
                                 int core_points, double lo, double hi, int tail_points,
                                 double tail_prob) {
  if (core_points < 2 || !(lo > 0.0) || !(hi > lo) || tail_points < 1) {
    throw std::domain_error("bad density grid specification");
  }
  std::vector<double> xs;
  const double left = std::min(iga.quantile(tail_prob), heston.quantile(tail_prob));
  const double right = std::max(iga.quantile(1.0 - tail_prob), heston.quantile(1.0 - tail_prob));
  if (left < lo) {
    const double l0 = std::log(left);
    const double l1 = std::log(lo);
    for (int i = 0; i < tail_points; ++i) xs.push_back(std::exp(l0 + (l1 - l0) * i / tail_points));
  }
  const double h = (hi - lo) / (core_points - 1);
  for (int i = 0; i < core_points; ++i) xs.push_back(lo + h * i);
  // Near zero the Heston law behaves like x^(nu - 1); refine the first cells geometrically.
  const double bridge = std::min(hi, lo + 50.0 * h);
  for (int i = 1; i < tail_points; ++i) {
    xs.push_back(lo * std::pow(bridge / lo, static_cast<double>(i) / tail_points));
  }
  if (right > hi) {
    const double l0 = std::log(hi);
    const double l1 = std::log(right);
    for (int i = 1; i <= tail_points; ++i) xs.push_back(std::exp(l0 + (l1 - l0) * i / tail_points));
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(), [](double a, double b) { return b - a < 1e-15; }), xs.end());
  return xs;
}

}  // namespace igasv
