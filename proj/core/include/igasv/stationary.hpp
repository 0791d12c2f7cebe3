#pragma once

// Stationary volatility laws, with beta = 2 kappa / lambda^2:
//   IGa:    V ~ InverseGamma(alpha = 1 + beta, scale = beta theta)
//   Heston: sqrt(variance) ~ generalized Chi(a = 0, b = 1/sqrt(2 beta), nu = 2 beta theta)
// Only (beta, theta) is identified by the stationary law.

#include <vector>

namespace igasv {

class IgaStationary {
 public:
  IgaStationary(double beta, double theta);

  double beta() const noexcept { return beta_; }
  double theta() const noexcept { return theta_; }
  double alpha() const noexcept { return 1.0 + beta_; }
  double scale() const noexcept { return beta_ * theta_; }

  /// theta; needs beta > 0.
  double mean() const;
  /// theta^2 / (beta - 1); needs beta > 1.
  double variance() const;
  double quantile(double p) const;

 private:
  double beta_;
  double theta_;
};

class HestonVolStationary {
 public:
  HestonVolStationary(double beta, double theta);

  double beta() const noexcept { return beta_; }
  double theta() const noexcept { return theta_; }
  double b() const;
  double nu() const noexcept { return 2.0 * beta_ * theta_; }
  /// The Feller quantity 2 kappa theta / lambda^2 = beta theta.
  double feller() const noexcept { return beta_ * theta_; }

  /// Gamma(beta theta + 1/2) / (Gamma(beta theta) sqrt(beta theta)) sqrt(theta).
  double mean() const;
  /// E[Y^2] = theta.
  double second_moment() const noexcept { return theta_; }
  double variance() const;
  double quantile(double p) const;

 private:
  double beta_;
  double theta_;
};

double iga_vol_density(const IgaStationary& law, double x);
double heston_vol_density(const HestonVolStationary& law, double x);

/// int_0^inf x^k density(x) dx by double-exponential quadrature.
double iga_density_moment(const IgaStationary& law, int k);
double heston_density_moment(const HestonVolStationary& law, int k);

enum class StationaryModel { IGa, Heston };

struct MatchedLaw {
  double beta = 0.0;
  double theta = 0.0;
  /// beta * theta, i.e. 2 kappa theta / lambda^2.
  double feller() const noexcept { return beta * theta; }
};

/// (beta, theta) reproducing a target stationary mean and standard deviation.
MatchedLaw match_moments(StationaryModel model, double mean, double std_dev);

/// 2 kappa theta / lambda^2.
double feller_ratio(double kappa, double theta, double lambda);

/// Evaluation grid for density curves: `core_points` linear points on [lo, hi],
/// refined geometrically over its first 50 cells and extended by `tail_points`
/// log-spaced points on each side out to the `tail_prob`
/// quantiles of both laws wherever those fall outside [lo, hi].
std::vector<double> density_grid(const IgaStationary& iga, const HestonVolStationary& heston,
                                 int core_points = 2000, double lo = 1e-4, double hi = 1.2,
                                 int tail_points = 400, double tail_prob = 1e-8);

}  // namespace igasv
