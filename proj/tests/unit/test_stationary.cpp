#include "catch_amalgamated.hpp"

#include <cmath>

#include "igasv/stationary.hpp"
#include "reference_tables.hpp"

using namespace igasv;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("IGa stationary law", "[stationary]") {
  const IgaStationary law(16.0, 0.1);  // kappa 2, lambda 0.5
  CHECK(law.alpha() == 17.0);
  CHECK_THAT(law.scale(), WithinRel(1.6, 1e-15));
  CHECK_THAT(iga_density_moment(law, 0), WithinAbs(1.0, 1e-8));
  CHECK_THAT(iga_density_moment(law, 1), WithinRel(0.1, 1e-8));
  const double var = iga_density_moment(law, 2) - std::pow(iga_density_moment(law, 1), 2);
  CHECK_THAT(var, WithinRel(0.01 / 15.0, 1e-7));
  CHECK_THAT(law.variance(), WithinRel(0.01 / 15.0, 1e-14));
  CHECK_THROWS_AS(IgaStationary(0.5, 0.1).variance(), std::domain_error);
  CHECK_THROWS_AS(iga_vol_density(law, 0.0), std::domain_error);
  // log-space evaluation survives a large shape parameter
  const IgaStationary sharp(5000.0, 0.2);
  CHECK(std::isfinite(iga_vol_density(sharp, 0.2)));
  CHECK_THAT(iga_density_moment(sharp, 0), WithinAbs(1.0, 1e-8));
}

TEST_CASE("Heston stationary volatility law", "[stationary]") {
  for (double beta : {0.5, 3.0, 40.0}) {
    const HestonVolStationary law(beta, 0.1);
    CHECK_THAT(heston_density_moment(law, 0), WithinAbs(1.0, 1e-8));
    CHECK_THAT(heston_density_moment(law, 2), WithinRel(0.1, 1e-8));
    CHECK_THAT(heston_density_moment(law, 1), WithinRel(law.mean(), 1e-8));
    const double bt = beta * 0.1;
    CHECK_THAT(law.mean(), WithinRel(std::exp(std::lgamma(bt + 0.5) - std::lgamma(bt)) / std::sqrt(bt) * std::sqrt(0.1), 1e-13));
  }
  // nu < 1: integrable singularity at zero
  const HestonVolStationary pile(2.0, 0.1);
  CHECK(pile.nu() < 1.0);
  CHECK(heston_vol_density(pile, 1e-8) > heston_vol_density(pile, 1e-4));
  CHECK_THROWS_AS(heston_vol_density(pile, -1.0), std::domain_error);
}

TEST_CASE("moment matching", "[stationary]") {
  const MatchedLaw iga = match_moments(StationaryModel::IGa, 0.30, 0.24);
  CHECK_THAT(iga.theta, WithinRel(0.30, 1e-15));
  CHECK_THAT(iga.beta, WithinRel(1.0 + 0.09 / 0.0576, 1e-14));

  // Feller quantities frozen from an independent scipy root solve
  const double expected[] = {3.627922111393889, 0.9627954660877678, 0.4489501608660732};
  for (std::size_t i = 0; i < reference::kStationaryCases.size(); ++i) {
    const auto& c = reference::kStationaryCases[i];
    const MatchedLaw h = match_moments(StationaryModel::Heston, c.mean, c.std_dev);
    CHECK_THAT(h.theta, WithinRel(c.mean * c.mean + c.std_dev * c.std_dev, 1e-14));
    CHECK_THAT(h.feller(), WithinRel(expected[i], 1e-10));

    const HestonVolStationary hl(h.beta, h.theta);
    const double m1 = heston_density_moment(hl, 1);
    CHECK_THAT(m1, WithinAbs(c.mean, 1e-6));
    CHECK_THAT(std::sqrt(heston_density_moment(hl, 2) - m1 * m1), WithinAbs(c.std_dev, 1e-6));

    const MatchedLaw g = match_moments(StationaryModel::IGa, c.mean, c.std_dev);
    const IgaStationary gl(g.beta, g.theta);
    const double g1 = iga_density_moment(gl, 1);
    CHECK_THAT(g1, WithinAbs(c.mean, 1e-6));
    CHECK_THAT(std::sqrt(iga_density_moment(gl, 2) - g1 * g1), WithinAbs(c.std_dev, 1e-6));
  }
  CHECK_THAT(match_moments(StationaryModel::Heston, 0.30, 0.08).feller(), WithinAbs(3.63, 0.01));
  CHECK_THAT(match_moments(StationaryModel::Heston, 0.30, 0.16).feller(), WithinAbs(0.96, 0.01));

  CHECK_THROWS_AS(match_moments(StationaryModel::IGa, 0.0, 0.1), std::domain_error);
  CHECK_THROWS_AS(match_moments(StationaryModel::Heston, 0.3, -0.1), std::domain_error);
}

TEST_CASE("IGa right tail eventually dominates", "[stationary]") {
  for (const auto& c : reference::kStationaryCases) {
    const MatchedLaw g = match_moments(StationaryModel::IGa, c.mean, c.std_dev);
    const MatchedLaw h = match_moments(StationaryModel::Heston, c.mean, c.std_dev);
    const IgaStationary gl(g.beta, g.theta);
    const HestonVolStationary hl(h.beta, h.theta);
    // last crossing on a scan of (0, 3]
    double x_star = 0.0;
    for (double x = 0.001; x <= 3.0; x += 0.001) {
      if (iga_vol_density(gl, x) <= heston_vol_density(hl, x)) x_star = x;
    }
    REQUIRE(x_star < 3.0);
    for (double x = x_star + 0.001; x <= 3.0; x += 0.001) {
      CHECK(iga_vol_density(gl, x) > heston_vol_density(hl, x));
    }
  }
}

TEST_CASE("Feller ratio", "[stationary]") {
  const double r1 = feller_ratio(1.17, 0.0139, 0.23);
  CHECK(r1 >= 0.61);
  CHECK(r1 <= 0.62);
  CHECK(feller_ratio(1.0, 1.0, std::sqrt(2.0)) == Catch::Approx(1.0).epsilon(1e-15));
  CHECK_THAT(feller_ratio(1.16, 0.0128, 0.32), WithinAbs(0.29, 0.005));
  CHECK_THROWS_AS(feller_ratio(1.0, 0.1, 0.0), std::domain_error);
}

TEST_CASE("density grid", "[stationary]") {
  for (const auto& c : reference::kStationaryCases) {
    const MatchedLaw g = match_moments(StationaryModel::IGa, c.mean, c.std_dev);
    const MatchedLaw h = match_moments(StationaryModel::Heston, c.mean, c.std_dev);
    const IgaStationary gl(g.beta, g.theta);
    const HestonVolStationary hl(h.beta, h.theta);
    const auto grid = density_grid(gl, hl);
    REQUIRE(grid.size() >= 2000);
    CHECK(std::is_sorted(grid.begin(), grid.end()));
    CHECK(std::adjacent_find(grid.begin(), grid.end()) == grid.end());
    CHECK(std::find(grid.begin(), grid.end(), 1.2) != grid.end());
    double mi = 0.0, mh = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      const double w = 0.5 * (grid[i + 1] - grid[i]);
      mi += w * (iga_vol_density(gl, grid[i]) + iga_vol_density(gl, grid[i + 1]));
      mh += w * (heston_vol_density(hl, grid[i]) + heston_vol_density(hl, grid[i + 1]));
    }
    CHECK_THAT(mi, WithinAbs(1.0, 1e-4));
    CHECK_THAT(mh, WithinAbs(1.0, 1e-4));
  }
}
