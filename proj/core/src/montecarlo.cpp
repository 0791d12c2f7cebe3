#include "igasv/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>

#include <boost/random/normal_distribution.hpp>

namespace igasv {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Independent stream per sample index, so results never depend on scheduling.
std::mt19937_64 sample_engine(std::uint64_t seed, std::uint64_t sample) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(sample + 0x632be59bd9b4e019ull)));
}

struct Kahan {
  double sum = 0.0;
  double c = 0.0;

  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

struct Step {
  double dt;
  double sqrt_dt;
  ModelParams p;
};

struct Plan {
  std::vector<Step> steps;
  std::vector<std::size_t> record_after;  // step count after which mark j is reached
};

Plan make_plan(const ParamSchedule& schedule, std::span<const double> marks, double horizon,
               double steps_per_year) {
  const ParamSchedule sched = schedule.truncated(horizon);
  const auto times = simulation_times(sched, marks, horizon, steps_per_year);
  Plan plan;
  plan.steps.reserve(times.size() - 1);
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double dt = times[k + 1] - times[k];
    plan.steps.push_back({dt, std::sqrt(dt), sched.at(0.5 * (times[k] + times[k + 1]))});
  }
  for (double m : marks) {
    auto it = std::lower_bound(times.begin(), times.end(), m - 1e-13);
    if (it == times.end() || std::abs(*it - m) > 1e-12) {
      throw std::logic_error("maturity missing from simulation grid");
    }
    plan.record_after.push_back(static_cast<std::size_t>(it - times.begin()));
  }
  return plan;
}

// Runs fn(first, last) over blocks [first, last) of samples on cfg.threads workers;
// fn must write its results into per-block slots only.
void for_each_block(std::size_t samples, const McConfig& cfg,
                    const std::function<void(std::size_t block, std::size_t first, std::size_t last)>& fn) {
  const std::size_t blocks = (samples + cfg.block_size - 1) / cfg.block_size;
  unsigned workers = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, blocks));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t b = next++; b < blocks; b = next++) {
      const std::size_t first = b * cfg.block_size;
      fn(b, first, std::min(samples, first + cfg.block_size));
    }
  };
  if (workers <= 1) {
    work();
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
}

// Accumulated (log-spot shift, conditional variance) at each mark for one path.
void simulate_path(const Plan& plan, double v0, std::uint64_t seed, std::uint64_t sample, double sign,
                   std::vector<double>& shift, std::vector<double>& var) {
  auto engine = sample_engine(seed, sample);
  boost::random::normal_distribution<double> normal;
  double v = v0;
  double x = 0.0;
  double y = 0.0;
  std::size_t mark = 0;
  const std::size_t n_marks = plan.record_after.size();
  while (mark < n_marks && plan.record_after[mark] == 0) {
    shift[mark] = x;
    var[mark++] = y;
  }
  for (std::size_t k = 0; k < plan.steps.size(); ++k) {
    const Step& s = plan.steps[k];
    const double dB = sign * s.sqrt_dt * normal(engine);
    const double rv = s.p.rho * v;
    const double v2dt = v * v * s.dt;
    x += rv * dB - 0.5 * rv * rv * s.dt;
    y += (1.0 - s.p.rho * s.p.rho) * v2dt;
    v = step_vol(v, s.p.kappa, s.p.theta, s.p.lambda, s.dt, dB);
    while (mark < n_marks && plan.record_after[mark] == k + 1) {
      shift[mark] = x;
      var[mark++] = y;
    }
  }
}

}  // namespace

void McConfig::validate() const {
  if (paths == 0) throw std::domain_error("Monte Carlo needs at least one path");
  if (!(steps_per_year > 0.0) || !std::isfinite(steps_per_year)) {
    throw std::domain_error("steps per year must be positive");
  }
  if (block_size == 0) throw std::domain_error("block size must be positive");
}

double step_vol(double v, double kappa, double theta, double lambda, double dt, double dB) {
  const double delta = (kappa + 0.5 * lambda * lambda) * dt - lambda * dB;
  // (1 - e^{-delta}) / delta, with its series near 0
  const double g = std::abs(delta) < 1e-10 ? 1.0 - 0.5 * delta : -std::expm1(-delta) / delta;
  return v * std::exp(-delta) + kappa * theta * dt * g;
}

std::vector<double> simulation_times(const ParamSchedule& schedule, std::span<const double> marks,
                                     double horizon, double steps_per_year) {
  if (!(horizon > 0.0)) throw std::domain_error("simulation horizon must be positive");
  std::vector<double> knots{0.0, horizon};
  for (double b : schedule.grid().boundaries()) {
    if (b > 0.0 && b < horizon) knots.push_back(b);
  }
  for (double m : marks) {
    if (!(m > 0.0) || m > horizon) throw std::domain_error("maturity outside simulation horizon");
    knots.push_back(m);
  }
  std::sort(knots.begin(), knots.end());
  std::vector<double> uniq;
  for (double k : knots) {
    if (uniq.empty() || k - uniq.back() > 1e-13) uniq.push_back(k);
  }
  std::vector<double> times{0.0};
  for (std::size_t i = 0; i + 1 < uniq.size(); ++i) {
    const double len = uniq[i + 1] - uniq[i];
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len * steps_per_year - 1e-9)));
    for (std::size_t j = 1; j < n; ++j) times.push_back(uniq[i] + len * static_cast<double>(j) / n);
    times.push_back(uniq[i + 1]);
  }
  return times;
}

std::vector<McEstimate> mc_price_puts(const ModelState& state, const ParamSchedule& schedule,
                                      std::span<const BsContext> contracts, const McConfig& cfg) {
  cfg.validate();
  if (contracts.empty()) return {};
  std::vector<double> marks;
  for (const auto& c : contracts) marks.push_back(c.maturity);
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  const Plan plan = make_plan(schedule, marks, marks.back(), cfg.steps_per_year);

  const std::size_t nc = contracts.size();
  std::vector<std::size_t> mark_of(nc);
  for (std::size_t j = 0; j < nc; ++j) {
    mark_of[j] = static_cast<std::size_t>(
        std::lower_bound(marks.begin(), marks.end(), contracts[j].maturity) - marks.begin());
  }
  const double x0 = state.log_spot();
  // put = call + K e^{-Dd} - S e^{-Df}
  std::vector<bool> otm_call(nc);
  std::vector<double> parity(nc);
  for (std::size_t j = 0; j < nc; ++j) {
    const double fwd = std::exp(x0 - contracts[j].for_discount);
    parity[j] = contracts[j].discounted_strike() - fwd;
    otm_call[j] = parity[j] > 0.0;
  }
  const std::size_t samples = cfg.antithetic ? (cfg.paths + 1) / 2 : cfg.paths;

  auto payoffs = [&](std::uint64_t sample, std::vector<double>& shift, std::vector<double>& var,
                     std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    const int legs = cfg.antithetic ? 2 : 1;
    for (int leg = 0; leg < legs; ++leg) {
      simulate_path(plan, state.v0, cfg.seed, sample, leg == 0 ? 1.0 : -1.0, shift, var);
      for (std::size_t j = 0; j < nc; ++j) {
        const double x = x0 + shift[mark_of[j]];
        const double y = var[mark_of[j]];
        // Out-of-the-money side, mapped back by parity: E[e^{shift}] = 1 exactly.
        out[j] += otm_call[j] ? call_price_xy(contracts[j], x, y) + parity[j] : put_price_xy(contracts[j], x, y);
      }
    }
    if (legs == 2) {
      for (auto& o : out) o *= 0.5;
    }
  };

  // Sums are taken relative to sample 0 so a degenerate (deterministic) payoff
  // yields an exactly zero variance.
  std::vector<double> ref(nc);
  {
    std::vector<double> shift(marks.size()), var(marks.size());
    payoffs(0, shift, var, ref);
  }

  const std::size_t blocks = (samples + cfg.block_size - 1) / cfg.block_size;
  std::vector<double> block_s1(blocks * nc), block_s2(blocks * nc);
  for_each_block(samples, cfg, [&](std::size_t b, std::size_t first, std::size_t last) {
    std::vector<double> shift(marks.size()), var(marks.size()), out(nc);
    std::vector<Kahan> s1(nc), s2(nc);
    for (std::size_t i = first; i < last; ++i) {
      payoffs(i, shift, var, out);
      for (std::size_t j = 0; j < nc; ++j) {
        const double d = out[j] - ref[j];
        s1[j].add(d);
        s2[j].add(d * d);
      }
    }
    for (std::size_t j = 0; j < nc; ++j) {
      block_s1[b * nc + j] = s1[j].sum;
      block_s2[b * nc + j] = s2[j].sum;
    }
  });

  std::vector<McEstimate> result(nc);
  const double n = static_cast<double>(samples);
  for (std::size_t j = 0; j < nc; ++j) {
    Kahan s1, s2;
    for (std::size_t b = 0; b < blocks; ++b) {
      s1.add(block_s1[b * nc + j]);
      s2.add(block_s2[b * nc + j]);
    }
    const double mean_d = s1.sum / n;
    double var = samples > 1 ? (s2.sum - n * mean_d * mean_d) / (n - 1.0) : 0.0;
    var = std::max(var, 0.0);
    result[j].price = ref[j] + mean_d;
    result[j].std_error = std::sqrt(var / n);
    result[j].paths = cfg.antithetic ? 2 * samples : samples;
  }
  return result;
}

McEstimate mc_price_put(const ModelState& state, const ParamSchedule& schedule,
                        const BsContext& ctx, const McConfig& cfg) {
  return mc_price_puts(state, schedule, std::span<const BsContext>(&ctx, 1), cfg).front();
}

VolMoments mc_terminal_vol_moments(double v0, const ParamSchedule& schedule, double T,
                                   const McConfig& cfg) {
  cfg.validate();
  if (!(v0 > 0.0)) throw std::invalid_argument("initial volatility must be positive");
  const std::vector<double> marks{T};
  const Plan plan = make_plan(schedule, marks, T, cfg.steps_per_year);

  auto terminal = [&](std::uint64_t sample) {
    auto engine = sample_engine(cfg.seed, sample);
    boost::random::normal_distribution<double> normal;
    double v = v0;
    for (const Step& s : plan.steps) {
      v = step_vol(v, s.p.kappa, s.p.theta, s.p.lambda, s.dt, s.sqrt_dt * normal(engine));
    }
    return v;
  };

  const double ref = terminal(0);
  const std::size_t samples = cfg.paths;
  const std::size_t blocks = (samples + cfg.block_size - 1) / cfg.block_size;
  std::vector<std::array<double, 4>> block_sums(blocks);
  for_each_block(samples, cfg, [&](std::size_t b, std::size_t first, std::size_t last) {
    std::array<Kahan, 4> s;
    for (std::size_t i = first; i < last; ++i) {
      const double d = terminal(i) - ref;
      double p = d;
      for (auto& acc : s) {
        acc.add(p);
        p *= d;
      }
    }
    for (std::size_t k = 0; k < 4; ++k) block_sums[b][k] = s[k].sum;
  });

  std::array<Kahan, 4> total;
  for (const auto& bs : block_sums) {
    for (std::size_t k = 0; k < 4; ++k) total[k].add(bs[k]);
  }
  const double n = static_cast<double>(samples);
  const double r1 = total[0].sum / n;
  const double r2 = total[1].sum / n;
  const double r3 = total[2].sum / n;
  const double r4 = total[3].sum / n;
  const double m2 = std::max(r2 - r1 * r1, 0.0);
  const double m4 = std::max(r4 - 4.0 * r1 * r3 + 6.0 * r1 * r1 * r2 - 3.0 * r1 * r1 * r1 * r1, 0.0);

  VolMoments out;
  out.paths = samples;
  out.mean = ref + r1;
  out.variance = samples > 1 ? m2 * n / (n - 1.0) : 0.0;
  out.mean_std_error = std::sqrt(out.variance / n);
  out.variance_std_error = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
  return out;
}

}  // namespace igasv
