#include "igasv/phi.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace igasv {

namespace {

void check_triple(const PhiTriple& t) {
  if (t.m < 0 || t.p < 0) {
    throw std::domain_error("phi key needs non-negative gamma and v0 powers, got (" +
                            std::to_string(t.n) + "," + std::to_string(t.m) + "," +
                            std::to_string(t.p) + ")");
  }
}

void check_key(std::span<const PhiTriple> key) {
  if (key.empty()) throw std::domain_error("phi key must not be empty");
  for (const auto& t : key) check_triple(t);
}

// m! / j! * (-1/c)^(m-j) for j = 0..m
std::vector<double> falling_weights(int m, double c) {
  std::vector<double> w(static_cast<std::size_t>(m) + 1);
  w[static_cast<std::size_t>(m)] = 1.0;
  for (int j = m - 1; j >= 0; --j) {
    w[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(j) + 1] * (j + 1) * (-1.0 / c);
  }
  return w;
}

}  // namespace

PhiKey::PhiKey(std::initializer_list<PhiTriple> triples) : triples_(triples) {
  check_key(triples_);
}

PhiKey::PhiKey(std::vector<PhiTriple> triples) : triples_(std::move(triples)) {
  check_key(triples_);
}

std::size_t PhiEvaluator::KeyHash::operator()(const std::vector<PhiTriple>& k) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull;
  for (const auto& t : k) {
    const auto packed = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(t.n)) << 40) ^
                        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(t.m)) << 20) ^
                        static_cast<std::uint64_t>(static_cast<std::uint32_t>(t.p));
    h ^= packed + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

PhiEvaluator::PhiEvaluator(const IntervalData& interval, double t)
    : iv_(interval), dt_(interval.length()), gamma_t_(0.0), series_mode_(false) {
  if (!(dt_ > 0.0)) throw std::domain_error("interval must have positive length");
  if (!(iv_.kappa > 0.0)) throw std::domain_error("interval kappa must be positive");
  if (t < iv_.t_begin || t > iv_.t_end) {
    throw std::domain_error("phi evaluation time outside its interval");
  }
  gamma_t_ = (t - iv_.t_begin) / dt_;
  series_mode_ = iv_.kappa * dt_ < kPhiSeriesThreshold;
}

PhiEvaluator::PhiEvaluator(const IntervalData& interval)
    : PhiEvaluator(interval, interval.t_begin) {}

double PhiEvaluator::operator()(const PhiKey& key) { return evaluate(key.triples()); }

double PhiEvaluator::evaluate(std::span<const PhiTriple> key) {
  std::vector<PhiTriple> k(key.begin(), key.end());
  if (auto it = memo_.find(k); it != memo_.end()) return it->second;
  check_key(key);
  const double value = compute(key);
  memo_.emplace(std::move(k), value);
  return value;
}

double PhiEvaluator::with_front(const PhiTriple& front, std::span<const PhiTriple> tail) {
  std::vector<PhiTriple> k;
  k.reserve(tail.size() + 1);
  k.push_back(front);
  k.insert(k.end(), tail.begin(), tail.end());
  return evaluate(k);
}

double PhiEvaluator::compute(std::span<const PhiTriple> key) {
  const PhiTriple& f = key.front();
  const auto rest = key.subspan(1);
  if (f.p > 0) {
    // v0_s = theta + (v0_Ti - theta) e^{-kappa dT gamma(s)}
    const double spread = iv_.v_begin - iv_.theta;
    double value = iv_.theta * with_front({f.n, f.m, f.p - 1}, rest);
    if (spread != 0.0) value += spread * with_front({f.n - 1, f.m, f.p - 1}, rest);
    return value;
  }
  return rest.empty() ? single(f) : nested(f, rest);
}

double PhiEvaluator::single(const PhiTriple& f) {
  const double g = gamma_t_;
  if (f.n == 0) {
    return dt_ / (f.m + 1) * (1.0 - std::pow(g, f.m + 1));
  }
  if (series_mode_) return series(f, {});
  const double nk = f.n * iv_.kappa;
  const double c = nk * dt_;
  if (f.m == 0) {
    return std::exp(c * g) * std::expm1(c * (1.0 - g)) / nk;
  }
  return (std::exp(c) - std::pow(g, f.m) * std::exp(c * g)) / nk -
         f.m / c * with_front({f.n, f.m - 1, 0}, {});
}

double PhiEvaluator::nested(const PhiTriple& f, std::span<const PhiTriple> rest) {
  const double g = gamma_t_;
  const PhiTriple& next = rest.front();
  const auto tail = rest.subspan(1);
  if (f.n == 0) {
    const double w = dt_ / (f.m + 1);
    double value = w * with_front({next.n, next.m + f.m + 1, next.p}, tail);
    if (g != 0.0) value -= w * std::pow(g, f.m + 1) * evaluate(rest);
    return value;
  }
  if (series_mode_) return series(f, rest);
  const double nk = f.n * iv_.kappa;
  const double c = nk * dt_;
  if (f.m == 0) {
    return -std::exp(c * g) / nk * evaluate(rest) +
           with_front({f.n + next.n, next.m, next.p}, tail) / nk;
  }
  const auto w = falling_weights(f.m, c);
  double boundary = 0.0;
  double gj = 1.0;
  for (int j = 0; j <= f.m; ++j) {
    boundary += gj * w[static_cast<std::size_t>(j)];
    gj *= g;
  }
  double value = -std::exp(c * g) / nk * boundary * evaluate(rest);
  for (int j = 0; j <= f.m; ++j) {
    value += w[static_cast<std::size_t>(j)] / nk *
             with_front({f.n + next.n, next.m + j, next.p}, tail);
  }
  return value;
}

// e^{c gamma} = sum_j c^j gamma^j / j!, which turns the n != 0 factor into
// a sum of n = 0 factors with raised gamma powers.
double PhiEvaluator::series(const PhiTriple& f, std::span<const PhiTriple> rest) {
  const double c = f.n * iv_.kappa * dt_;
  double coef = 1.0;
  double sum = 0.0;
  for (int j = 0; j < 200; ++j) {
    const double term = coef * with_front({0, f.m + j, 0}, rest);
    sum += term;
    if (j >= 2 && std::abs(coef) < 1e-17 && std::abs(term) <= 1e-18 * std::abs(sum)) break;
    coef *= c / (j + 1);
  }
  return sum;
}

}  // namespace igasv
