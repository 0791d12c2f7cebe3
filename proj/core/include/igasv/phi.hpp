#pragma once

// Per-interval building blocks of the coefficient recursion.
//
// On an interval [Ti, Ti+1] with constant kappa and theta, for t in the interval
// and gamma(s) = (s - Ti) / (Ti+1 - Ti):
//
//   phi_t^{(n,m,p)} = int_t^{Ti+1} e^{n kappa dT gamma(s)} gamma(s)^m v0_s^p ds
//   phi_t^{(nk,mk,pk),...,(n1,m1,p1)}
//       = int_t^{Ti+1} e^{nk kappa dT gamma(s)} gamma(s)^mk v0_s^pk phi_s^{(nk-1,...),...} ds
//
// where v0_s = theta + (v0_{Ti} - theta) e^{-kappa dT gamma(s)}. Keys list the
// outermost triple first. Values are produced by exact recursions only.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <unordered_map>
#include <vector>

namespace igasv {

struct PhiTriple {
  int n = 0;  // multiple of kappa in the exponent
  int m = 0;  // power of gamma
  int p = 0;  // power of v0

  bool operator==(const PhiTriple&) const = default;
};

class PhiKey {
 public:
  PhiKey(std::initializer_list<PhiTriple> triples);
  explicit PhiKey(std::vector<PhiTriple> triples);

  std::span<const PhiTriple> triples() const noexcept { return triples_; }
  std::size_t depth() const noexcept { return triples_.size(); }

  bool operator==(const PhiKey&) const = default;

 private:
  std::vector<PhiTriple> triples_;
};

/// Data of one interval of a piecewise-constant schedule.
struct IntervalData {
  double t_begin = 0.0;
  double t_end = 0.0;
  double kappa = 0.0;
  double theta = 0.0;
  double v_begin = 0.0;  // deterministic proxy v0 at t_begin

  double length() const { return t_end - t_begin; }
};

/// Evaluates phi for every key at a fixed time t of a fixed interval, memoising
/// sub-results. Not thread-safe; create one per interval and thread.
class PhiEvaluator {
 public:
  PhiEvaluator(const IntervalData& interval, double t);
  /// Convenience: evaluation over the whole interval (t = Ti).
  explicit PhiEvaluator(const IntervalData& interval);

  double operator()(const PhiKey& key);
  double evaluate(std::span<const PhiTriple> key);

  /// True when every exponential of the interval is expanded in powers of gamma.
  bool series_mode() const noexcept { return series_mode_; }
  std::size_t cache_size() const noexcept { return memo_.size(); }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<PhiTriple>& k) const noexcept;
  };

  double compute(std::span<const PhiTriple> key);
  double single(const PhiTriple& f);
  double nested(const PhiTriple& f, std::span<const PhiTriple> rest);
  double series(const PhiTriple& f, std::span<const PhiTriple> rest);
  double with_front(const PhiTriple& front, std::span<const PhiTriple> tail);

  IntervalData iv_;
  double dt_;
  double gamma_t_;
  bool series_mode_;
  std::unordered_map<std::vector<PhiTriple>, double, KeyHash> memo_;
};

/// Below this value of kappa * dT the exponentials of an interval are expanded as
/// power series in gamma; above it the closed forms are used directly.
inline constexpr double kPhiSeriesThreshold = 1.0;

}  // namespace igasv
