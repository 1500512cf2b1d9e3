#ifndef BERGMAN_QUADRATURE_HPP
#define BERGMAN_QUADRATURE_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "bergman/rational.hpp"

namespace bergman {

struct QuadSpec {
  int ntheta = 256;       // angular nodes for periodic quadrature
  double tol = 1e-10;     // absolute tolerance
  int max_levels = 10;    // refinement levels for the semi-infinite engine
  int base_level = 3;     // starting level (h = 0.5 / 2^base_level)
};

namespace detail {

struct ExpSinhNode {
  double u;  // abscissa in (0, inf)
  double w;  // weight
};

template <class T>
double magnitude(const T& v) {
  return std::abs(v);
}

// Double-exponential nodes for (0, inf): u = exp(lambda sinh(k h)).
// Nodes are emitted center-outward so callers can truncate the tails once
// contributions become negligible (or the integrand overflows out there).
inline std::vector<ExpSinhNode> exp_sinh_nodes(int level) {
  const double lambda = M_PI / 2.0;
  const double h = 0.5 / double(1 << level);
  std::vector<ExpSinhNode> nodes;
  auto emit = [&](long k) {
    double sh = lambda * std::sinh(k * h);
    if (std::fabs(sh) > 690.0) return false;
    double u = std::exp(sh);
    double w = h * lambda * std::cosh(k * h) * u;
    if (!std::isfinite(w)) return false;
    nodes.push_back({u, w});
    return true;
  };
  emit(0);
  long kmax = long(6.8 / h) + 1;
  for (long k = 1; k <= kmax; ++k)
    if (!emit(k)) break;
  for (long k = -1; k >= -kmax; --k)
    if (!emit(k)) break;
  return nodes;
}

// One trapezoid pass at the given level.  Node list alternates the two
// tails; a tail is dropped after its terms stay negligible or go non-finite
// (the transform reaches u ~ 1e300 where decaying integrands underflow).
template <class F, class T>
T exp_sinh_pass(F& f, int level, double tail_eps) {
  const double lambda = M_PI / 2.0;
  const double h = 0.5 / double(1 << level);
  T sum{};
  double scale = 0.0;
  int small_up = 0, small_down = 0;
  auto term_at = [&](long k, int& small_count, bool& alive) {
    double sh = lambda * std::sinh(k * h);
    if (std::fabs(sh) > 690.0) {
      alive = false;
      return;
    }
    double u = std::exp(sh);
    double w = h * lambda * std::cosh(k * h) * u;
    T t = f(u) * w;
    double m = magnitude(t);
    if (!std::isfinite(m)) {
      alive = false;  // overflow far out; treat the tail as exhausted
      return;
    }
    sum += t;
    scale = std::max(scale, m);
    small_count = (m <= tail_eps * scale) ? small_count + 1 : 0;
    if (small_count >= 3) alive = false;
  };
  bool up_alive = true, down_alive = true;
  int c0 = 0;
  bool a0 = true;
  term_at(0, c0, a0);
  long kmax = long(6.8 / h) + 1;
  for (long k = 1; k <= kmax && (up_alive || down_alive); ++k) {
    if (up_alive) term_at(k, small_up, up_alive);
    if (down_alive) term_at(-k, small_down, down_alive);
  }
  return sum;
}

}  // namespace detail

template <class T>
struct QuadResult {
  T value{};
  double error_estimate = 0.0;
  int levels_used = 0;
};

// Semi-infinite integral by the double-exponential transform with node
// doubling until two successive levels agree within tolerance.
template <class F>
auto quad_semiinf(F&& f, const QuadSpec& spec = {}) {
  using T = std::decay_t<decltype(f(1.0))>;
  T prev{};
  bool have_prev = false;
  for (int level = spec.base_level; level <= spec.base_level + spec.max_levels; ++level) {
    T sum = detail::exp_sinh_pass<std::decay_t<F>, T>(f, level, 1e-18);
    if (have_prev) {
      double err = detail::magnitude(sum - prev);
      if (err <= std::max(spec.tol, 4e-16 * detail::magnitude(sum)))
        return QuadResult<T>{sum, err, level - spec.base_level + 1};
    }
    prev = sum;
    have_prev = true;
  }
  throw NumericError("quad_semiinf: no convergence within max refinement levels");
}

// Trapezoid rule on [0, 2pi); spectrally accurate for smooth periodic f.
template <class F>
auto quad_periodic(F&& f, int n) {
  using T = std::decay_t<decltype(f(0.0))>;
  T sum{};
  for (int j = 0; j < n; ++j) sum += f(2.0 * M_PI * j / n);
  return sum * (2.0 * M_PI / n);
}

}  // namespace bergman

#endif
