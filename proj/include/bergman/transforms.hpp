#ifndef BERGMAN_TRANSFORMS_HPP
#define BERGMAN_TRANSFORMS_HPP

#include <functional>
#include <vector>

#include "bergman/model_kernel.hpp"

namespace bergman {

// ---------------------------------------------------------------------------
// Boundary-limit transforms
//   Btilde_{p,a0}(z1) = (1/pi) int_0^inf e^{-s} s^{1 + 2/r + a0} B_p(s^{1/r} z1) ds
// and their Wirtinger derivatives (differentiation under the integral with
// the chain-rule dilation factor s^{(a1+a2)/r}).
// ---------------------------------------------------------------------------

namespace detail {

// The integrand's e^{-s} factor truncates near s ~ 38 (weight < 1e-16); the
// dilated argument must stay inside the source's validated radius there.
inline void check_dilated_radius(const DiagKernel& source, int r, Cplx z1) {
  double reach = std::pow(38.0, 1.0 / r) * std::abs(z1);
  if (reach > source.max_radius())
    throw DomainError("b_tilde: dilated path leaves the validated radius "
                      "(|z1| too large for this model's dmax)");
}

}  // namespace detail

inline double b_tilde(const DiagKernel& source, int r, int alpha0, Cplx z1,
                      const QuadSpec& spec = {}) {
  if (alpha0 < 0 || alpha0 > 2) throw DomainError("b_tilde: alpha0 must be in {0,1,2}");
  detail::check_dilated_radius(source, r, z1);
  auto integrand = [&](double s) {
    Cplx z = std::pow(s, 1.0 / r) * z1;
    return std::exp(-s) * std::pow(s, 1.0 + 2.0 / r + alpha0) *
           source.diag_value(z).real();
  };
  return quad_semiinf(integrand, spec).value / M_PI;
}

inline Cplx b_tilde_deriv(const DiagKernel& source, int r, int alpha0, int a1, int a2,
                          Cplx z1, const QuadSpec& spec = {}) {
  if (alpha0 < 0 || alpha0 > 2) throw DomainError("b_tilde_deriv: alpha0 must be in {0,1,2}");
  if (a1 < 0 || a2 < 0 || a1 + a2 > 2)
    throw DomainError("b_tilde_deriv: derivative order must satisfy a1 + a2 <= 2");
  detail::check_dilated_radius(source, r, z1);
  auto integrand = [&](double s) {
    double dil = std::pow(s, 1.0 / r);
    Cplx z = dil * z1;
    double chain = std::pow(s, double(a1 + a2) / r);
    return std::exp(-s) * std::pow(s, 1.0 + 2.0 / r + alpha0) * chain *
           source.diag_derivative(a1, a2, z);
  };
  return quad_semiinf(integrand, spec).value / M_PI;
}

// ---------------------------------------------------------------------------
// Kahler-Einstein comparing-coefficients determinant:
//   det [ B0        dbar B0            B1      ]
//       [ d B0      d dbar B0 + (Dp/2) B1  d B1 ]      =  (9 pi^2 / 2) B0^4
//       [ B1        dbar B1            B2      ]
// with Bk = Btilde_{p,k}(z1) and Dp = Delta p = 4q evaluated at z1.
// ---------------------------------------------------------------------------

struct KEResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double ratio = 0.0;
  Cplx z1;
};

inline KEResidual ke_determinant(const DiagKernel& source, int r, Cplx z1,
                                 const QuadSpec& spec = {}) {
  double B0 = b_tilde(source, r, 0, z1, spec);
  double B1 = b_tilde(source, r, 1, z1, spec);
  double B2 = b_tilde(source, r, 2, z1, spec);
  Cplx dB0 = b_tilde_deriv(source, r, 0, 1, 0, z1, spec);
  Cplx dbB0 = b_tilde_deriv(source, r, 0, 0, 1, z1, spec);
  Cplx ddB0 = b_tilde_deriv(source, r, 0, 1, 1, z1, spec);
  Cplx dB1 = b_tilde_deriv(source, r, 1, 1, 0, z1, spec);
  Cplx dbB1 = b_tilde_deriv(source, r, 1, 0, 1, z1, spec);
  double dp = source.delta_p(z1);

  Cplx m[3][3] = {{B0, dbB0, B1},
                  {dB0, ddB0 + 0.5 * dp * B1, dB1},
                  {B1, dbB1, B2}};
  Cplx det = det3(m);

  KEResidual out;
  out.z1 = z1;
  out.lhs = det.real();
  out.rhs = 4.5 * M_PI * M_PI * B0 * B0 * B0 * B0;
  out.residual = out.lhs - out.rhs;
  out.ratio = out.lhs / out.rhs;
  return out;
}

// Exact rational check of the final quadratic:
// (1 + 4/r)(2 + 2/r) vs (9/4)(1 + 2/r)^2; equality holds only at r = 2.
struct QuadraticCheck {
  Rational lhs, rhs;
  bool equal = false;
};

inline QuadraticCheck quadratic_root_check(int r) {
  if (r < 2 || r % 2 != 0) throw DomainError("quadratic_root_check: r must be even, >= 2");
  Rational rr(r);
  Rational lhs = (1 + Rational(4) / rr) * (2 + Rational(2) / rr);
  Rational rhs = Rational(9, 4) * (1 + Rational(2) / rr) * (1 + Rational(2) / rr);
  lhs.canonicalize();
  rhs.canonicalize();
  return {lhs, rhs, lhs == rhs};
}

// ---------------------------------------------------------------------------
// Watson-Laplace bookkeeping for the transform of a classical symbol
// (tau/2pi) sum_j b_j tau^{-j}: non-log coefficients and the leading log.
// ---------------------------------------------------------------------------

struct WatsonExpansion {
  std::vector<double> c;   // c_j = Gamma(3 + a0 - j) b_j / (2 pi^2), j < 3 + a0
  double d0 = 0.0;         // b_{3+a0} / (2 pi^2) when present
  int alpha0 = 0;
  int r = 2;
};

inline WatsonExpansion watson_coeffs(const std::vector<double>& b, int alpha0, int r,
                                     int N) {
  if (N > int(b.size()) - 1) throw DomainError("watson_coeffs: N exceeds symbol length");
  WatsonExpansion w;
  w.alpha0 = alpha0;
  w.r = r;
  for (int j = 0; j <= N && j < 3 + alpha0; ++j)
    w.c.push_back(gamma_fn(3.0 + alpha0 - j) * b[j] / (2.0 * M_PI * M_PI));
  if (3 + alpha0 <= N) w.d0 = b[3 + alpha0] / (2.0 * M_PI * M_PI);
  return w;
}

namespace detail {

// C-infinity cutoff: 0 on (-inf, 0], 1 on [1, inf).
inline double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

}  // namespace detail

// Validation of the coefficient bookkeeping against direct quadrature of a
// synthetic cutoff symbol equal to (tau/2pi) sum b_j tau^{-j} for tau >= 1
// and zero below tau = 1/2.
struct WatsonValidation {
  double max_rel_deviation = 0.0;
  double fitted_d0 = 0.0;
  bool has_log = false;
};

inline WatsonValidation watson_vs_quadrature(const std::vector<double>& b, int alpha0,
                                             int r, const std::vector<double>& t_grid,
                                             const QuadSpec& spec_in = {}) {
  WatsonExpansion w = watson_coeffs(b, alpha0, r, int(b.size()) - 1);
  QuadSpec spec = spec_in;
  spec.tol = std::min(spec.tol, 1e-11);

  auto symbol = [&](double tau) {
    double cut = detail::smooth_step((tau - 0.5) / 0.5);
    if (cut == 0.0) return 0.0;
    double acc = 0.0;
    for (size_t j = 0; j < b.size(); ++j)
      acc += b[j] * std::pow(tau, 2.0 + alpha0 - double(j));
    return cut * acc / (2.0 * M_PI);
  };

  std::vector<double> transform(t_grid.size());
  for (size_t i = 0; i < t_grid.size(); ++i) {
    double t = t_grid[i];
    auto f = [&](double tau) { return std::exp(-tau / t) * symbol(tau); };
    // Coarse pass to learn the scale, then an absolute tolerance pinned to
    // it; the cutoff region is non-analytic and only needs accuracy relative
    // to the full transform.
    QuadSpec coarse = spec;
    coarse.tol = 1.0;
    double scale = std::abs(quad_semiinf(f, coarse).value);
    QuadSpec fine = spec;
    fine.tol = std::max(spec.tol, 1e-10 * scale);
    fine.max_levels = 12;
    transform[i] = quad_semiinf(f, fine).value / M_PI;
  }

  WatsonValidation out;
  out.has_log = 3 + alpha0 < int(b.size());

  if (out.has_log) {
    // Fit a + d ln t + e / t on the residual after removing known powers,
    // and compare the fitted log slope with d0.
    std::vector<std::vector<double>> A(t_grid.size(), std::vector<double>(3));
    std::vector<double> y(t_grid.size());
    for (size_t i = 0; i < t_grid.size(); ++i) {
      double t = t_grid[i];
      double powers = 0.0;
      for (size_t j = 0; j < w.c.size(); ++j)
        powers += w.c[j] * std::pow(t, 3.0 + alpha0 - double(j));
      y[i] = transform[i] - powers;
      A[i] = {1.0, std::log(t), 1.0 / t};
    }
    LstSqResult ls = least_squares(A, y);
    out.fitted_d0 = ls.x[1];
  }

  // Max relative deviation of the quadrature from the predicted expansion,
  // measured against the leading scale, after discarding the
  // O(t^{-(3+alpha0)}) remainder relative to it.
  for (size_t i = 0; i < t_grid.size(); ++i) {
    double t = t_grid[i];
    double pred = 0.0;
    for (size_t j = 0; j < w.c.size(); ++j)
      pred += w.c[j] * std::pow(t, 3.0 + alpha0 - double(j));
    if (out.has_log) pred += w.d0 * std::log(t);
    double lead = std::pow(t, 3.0 + alpha0);
    double dev = std::fabs(transform[i] - pred) / std::max(lead, 1.0);
    out.max_rel_deviation = std::max(out.max_rel_deviation, dev);
  }
  return out;
}

}  // namespace bergman

#endif
