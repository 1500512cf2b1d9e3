#ifndef BERGMAN_MONGE_AMPERE_HPP
#define BERGMAN_MONGE_AMPERE_HPP

#include <array>
#include <functional>
#include <optional>

#include "bergman/linalg.hpp"

namespace bergman {

using C2Point = std::array<Cplx, 2>;

// Smooth real field on (a domain in) C^2 with optional analytic derivative
// callbacks; when absent, derivatives fall back to Richardson-extrapolated
// central differences in the four real coordinates.
struct ScalarField {
  std::function<double(C2Point)> value;
  std::function<std::array<Cplx, 2>(C2Point)> grad;                 // u_alpha
  std::function<std::array<std::array<Cplx, 2>, 2>(C2Point)> hess;  // u_{alpha betabar}
};

namespace detail {

inline C2Point shift(C2Point z, int coord, double d) {
  // Real coordinates ordered (x1, y1, x2, y2).
  int a = coord / 2;
  if (coord % 2 == 0)
    z[a] += d;
  else
    z[a] += Cplx(0.0, d);
  return z;
}

template <class F>
double central1(const F& f, const C2Point& z, int i, double h) {
  return (f(shift(z, i, h)) - f(shift(z, i, -h))) / (2.0 * h);
}

template <class F>
double richardson1(const F& f, const C2Point& z, int i, double h) {
  double d1 = central1(f, z, i, h);
  double d2 = central1(f, z, i, h / 2.0);
  return (4.0 * d2 - d1) / 3.0;
}

// d^2 f / dxi dxj by nested Richardson central differences.
template <class F>
double richardson2(const F& f, const C2Point& z, int i, int j, double h) {
  auto di = [&](const C2Point& w) { return richardson1(f, w, i, h); };
  double d1 = (di(shift(z, j, h)) - di(shift(z, j, -h))) / (2.0 * h);
  double d2 = (di(shift(z, j, h / 2.0)) - di(shift(z, j, -h / 2.0))) / h;
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace detail

// Wirtinger gradient (u_1, u_2), u_alpha = (d_x - i d_y)/2.
inline std::array<Cplx, 2> wirtinger_grad(const ScalarField& u, const C2Point& z, double h) {
  if (u.grad) return u.grad(z);
  std::array<Cplx, 2> g;
  for (int a = 0; a < 2; ++a) {
    double dx = detail::richardson1(u.value, z, 2 * a, h);
    double dy = detail::richardson1(u.value, z, 2 * a + 1, h);
    g[a] = 0.5 * Cplx(dx, -dy);
  }
  return g;
}

// Mixed complex Hessian u_{alpha betabar} =
//   (1/4)[d_{xa xb} + d_{ya yb} + i(d_{xa yb} - d_{ya xb})].
inline std::array<std::array<Cplx, 2>, 2> wirtinger_hess(const ScalarField& u,
                                                         const C2Point& z, double h) {
  if (u.hess) return u.hess(z);
  double d2[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) d2[j][i] = d2[i][j] = detail::richardson2(u.value, z, i, j, h);
  std::array<std::array<Cplx, 2>, 2> H;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double re = d2[2 * a][2 * b] + d2[2 * a + 1][2 * b + 1];
      double im = d2[2 * a][2 * b + 1] - d2[2 * a + 1][2 * b];
      H[a][b] = 0.25 * Cplx(re, im);
    }
  return H;
}

// Fefferman's complex Monge-Ampere operator (n = 2):
//   J(u) = (-1)^n det [ u      u_betabar    ]
//                     [ u_alpha u_{alpha betabar} ]
inline double j_operator(const ScalarField& u, const C2Point& z, double h = 1e-3) {
  double uv = u.value(z);
  auto g = wirtinger_grad(u, z, h);
  auto H = wirtinger_hess(u, z, h);
  Cplx m[3][3];
  m[0][0] = uv;
  for (int b = 0; b < 2; ++b) m[0][1 + b] = std::conj(g[b]);  // u_betabar
  for (int a = 0; a < 2; ++a) {
    m[1 + a][0] = g[a];
    for (int b = 0; b < 2; ++b) m[1 + a][1 + b] = H[a][b];
  }
  return det3(m).real();  // (-1)^2 = +1
}

// Invariant form J(u) = u^{n+1} det[ddbar(-ln u)]; cross-checks j_operator.
inline double j_log_form(const ScalarField& u, const C2Point& z, double h = 1e-3) {
  double uv = u.value(z);
  if (!(uv > 0.0)) throw DomainError("j_log_form: u(z) must be positive");
  ScalarField neglog;
  neglog.value = [&u](C2Point w) {
    double v = u.value(w);
    if (!(v > 0.0)) throw DomainError("j_log_form: stencil leaves {u > 0}");
    return -std::log(v);
  };
  auto H = wirtinger_hess(neglog, z, h);
  Cplx det = H[0][0] * H[1][1] - H[0][1] * H[1][0];
  return uv * uv * uv * det.real();
}

// Reference kernel of the unit ball in C^2: K = 2 / (pi^2 (1 - |z|^2)^3).
inline double ball_kernel(const C2Point& z) {
  double n2 = std::norm(z[0]) + std::norm(z[1]);
  if (n2 >= 1.0) throw DomainError("ball_kernel: point outside the unit ball");
  double u = 1.0 - n2;
  return 2.0 / (M_PI * M_PI * u * u * u);
}

inline ScalarField ball_kernel_field() {
  ScalarField f;
  f.value = [](C2Point z) { return ball_kernel(z); };
  return f;
}

inline ScalarField ball_defining_field() {
  ScalarField f;
  f.value = [](C2Point z) { return 1.0 - std::norm(z[0]) - std::norm(z[1]); };
  return f;
}

// Bergman invariant function B = det(ddbar ln K) / K.
inline double bergman_invariant(const ScalarField& K, const C2Point& z, double h = 1e-3) {
  double kv = K.value(z);
  if (!(kv > 0.0)) throw DomainError("bergman_invariant: K(z) must be positive");
  ScalarField logK;
  logK.value = [&K](C2Point w) {
    double v = K.value(w);
    if (!(v > 0.0)) throw DomainError("bergman_invariant: stencil leaves {K > 0}");
    return std::log(v);
  };
  auto H = wirtinger_hess(logK, z, h);
  Cplx det = H[0][0] * H[1][1] - H[0][1] * H[1][0];
  return det.real() / kv;
}

// Relative defect in J(K) = (9 pi^2 / 2) K^4 (the n = 2 Kahler-Einstein
// condition on the kernel).
inline double ke_kernel_check(const ScalarField& K, const C2Point& z, double h = 1e-3) {
  double kv = K.value(z);
  if (!(kv > 0.0)) throw DomainError("ke_kernel_check: K(z) must be positive");
  double j = j_operator(K, z, h);
  double target = 4.5 * M_PI * M_PI * kv * kv * kv * kv;
  return std::fabs(j - target) / target;
}

// Step scaled toward the ball boundary; the kernel blows up there.
inline double scaled_step(const C2Point& z, double h = 1e-3) {
  double n = std::sqrt(std::norm(z[0]) + std::norm(z[1]));
  return h * std::max(1.0 - n, 0.05);
}

}  // namespace bergman

#endif
