#ifndef BERGMAN_MODEL_KERNEL_HPP
#define BERGMAN_MODEL_KERNEL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <vector>

#include "bergman/bipoly.hpp"
#include "bergman/linalg.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/special_functions.hpp"
#include "bergman/weight.hpp"

namespace bergman {

namespace detail {

// Sparse bivariate polynomial with complex double coefficients; used for the
// floating-point symbolic derivatives of the weight (product-rule cofactors).
struct CPoly {
  std::map<std::pair<int, int>, Cplx> terms;

  static CPoly from(const BiPoly& p, double scale = 1.0) {
    CPoly c;
    for (const auto& [k, co] : p.terms()) c.terms[k] = scale * co.to_complex();
    return c;
  }
  static CPoly one() {
    CPoly c;
    c.terms[{0, 0}] = 1.0;
    return c;
  }
  CPoly d_z() const {
    CPoly r;
    for (const auto& [k, co] : terms)
      if (k.first > 0) r.terms[{k.first - 1, k.second}] = double(k.first) * co;
    return r;
  }
  CPoly d_w() const {
    CPoly r;
    for (const auto& [k, co] : terms)
      if (k.second > 0) r.terms[{k.first, k.second - 1}] = double(k.second) * co;
    return r;
  }
  friend CPoly operator*(const CPoly& a, const CPoly& b) {
    CPoly r;
    for (const auto& [ka, ca] : a.terms)
      for (const auto& [kb, cb] : b.terms)
        r.terms[{ka.first + kb.first, ka.second + kb.second}] += ca * cb;
    return r;
  }
  friend CPoly operator-(const CPoly& a, const CPoly& b) {
    CPoly r = a;
    for (const auto& [k, co] : b.terms) r.terms[k] -= co;
    return r;
  }
  Cplx eval(Cplx z, Cplx w) const {
    Cplx acc = 0.0;
    for (const auto& [k, co] : terms) {
      Cplx t = co;
      for (int a = 0; a < k.first; ++a) t *= z;
      for (int b = 0; b < k.second; ++b) t *= w;
      acc += t;
    }
    return acc;
  }
};

// Cofactor polynomials G_{jk} with d_z^j d_zbar^k e^{-2tp} = e^{-2tp} G_{jk},
// from G_{j+1,k} = d_z G - 2 t p_z G and G_{j,k+1} = d_w G - 2 t p_w G.
inline std::array<std::array<CPoly, 5>, 5> weight_cofactors(const CPoly& tp) {
  CPoly two_pz = tp.d_z(), two_pw = tp.d_w();
  for (auto& [k, c] : two_pz.terms) c *= 2.0;
  for (auto& [k, c] : two_pw.terms) c *= 2.0;
  std::array<std::array<CPoly, 5>, 5> G;
  G[0][0] = CPoly::one();
  for (int j = 0; j + 1 < 5; ++j) G[j + 1][0] = G[j][0].d_z() - two_pz * G[j][0];
  for (int j = 0; j < 5; ++j)
    for (int k = 0; k + 1 < 5; ++k) G[j][k + 1] = G[j][k].d_w() - two_pw * G[j][k];
  return G;
}

inline double falling(int alpha, int a) {
  double f = 1.0;
  for (int i = 0; i < a; ++i) f *= double(alpha - i);
  return f;
}

inline double binom(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * double(n - k + i) / double(i);
  return b;
}

}  // namespace detail

// Weighted moment matrix M[a][b] = int_C z^b conj(z)^a e^{-2 t p} dA,
// assembled in polar form: the angular factor by trapezoid quadrature, the
// radial factor on the u = rho^r substitution with double-exponential nodes.
struct MomentMatrix {
  int dmax = 0;
  double tscale = 1.0;
  HermMatrix M;
  int levels_used = 0;
  double error_estimate = 0.0;

  Cplx at(int a, int b) const { return M.at(a, b); }
};

inline MomentMatrix build_moments(const BiPoly& p, int dmax, const QuadSpec& spec = {},
                                  double tscale = 1.0) {
  if (dmax < 0 || dmax > 120) throw DomainError("build_moments: dmax must be in [0, 120]");
  auto rep = admissible_weight_check(p);
  if (!rep.admissible())
    throw DomainError("build_moments: weight not admissible (" + rep.summary() + ")");
  const int r = rep.degree;
  const int n = dmax + 1;
  const int ntheta = std::max(spec.ntheta, 4 * n);

  std::vector<double> P(ntheta);
  double pmin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < ntheta; ++j) {
    double th = 2.0 * M_PI * j / ntheta;
    Cplx e(std::cos(th), std::sin(th));
    P[j] = p.eval(e, std::conj(e)).real() * tscale;
    pmin = std::min(pmin, P[j]);
  }
  if (pmin < 1e-9)
    throw NumericError("build_moments: circle restriction of the weight degenerates; "
                       "radial moments diverge");

  std::vector<Cplx> phase(ntheta);
  for (int j = 0; j < ntheta; ++j) {
    double th = 2.0 * M_PI * j / ntheta;
    phase[j] = Cplx(std::cos(th), std::sin(th));
  }

  MomentMatrix out;
  out.dmax = dmax;
  out.tscale = tscale;

  HermMatrix prev;
  bool have_prev = false;
  for (int level = spec.base_level; level <= spec.base_level + spec.max_levels; ++level) {
    auto nodes = detail::exp_sinh_nodes(level);
    // Drop nodes where the weight has fully decayed (or u underflowed).
    std::vector<detail::ExpSinhNode> live;
    live.reserve(nodes.size());
    for (auto& nd : nodes)
      if (2.0 * nd.u * pmin < 745.0 && nd.u > 1e-280) live.push_back(nd);
    const int nk = int(live.size());

    // E[k][j] = exp(-2 u_k P_j), then F[m][k] = (2 pi / ntheta) sum_j e^{i m th_j} E.
    std::vector<std::vector<double>> E(nk, std::vector<double>(ntheta));
    for (int k = 0; k < nk; ++k)
      for (int j = 0; j < ntheta; ++j) E[k][j] = std::exp(-2.0 * live[k].u * P[j]);

    std::vector<std::vector<Cplx>> F(n, std::vector<Cplx>(nk));
    {
      std::vector<Cplx> cur(ntheta, Cplx(1.0, 0.0));
      for (int m = 0; m < n; ++m) {
        for (int k = 0; k < nk; ++k) {
          Cplx s = 0.0;
          const auto& Ek = E[k];
          for (int j = 0; j < ntheta; ++j) s += cur[j] * Ek[j];
          F[m][k] = s * (2.0 * M_PI / ntheta);
        }
        if (m + 1 < n)
          for (int j = 0; j < ntheta; ++j) cur[j] *= phase[j];
      }
    }

    HermMatrix M(n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        double s = double(a + b + 2) / double(r);
        int m = b - a;
        const auto& Fm = F[std::abs(m)];
        Cplx acc = 0.0;
        for (int k = 0; k < nk; ++k) {
          double lu = std::log(live[k].u);
          double g = (s - 1.0) * lu;
          Cplx fm = (m >= 0) ? Fm[k] : std::conj(Fm[k]);
          if (g < 600.0) {
            acc += fm * std::exp(g) * live[k].w;
          } else {
            double am = std::abs(fm);
            if (am == 0.0) continue;
            double lt = g + std::log(am) + std::log(live[k].w);
            if (lt > 700.0) throw NumericError("build_moments: moment overflow");
            acc += (fm / am) * std::exp(lt);
          }
        }
        M.at(a, b) = acc / double(r);
      }
    }
    // Hermitian symmetry enforced by averaging with the conjugate transpose.
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        Cplx v = 0.5 * (M.at(a, b) + std::conj(M.at(b, a)));
        M.at(a, b) = v;
        M.at(b, a) = std::conj(v);
      }

    if (have_prev) {
      double scale = 0.0, diff = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          scale = std::max(scale, std::abs(M.at(a, b)));
          diff = std::max(diff, std::abs(M.at(a, b) - prev.at(a, b)));
        }
      if (diff <= std::max(spec.tol, 1e-14 * scale)) {
        out.M = M;
        out.levels_used = level - spec.base_level + 1;
        out.error_estimate = diff;
        return out;
      }
    }
    prev = M;
    have_prev = true;
  }
  throw NumericError("build_moments: quadrature did not converge");
}

// Truncated reproducing-kernel representation of the model kernel for the
// weight e^{-2 t p}:  B(z, w) = e^{-t p(z) - t p(w)} vhat(z)^T N^{-1}
// conj(vhat(w)), with N the diagonally normalized moment matrix and
// vhat_a(z) = z^a / sqrt(M[a][a]).
struct KernelModel {
  BiPoly p;
  double tscale = 1.0;
  int r = 2;
  int dmax = 0;
  QuadSpec spec;
  MomentMatrix moments;        // at dmax (kept for inspection/tests)
  std::vector<double> dnorm;   // sqrt of the moment diagonal, size dmax+9
  HermMatrix cholL;            // Cholesky of normalized N at dmax+8
  double condition = 0.0;      // estimate for the dmax-block
  double validated_radius = 0.0;

  int extended_dmax() const { return dmax + 8; }

  double weight_exponent(Cplx z) const { return tscale * p.eval(z, std::conj(z)).real(); }
};

namespace detail {

inline std::vector<Cplx> scaled_monomials(const KernelModel& km, Cplx z, int n, int order) {
  std::vector<Cplx> v(n, Cplx(0.0));
  for (int a = order; a < n; ++a) {
    Cplx t = falling(a, order);
    for (int e = 0; e < a - order; ++e) t *= z;
    v[a] = t / km.dnorm[a];
  }
  return v;
}

// vhat(z)^T N^{-1} conj(vhat(w)) truncated to the leading nxn block of the
// extended Cholesky factor (the leading block of a Cholesky factor is the
// factor of the leading block).
inline Cplx normalized_form(const KernelModel& km, const std::vector<Cplx>& vz,
                            const std::vector<Cplx>& vw_conj, int n) {
  HermMatrix Ltrunc;
  const HermMatrix* L = &km.cholL;
  std::vector<Cplx> rhs = vw_conj;
  if (n != km.cholL.n) {
    Ltrunc.n = n;
    Ltrunc.a.resize(size_t(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) Ltrunc.at(i, j) = km.cholL.at(i, j);
    L = &Ltrunc;
  }
  std::vector<Cplx> y = cholesky_solve(*L, std::move(rhs));
  Cplx acc = 0.0;
  for (int i = 0; i < n; ++i) acc += vz[i] * y[i];
  return acc;
}

}  // namespace detail

inline Cplx kernel_eval_truncated(const KernelModel& km, Cplx z, Cplx w, int n) {
  std::vector<Cplx> vz = detail::scaled_monomials(km, z, n, 0);
  std::vector<Cplx> vw = detail::scaled_monomials(km, w, n, 0);
  for (auto& c : vw) c = std::conj(c);
  Cplx form = detail::normalized_form(km, vz, vw, n);
  double ex = -km.weight_exponent(z) - km.weight_exponent(w);
  return std::exp(ex) * form;
}

inline Cplx kernel_eval(const KernelModel& km, Cplx z, Cplx w) {
  return kernel_eval_truncated(km, z, w, km.dmax + 1);
}

inline bool in_validated_radius(const KernelModel& km, Cplx z, Cplx w) {
  return std::abs(z) <= km.validated_radius && std::abs(w) <= km.validated_radius;
}

inline KernelModel build_kernel_model(const BiPoly& p, int dmax = 40, const QuadSpec& spec = {},
                                      double tscale = 1.0) {
  auto rep = admissible_weight_check(p);
  if (!rep.admissible())
    throw DomainError("build_kernel_model: weight not admissible (" + rep.summary() + ")");

  KernelModel km;
  km.p = p;
  km.tscale = tscale;
  km.r = rep.degree;
  km.dmax = dmax;
  km.spec = spec;

  MomentMatrix ext = build_moments(p, dmax + 8, spec, tscale);
  const int ne = dmax + 9;
  km.dnorm.resize(ne);
  for (int a = 0; a < ne; ++a) {
    double d = ext.M.at(a, a).real();
    if (!(d > 0.0)) throw NumericError("build_kernel_model: nonpositive moment diagonal");
    km.dnorm[a] = std::sqrt(d);
  }
  HermMatrix N(ne);
  for (int a = 0; a < ne; ++a)
    for (int b = 0; b < ne; ++b)
      N.at(a, b) = ext.M.at(a, b) / (km.dnorm[a] * km.dnorm[b]);
  km.cholL = cholesky(N);

  {
    HermMatrix Ld;
    Ld.n = dmax + 1;
    Ld.a.resize(size_t(dmax + 1) * (dmax + 1));
    for (int i = 0; i <= dmax; ++i)
      for (int j = 0; j <= dmax; ++j) Ld.at(i, j) = km.cholL.at(i, j);
    km.condition = cholesky_condition_estimate(Ld);
  }

  km.moments.dmax = dmax;
  km.moments.tscale = tscale;
  km.moments.levels_used = ext.levels_used;
  km.moments.error_estimate = ext.error_estimate;
  km.moments.M.n = dmax + 1;
  km.moments.M.a.resize(size_t(dmax + 1) * (dmax + 1));
  for (int a = 0; a <= dmax; ++a)
    for (int b = 0; b <= dmax; ++b) km.moments.M.at(a, b) = ext.M.at(a, b);

  // Validated radius: largest |z| at which adding 8 basis elements moves the
  // diagonal by less than 1e-8 relative, scanned over two rays.
  double radius = 0.0;
  for (double rad = 0.05; rad <= 4.0 + 1e-9; rad += 0.05) {
    bool ok = true;
    for (double th : {0.0, M_PI / 4.0}) {
      Cplx z = std::polar(rad, th);
      Cplx bd = kernel_eval_truncated(km, z, z, dmax + 1);
      Cplx be = kernel_eval_truncated(km, z, z, dmax + 9);
      if (!(be.real() > 0.0) ||
          std::abs(bd - be) > 1e-8 * std::max(std::abs(be), 1e-300)) {
        ok = false;
        break;
      }
    }
    if (!ok) break;
    radius = rad;
  }
  km.validated_radius = radius;
  return km;
}

// ---------------------------------------------------------------------------
// Closed form for monomial weights p = (c/2)(z zbar)^{r/2} (finite gamma sums
// plus the incomplete gamma); independent of the moment/quadrature route.
// ---------------------------------------------------------------------------

inline Cplx monomial_kernel(double c, int r, Cplx z, Cplx w) {
  if (!(c > 0.0) || r < 2 || r % 2 != 0)
    throw DomainError("monomial_kernel: need c > 0 and even r >= 2");
  const int s = r / 2;
  const double c2r = std::pow(c, 2.0 / r);
  Cplx x = c2r * z * std::conj(w);
  Cplx u = Cplx(1.0, 0.0);
  for (int i = 0; i < s; ++i) u *= x;  // u = x^{r/2}

  double pz = 0.5 * c * std::pow(std::abs(z), double(r));
  double pw = 0.5 * c * std::pow(std::abs(w), double(r));

  Cplx first = 0.0;
  {
    Cplx xn = 1.0;
    for (int a = 0; a < s; ++a) {
      first += xn / gamma_fn(2.0 * (a + 1) / double(r));
      xn *= x;
    }
  }
  Cplx psum = 0.0;
  for (int a = 0; a < s; ++a) psum += reg_lower_gamma(2.0 * (a + 1) / double(r), u);

  Cplx xpow = 1.0;
  for (int i = 0; i < s - 1; ++i) xpow *= x;

  // e^{u} is folded into the weight factor so large diagonal arguments stay
  // finite: Re(u) <= p(z) + p(w).
  Cplx second = xpow * std::exp(u - pz - pw) * psum;
  Cplx firstw = std::exp(Cplx(-pz - pw)) * first;
  return (r * c2r / (2.0 * M_PI)) * (firstw + second);
}

// Diagonal kernel + Wirtinger derivatives seen by the transform layer.
struct DiagKernel {
  virtual ~DiagKernel() = default;
  virtual Cplx diag_derivative(int a1, int a2, Cplx z) const = 0;
  virtual double delta_p(Cplx z) const = 0;  // Laplacian of the weight = 4q
  virtual double max_radius() const = 0;
  Cplx diag_value(Cplx z) const { return diag_derivative(0, 0, z); }
};

namespace detail {

// Assembles d_z^{a1} d_zbar^{a2} [ e^{-2tp} S(z, zbar) ] by the exact
// product rule, with S-slot derivatives supplied by `sab`.
template <class SAB>
Cplx assemble_diag_derivative(int a1, int a2, Cplx z, const CPoly& tp, SAB&& sab) {
  if (a1 < 0 || a2 < 0 || a1 + a2 > 4)
    throw DomainError("diag_derivative: order must satisfy a1 + a2 <= 4");
  auto G = weight_cofactors(tp);
  Cplx zb = std::conj(z);
  Cplx acc = 0.0;
  for (int j = 0; j <= a1; ++j)
    for (int k = 0; k <= a2; ++k) {
      Cplx g = G[j][k].eval(z, zb);
      if (g == Cplx(0.0)) continue;
      acc += binom(a1, j) * binom(a2, k) * g * sab(a1 - j, a2 - k);
    }
  double ex = -2.0 * tp.eval(z, zb).real();
  return std::exp(ex) * acc;
}

}  // namespace detail

struct KernelModelDiag : DiagKernel {
  const KernelModel* km;
  explicit KernelModelDiag(const KernelModel& m) : km(&m) {}

  Cplx diag_derivative(int a1, int a2, Cplx z) const override {
    const int n = km->dmax + 1;
    std::array<std::optional<std::vector<Cplx>>, 5> solved;
    auto sab = [&](int a, int b) -> Cplx {
      if (!solved[b]) {
        std::vector<Cplx> vb = detail::scaled_monomials(*km, z, n, b);
        for (auto& c : vb) c = std::conj(c);
        HermMatrix Ld;
        Ld.n = n;
        Ld.a.resize(size_t(n) * n);
        for (int i = 0; i < n; ++i)
          for (int j2 = 0; j2 < n; ++j2) Ld.at(i, j2) = km->cholL.at(i, j2);
        solved[b] = cholesky_solve(Ld, std::move(vb));
      }
      std::vector<Cplx> va = detail::scaled_monomials(*km, z, n, a);
      Cplx acc = 0.0;
      for (int i = 0; i < n; ++i) acc += va[i] * (*solved[b])[i];
      return acc;
    };
    detail::CPoly tp = detail::CPoly::from(km->p, km->tscale);
    return detail::assemble_diag_derivative(a1, a2, z, tp, sab);
  }

  double delta_p(Cplx z) const override {
    BiPoly q = km->p.d_z().d_w();
    return 4.0 * km->tscale * q.eval(z, std::conj(z)).real();
  }
  double max_radius() const override { return km->validated_radius; }
};

// Monomial weight with exact diagonal moments (Thm-4.3 normalization),
// truncated adaptively; shares the derivative assembly with the numeric path.
struct MonomialModel : DiagKernel {
  double c;
  int r;
  int max_terms;

  MonomialModel(double c_, int r_, int max_terms_ = 4000)
      : c(c_), r(r_), max_terms(max_terms_) {
    if (!(c > 0.0) || r < 2 || r % 2 != 0)
      throw DomainError("MonomialModel: need c > 0 and even r >= 2");
  }

  // n_alpha = (r / 2pi) c^{2(alpha+1)/r} / Gamma(2(alpha+1)/r), computed in
  // log space for large alpha.
  double log_nalpha(int alpha) const {
    double a = 2.0 * (alpha + 1) / double(r);
    return std::log(r / (2.0 * M_PI)) + a * std::log(c) - std::lgamma(a);
  }

  Cplx diag_derivative(int a1, int a2, Cplx z) const override {
    auto sab = [&](int a, int b) -> Cplx {
      Cplx zb = std::conj(z);
      double lz = (std::abs(z) > 0.0) ? std::log(std::abs(z)) : -1e300;
      Cplx acc = 0.0;
      double peak = -1e300;
      for (int alpha = std::max(a, b); alpha < max_terms; ++alpha) {
        double lmag = log_nalpha(alpha) + (2.0 * alpha - a - b) * lz;
        if (lmag < peak - 46.0 && alpha > std::max(a, b) + 8) break;
        peak = std::max(peak, lmag);
        double coef = detail::falling(alpha, a) * detail::falling(alpha, b);
        if (coef == 0.0) continue;
        Cplx zpow = 1.0, zbpow = 1.0;
        for (int e = 0; e < alpha - a; ++e) zpow *= z;
        for (int e = 0; e < alpha - b; ++e) zbpow *= zb;
        acc += coef * std::exp(log_nalpha(alpha)) * zpow * zbpow;
      }
      return acc;
    };
    detail::CPoly tp;
    tp.terms[{r / 2, r / 2}] = 0.5 * c;
    return detail::assemble_diag_derivative(a1, a2, z, tp, sab);
  }

  double delta_p(Cplx z) const override {
    // q = (c r^2 / 8) |z|^{r-2}; Delta p = 4q.
    return 0.5 * c * r * r * std::pow(std::abs(z), double(r - 2));
  }
  double max_radius() const override { return 1e9; }
};

// Scaling law residual  |B_p(t^{1/r} z, t^{1/r} w) - t^{-2/r} B_{tp}(z, w)|
// relative to |B_{tp}(z, w)|.
inline double scaling_residual(double t, Cplx z, Cplx w, const KernelModel& km_base,
                               const KernelModel& km_scaled) {
  int r = km_base.r;
  double dil = std::pow(t, 1.0 / r);
  Cplx lhs = kernel_eval(km_base, dil * z, dil * w);
  Cplx rhs = kernel_eval(km_scaled, z, w);
  return std::abs(lhs - std::pow(t, -2.0 / r) * rhs) / std::abs(rhs);
}

// ---------------------------------------------------------------------------
// Localized variational evaluation of the diagonal B_{tp}(z0, z0).
//
// The global moment representation cannot reach large t at points away from
// the weight's symmetry axis: evaluating through the monomial Gram needs
// ~exp(c t) cancellation (the normalized moment matrix acquires condition
// exp(c t)).  Instead maximize |f(z0)|^2 / ||f||^2 over the span of
//   f_j(w) = ((w - z0)/sigma)^j exp(2 t p(w, conj z0)),   j < n,
// the leading peak-section family; then B_{tp}(z0,z0) = (G^{-1})_00 with
// G_jk = int (s^j chi)(conj s^k chi) dA and chi = exp(2t h - t p - t p0),
// |chi| = e^{-t Phi} <= bounded, Phi the polarization defect of p at z0.
// Homogeneous even weights satisfy p(-w) = p(w), so the basis is projected
// onto even/odd parity to keep the Gram well-scaled when Phi(-z0) is small.
// The result is a variational lower bound converging in n; it is validated
// against the closed form for monomial weights and against the moment route
// at small t.
// ---------------------------------------------------------------------------

struct LocalOpts {
  int n0 = 10;
  int nmax = 22;
  double reltol = 1e-9;
  double grid_res = 2.5;   // nodes per sigma
  double log_cut = 55.0;   // active-region threshold on 2 t Phi
};

namespace detail {

struct LocalGrid {
  double rho_lo, rho_hi;
  int npanels, ntheta;
};

// 10-point Gauss-Legendre nodes/weights on (-1, 1).
inline const std::array<std::pair<double, double>, 10>& gl10() {
  static const std::array<std::pair<double, double>, 10> nw = {{
      {-0.9739065285171717, 0.0666713443086881},
      {-0.8650633666889845, 0.1494513491505806},
      {-0.6794095682990244, 0.2190863625159820},
      {-0.4333953941292472, 0.2692667193099963},
      {-0.1488743389816312, 0.2955242247147529},
      {0.1488743389816312, 0.2955242247147529},
      {0.4333953941292472, 0.2692667193099963},
      {0.6794095682990244, 0.2190863625159820},
      {0.8650633666889845, 0.1494513491505806},
      {0.9739065285171717, 0.0666713443086881},
  }};
  return nw;
}

inline double phi_at(const BiPoly& p, Cplx w, Cplx z0, double p0) {
  double pw = p.eval(w, std::conj(w)).real();
  Cplx hw = p.eval(w, std::conj(z0));
  return pw + p0 - 2.0 * hw.real();
}

inline LocalGrid plan_local_grid(const BiPoly& p, double t, Cplx z0, double p0, double sigma,
                                 int nmax, const LocalOpts& opts) {
  double R0 = std::max(2.2 * std::abs(z0) + 40.0 * sigma, 60.0 * sigma);
  int ncoarse = 900;
  double dr = R0 / ncoarse;
  double lo = -1.0, hi = -1.0;
  for (int i = 0; i <= ncoarse; ++i) {
    double rho = i * dr;
    double dmin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 360; ++j) {
      Cplx w = std::polar(std::max(rho, 1e-12), 2.0 * M_PI * j / 360.0);
      dmin = std::min(dmin, 2.0 * t * phi_at(p, w, z0, p0));
    }
    double reach = 2.0 * nmax * std::log1p((rho + std::abs(z0)) / sigma);
    if (dmin <= opts.log_cut + reach) {
      if (lo < 0) lo = rho;
      hi = rho;
    }
  }
  if (lo < 0) throw NumericError("local diagonal: active region not found");
  LocalGrid g;
  g.rho_lo = std::max(0.0, lo - 4.0 * sigma);
  g.rho_hi = hi + 4.0 * sigma;
  double step = sigma / opts.grid_res;
  // Gauss-Legendre panels of width ~sigma radially; the theta rule is
  // periodic trapezoid (spectral).
  g.npanels = std::min(800, std::max(8, int((g.rho_hi - g.rho_lo) / sigma) + 1));
  g.ntheta = std::min(8000, std::max(64, int(2.0 * M_PI * g.rho_hi / step) + 1));
  return g;
}

}  // namespace detail

inline double diag_value_local(const BiPoly& p, double t, Cplx z0, const LocalOpts& opts = {}) {
  auto rep = admissible_weight_check(p);
  if (!rep.admissible())
    throw DomainError("diag_value_local: weight not admissible (" + rep.summary() + ")");
  BiPoly q = p.d_z().d_w();
  double q0 = q.eval(z0, std::conj(z0)).real();
  if (!(q0 > 0.0)) throw DomainError("diag_value_local: q(z0) must be positive");

  double p0 = p.eval(z0, std::conj(z0)).real();
  double sigma = 1.0 / std::sqrt(4.0 * t * q0);
  Cplx mu = std::exp(2.0 * t * (p.eval(-z0, std::conj(z0)) - p0));  // |mu| <= e^{-t Phi(-z0)}

  detail::LocalGrid grid = detail::plan_local_grid(p, t, z0, p0, sigma, opts.nmax, opts);
  double panel_w = (grid.rho_hi - grid.rho_lo) / grid.npanels;
  double dth = 2.0 * M_PI / grid.ntheta;

  std::vector<std::pair<double, double>> rnodes;  // (rho, radial weight)
  rnodes.reserve(size_t(grid.npanels) * 10);
  for (int pi = 0; pi < grid.npanels; ++pi) {
    double c0 = grid.rho_lo + (pi + 0.5) * panel_w;
    for (const auto& [x, wq] : detail::gl10())
      rnodes.emplace_back(c0 + 0.5 * panel_w * x, 0.5 * panel_w * wq);
  }

  const int nmax = opts.nmax;
  // Accumulate the direct and cross Grams at the largest basis size; smaller
  // sizes are leading subblocks.
  std::vector<std::vector<Cplx>> Gdir(nmax, std::vector<Cplx>(nmax, Cplx(0.0)));
  std::vector<std::vector<Cplx>> Gcross(nmax, std::vector<Cplx>(nmax, Cplx(0.0)));
  std::vector<Cplx> a(nmax), b(nmax);

  for (const auto& [rho, rw] : rnodes) {
    double wgt = rho * rw * dth;
    for (int j = 0; j < grid.ntheta; ++j) {
      Cplx w = std::polar(rho, dth * j);
      Cplx wb = std::conj(w);
      double pw = p.eval(w, wb).real();
      Cplx hw = p.eval(w, std::conj(z0));
      Cplx hmw = p.eval(-w, std::conj(z0));
      Cplx xi = 2.0 * t * hw - t * pw - t * p0;
      Cplx xim = 2.0 * t * hmw - t * pw - t * p0;  // p(-w) = p(w) for even weights
      if (xi.real() < -60.0 && xim.real() < -60.0) continue;
      Cplx chi = (xi.real() > -300.0) ? std::exp(xi) : Cplx(0.0);
      Cplx chim = (xim.real() > -300.0) ? std::exp(xim) : Cplx(0.0);
      Cplx s = (w - z0) / sigma;
      Cplx sm = (-w - z0) / sigma;
      Cplx sp = chi, smp = chim;
      for (int k = 0; k < nmax; ++k) {
        a[k] = sp;
        b[k] = smp;
        sp *= s;
        smp *= sm;
      }
      for (int k = 0; k < nmax; ++k) {
        Cplx ak = std::conj(a[k]) * wgt;
        for (int l = 0; l < nmax; ++l) {
          Gdir[l][k] += a[l] * ak;
          Gcross[l][k] += b[l] * ak;
        }
      }
    }
  }

  auto value_at = [&](int n) -> double {
    double total = 0.0;
    for (int parity = 0; parity < 2; ++parity) {
      double sgn = parity == 0 ? 1.0 : -1.0;
      HermMatrix G(n);
      std::vector<Cplx> v(n);
      bool nontrivial = false;
      for (int l = 0; l < n; ++l) {
        Cplx m2z = 1.0;
        for (int e = 0; e < l; ++e) m2z *= (-2.0 * z0 / sigma);
        v[l] = 0.5 * ((l == 0 ? Cplx(1.0) : Cplx(0.0)) + sgn * m2z * mu);
        if (std::abs(v[l]) > 1e-300) nontrivial = true;
        for (int k = 0; k < n; ++k)
          G.at(l, k) = 0.5 * (Gdir[l][k] + sgn * Gcross[l][k]);
      }
      if (!nontrivial) continue;
      // Normalize; evaluate the quadratic form through a spectral
      // pseudo-inverse.  Discarding near-null directions (quadrature noise
      // in the nearly parallel far-lobe columns) keeps the value a
      // variational lower bound.
      std::vector<double> d(n);
      for (int i = 0; i < n; ++i) d[i] = std::sqrt(std::max(G.at(i, i).real(), 1e-300));
      HermMatrix Nn(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Nn.at(i, j) = G.at(i, j) / (d[i] * d[j]);
      std::vector<Cplx> vn(n);
      for (int i = 0; i < n; ++i) vn[i] = v[i] / d[i];
      total += psd_pinv_quadform(Nn, vn, 1e-12);
    }
    return total;
  };

  double prev = 0.0;
  bool have_prev = false;
  for (int n = opts.n0; n <= nmax; n += 4) {
    double val = value_at(n);
    if (have_prev && std::abs(val - prev) <= std::max(opts.reltol, 1e-8) * std::abs(val))
      return val;
    prev = val;
    have_prev = true;
  }
  double val = value_at(nmax);
  if (std::abs(val - prev) <= 1e-6 * std::abs(val)) return val;
  throw NumericError("diag_value_local: basis did not converge");
}

// ---------------------------------------------------------------------------
// t-grid extraction of expansion coefficients: least squares for
// (b_0 ... b_{n-1}) from 2 pi B_{tp}(z, z) / t against powers of 1/t.
// ---------------------------------------------------------------------------

struct ExpansionFit {
  std::vector<double> b;
  std::vector<double> t_grid;
  std::vector<double> values;   // 2 pi B / t samples
  std::vector<double> fitted;
  double residual_norm = 0.0;
  double condition = 0.0;       // Vandermonde-in-1/t condition number
  bool ill_conditioned = false;
};

inline std::vector<double> log_spaced_grid(double tmin, double tmax, int count) {
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i)
    g[i] = tmin * std::pow(tmax / tmin, count > 1 ? double(i) / (count - 1) : 0.0);
  return g;
}

inline ExpansionFit fit_expansion(const BiPoly& p, Cplx z, const std::vector<double>& t_grid,
                                  int n_terms, const LocalOpts& opts = {}) {
  if (int(t_grid.size()) < n_terms + 2)
    throw DomainError("fit_expansion: need at least n_terms + 2 grid points");
  double tmin = *std::min_element(t_grid.begin(), t_grid.end());
  double tmax = *std::max_element(t_grid.begin(), t_grid.end());
  if (!(tmin > 0.0)) throw DomainError("fit_expansion: t must be positive");
  if (tmax / tmin < 9.99) throw DomainError("fit_expansion: grid must span at least a decade");

  ExpansionFit fit;
  fit.t_grid = t_grid;
  fit.values.reserve(t_grid.size());
  for (double t : t_grid)
    fit.values.push_back(2.0 * M_PI * diag_value_local(p, t, z, opts) / t);

  std::vector<std::vector<double>> A(t_grid.size(), std::vector<double>(n_terms));
  for (size_t i = 0; i < t_grid.size(); ++i) {
    double x = 1.0 / t_grid[i];
    double pw = 1.0;
    for (int j = 0; j < n_terms; ++j) {
      A[i][j] = pw;
      pw *= x;
    }
  }
  LstSqResult ls = least_squares(A, fit.values);
  fit.b = ls.x;
  fit.residual_norm = ls.residual_norm;
  fit.condition = ls.condition;
  fit.ill_conditioned = ls.condition > 1e8;
  fit.fitted.resize(t_grid.size());
  for (size_t i = 0; i < t_grid.size(); ++i) {
    double acc = 0.0, pw = 1.0;
    for (int j = 0; j < n_terms; ++j) {
      acc += ls.x[j] * pw;
      pw /= t_grid[i];
    }
    fit.fitted[i] = acc;
  }
  return fit;
}

}  // namespace bergman

#endif
