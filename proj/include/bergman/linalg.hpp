#ifndef BERGMAN_LINALG_HPP
#define BERGMAN_LINALG_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "bergman/rational.hpp"

namespace bergman {

using Cplx = std::complex<double>;

// Dense Hermitian matrix stored row-major.
struct HermMatrix {
  int n = 0;
  std::vector<Cplx> a;

  HermMatrix() = default;
  explicit HermMatrix(int size) : n(size), a(size_t(size) * size, Cplx(0.0)) {}
  Cplx& at(int i, int j) { return a[size_t(i) * n + j]; }
  const Cplx& at(int i, int j) const { return a[size_t(i) * n + j]; }
};

// In-place lower Cholesky A = L L^H.  Throws NumericError on a non-positive
// pivot; no jitter is added, a failure is surfaced to the caller.
inline HermMatrix cholesky(const HermMatrix& A) {
  HermMatrix L(A.n);
  for (int i = 0; i < A.n; ++i) {
    for (int j = 0; j <= i; ++j) {
      Cplx s = A.at(i, j);
      for (int k = 0; k < j; ++k) s -= L.at(i, k) * std::conj(L.at(j, k));
      if (i == j) {
        double d = s.real();
        if (!(d > 0.0) || !std::isfinite(d))
          throw NumericError("cholesky: matrix not positive definite (pivot " +
                             std::to_string(i) + ")");
        L.at(i, i) = std::sqrt(d);
      } else {
        L.at(i, j) = s / L.at(j, j).real();
      }
    }
  }
  return L;
}

inline std::vector<Cplx> solve_lower(const HermMatrix& L, std::vector<Cplx> b) {
  for (int i = 0; i < L.n; ++i) {
    Cplx s = b[i];
    for (int k = 0; k < i; ++k) s -= L.at(i, k) * b[k];
    b[i] = s / L.at(i, i).real();
  }
  return b;
}

inline std::vector<Cplx> solve_upper_adjoint(const HermMatrix& L, std::vector<Cplx> b) {
  for (int i = L.n - 1; i >= 0; --i) {
    Cplx s = b[i];
    for (int k = i + 1; k < L.n; ++k) s -= std::conj(L.at(k, i)) * b[k];
    b[i] = s / L.at(i, i).real();
  }
  return b;
}

// Solve A x = b given the Cholesky factor of A.
inline std::vector<Cplx> cholesky_solve(const HermMatrix& L, std::vector<Cplx> b) {
  return solve_upper_adjoint(L, solve_lower(L, std::move(b)));
}

inline double cholesky_condition_estimate(const HermMatrix& L) {
  double mx = 0.0, mn = std::numeric_limits<double>::infinity();
  for (int i = 0; i < L.n; ++i) {
    double d = L.at(i, i).real();
    mx = std::max(mx, d);
    mn = std::min(mn, d);
  }
  double r = mx / mn;
  return r * r;
}

// Least squares min |A x - y| by Householder QR (column count is tiny).
// Also reports the 2-norm condition number of A via Jacobi eigenvalues of
// A^T A accumulated in long double.
struct LstSqResult {
  std::vector<double> x;
  double residual_norm = 0.0;
  double condition = 0.0;
};

inline LstSqResult least_squares(const std::vector<std::vector<double>>& A,
                                 const std::vector<double>& y) {
  int m = int(A.size());
  int n = m ? int(A[0].size()) : 0;
  if (m < n) throw DomainError("least_squares: underdetermined system");

  // Condition number from A^T A via cyclic Jacobi.
  std::vector<std::vector<long double>> G(n, std::vector<long double>(n, 0.0L));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      long double s = 0.0L;
      for (int k = 0; k < m; ++k) s += (long double)A[k][i] * (long double)A[k][j];
      G[i][j] = s;
    }
  for (int sweep = 0; sweep < 60; ++sweep) {
    long double off = 0.0L;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += G[p][q] * G[p][q];
    if (off < 1e-60L) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::fabs((double)G[p][q]) < 1e-300) continue;
        long double theta = (G[q][q] - G[p][p]) / (2.0L * G[p][q]);
        long double t = (theta >= 0 ? 1.0L : -1.0L) /
                        (std::fabs((double)theta) + std::sqrt((double)(theta * theta + 1.0L)));
        long double c = 1.0L / std::sqrt((double)(t * t + 1.0L)), s = t * c;
        for (int k = 0; k < n; ++k) {
          long double gpk = G[p][k], gqk = G[q][k];
          G[p][k] = c * gpk - s * gqk;
          G[q][k] = s * gpk + c * gqk;
        }
        for (int k = 0; k < n; ++k) {
          long double gkp = G[k][p], gkq = G[k][q];
          G[k][p] = c * gkp - s * gkq;
          G[k][q] = s * gkp + c * gkq;
        }
      }
  }
  long double lmax = 0.0L, lmin = std::numeric_limits<long double>::infinity();
  for (int i = 0; i < n; ++i) {
    long double l = std::max(G[i][i], 0.0L);
    lmax = std::max(lmax, l);
    lmin = std::min(lmin, l);
  }
  double cond = (lmin > 0.0L) ? std::sqrt((double)(lmax / lmin))
                              : std::numeric_limits<double>::infinity();

  // Householder QR in long double.
  std::vector<std::vector<long double>> R(m, std::vector<long double>(n));
  std::vector<long double> b(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) R[i][j] = A[i][j];
    b[i] = y[i];
  }
  for (int j = 0; j < n; ++j) {
    long double norm = 0.0L;
    for (int i = j; i < m; ++i) norm += R[i][j] * R[i][j];
    norm = std::sqrt((double)norm);
    if (norm == 0.0L) throw NumericError("least_squares: rank deficient");
    long double alpha = (R[j][j] > 0 ? -norm : norm);
    std::vector<long double> v(m, 0.0L);
    for (int i = j; i < m; ++i) v[i] = R[i][j];
    v[j] -= alpha;
    long double vnorm2 = 0.0L;
    for (int i = j; i < m; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 > 0.0L) {
      for (int k = j; k < n; ++k) {
        long double dot = 0.0L;
        for (int i = j; i < m; ++i) dot += v[i] * R[i][k];
        long double f = 2.0L * dot / vnorm2;
        for (int i = j; i < m; ++i) R[i][k] -= f * v[i];
      }
      long double dot = 0.0L;
      for (int i = j; i < m; ++i) dot += v[i] * b[i];
      long double f = 2.0L * dot / vnorm2;
      for (int i = j; i < m; ++i) b[i] -= f * v[i];
    }
  }
  LstSqResult out;
  out.x.resize(n);
  std::vector<long double> x(n);
  for (int i = n - 1; i >= 0; --i) {
    long double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= R[i][k] * x[k];
    x[i] = s / R[i][i];
  }
  long double rn = 0.0L;
  for (int i = n; i < m; ++i) rn += b[i] * b[i];
  out.residual_norm = std::sqrt((double)rn);
  for (int i = 0; i < n; ++i) out.x[i] = (double)x[i];
  out.condition = cond;
  return out;
}

// Cyclic Jacobi eigendecomposition of a Hermitian matrix (small n).
// Returns eigenvalues and accumulates eigenvectors in columns of V.
struct HermEigen {
  std::vector<double> values;
  HermMatrix vectors;  // column j is the eigenvector for values[j]
};

inline HermEigen herm_eigen(HermMatrix A) {
  const int n = A.n;
  HermMatrix V(n);
  for (int i = 0; i < n; ++i) V.at(i, i) = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::norm(A.at(p, q));
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        Cplx apq = A.at(p, q);
        double mag = std::abs(apq);
        if (mag < 1e-300) continue;
        // Unitary 2x2 rotation diag(1, e^{-i phi}) * Givens(theta).
        Cplx phase = apq / mag;
        double app = A.at(p, p).real(), aqq = A.at(q, q).real();
        double tau = (aqq - app) / (2.0 * mag);
        double tt = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + tt * tt), s = tt * c;
        Cplx sp = s * phase;
        for (int k = 0; k < n; ++k) {
          Cplx akp = A.at(k, p), akq = A.at(k, q);
          A.at(k, p) = c * akp - std::conj(sp) * akq;
          A.at(k, q) = sp * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          Cplx apk = A.at(p, k), aqk = A.at(q, k);
          A.at(p, k) = c * apk - sp * aqk;
          A.at(q, k) = std::conj(sp) * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          Cplx vkp = V.at(k, p), vkq = V.at(k, q);
          V.at(k, p) = c * vkp - std::conj(sp) * vkq;
          V.at(k, q) = sp * vkp + c * vkq;
        }
      }
  }
  HermEigen e;
  e.values.resize(n);
  for (int i = 0; i < n; ++i) e.values[i] = A.at(i, i).real();
  e.vectors = std::move(V);
  return e;
}

// v^H pinv(A) v for Hermitian PSD A with a relative spectral cutoff;
// directions below cutoff * max eigenvalue are discarded.
inline double psd_pinv_quadform(const HermMatrix& A, const std::vector<Cplx>& v,
                                double rel_cutoff = 1e-13) {
  HermEigen e = herm_eigen(A);
  double lmax = 0.0;
  for (double l : e.values) lmax = std::max(lmax, l);
  if (!(lmax > 0.0)) return 0.0;
  double acc = 0.0;
  for (int j = 0; j < A.n; ++j) {
    if (e.values[j] <= rel_cutoff * lmax) continue;
    Cplx proj = 0.0;
    for (int i = 0; i < A.n; ++i) proj += std::conj(e.vectors.at(i, j)) * v[i];
    acc += std::norm(proj) / e.values[j];
  }
  return acc;
}

inline Cplx det3(const Cplx m[3][3]) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace bergman

#endif
