#include <gtest/gtest.h>

#include <random>

#include "bergman/linalg.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/special_functions.hpp"

using namespace bergman;

TEST(Gamma, KnownValues) {
  EXPECT_NEAR(gamma_fn(0.5), std::sqrt(M_PI), 1e-13 * std::sqrt(M_PI));
  EXPECT_NEAR(gamma_fn(3.0), 2.0, 1e-13 * 2.0);
  EXPECT_NEAR(gamma_fn(2.5), 3.0 * std::sqrt(M_PI) / 4.0, 1e-13 * 1.33);
  EXPECT_THROW(gamma_fn(0.0), DomainError);
  EXPECT_THROW(gamma_fn(-1.5), DomainError);
}

TEST(Gamma, RecurrenceOnGrid) {
  for (double a = 0.1; a <= 10.0; a += 0.1) {
    double lhs = gamma_fn(a + 1.0);
    double rhs = a * gamma_fn(a);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::fabs(rhs)) << "a=" << a;
  }
}

TEST(IncompleteGamma, KnownValues) {
  for (double x : {0.1, 0.7, 2.0, 9.0})
    EXPECT_NEAR(upper_incomplete_gamma(1.0, x), std::exp(-x), 1e-12 * std::exp(-x));
  for (double a : {0.5, 1.5, 4.0})
    EXPECT_NEAR(upper_incomplete_gamma(a, 0.0), gamma_fn(a), 1e-13 * gamma_fn(a));
  // High-precision quadrature oracle of the defining integral (frozen).
  EXPECT_NEAR(upper_incomplete_gamma(0.5, 1.0), 0.27880558528066197, 1e-12);
}

TEST(IncompleteGamma, SeriesPlusUpperIsGamma) {
  for (double a : {0.3, 0.5, 1.0, 2.5, 6.0}) {
    for (double x : {0.05, 0.3, 1.0, a + 0.9}) {
      double total = lower_incomplete_gamma_series(a, x) + upper_incomplete_gamma(a, x);
      EXPECT_NEAR(total, gamma_fn(a), 1e-11 * gamma_fn(a)) << "a=" << a << " x=" << x;
    }
  }
}

TEST(IncompleteGamma, ComplexMatchesRealOnAxis) {
  for (double a : {0.5, 1.0, 2.5}) {
    for (double x : {0.2, 1.0, 5.0, 40.0, 80.0}) {
      std::complex<double> p = reg_lower_gamma(a, std::complex<double>(x, 0.0));
      EXPECT_NEAR(p.real(), reg_lower_gamma(a, x), 1e-11) << "a=" << a << " x=" << x;
      EXPECT_NEAR(p.imag(), 0.0, 1e-12);
    }
  }
  // Moderate left-half-plane arguments go through the series; check against
  // the a = 1 closed form P(1, u) = 1 - e^{-u}.
  std::complex<double> u(-3.0, 0.1);
  std::complex<double> p = reg_lower_gamma(1.0, u);
  std::complex<double> closed = 1.0 - std::exp(-u);
  EXPECT_LE(std::abs(p - closed), 1e-12 * std::abs(closed));
  // Far outside the sector the routine refuses.
  EXPECT_THROW(reg_lower_gamma(1.0, std::complex<double>(-80.0, 0.1)), DomainError);
}

TEST(QuadSemiInf, Exponential) {
  auto r = quad_semiinf([](double s) { return std::exp(-s); });
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_LE(r.error_estimate, 1e-10);
}

TEST(QuadSemiInf, GammaThree) {
  auto r = quad_semiinf([](double s) { return std::exp(-s) * s * s; });
  EXPECT_NEAR(r.value, 2.0, 1e-12);
}

TEST(QuadSemiInf, GammaFiveHalves) {
  auto r = quad_semiinf([](double s) { return std::exp(-s) * std::pow(s, 1.5); });
  EXPECT_NEAR(r.value, gamma_fn(2.5), 1e-12);
}

TEST(QuadSemiInf, ReproducesGammaWithinEstimate) {
  for (double a : {0.5, 1.0, 2.5, 5.0}) {
    auto r = quad_semiinf([a](double s) { return std::exp(-s) * std::pow(s, a - 1.0); });
    EXPECT_LE(std::fabs(r.value - gamma_fn(a)), std::max(r.error_estimate, 1e-12))
        << "a=" << a;
  }
}

TEST(QuadSemiInf, ComplexIntegrand) {
  // int_0^inf e^{-s} e^{i s} ds = 1/(1 - i) = (1 + i)/2.
  auto r = quad_semiinf([](double s) {
    return std::exp(-s) * std::exp(std::complex<double>(0.0, s));
  });
  EXPECT_NEAR(r.value.real(), 0.5, 1e-10);
  EXPECT_NEAR(r.value.imag(), 0.5, 1e-10);
}

TEST(QuadSemiInf, NonConvergenceThrows) {
  QuadSpec spec;
  spec.tol = 1e-30;  // unattainable for a discontinuous integrand
  spec.max_levels = 2;
  EXPECT_THROW(
      quad_semiinf([](double s) { return s < 1.0 ? 1.0 / (1.0 + s * s) : 0.0; }, spec),
      NumericError);
}

TEST(QuadPeriodic, CosineSquared) {
  double v = quad_periodic([](double th) { return std::cos(th) * std::cos(th); }, 64);
  EXPECT_NEAR(v, M_PI, 1e-13);
}

TEST(QuadPeriodic, PureMode) {
  auto v = quad_periodic(
      [](double th) { return std::exp(std::complex<double>(0.0, 3.0 * th)); }, 64);
  EXPECT_NEAR(std::abs(v), 0.0, 1e-13);
}

TEST(Linalg, CholeskySolveRoundTrip) {
  std::mt19937 rng(31415);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 12;
  // A = B B^H + I is Hermitian positive definite.
  HermMatrix B(n), A(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B.at(i, j) = Cplx(u(rng), u(rng));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Cplx s = (i == j) ? Cplx(1.0) : Cplx(0.0);
      for (int k = 0; k < n; ++k) s += B.at(i, k) * std::conj(B.at(j, k));
      A.at(i, j) = s;
    }
  HermMatrix L = cholesky(A);
  std::vector<Cplx> x(n);
  for (int i = 0; i < n; ++i) x[i] = Cplx(u(rng), u(rng));
  std::vector<Cplx> b(n, Cplx(0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b[i] += A.at(i, j) * x[j];
  std::vector<Cplx> got = cholesky_solve(L, b);
  for (int i = 0; i < n; ++i) EXPECT_LE(std::abs(got[i] - x[i]), 1e-10);
}

TEST(Linalg, HermEigenReconstructs) {
  std::mt19937 rng(2718);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 8;
  HermMatrix A(n);
  for (int i = 0; i < n; ++i) {
    A.at(i, i) = u(rng);
    for (int j = i + 1; j < n; ++j) {
      A.at(i, j) = Cplx(u(rng), u(rng));
      A.at(j, i) = std::conj(A.at(i, j));
    }
  }
  HermEigen e = herm_eigen(A);
  // V diag(lambda) V^H == A entrywise.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Cplx s = 0.0;
      for (int k = 0; k < n; ++k)
        s += e.vectors.at(i, k) * e.values[k] * std::conj(e.vectors.at(j, k));
      EXPECT_LE(std::abs(s - A.at(i, j)), 1e-11) << i << "," << j;
    }
  // Orthonormal eigenvectors.
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Cplx dot = 0.0;
      for (int k = 0; k < n; ++k)
        dot += std::conj(e.vectors.at(k, a)) * e.vectors.at(k, b);
      EXPECT_LE(std::abs(dot - (a == b ? 1.0 : 0.0)), 1e-11);
    }
}

TEST(Linalg, LeastSquaresKnownSystem) {
  // y = 3 - 2x + 0.5 x^2 sampled exactly: residual 0, coefficients exact.
  std::vector<std::vector<double>> A;
  std::vector<double> y;
  for (double x : {0.1, 0.4, 0.9, 1.7, 2.4, 3.3}) {
    A.push_back({1.0, x, x * x});
    y.push_back(3.0 - 2.0 * x + 0.5 * x * x);
  }
  LstSqResult r = least_squares(A, y);
  EXPECT_NEAR(r.x[0], 3.0, 1e-12);
  EXPECT_NEAR(r.x[1], -2.0, 1e-12);
  EXPECT_NEAR(r.x[2], 0.5, 1e-12);
  EXPECT_LE(r.residual_norm, 1e-12);
  EXPECT_GE(r.condition, 1.0);
}

TEST(QuadPeriodic, BesselOracle) {
  // int_0^{2pi} e^{(3/2) cos 2t} dt = 2 pi I_0(3/2); series oracle summed directly.
  double x = 1.5;
  double i0 = 0.0, term = 1.0;
  for (int k = 0; k < 40; ++k) {
    if (k > 0) {
      term *= (x / 2.0) * (x / 2.0) / (double(k) * double(k));
    }
    i0 += term;
  }
  double v = quad_periodic([](double th) { return std::exp(1.5 * std::cos(2.0 * th)); }, 128);
  EXPECT_NEAR(v, 2.0 * M_PI * i0, 1e-11 * v);
}
