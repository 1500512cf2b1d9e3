#include <gtest/gtest.h>

#include "bergman/expansion.hpp"
#include "bergman/parse.hpp"

using namespace bergman;

namespace {
GaussianRational gr(long n, long d = 1) { return GaussianRational(rational_from_long(n, d)); }
BiPoly eps_weight() { return parse_poly("(z*w)^2 + 1/4*(z^3*w + z*w^3)"); }
}  // namespace

TEST(BCoeffsTest, QuadraticWeight) {
  BCoeffs c = b_coeffs(parse_poly("3/2*z*w"));  // p = c/2 zw with c = 3
  EXPECT_EQ(c.b0, parse_poly("6"));
  EXPECT_TRUE(c.b1.is_zero());
  EXPECT_TRUE(c.b2.is_zero());
  EXPECT_TRUE(c.b3.is_zero());
}

TEST(BCoeffsTest, MonomialWeight) {
  BCoeffs c = b_coeffs(parse_poly("1/2*(z*w)^2"));
  EXPECT_EQ(c.b0, parse_poly("8*z*w"));
  EXPECT_TRUE(c.b1.is_zero());
  EXPECT_TRUE(c.b2.is_zero());
  EXPECT_TRUE(c.b3.is_zero());
}

TEST(BCoeffsTest, EpsilonExample) {
  BCoeffs c = b_coeffs(eps_weight());
  EXPECT_EQ(c.b1.eval_exact(gr(1), gr(1)), gr(-3, 11));
}

TEST(BCoeffsTest, HarmonicRejected) { EXPECT_THROW(b_coeffs(parse_poly("z*w - z*w")), DomainError); }

TEST(BCoeffsTest, B0Is4qExactly) {
  for (const char* s : {"1/2*(z*w)^2", "(z*w)^2 + 1/4*(z^3*w + z*w^3)", "z*w", "(z*w)^3"}) {
    BiPoly p = parse_poly(s);
    auto [q, Q] = q_and_Q(p);
    EXPECT_EQ(b_coeffs(p).b0, GaussianRational(4) * q) << s;
  }
}

TEST(BCoeffsTest, QZeroIffHigherCoeffsVanish) {
  for (const char* s : {"1/2*(z*w)^2", "5*z*w", "(z*w)^3", "7/3*(z*w)^2"}) {
    BCoeffs c = b_coeffs(parse_poly(s));
    EXPECT_TRUE(c.b1.is_zero() && c.b2.is_zero() && c.b3.is_zero()) << s;
  }
  for (const char* s : {"(z*w)^2 + 1/4*(z^3*w + z*w^3)", "(z*w)^2 + 1/8*(z^3*w + z*w^3)"}) {
    BCoeffs c = b_coeffs(parse_poly(s));
    EXPECT_FALSE(c.b1.is_zero()) << s;
    EXPECT_FALSE(c.b3.is_zero()) << s;
  }
}

TEST(EvalB, MonomialZeros) {
  BCoeffs c = b_coeffs(parse_poly("1/2*(z*w)^2"));
  auto v = eval_b(c, {0.7, 0.2});
  std::complex<double> z(0.7, 0.2);
  EXPECT_NEAR(v[0].real(), 8.0 * std::norm(z), 1e-12);
  EXPECT_NEAR(std::abs(v[1]), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(v[2]), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(v[3]), 0.0, 1e-14);
}

TEST(EvalB, EpsilonAtOne) {
  BCoeffs c = b_coeffs(eps_weight());
  auto v = eval_b(c, {1.0, 0.0});
  EXPECT_NEAR(v[0].real(), 22.0, 1e-10);
  EXPECT_NEAR(v[1].real(), -3.0 / 11.0, 1e-10);
  // Hermitian: imaginary parts negligible.
  for (auto x : v) EXPECT_LE(std::abs(x.imag()), 1e-10 * (1.0 + std::abs(x.real())));
}

TEST(EvalB, ZeroOfQRejected) {
  BCoeffs c = b_coeffs(parse_poly("1/2*(z*w)^2"));
  EXPECT_THROW(eval_b(c, {0.0, 0.0}), DomainError);
}

TEST(Bridge, MonomialAndQuadratic) {
  EXPECT_TRUE(b3_identity_bridge(parse_poly("1/2*(z*w)^2")).is_zero());
  EXPECT_TRUE(b3_identity_bridge(parse_poly("3/2*z*w")).is_zero());
}

TEST(Bridge, EpsilonExampleMatchesExactly) {
  RationalFn bridged = b3_identity_bridge(eps_weight());
  EXPECT_FALSE(bridged.is_zero());
  auto [q, Q] = q_and_Q(eps_weight());
  EXPECT_TRUE(bridged == eqncomb3_lhs(q));
}

TEST(Bridge, CorpusIdentity) {
  // (48/q) b3 == eqncomb3_lhs(q) across the weight corpus (exact).
  for (const char* s : {"1/2*(z*w)^2", "(z*w)^2 + 1/4*(z^3*w + z*w^3)", "z*w",
                        "(z*w)^2 + 1/8*(z^3*w + z*w^3)"}) {
    EXPECT_NO_THROW(b3_identity_bridge(parse_poly(s))) << s;
  }
}

TEST(Scaling, CoefficientsCovariant) {
  // p -> t p sends b_j -> t^{1-j} b_j (from B_{s(tp)} = B_{(st)p}).
  BiPoly p = eps_weight();
  GaussianRational t = gr(3, 2);
  BCoeffs c = b_coeffs(p);
  BCoeffs ct = b_coeffs(t * p);
  EXPECT_EQ(ct.b0, t * c.b0);
  EXPECT_TRUE(ct.b1 == c.b1);
  EXPECT_TRUE(ct.b2 == (gr(1) / t) * c.b2);
  EXPECT_TRUE(ct.b3 == (gr(1) / (t * t)) * c.b3);
}
