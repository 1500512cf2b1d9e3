#ifndef BERGMAN_EXPANSION_HPP
#define BERGMAN_EXPANSION_HPP

#include <array>

#include "bergman/divisibility.hpp"
#include "bergman/rational_fn.hpp"
#include "bergman/weight.hpp"

namespace bergman {

// First four diagonal expansion coefficients of the model kernel:
//   b0 = 4q
//   b1 = q^{-2} Q
//   b2 = (1/6) d_z d_w [q^{-3} Q]
//   b3 = (q/48) { [q^{-1} d_z d_w]^2 q^{-3}Q - q^{-4}Q [d_z d_w] q^{-3}Q
//                 - q^{-1}[d_w(q^{-3}Q)][d_z(q^{-3}Q)] }
// as exact objects over Q(i).
struct BCoeffs {
  BiPoly b0;
  RationalFn b1, b2, b3;
};

// Built through generic rational-function arithmetic; independent of the
// QPowFrac route used by eqncomb3_lhs, so the two can cross-check exactly.
// Requires a Hermitian homogeneous weight without pure terms; subharmonicity
// is not needed for the symbolic computation.
inline BCoeffs b_coeffs(const BiPoly& p) {
  WeightReport rep = admissible_weight_check(p, 64);
  if (!(rep.hermitian && rep.homogeneous && rep.no_pure_terms))
    throw DomainError("b_coeffs: weight must be Hermitian, homogeneous, with no pure terms (" +
                      rep.summary() + ")");
  auto [q, Q] = q_and_Q(p);
  if (q.is_zero()) throw DomainError("b_coeffs: harmonic weight (q = 0)");

  BCoeffs out;
  out.b0 = GaussianRational(4) * q;

  RationalFn rq{q};
  RationalFn S{Q, q.pow(3)};  // q^{-3} Q
  out.b1 = RationalFn{Q, q.pow(2)};

  RationalFn LS = S.d('z').d('w');
  out.b2 = GaussianRational(Rational(1, 6)) * LS;

  RationalFn U = LS / rq;
  RationalFn T1 = (U.d('z').d('w')) / rq;
  RationalFn T2 = RationalFn{Q, q.pow(4)} * LS;
  RationalFn T3 = (S.d('w') * S.d('z')) / rq;

  out.b3 = GaussianRational(Rational(1, 48)) * (rq * (T1 - T2 - T3));
  return out;
}

// Floating evaluation of (b0..b3) on the diagonal w = conj z.
inline std::array<std::complex<double>, 4> eval_b(const BCoeffs& c, std::complex<double> z,
                                                  double q_tol = 1e-12) {
  std::complex<double> w = std::conj(z);
  // b0 = 4q: use it to test the q != 0 precondition.
  std::complex<double> b0 = c.b0.eval(z, w);
  if (std::abs(b0) <= 4.0 * q_tol) throw DomainError("eval_b: evaluation at a zero of q");
  return {b0, c.b1.eval(z, w), c.b2.eval(z, w), c.b3.eval(z, w)};
}

// (48/q) b3 as a rational function; asserts exact agreement with the
// divisibility module's eqncomb3_lhs via cross-multiplication.
inline RationalFn b3_identity_bridge(const BiPoly& p) {
  auto [q, Q] = q_and_Q(p);
  if (q.is_zero()) throw DomainError("b3_identity_bridge: q = 0");
  BCoeffs c = b_coeffs(p);
  RationalFn bridged = GaussianRational(48) * (c.b3 / RationalFn{q});
  if (!(bridged == eqncomb3_lhs(q)))
    throw NumericError("b3_identity_bridge: (48/q) b3 != eqncomb3_lhs(q)");
  return bridged;
}

}  // namespace bergman

#endif
