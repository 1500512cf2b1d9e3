#ifndef BERGMAN_DIVISIBILITY_HPP
#define BERGMAN_DIVISIBILITY_HPP

#include <optional>
#include <utility>

#include "bergman/rational_fn.hpp"
#include "bergman/weight.hpp"

namespace bergman {

// f ~ D_a(k, lambda): f = (z + a w)^k * h with h(-a, 1) = lambda.
// For rational functions k may be negative; lambda = 0 encodes
// "divisible at least k times".
struct DivClass {
  GaussianRational a;
  long k = 0;
  GaussianRational lambda;

  friend bool operator==(const DivClass& x, const DivClass& y) {
    return x.a == y.a && x.k == y.k && x.lambda == y.lambda;
  }
};

namespace detail {

// Exact division of f by (z + a*w), treating f as a polynomial in z with
// coefficients in C[w] and running synthetic division at the root z = -a*w.
// Returns the quotient if the remainder vanishes identically.
inline std::optional<BiPoly> divide_once(const BiPoly& f, const GaussianRational& a) {
  int zdeg = 0;
  for (const auto& [k, c] : f.terms()) zdeg = std::max(zdeg, k.first);

  // c[i] : coefficient of z^i, a polynomial in w alone (map j -> coeff).
  std::vector<std::map<int, GaussianRational>> c(zdeg + 1);
  for (const auto& [k, co] : f.terms()) c[k.first][k.second] = co;

  // Horner with root -a*w: b_{i-1} = c_i + (-a w) * b_i going down.
  std::vector<std::map<int, GaussianRational>> b(zdeg + 1);
  std::map<int, GaussianRational> carry;  // (-a w) * b_i
  for (int i = zdeg; i >= 0; --i) {
    std::map<int, GaussianRational> bi = c[i];
    for (const auto& [j, co] : carry) {
      auto [it, ins] = bi.emplace(j, co);
      if (!ins) it->second += co;
    }
    for (auto it = bi.begin(); it != bi.end();)
      it = it->second.is_zero() ? bi.erase(it) : std::next(it);
    b[i] = bi;
    carry.clear();
    if (i > 0) {
      for (const auto& [j, co] : bi) carry[j + 1] = -a * co;
    }
  }
  if (!b[0].empty()) return std::nullopt;  // nonzero remainder

  BiPoly quot;
  for (int i = 1; i <= zdeg; ++i)
    for (const auto& [j, co] : b[i]) quot.add_term(i - 1, j, co);
  return quot;
}

}  // namespace detail

// Largest k with f = (z + a w)^k * cofactor, plus the cofactor.
// The zero polynomial is rejected: the definition presumes f != 0.
inline std::pair<long, BiPoly> multiplicity(const BiPoly& f, const GaussianRational& a) {
  if (f.is_zero()) throw DomainError("multiplicity: zero polynomial");
  long k = 0;
  BiPoly cur = f;
  while (true) {
    auto q = detail::divide_once(cur, a);
    if (!q) break;
    cur = *q;
    ++k;
  }
  return {k, cur};
}

inline DivClass div_class(const BiPoly& f, const GaussianRational& a) {
  auto [k, cof] = multiplicity(f, a);
  return {a, k, cof.eval_exact(-a, GaussianRational(1))};
}

inline DivClass div_class(const RationalFn& g, const GaussianRational& a) {
  if (g.num.is_zero()) throw DomainError("div_class: zero rational function");
  DivClass n = div_class(g.num, a);
  DivClass d = div_class(g.den, a);
  // Denominator cofactor value is nonzero by construction of multiplicity.
  return {a, n.k - d.k, n.lambda / d.lambda};
}

// Lemma: d_z g ~ D_a(k-1, k lambda); d_w g ~ D_a(k-1, a k lambda).
inline DivClass rule_derivative(const DivClass& c, char var) {
  GaussianRational kl = GaussianRational(c.k) * c.lambda;
  if (var == 'z') return {c.a, c.k - 1, kl};
  if (var == 'w') return {c.a, c.k - 1, c.a * kl};
  throw DomainError("rule_derivative: variable must be 'z' or 'w'");
}

enum class CombineOp { Mul, Add, Div };

// Product, sum and quotient rules for divisibility classes (same a).
inline DivClass rule_combine(const DivClass& c1, const DivClass& c2, CombineOp op) {
  if (c1.a != c2.a) throw DomainError("rule_combine: mismatched divisibility points");
  switch (op) {
    case CombineOp::Mul:
      return {c1.a, c1.k + c2.k, c1.lambda * c2.lambda};
    case CombineOp::Add:
      if (c1.k == c2.k) return {c1.a, c1.k, c1.lambda + c2.lambda};
      return c1.k < c2.k ? c1 : c2;
    case CombineOp::Div:
      if (c2.lambda.is_zero()) throw DomainError("rule_combine: division with lambda = 0");
      return {c1.a, c1.k - c2.k, c1.lambda / c2.lambda};
  }
  throw DomainError("rule_combine: bad op");
}

inline DivClass rule_scalar(const DivClass& c, const GaussianRational& s) {
  return {c.a, c.k, s * c.lambda};
}

namespace detail {

// num / q^k with the q-power tracked explicitly.  Keeps the b3 obstruction
// pipeline polynomial-sized: each derivative grows the numerator degree by
// deg(q) - 1 instead of squaring the denominator.
struct QPowFrac {
  BiPoly num;
  long k = 0;

  QPowFrac d(char var, const BiPoly& q) const {
    return {wirtinger_d(num, var) * q - GaussianRational(k) * (num * wirtinger_d(q, var)),
            k + 1};
  }
  QPowFrac over_q(long m = 1) const { return {num, k + m}; }
  friend QPowFrac operator*(const QPowFrac& a, const QPowFrac& b) {
    return {a.num * b.num, a.k + b.k};
  }
};

inline QPowFrac sub(const QPowFrac& a, const QPowFrac& b, const BiPoly& q) {
  long k = std::max(a.k, b.k);
  BiPoly na = a.num * q.pow(k - a.k);
  BiPoly nb = b.num * q.pow(k - b.k);
  return {na - nb, k};
}

}  // namespace detail

// Left side of the complexified b3 = 0 identity, as an exact rational
// function of (z, w):
//   [q^{-1} d_z d_w]^2 (q^{-3}Q) - q^{-4}Q [d_z d_w](q^{-3}Q)
//     - q^{-1} [d_w(q^{-3}Q)][d_z(q^{-3}Q)]
// with Q = q q_{zw} - q_z q_w computed from q.
inline RationalFn eqncomb3_lhs(const BiPoly& q) {
  if (q.is_zero()) throw DomainError("eqncomb3_lhs: q is zero");
  using detail::QPowFrac;
  BiPoly Q = q * q.d_z().d_w() - q.d_z() * q.d_w();

  QPowFrac S{Q, 3};                                   // q^{-3} Q
  QPowFrac LS = S.d('z', q).d('w', q);                // d_z d_w S
  QPowFrac U = LS.over_q();                           // q^{-1} d_z d_w S
  QPowFrac T1 = U.d('z', q).d('w', q).over_q();       // [q^{-1} d_z d_w]^2 S
  QPowFrac T2 = QPowFrac{Q, 4} * LS;                  // q^{-4} Q [d_z d_w] S
  QPowFrac T3 = (S.d('w', q) * S.d('z', q)).over_q(); // q^{-1}[d_w S][d_z S]

  QPowFrac lhs = detail::sub(detail::sub(T1, T2, q), T3, q);
  return RationalFn{lhs.num, q.pow(lhs.k)};
}

// T = -(a^3 k (k+2) / lambda^3) [k(k+2) + (k+3)(2k+4)(2k+5) + k(k+3)],
// the coefficient of D_a(-3k-6, T) for the left side above.
inline GaussianRational t_formula(const GaussianRational& a, long k,
                                  const GaussianRational& lambda) {
  if (lambda.is_zero()) throw DomainError("t_formula: lambda = 0");
  if (k < 1) throw DomainError("t_formula: k must be >= 1");
  GaussianRational kk(k);
  GaussianRational bracket = GaussianRational(k * (k + 2)) +
                             GaussianRational((k + 3) * (2 * k + 4) * (2 * k + 5)) +
                             GaussianRational(k * (k + 3));
  return -(a.pow(3) * GaussianRational(k * (k + 2)) / lambda.pow(3)) * bracket;
}

struct ObstructionCertificate {
  enum class Verdict { Monomial, Nonvanishing };
  Verdict verdict = Verdict::Monomial;

  // verdict == Monomial: q = c0 (z w)^m exactly.
  Rational c0;
  long m = 0;

  // verdict == Nonvanishing with a caller-supplied root a of q(.,1):
  bool has_witness = false;
  GaussianRational a;
  long k = 0;
  GaussianRational lambda;
  GaussianRational T;
  DivClass lhs_class;
};

// Exact dichotomy: either the complexified b3 obstruction vanishes
// identically (then q is certified to be c0 (z w)^m, c0 > 0) or it is a
// nonzero rational function; a witness class is attached when the caller
// supplies a Gaussian-rational root of q(., 1).
inline ObstructionCertificate obstruction_certificate(
    const BiPoly& q, std::optional<GaussianRational> hint_a = std::nullopt) {
  if (q.is_zero()) throw DomainError("obstruction_certificate: q is zero");
  if (!q.is_hermitian()) throw DomainError("obstruction_certificate: q not Hermitian");

  ObstructionCertificate cert;
  RationalFn lhs = eqncomb3_lhs(q);

  if (lhs.is_zero()) {
    cert.verdict = ObstructionCertificate::Verdict::Monomial;
    if (q.terms().size() != 1)
      throw NumericError("obstruction_certificate: vanishing obstruction but q not a monomial");
    const auto& [key, coeff] = *q.terms().begin();
    if (key.first != key.second)
      throw NumericError("obstruction_certificate: monomial q is not (z w)^m");
    if (!coeff.is_real() || coeff.re <= 0)
      throw DomainError("obstruction_certificate: monomial coefficient not a positive real");
    cert.c0 = coeff.re;
    cert.m = key.first;
    return cert;
  }

  cert.verdict = ObstructionCertificate::Verdict::Nonvanishing;
  if (hint_a && !hint_a->is_zero()) {
    auto [k, cof] = multiplicity(q, *hint_a);
    if (k == 0) throw DomainError("obstruction_certificate: hint_a is not a root of q");
    cert.has_witness = true;
    cert.a = *hint_a;
    cert.k = k;
    cert.lambda = cof.eval_exact(-*hint_a, GaussianRational(1));
    cert.T = t_formula(cert.a, cert.k, cert.lambda);
    cert.lhs_class = div_class(lhs, cert.a);
    if (cert.lhs_class.k != -3 * cert.k - 6 || cert.lhs_class.lambda != cert.T)
      throw NumericError("obstruction_certificate: witness class does not match T formula");
  }
  return cert;
}

}  // namespace bergman

#endif
