#ifndef BERGMAN_RATIONAL_FN_HPP
#define BERGMAN_RATIONAL_FN_HPP

#include "bergman/bipoly.hpp"

namespace bergman {

// Quotient of two BiPoly, kept unreduced (no multivariate gcd).  Equality
// and zero tests go through cross-multiplication, which is exact.
struct RationalFn {
  BiPoly num;
  BiPoly den = BiPoly::constant(GaussianRational(1));

  RationalFn() = default;
  RationalFn(BiPoly n) : num(std::move(n)) {}
  RationalFn(BiPoly n, BiPoly d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) throw DomainError("RationalFn: zero denominator");
  }

  bool is_zero() const { return num.is_zero(); }

  friend RationalFn operator+(const RationalFn& a, const RationalFn& b) {
    return {a.num * b.den + b.num * a.den, a.den * b.den};
  }
  friend RationalFn operator-(const RationalFn& a, const RationalFn& b) {
    return {a.num * b.den - b.num * a.den, a.den * b.den};
  }
  friend RationalFn operator-(const RationalFn& a) { return {-a.num, a.den}; }
  friend RationalFn operator*(const RationalFn& a, const RationalFn& b) {
    return {a.num * b.num, a.den * b.den};
  }
  friend RationalFn operator*(const GaussianRational& s, const RationalFn& a) {
    return {s * a.num, a.den};
  }
  friend RationalFn operator/(const RationalFn& a, const RationalFn& b) {
    if (b.num.is_zero()) throw DomainError("RationalFn: division by zero function");
    return {a.num * b.den, a.den * b.num};
  }

  // Cross-multiplied equality: num1*den2 - num2*den1 == 0.
  friend bool operator==(const RationalFn& a, const RationalFn& b) {
    return (a.num * b.den - b.num * a.den).is_zero();
  }
  friend bool operator!=(const RationalFn& a, const RationalFn& b) { return !(a == b); }

  // Quotient rule, unreduced.
  RationalFn d(char var) const {
    BiPoly dn = wirtinger_d(num, var);
    BiPoly dd = wirtinger_d(den, var);
    return {dn * den - num * dd, den * den};
  }

  GaussianRational eval_exact(const GaussianRational& z, const GaussianRational& w) const {
    GaussianRational d = den.eval_exact(z, w);
    if (d.is_zero()) throw DomainError("RationalFn: evaluation at a pole");
    return num.eval_exact(z, w) / d;
  }

  std::complex<double> eval(std::complex<double> z, std::complex<double> w,
                            double pole_tol = 0.0) const {
    std::complex<double> d = den.eval(z, w);
    if (std::abs(d) <= pole_tol) throw DomainError("RationalFn: evaluation at a pole");
    return num.eval(z, w) / d;
  }
};

inline RationalFn rf_d(const RationalFn& g, char var) { return g.d(var); }

}  // namespace bergman

#endif
