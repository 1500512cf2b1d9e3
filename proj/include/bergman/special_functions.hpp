#ifndef BERGMAN_SPECIAL_FUNCTIONS_HPP
#define BERGMAN_SPECIAL_FUNCTIONS_HPP

#include <cmath>
#include <complex>
#include <limits>

#include "bergman/rational.hpp"

namespace bergman {

inline double gamma_fn(double a) {
  if (!(a > 0.0)) throw DomainError("gamma: argument must be positive");
  return std::tgamma(a);
}

inline double log_gamma(double a) {
  if (!(a > 0.0)) throw DomainError("log_gamma: argument must be positive");
  return std::lgamma(a);
}

namespace detail {

// Regularized lower incomplete gamma P(a,x) by power series (x < a+1).
inline double gser(double a, double x) {
  const double eps = std::numeric_limits<double>::epsilon();
  double ap = a, del = 1.0 / a, sum = del;
  for (int n = 0; n < 500; ++n) {
    ++ap;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * eps)
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw NumericError("incomplete gamma: series did not converge");
}

// Regularized upper incomplete gamma Q(a,x) by continued fraction (x >= a+1).
inline double gcf(double a, double x) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double fpmin = std::numeric_limits<double>::min() / eps;
  double b = x + 1.0 - a, c = 1.0 / fpmin, d = 1.0 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= eps)
      return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
  }
  throw NumericError("incomplete gamma: continued fraction did not converge");
}

}  // namespace detail

// Regularized P(a,x) = gamma_lower(a,x)/Gamma(a), series branch for x < a+1.
inline double reg_lower_gamma(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw DomainError("reg_lower_gamma: domain");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return detail::gser(a, x);
  return 1.0 - detail::gcf(a, x);
}

inline double reg_upper_gamma(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw DomainError("reg_upper_gamma: domain");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gser(a, x);
  return detail::gcf(a, x);
}

// Gamma(a,x) = int_x^inf t^{a-1} e^{-t} dt.
inline double upper_incomplete_gamma(double a, double x) {
  return gamma_fn(a) * reg_upper_gamma(a, x);
}

// Series branch only, for the internal split-consistency check.
inline double lower_incomplete_gamma_series(double a, double x) {
  if (x == 0.0) return 0.0;
  return gamma_fn(a) * detail::gser(a, x);
}

// Regularized lower incomplete gamma for complex argument with Re u > 0
// (or |u| small).  Series for moderate |u|, Lentz continued fraction for the
// upper part otherwise.  Used by the monomial-kernel G function, which only
// needs the sector Re(x^{r/2}) > 0.
inline std::complex<double> reg_lower_gamma(double a, std::complex<double> u) {
  using C = std::complex<double>;
  if (!(a > 0.0)) throw DomainError("reg_lower_gamma: a must be positive");
  if (u == C(0.0)) return 0.0;
  // The series is benign for moderate |u| regardless of phase; the continued
  // fraction needs the right half plane.
  if (u.real() <= 0.0 && std::abs(u) >= a + 28.0)
    throw DomainError("reg_lower_gamma: argument outside supported sector Re u > 0");

  if (std::abs(u) < a + 28.0) {
    C ap = a, del = C(1.0 / a), sum = del;
    for (int n = 0; n < 600; ++n) {
      ap += 1.0;
      del *= u / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-17)
        return sum * std::exp(-u + a * std::log(u) - std::lgamma(a));
    }
    throw NumericError("reg_lower_gamma: complex series did not converge");
  }

  const double eps = 1e-16;
  const double fpmin = 1e-300;
  C b = u + 1.0 - a, c = C(1.0 / fpmin), d = 1.0 / b, h = d;
  for (int i = 1; i <= 600; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    C del = d * c;
    h *= del;
    if (std::abs(del - 1.0) <= eps) {
      C q = std::exp(-u + a * std::log(u) - std::lgamma(a)) * h;
      return 1.0 - q;
    }
  }
  throw NumericError("reg_lower_gamma: complex continued fraction did not converge");
}

}  // namespace bergman

#endif
