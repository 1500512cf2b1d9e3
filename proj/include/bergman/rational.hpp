#ifndef BERGMAN_RATIONAL_HPP
#define BERGMAN_RATIONAL_HPP

#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace bergman {

using Rational = mpq_class;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input / precondition violations (CLI exit code 2).
struct DomainError : Error {
  using Error::Error;
};

// Quadrature non-convergence, conditioning failures (CLI exit code 3).
struct NumericError : Error {
  using Error::Error;
};

inline Rational rational_from_long(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

// "p/q" with the "/q" omitted when q == 1.
inline std::string rational_to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline double rational_to_double(const Rational& r) { return r.get_d(); }

// Complex number with exact rational real and imaginary parts.
// Field operations are exact; equality is decidable.
struct GaussianRational {
  Rational re = 0;
  Rational im = 0;

  GaussianRational() = default;
  GaussianRational(Rational r) : re(std::move(r)) {}
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(long n) : re(rational_from_long(n)) {}

  static GaussianRational i_unit() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  GaussianRational conj() const { return {re, -im}; }

  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    Rational n2 = b.re * b.re + b.im * b.im;
    if (n2 == 0) throw DomainError("GaussianRational: division by zero");
    return {(a.re * b.re + a.im * b.im) / n2, (a.im * b.re - a.re * b.im) / n2};
  }
  GaussianRational& operator+=(const GaussianRational& b) { return *this = *this + b; }
  GaussianRational& operator-=(const GaussianRational& b) { return *this = *this - b; }
  GaussianRational& operator*=(const GaussianRational& b) { return *this = *this * b; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  GaussianRational pow(long e) const {
    if (e < 0) throw DomainError("GaussianRational: negative exponent");
    GaussianRational acc(1), base = *this;
    while (e > 0) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }

  std::string to_string() const {
    if (im == 0) return rational_to_string(re);
    if (re == 0) return rational_to_string(im) + "*i";
    return rational_to_string(re) + (im > 0 ? "+" : "") + rational_to_string(im) + "*i";
  }
};

}  // namespace bergman

#endif
