#ifndef BERGMAN_BIPOLY_HPP
#define BERGMAN_BIPOLY_HPP

#include <complex>
#include <map>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "bergman/rational.hpp"

namespace bergman {

// Exact bivariate polynomial in z (holomorphic slot) and w (antiholomorphic
// placeholder), coefficients in Q(i).  Stored sparse; zero coefficients are
// never kept, so the zero polynomial has an empty term map.
class BiPoly {
 public:
  using Key = std::pair<int, int>;  // (z exponent, w exponent)
  using TermMap = std::map<Key, GaussianRational>;

  BiPoly() = default;

  static BiPoly constant(GaussianRational c) {
    BiPoly p;
    p.add_term(0, 0, std::move(c));
    return p;
  }
  static BiPoly monomial(int i, int j, GaussianRational c = GaussianRational(1)) {
    BiPoly p;
    p.add_term(i, j, std::move(c));
    return p;
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  GaussianRational coeff(int i, int j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? GaussianRational() : it->second;
  }

  void add_term(int i, int j, GaussianRational c) {
    if (i < 0 || j < 0) throw DomainError("BiPoly: negative exponent");
    auto it = terms_.find({i, j});
    if (it == terms_.end()) {
      if (!c.is_zero()) terms_.emplace(Key{i, j}, std::move(c));
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  int degree() const {  // total degree; -1 for the zero polynomial
    int d = -1;
    for (const auto& [k, c] : terms_) d = std::max(d, k.first + k.second);
    return d;
  }

  friend BiPoly operator+(const BiPoly& a, const BiPoly& b) {
    BiPoly r = a;
    for (const auto& [k, c] : b.terms_) r.add_term(k.first, k.second, c);
    return r;
  }
  friend BiPoly operator-(const BiPoly& a, const BiPoly& b) {
    BiPoly r = a;
    for (const auto& [k, c] : b.terms_) r.add_term(k.first, k.second, -c);
    return r;
  }
  friend BiPoly operator-(const BiPoly& a) {
    BiPoly r;
    for (const auto& [k, c] : a.terms_) r.terms_.emplace(k, -c);
    return r;
  }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    BiPoly r;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_)
        r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
    return r;
  }
  friend BiPoly operator*(const GaussianRational& s, const BiPoly& a) {
    BiPoly r;
    if (s.is_zero()) return r;
    for (const auto& [k, c] : a.terms_) r.terms_.emplace(k, s * c);
    return r;
  }

  friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

  BiPoly pow(long e) const {
    if (e < 0) throw DomainError("BiPoly: negative exponent");
    BiPoly acc = constant(GaussianRational(1)), base = *this;
    while (e > 0) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  // Formal Wirtinger partials of the complexified polynomial.
  BiPoly d_z() const {
    BiPoly r;
    for (const auto& [k, c] : terms_)
      if (k.first > 0) r.add_term(k.first - 1, k.second, GaussianRational(k.first) * c);
    return r;
  }
  BiPoly d_w() const {
    BiPoly r;
    for (const auto& [k, c] : terms_)
      if (k.second > 0) r.add_term(k.first, k.second - 1, GaussianRational(k.second) * c);
    return r;
  }

  // f*(z,w) = conj-transpose: coefficient (i,j) -> conj(coeff(j,i)).
  // f is Hermitian iff f* == f.
  BiPoly conj_transpose() const {
    BiPoly r;
    for (const auto& [k, c] : terms_) r.add_term(k.second, k.first, c.conj());
    return r;
  }

  bool is_hermitian() const { return conj_transpose() == *this; }

  std::optional<int> homogeneous_degree_opt() const {
    if (terms_.empty()) throw DomainError("homogeneous_degree: zero polynomial");
    int d = terms_.begin()->first.first + terms_.begin()->first.second;
    for (const auto& [k, c] : terms_)
      if (k.first + k.second != d) return std::nullopt;
    return d;
  }

  GaussianRational eval_exact(const GaussianRational& z, const GaussianRational& w) const {
    GaussianRational acc;
    for (const auto& [k, c] : terms_) acc += c * z.pow(k.first) * w.pow(k.second);
    return acc;
  }

  std::complex<double> eval(std::complex<double> z, std::complex<double> w) const {
    // Powers built incrementally over the (sorted) sparse terms.
    std::complex<double> acc = 0.0;
    for (const auto& [k, c] : terms_) {
      std::complex<double> t = c.to_complex();
      for (int a = 0; a < k.first; ++a) t *= z;
      for (int b = 0; b < k.second; ++b) t *= w;
      acc += t;
    }
    return acc;
  }

  // Real value p(z, conj z); throws if the imaginary part is not negligible.
  double eval_diag(std::complex<double> z) const {
    std::complex<double> v = eval(z, std::conj(z));
    return v.real();
  }

  // Fourier coefficients of theta -> f(e^{i theta}, e^{-i theta}):
  // mode m collects all terms with i - j == m.  Exact.
  std::map<int, GaussianRational> circle_fourier() const {
    std::map<int, GaussianRational> f;
    for (const auto& [k, c] : terms_) {
      auto [it, inserted] = f.emplace(k.first - k.second, c);
      if (!inserted) it->second += c;
    }
    for (auto it = f.begin(); it != f.end();)
      it = it->second.is_zero() ? f.erase(it) : std::next(it);
    return f;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c.to_string() << ")";
      if (k.first) os << "*z^" << k.first;
      if (k.second) os << "*w^" << k.second;
    }
    return os.str();
  }

 private:
  TermMap terms_;
};

inline BiPoly wirtinger_d(const BiPoly& f, char var) {
  if (var == 'z') return f.d_z();
  if (var == 'w') return f.d_w();
  throw DomainError("wirtinger_d: variable must be 'z' or 'w'");
}

}  // namespace bergman

#endif
