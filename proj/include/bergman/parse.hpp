#ifndef BERGMAN_PARSE_HPP
#define BERGMAN_PARSE_HPP

#include <cctype>
#include <string>

#include "bergman/bipoly.hpp"

namespace bergman {

struct ParseError : DomainError {
  size_t pos;
  ParseError(size_t p, const std::string& msg)
      : DomainError("parse error at position " + std::to_string(p) + ": " + msg), pos(p) {}
};

// Recursive-descent parser for the weight grammar:
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' uint)?
//   atom   := number | 'i' | 'z' | 'w' | '(' expr ')'
//   number := digits ('.' digits)? ('/' digits)?
// Decimal literals become exact rationals by their literal denominator.
class PolyParser {
 public:
  explicit PolyParser(std::string text) : s_(std::move(text)) {}

  BiPoly parse() {
    BiPoly e = expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError(pos_, "unexpected trailing input");
    return e;
  }

 private:
  static constexpr long kMaxExponent = 512;

  std::string s_;
  size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  char get() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError(pos_, "unexpected end of input");
    return s_[pos_++];
  }

  BiPoly expr() {
    int sign = 1;
    char c = peek();
    if (c == '+' || c == '-') {
      get();
      sign = (c == '-') ? -1 : 1;
    }
    BiPoly acc = GaussianRational(sign) * term();
    while (true) {
      c = peek();
      if (c == '+' || c == '-') {
        get();
        BiPoly t = term();
        acc = (c == '+') ? acc + t : acc - t;
      } else {
        break;
      }
    }
    return acc;
  }

  BiPoly term() {
    BiPoly acc = factor();
    while (peek() == '*') {
      get();
      acc = acc * factor();
    }
    return acc;
  }

  BiPoly factor() {
    BiPoly base = atom();
    if (peek() == '^') {
      get();
      long e = parse_uint("exponent");
      if (e > kMaxExponent) throw ParseError(pos_, "exponent overflow");
      base = base.pow(e);
    }
    return base;
  }

  BiPoly atom() {
    char c = peek();
    if (c == '(') {
      get();
      BiPoly e = expr();
      if (peek() != ')') throw ParseError(pos_, "expected ')'");
      get();
      return e;
    }
    if (c == 'z') {
      get();
      return BiPoly::monomial(1, 0);
    }
    if (c == 'w') {
      get();
      return BiPoly::monomial(0, 1);
    }
    if (c == 'i') {
      get();
      return BiPoly::constant(GaussianRational::i_unit());
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

  long parse_uint(const char* what) {
    skip_ws();
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) throw ParseError(pos_, std::string("expected ") + what);
    if (pos_ - start > 9) throw ParseError(start, "exponent overflow");
    return std::stol(s_.substr(start, pos_ - start));
  }

  BiPoly number() {
    skip_ws();
    size_t start = pos_;
    std::string intpart, fracpart;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      intpart += s_[pos_++];
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        fracpart += s_[pos_++];
      if (intpart.empty() && fracpart.empty())
        throw ParseError(start, "malformed decimal literal");
    }
    if (intpart.empty() && fracpart.empty()) throw ParseError(start, "expected number");

    Rational value;
    if (fracpart.empty()) {
      value = Rational(mpz_class(intpart.empty() ? "0" : intpart));
    } else {
      mpz_class num(intpart.empty() ? "0" : intpart);
      mpz_class frac(fracpart);
      mpz_class den = 1;
      for (size_t k = 0; k < fracpart.size(); ++k) den *= 10;
      value = Rational(num * den + frac, den);
      value.canonicalize();
    }

    // int '/' int rational literal (division only between numeric literals)
    if (peek() == '/') {
      if (!fracpart.empty()) throw ParseError(pos_, "decimal cannot take a '/' denominator");
      get();
      skip_ws();
      size_t dstart = pos_;
      std::string den;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        den += s_[pos_++];
      if (den.empty()) throw ParseError(dstart, "expected integer denominator");
      mpz_class d(den);
      if (d == 0) throw ParseError(dstart, "zero denominator");
      value /= Rational(d);
    }
    return BiPoly::constant(GaussianRational(value));
  }
};

inline BiPoly parse_poly(const std::string& text) { return PolyParser(text).parse(); }

}  // namespace bergman

#endif
