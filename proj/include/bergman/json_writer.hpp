#ifndef BERGMAN_JSON_WRITER_HPP
#define BERGMAN_JSON_WRITER_HPP

#include <cstdio>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "bergman/rational.hpp"

namespace bergman {

// Minimal deterministic JSON document: insertion-ordered objects, floats
// rendered with 17 significant digits, exact rationals as "p/q" strings.
// Byte-stable for identical inputs by construction.
class JsonValue {
 public:
  using Ptr = std::shared_ptr<JsonValue>;

  static Ptr object() {
    auto v = std::make_shared<JsonValue>();
    v->kind_ = Kind::Object;
    return v;
  }
  static Ptr array() {
    auto v = std::make_shared<JsonValue>();
    v->kind_ = Kind::Array;
    return v;
  }
  static Ptr number(double d) {
    auto v = std::make_shared<JsonValue>();
    v->kind_ = Kind::Number;
    v->num_ = d;
    return v;
  }
  static Ptr integer(long long i) {
    auto v = std::make_shared<JsonValue>();
    v->kind_ = Kind::Integer;
    v->int_ = i;
    return v;
  }
  static Ptr string(std::string s) {
    auto v = std::make_shared<JsonValue>();
    v->kind_ = Kind::String;
    v->str_ = std::move(s);
    return v;
  }
  static Ptr boolean(bool b) {
    auto v = std::make_shared<JsonValue>();
    v->kind_ = Kind::Bool;
    v->bool_ = b;
    return v;
  }
  static Ptr null() { return std::make_shared<JsonValue>(); }
  static Ptr rational(const Rational& r) { return string(rational_to_string(r)); }

  JsonValue& set(const std::string& key, Ptr val) {
    members_.emplace_back(key, std::move(val));
    return *this;
  }
  JsonValue& push(Ptr val) {
    items_.push_back(std::move(val));
    return *this;
  }

  std::string dump() const {
    std::string out;
    write(out);
    out += "\n";
    return out;
  }

 private:
  enum class Kind { Null, Object, Array, Number, Integer, String, Bool };
  Kind kind_ = Kind::Null;
  double num_ = 0.0;
  long long int_ = 0;
  bool bool_ = false;
  std::string str_;
  std::vector<std::pair<std::string, Ptr>> members_;
  std::vector<Ptr> items_;

  static void escape(const std::string& s, std::string& out) {
    out += '"';
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
      }
    }
    out += '"';
  }

  void write(std::string& out) const {
    switch (kind_) {
      case Kind::Null:
        out += "null";
        break;
      case Kind::Bool:
        out += bool_ ? "true" : "false";
        break;
      case Kind::Integer: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%lld", int_);
        out += buf;
        break;
      }
      case Kind::Number: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", num_);
        out += buf;
        break;
      }
      case Kind::String:
        escape(str_, out);
        break;
      case Kind::Array: {
        out += '[';
        for (size_t i = 0; i < items_.size(); ++i) {
          if (i) out += ',';
          items_[i]->write(out);
        }
        out += ']';
        break;
      }
      case Kind::Object: {
        out += '{';
        for (size_t i = 0; i < members_.size(); ++i) {
          if (i) out += ',';
          escape(members_[i].first, out);
          out += ':';
          members_[i].second->write(out);
        }
        out += '}';
        break;
      }
    }
  }
};

inline std::string csv_cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace bergman

#endif
