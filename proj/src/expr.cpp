#include "horolab/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

namespace horolab {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  ParsedNumber parse() {
    ParsedNumber v = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(Errc::invalid_argument, "cannot parse number '" + s_ + "': " + why);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static ParsedNumber combine(const ParsedNumber& a, const ParsedNumber& b, char op) {
    ParsedNumber r;
    switch (op) {
      case '+': r.value = a.value + b.value; break;
      case '-': r.value = a.value - b.value; break;
      case '*': r.value = a.value * b.value; break;
      default: r.value = a.value / b.value; break;
    }
    if (a.exact && b.exact) {
      switch (op) {
        case '+': r.exact = *a.exact + *b.exact; break;
        case '-': r.exact = *a.exact - *b.exact; break;
        case '*': r.exact = *a.exact * *b.exact; break;
        default:
          if (*b.exact == 0) throw Error(Errc::invalid_argument, "division by zero in literal");
          r.exact = *a.exact / *b.exact;
          r.value = static_cast<double>(*r.exact);
          break;
      }
      r.value = static_cast<double>(*r.exact);
    }
    return r;
  }

  ParsedNumber sum() {
    ParsedNumber v = product();
    while (true) {
      if (eat('+')) v = combine(v, product(), '+');
      else if (eat('-')) v = combine(v, product(), '-');
      else return v;
    }
  }

  ParsedNumber product() {
    ParsedNumber v = unary();
    while (true) {
      if (eat('*')) v = combine(v, unary(), '*');
      else if (eat('/')) v = combine(v, unary(), '/');
      else return v;
    }
  }

  ParsedNumber unary() {
    if (eat('-')) {
      ParsedNumber v = unary();
      v.value = -v.value;
      if (v.exact) v.exact = -*v.exact;
      return v;
    }
    if (eat('+')) return unary();
    return atom();
  }

  ParsedNumber atom() {
    skip();
    if (eat('(')) {
      ParsedNumber v = sum();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (s_.compare(pos_, 4, "sqrt") == 0) {
      pos_ += 4;
      if (!eat('(')) fail("expected '(' after sqrt");
      ParsedNumber v = sum();
      if (!eat(')')) fail("missing ')'");
      if (v.value < 0) fail("sqrt of a negative number");
      return ParsedNumber{std::sqrt(v.value), std::nullopt};
    }
    if (s_.compare(pos_, 2, "pi") == 0) {
      pos_ += 2;
      return ParsedNumber{std::numbers::pi, std::nullopt};
    }
    const std::size_t start = pos_;
    bool decimal = false;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      decimal = true;
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      decimal = true;
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      const std::size_t exp_start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (exp_start == pos_) fail("empty exponent");
    }
    const std::string tok = s_.substr(start, pos_ - start);
    if (tok.empty() || tok == ".") fail("expected a number");
    if (!decimal) return ParsedNumber{std::stod(tok), Rational(BigInt(tok))};
    return ParsedNumber{std::stod(tok), std::nullopt};
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

ParsedNumber parse_number(const std::string& text) { return Parser(text).parse(); }

}  // namespace horolab
