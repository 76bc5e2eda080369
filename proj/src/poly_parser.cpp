#include "tractorlab/poly_parser.hpp"

#include <cctype>
#include <string>

#include "tractorlab/errors.hpp"

namespace tractorlab {

namespace {

class Parser {
 public:
  Parser(std::string_view s, int n) : s_(s), n_(n) {}

  Poly parse() {
    Poly p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw SchemaError("polynomial syntax error at position " + std::to_string(pos_) + ": " + what);
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

  std::string digits() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return std::string(s_.substr(start, pos_ - start));
  }

  int small_int() {
    const std::string d = digits();
    if (d.size() > 4) fail("exponent too large");
    return std::stoi(d);
  }

  Poly expr() {
    Poly p = term();
    for (;;) {
      if (eat('+')) {
        p += term();
      } else if (eat('-')) {
        p -= term();
      } else {
        return p;
      }
    }
  }

  Poly term() {
    Poly p = unary();
    while (eat('*')) p = p * unary();
    return p;
  }

  Poly unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    Poly base = atom();
    if (eat('^')) base = base.pow(small_int());
    return base;
  }

  Poly atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (eat('(')) {
      Poly p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (c == '|') {
      ++pos_;
      if (!eat('x') || !eat('|')) fail("expected |x|");
      if (!eat('^') || small_int() != 2) fail("|x| is only supported as |x|^2");
      Poly r(n_);
      for (int i = 0; i < n_; ++i) r += Poly::variable(n_, i).pow(2);
      return r;
    }
    if (c == 'x') {
      ++pos_;
      const int i = small_int();
      if (i < 1 || i > n_) fail("variable x" + std::to_string(i) + " outside x1..x" + std::to_string(n_));
      return Poly::variable(n_, i - 1);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return Poly(n_, Rational(Integer(digits())));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(std::string_view text, int nvars) {
  if (nvars < 1 || nvars > kMaxVars) throw SchemaError("n must lie in [1, 8]");
  return Parser(text, nvars).parse();
}

}  // namespace tractorlab
