#include "wbmld/parse.hpp"

#include <cctype>

#include "wbmld/errors.hpp"

namespace wbmld {

int variable_index(std::string_view name, int nvars) {
  if (name.size() == 1) {
    int i = name[0] == 'x' ? 0 : name[0] == 'y' ? 1 : name[0] == 'z' ? 2 : -1;
    return i < nvars ? i : -1;
  }
  if (name.empty() || (name[0] != 'x' && name[0] != 'X')) return -1;
  std::string_view rest = name.substr(1);
  if (!rest.empty() && rest[0] == '_') rest.remove_prefix(1);
  if (rest.size() != 1 || !std::isdigit(static_cast<unsigned char>(rest[0]))) return -1;
  int i = rest[0] - '1';
  return (i >= 0 && i < nvars) ? i : -1;
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, int nvars) : s_(text), n_(nvars) {}

  Polynomial run() {
    skip();
    if (pos_ >= s_.size()) fail("empty polynomial");
    Polynomial p = expr();
    skip();
    if (pos_ < s_.size()) fail(std::string("unexpected character '") + s_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, 0, static_cast<int>(pos_) + 1); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      char c = peek();
      if (c == '+') {
        ++pos_;
        p += term();
      } else if (c == '-') {
        ++pos_;
        p -= term();
      } else {
        return p;
      }
    }
  }

  static bool starts_atom(char c) { return std::isalpha(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '('; }

  Polynomial term() {
    Polynomial p = unary();
    for (;;) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        p = p * unary();
      } else if (c == '/') {
        ++pos_;
        std::size_t at = pos_;
        Polynomial d = unary();
        if (!d.is_constant() || d.is_zero()) {
          pos_ = at;
          fail("division is only allowed by a nonzero constant");
        }
        p *= d.constant_term().inverse();
      } else if (starts_atom(c)) {
        p = p * unary();
      } else {
        return p;
      }
    }
  }

  Polynomial unary() {
    char c = peek();
    if (c == '-') {
      ++pos_;
      return -unary();
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  Polynomial power() {
    Polynomial base = atom();
    if (peek() == '^') {
      ++pos_;
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a nonnegative integer exponent");
      if (pos_ - start > 4) fail("exponent too large");
      return base.pow(std::stoi(std::string(s_.substr(start, pos_ - start))));
    }
    return base;
  }

  Polynomial atom() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Polynomial::constant(n_, Rational::parse(s_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string_view name = s_.substr(start, pos_ - start);
      int i = variable_index(name, n_);
      if (i < 0) {
        pos_ = start;
        fail("unknown variable '" + std::string(name) + "'");
      }
      return Polynomial::variable(n_, i);
    }
    if (c == '\0') fail("unexpected end of input");
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, int nvars) { return Parser(text, nvars).run(); }

}  // namespace wbmld
