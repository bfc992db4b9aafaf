#include "wbmld/rational.hpp"

#include <cctype>
#include <ostream>
#include <sstream>

#include "wbmld/errors.hpp"

namespace wbmld {

ParseError::ParseError(const std::string& msg, int line, int column)
    : Error(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg
                     : (column > 0 ? "column " + std::to_string(column) + ": " + msg : msg)),
      detail_(msg),
      line_(line),
      column_(column) {}

Rational::Rational(long num, long den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational::Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

static bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  bool neg = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    neg = text.front() == '-';
    text.remove_prefix(1);
  }
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) throw ParseError("malformed rational '" + std::string(text) + "'");
  mpz_class n{std::string(num)}, d{std::string(den)};
  if (d == 0) throw ParseError("rational with zero denominator");
  mpq_class q(n, d);
  q.canonicalize();
  if (neg) q = -q;
  return Rational(q);
}

long Rational::to_long() const {
  if (!is_integer() || !q_.get_num().fits_slong_p()) throw DomainError("rational " + str() + " is not a machine integer");
  return q_.get_num().get_si();
}

std::string Rational::str() const { return q_.get_num().get_str() + "/" + q_.get_den().get_str(); }

std::string Rational::decimal(int digits) const {
  std::ostringstream os;
  os.precision(digits);
  os << q_.get_d();
  return os.str();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DomainError("division by zero rational");
  q_ /= o.q_;
  return *this;
}

Rational Rational::inverse() const {
  if (is_zero()) throw DomainError("inverse of zero");
  return Rational(mpq_class(1) / q_);
}

Rational Rational::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), q_.get_num().get_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(d.get_mpz_t(), q_.get_den().get_mpz_t(), static_cast<unsigned long>(e));
  return Rational(mpq_class(n, d));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace wbmld
