#include "wbmld/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "wbmld/errors.hpp"

namespace wbmld {

ExponentVector::ExponentVector(std::initializer_list<int> e) {
  if (e.size() > kMaxVars) throw DomainError("too many exponents");
  int i = 0;
  for (int v : e) {
    if (v < 0) throw DomainError("negative exponent");
    e_[i++] = v;
  }
}

bool ExponentVector::divides(const ExponentVector& o) const {
  for (int i = 0; i < kMaxVars; ++i)
    if (e_[i] > o.e_[i]) return false;
  return true;
}

ExponentVector operator+(ExponentVector a, const ExponentVector& b) {
  for (int i = 0; i < kMaxVars; ++i) a.e_[i] += b.e_[i];
  return a;
}

ExponentVector operator-(ExponentVector a, const ExponentVector& b) {
  for (int i = 0; i < kMaxVars; ++i) {
    a.e_[i] -= b.e_[i];
    if (a.e_[i] < 0) throw DomainError("exponent subtraction below zero");
  }
  return a;
}

ExponentVector ExponentVector::unit(int var) {
  ExponentVector e;
  e[var] = 1;
  return e;
}

bool GrlexLess::operator()(const ExponentVector& a, const ExponentVector& b) const {
  int da = a.total_degree(), db = b.total_degree();
  if (da != db) return da < db;
  for (int i = 0; i < kMaxVars; ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

static void check_nvars(int n) {
  if (n < 1 || n > kMaxVars) throw DomainError("unsupported number of variables: " + std::to_string(n));
}

Polynomial::Polynomial(int nvars) : nvars_(nvars) { check_nvars(nvars); }

Polynomial Polynomial::constant(int nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(ExponentVector{}, c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
  if (index < 0 || index >= nvars) throw DomainError("variable index out of range");
  return monomial(nvars, ExponentVector::unit(index));
}

Polynomial Polynomial::monomial(int nvars, const ExponentVector& e, const Rational& c) {
  Polynomial p(nvars);
  for (int i = nvars; i < kMaxVars; ++i)
    if (e[i] != 0) throw DomainError("monomial uses a variable outside the ring");
  p.add_term(e, c);
  return p;
}

bool Polynomial::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_zero()); }

Rational Polynomial::constant_term() const { return coefficient(ExponentVector{}); }

Rational Polynomial::coefficient(const ExponentVector& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::total_degree() const {
  if (terms_.empty()) throw DomainError("degree of the zero polynomial");
  return terms_.rbegin()->first.total_degree();
}

int Polynomial::lowest_degree() const {
  if (terms_.empty()) throw DomainError("order of the zero polynomial");
  return terms_.begin()->first.total_degree();
}

int Polynomial::degree_in(int var) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

int Polynomial::min_degree_in(int var) const {
  if (terms_.empty()) throw DomainError("order of the zero polynomial");
  int d = terms_.begin()->first[var];
  for (const auto& [e, c] : terms_) d = std::min(d, e[var]);
  return d;
}

bool Polynomial::involves(int var) const { return degree_in(var) > 0; }

const std::pair<const ExponentVector, Rational>& Polynomial::leading_term() const {
  if (terms_.empty()) throw DomainError("leading term of the zero polynomial");
  return *terms_.rbegin();
}

void Polynomial::add_term(const ExponentVector& e, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

static void check_same_ring(const Polynomial& a, const Polynomial& b) {
  if (a.nvars() != b.nvars()) throw DomainError("polynomials live in different rings");
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_same_ring(*this, o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_same_ring(*this, o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  check_same_ring(a, b);
  Polynomial r(a.nvars());
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

bool operator==(const Polynomial& a, const Polynomial& b) { return a.nvars_ == b.nvars_ && a.terms_ == b.terms_; }

Polynomial Polynomial::pow(int e) const {
  if (e < 0) throw DomainError("negative polynomial power");
  Polynomial result = constant(nvars_, 1);
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    ExponentVector d = e;
    d[var] -= 1;
    r.add_term(d, c * Rational(e[var]));
  }
  return r;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  if (static_cast<int>(point.size()) != nvars_) throw DomainError("evaluation point has wrong dimension");
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < nvars_; ++i)
      if (e[i]) t *= point[i].pow(e[i]);
    sum += t;
  }
  return sum;
}

Polynomial Polynomial::substitute(std::span<const Polynomial> images) const {
  if (static_cast<int>(images.size()) != nvars_) throw DomainError("substitution has wrong number of images");
  int target = images[0].nvars();
  for (const auto& im : images)
    if (im.nvars() != target) throw DomainError("substitution images live in different rings");
  std::vector<std::vector<Polynomial>> powers(nvars_);
  for (int i = 0; i < nvars_; ++i) powers[i].push_back(constant(target, 1));
  auto power = [&](int i, int k) -> const Polynomial& {
    while (static_cast<int>(powers[i].size()) <= k) powers[i].push_back(powers[i].back() * images[i]);
    return powers[i][k];
  };
  Polynomial r(target);
  for (const auto& [e, c] : terms_) {
    Polynomial t = constant(target, c);
    for (int i = 0; i < nvars_; ++i)
      if (e[i]) t = t * power(i, e[i]);
    r += t;
  }
  return r;
}

Polynomial Polynomial::substitute_var(int var, const Polynomial& image) const {
  auto images = identity_images(nvars_);
  images[var] = image;
  return substitute(images);
}

std::vector<Polynomial> Polynomial::coefficients_in(int var) const {
  std::vector<Polynomial> out(degree_in(var) + 1, Polynomial(nvars_));
  for (const auto& [e, c] : terms_) {
    ExponentVector r = e;
    int k = r[var];
    r[var] = 0;
    out[k].add_term(r, c);
  }
  return out;
}

Polynomial Polynomial::from_coefficients(int nvars, const std::vector<Polynomial>& coeffs, int var) {
  Polynomial r(nvars);
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    for (const auto& [e, c] : coeffs[k].terms_) {
      ExponentVector x = e;
      x[var] += static_cast<int>(k);
      r.add_term(x, c);
    }
  return r;
}

Polynomial Polynomial::homogeneous_part(int d) const {
  Polynomial r(nvars_);
  for (const auto& [e, c] : terms_)
    if (e.total_degree() == d) r.terms_.emplace(e, c);
  return r;
}

Polynomial Polynomial::with_nvars(int nvars) const {
  Polynomial r(nvars);
  for (const auto& [e, c] : terms_) {
    for (int i = nvars; i < kMaxVars; ++i)
      if (e[i] != 0) throw DomainError("polynomial uses a variable outside the target ring");
    r.terms_.emplace(e, c);
  }
  return r;
}

Polynomial Polynomial::monic() const {
  if (terms_.empty()) return *this;
  return *this * leading_term().second.inverse();
}

std::vector<std::string> Polynomial::variable_names(int nvars) {
  std::vector<std::string> names;
  for (int i = 0; i < nvars; ++i) names.push_back("x" + std::to_string(i + 1));
  return names;
}

std::string Polynomial::str() const {
  auto names = variable_names(nvars_);
  return str(names);
}

std::string Polynomial::str(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    bool neg = c.sign() < 0;
    Rational a = c.abs();
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (int i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[i];
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    std::string coef = a.is_integer() ? a.numerator().get_str() : a.str();
    if (mono.empty())
      out += coef;
    else if (a == Rational(1))
      out += mono;
    else
      out += coef + "*" + mono;
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.str(); }

Weight::Weight(std::vector<int> entries) : w_(std::move(entries)) {
  if (w_.empty() || static_cast<int>(w_.size()) > kMaxVars) throw DomainError("weight has unsupported length");
  for (int v : w_)
    if (v <= 0) throw DomainError("weight entries must be positive");
}

int Weight::sum() const { return std::accumulate(w_.begin(), w_.end(), 0); }
int Weight::min() const { return *std::min_element(w_.begin(), w_.end()); }
int Weight::max() const { return *std::max_element(w_.begin(), w_.end()); }

int Weight::gcd() const {
  int g = 0;
  for (int v : w_) g = std::gcd(g, v);
  return g;
}

int Weight::dot(const ExponentVector& e) const {
  int s = 0;
  for (int i = 0; i < size(); ++i) s += w_[i] * e[i];
  return s;
}

std::string Weight::str() const {
  std::string s = "(";
  for (int i = 0; i < size(); ++i) {
    if (i) s += ",";
    s += std::to_string(w_[i]);
  }
  return s + ")";
}

RealIdeal::RealIdeal(int nvars, std::vector<IdealFactor> factors) : nvars_(nvars) {
  check_nvars(nvars);
  for (auto& f : factors) add_factor(std::move(f.generators), f.exponent);
}

void RealIdeal::add_factor(std::vector<Polynomial> generators, const Rational& exponent) {
  if (generators.empty()) throw DomainError("ideal factor without generators");
  if (exponent.sign() <= 0) throw DomainError("ideal exponents must be positive");
  bool nonzero = false;
  for (const auto& g : generators) {
    if (g.nvars() != nvars_) throw DomainError("generator lives in a ring of the wrong dimension");
    nonzero = nonzero || !g.is_zero();
  }
  if (!nonzero) throw DomainError("ideal factor is the zero ideal");
  std::vector<Polynomial> kept;
  for (auto& g : generators)
    if (!g.is_zero()) kept.push_back(std::move(g));
  factors_.push_back({std::move(kept), exponent});
}

RealIdeal RealIdeal::scaled(const Rational& t) const {
  RealIdeal r = *this;
  for (auto& f : r.factors_) f.exponent *= t;
  return r;
}

RealIdeal RealIdeal::substitute(std::span<const Polynomial> images) const {
  RealIdeal r(images.empty() ? nvars_ : images[0].nvars());
  for (const auto& f : factors_) {
    std::vector<Polynomial> gens;
    for (const auto& g : f.generators) gens.push_back(g.substitute(images));
    r.add_factor(std::move(gens), f.exponent);
  }
  return r;
}

std::string RealIdeal::str() const {
  std::string s;
  for (const auto& f : factors_) {
    if (!s.empty()) s += " * ";
    s += "(";
    for (std::size_t i = 0; i < f.generators.size(); ++i) {
      if (i) s += ", ";
      s += f.generators[i].str();
    }
    s += ")^" + f.exponent.str();
  }
  return s.empty() ? "(1)" : s;
}

static void check_weight(const Polynomial& f, const Weight& w) {
  if (w.size() != f.nvars()) throw DomainError("weight length does not match the number of variables");
}

int weighted_order(const Polynomial& f, const Weight& w) {
  check_weight(f, w);
  if (f.is_zero()) throw DomainError("weighted order of the zero polynomial is undefined");
  int best = -1;
  for (const auto& [e, c] : f.terms()) {
    int d = w.dot(e);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

int weighted_degree(const Polynomial& f, const Weight& w) {
  check_weight(f, w);
  if (f.is_zero()) throw DomainError("weighted degree of the zero polynomial is undefined");
  int best = 0;
  for (const auto& [e, c] : f.terms()) best = std::max(best, w.dot(e));
  return best;
}

Polynomial initial_form(const Polynomial& f, const Weight& w) {
  int d = weighted_order(f, w);
  Polynomial r(f.nvars());
  for (const auto& [e, c] : f.terms())
    if (w.dot(e) == d) r.add_term(e, c);
  return r;
}

bool is_weighted_homogeneous(const Polynomial& f, const Weight& w) {
  check_weight(f, w);
  if (f.is_zero()) return true;
  return weighted_order(f, w) == weighted_degree(f, w);
}

int factor_order(const IdealFactor& factor, const Weight& w) {
  int best = -1;
  for (const auto& g : factor.generators) {
    int d = weighted_order(g, w);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

Rational ideal_order(const RealIdeal& a, const Weight& w) {
  if (w.size() != a.nvars()) throw DomainError("weight length does not match the number of variables");
  Rational s = 0;
  for (const auto& f : a.factors()) s += f.exponent * Rational(factor_order(f, w));
  return s;
}

PowerSplit extract_power(const Polynomial& f, int var) {
  if (f.is_zero()) throw DomainError("cannot extract a power from the zero polynomial");
  int m = f.min_degree_in(var);
  Polynomial r(f.nvars());
  for (const auto& [e, c] : f.terms()) {
    ExponentVector x = e;
    x[var] -= m;
    r.add_term(x, c);
  }
  return {m, r};
}

DivisionResult divide_monic(const Polynomial& f, const Polynomial& u, int var) {
  check_same_ring(f, u);
  if (u.is_zero()) throw DomainError("division by the zero polynomial");
  auto uc = u.coefficients_in(var);
  const Polynomial& lc = uc.back();
  if (!lc.is_constant()) throw DomainError("divisor " + u.str() + " is not monic in x" + std::to_string(var + 1));
  int d = static_cast<int>(uc.size()) - 1;
  Rational lc_inv = lc.constant_term().inverse();
  Polynomial q(f.nvars()), r = f;
  while (!r.is_zero()) {
    int dr = r.degree_in(var);
    if (dr < d) break;
    Polynomial lead = r.coefficients_in(var).back();
    ExponentVector shift;
    shift[var] = dr - d;
    Polynomial t = lead * Polynomial::monomial(f.nvars(), shift, lc_inv);
    q += t;
    r -= t * u;
  }
  return {q, r};
}

std::vector<Polynomial> identity_images(int nvars) {
  std::vector<Polynomial> v;
  for (int i = 0; i < nvars; ++i) v.push_back(Polynomial::variable(nvars, i));
  return v;
}

}  // namespace wbmld
