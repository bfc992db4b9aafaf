#pragma once

#include <array>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "wbmld/rational.hpp"

namespace wbmld {

inline constexpr int kMaxVars = 3;

class ExponentVector {
 public:
  ExponentVector() = default;
  ExponentVector(std::initializer_list<int> e);

  int operator[](int i) const { return e_[i]; }
  int& operator[](int i) { return e_[i]; }
  int total_degree() const { return e_[0] + e_[1] + e_[2]; }
  bool divides(const ExponentVector& o) const;
  bool is_zero() const { return total_degree() == 0; }

  friend ExponentVector operator+(ExponentVector a, const ExponentVector& b);
  friend ExponentVector operator-(ExponentVector a, const ExponentVector& b);
  friend bool operator==(const ExponentVector&, const ExponentVector&) = default;

  static ExponentVector unit(int var);

 private:
  std::array<int, kMaxVars> e_{};
};

// Graded lexicographic: total degree first, then lexicographic with x1 most significant.
struct GrlexLess {
  bool operator()(const ExponentVector& a, const ExponentVector& b) const;
};

// Sparse polynomial over Q in nvars ordered variables (x1..xN).
class Polynomial {
 public:
  using TermMap = std::map<ExponentVector, Rational, GrlexLess>;

  explicit Polynomial(int nvars = 3);
  static Polynomial constant(int nvars, const Rational& c);
  static Polynomial variable(int nvars, int index);
  static Polynomial monomial(int nvars, const ExponentVector& e, const Rational& c = 1);

  int nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  Rational coefficient(const ExponentVector& e) const;
  int total_degree() const;
  int lowest_degree() const;
  int degree_in(int var) const;
  int min_degree_in(int var) const;
  bool involves(int var) const;
  // Grlex-largest term. Requires a nonzero polynomial.
  const std::pair<const ExponentVector, Rational>& leading_term() const;

  void add_term(const ExponentVector& e, const Rational& c);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  Polynomial operator-() const;
  friend bool operator==(const Polynomial& a, const Polynomial& b);

  Polynomial pow(int e) const;
  Polynomial derivative(int var) const;
  Rational evaluate(std::span<const Rational> point) const;
  // Replace x_i by images[i]; the result lives in images' ring.
  Polynomial substitute(std::span<const Polynomial> images) const;
  Polynomial substitute_var(int var, const Polynomial& image) const;
  // Coefficients c_k with f = sum c_k * var^k; c_k does not involve var.
  std::vector<Polynomial> coefficients_in(int var) const;
  static Polynomial from_coefficients(int nvars, const std::vector<Polynomial>& coeffs, int var);
  // Terms of exact total degree d.
  Polynomial homogeneous_part(int d) const;
  // Same terms viewed in a ring with a different number of variables (unused variables must be absent).
  Polynomial with_nvars(int nvars) const;
  // Multiply so the grlex-leading coefficient is 1.
  Polynomial monic() const;

  std::string str() const;
  std::string str(std::span<const std::string> names) const;
  static std::vector<std::string> variable_names(int nvars);

 private:
  int nvars_;
  TermMap terms_;
};

std::ostream& operator<<(std::ostream& os, const Polynomial& p);

// Positive integer weight vector.
class Weight {
 public:
  Weight() = default;
  explicit Weight(std::vector<int> entries);
  Weight(std::initializer_list<int> entries) : Weight(std::vector<int>(entries)) {}

  int size() const { return static_cast<int>(w_.size()); }
  int operator[](int i) const { return w_[i]; }
  const std::vector<int>& entries() const { return w_; }
  int sum() const;
  int min() const;
  int max() const;
  int gcd() const;
  bool is_primitive() const { return gcd() == 1; }
  int dot(const ExponentVector& e) const;
  std::string str() const;

  friend auto operator<=>(const Weight&, const Weight&) = default;

 private:
  std::vector<int> w_;
};

struct IdealFactor {
  std::vector<Polynomial> generators;
  Rational exponent;
};

// Formal product of ideals with rational exponents.
class RealIdeal {
 public:
  explicit RealIdeal(int nvars = 3) : nvars_(nvars) {}
  RealIdeal(int nvars, std::vector<IdealFactor> factors);

  int nvars() const { return nvars_; }
  const std::vector<IdealFactor>& factors() const { return factors_; }
  void add_factor(std::vector<Polynomial> generators, const Rational& exponent);
  RealIdeal scaled(const Rational& t) const;
  // Pull back every generator along x_i -> images[i].
  RealIdeal substitute(std::span<const Polynomial> images) const;
  std::string str() const;

 private:
  int nvars_;
  std::vector<IdealFactor> factors_;
};

int weighted_order(const Polynomial& f, const Weight& w);
int weighted_degree(const Polynomial& f, const Weight& w);
Polynomial initial_form(const Polynomial& f, const Weight& w);
bool is_weighted_homogeneous(const Polynomial& f, const Weight& w);
// Minimum weighted order over generators of one factor.
int factor_order(const IdealFactor& factor, const Weight& w);
Rational ideal_order(const RealIdeal& a, const Weight& w);

struct PowerSplit {
  int power;
  Polynomial rest;
};
// f = var^power * rest with rest not divisible by var.
PowerSplit extract_power(const Polynomial& f, int var);

struct DivisionResult {
  Polynomial quotient;
  Polynomial remainder;
};
// Division by u, monic (constant leading coefficient) in var; remainder has lower var-degree.
DivisionResult divide_monic(const Polynomial& f, const Polynomial& u, int var);

// Identity substitution images for nvars variables.
std::vector<Polynomial> identity_images(int nvars);

}  // namespace wbmld
