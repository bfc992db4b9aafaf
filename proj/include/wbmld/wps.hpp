#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wbmld/polynomial.hpp"

namespace wbmld {

// Weighted homogeneous polynomial in X1..XN.
struct WeightedForm {
  Polynomial poly{3};
  Weight weight;
  int degree = 0;

  static WeightedForm make(const Polynomial& poly, const Weight& w);
  std::string str() const;
};

struct WPSPoint {
  std::vector<Rational> coords;
  Weight weight;

  static WPSPoint make(std::vector<Rational> coords, const Weight& w);
  bool off_coordinate_planes() const;
  // Scale so the first nonzero coordinate is 1, when that needs only a rational root.
  std::optional<WPSPoint> normalized() const;
};

// Shape (r, r, s) with r <= s up to permutation: the two (or three) slots of minimal weight.
struct StandardShape {
  int r = 0, s = 0;
  int small1 = -1, small2 = -1;  // slots of weight r
  int big = -1;                  // slot of weight s; the third slot when r == s
};
std::optional<StandardShape> standard_shape(const Weight& w);

// ord at Q of g restricted to the curve L (degree r through Q); Q off the coordinate planes.
int restriction_order(const WeightedForm& g, const WeightedForm& L, const WPSPoint& Q);
// r * s * ord_Q(g|_L) <= deg g.
bool bezout_bound_check(const WeightedForm& g, const WeightedForm& L, const WPSPoint& Q);

struct E1Center {
  enum class Kind { generic, point, curve };
  Kind kind = Kind::generic;
  std::optional<WPSPoint> point;
  std::optional<WeightedForm> curve;
};

struct BadCurveReport {
  bool exists = false;
  std::optional<WeightedForm> curve;
  std::string reason;
};
BadCurveReport bad_curve(const Weight& w, const E1Center& center);

struct DivisorComponent {
  WeightedForm component;
  Rational multiplicity;
};
// Divisor of the initial forms on P(w): each factor contributes its first generator of minimal order.
std::vector<DivisorComponent> initial_divisor(const RealIdeal& a, const Weight& w);

// Degree-r forms (other than the coordinate ones) dividing every given form; (r, r, s) with r < s.
std::vector<WeightedForm> common_minimal_degree_divisors(const std::vector<Polynomial>& forms, const Weight& w);

struct BezoutInstance {
  WeightedForm g, L;
  WPSPoint Q;
};
// Random g on P(r,r,s) through a random rational point Q off the coordinate planes, with a prescribed
// vanishing order along the degree-r curve L through Q ((1,1,1): a random line through Q).
BezoutInstance random_bezout_instance(const Weight& w, std::mt19937_64& rng);

}  // namespace wbmld
