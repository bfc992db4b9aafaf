#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "wbmld/polynomial.hpp"

namespace wbmld {

// a / b when b divides a exactly, otherwise nullopt.
std::optional<Polynomial> exact_divide(const Polynomial& a, const Polynomial& b);

// Monic (grlex leading coefficient 1) greatest common divisor; gcd(0,0) = 0.
Polynomial gcd(const Polynomial& a, const Polynomial& b);

struct PowerFactor {
  Polynomial factor;  // monic, square-free, nonconstant
  int multiplicity;
};
// f = c * prod factor^multiplicity with pairwise coprime factors.
std::vector<PowerFactor> squarefree_decomposition(const Polynomial& f);

// Number of times u divides f (u nonconstant, f nonzero).
int multiplicity_of(const Polynomial& f, const Polynomial& u);

// Resultant with respect to var (Sylvester determinant, fraction-free elimination).
Polynomial resultant(const Polynomial& f, const Polynomial& g, int var);

// Distinct rational roots of a polynomial involving only var, ascending.
std::vector<Rational> rational_roots(const Polynomial& f, int var);

// After removing all rational roots, does a square-free part of positive degree remain?
bool has_irrational_roots(const Polynomial& f, int var);

// Rational nth root, if it exists.
std::optional<Rational> rational_nth_root(const Rational& q, int n);

}  // namespace wbmld
