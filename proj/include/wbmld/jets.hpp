#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wbmld/polynomial.hpp"

namespace wbmld {

// Truncated arc x_i(t) = sum_j coefficients[i][j] t^j, with coefficients[i][j] = 0 for j < order_i.
struct GenericArc {
  std::vector<std::vector<Rational>> coefficients;
  int truncation = 0;
};

struct ContactCylinder {
  Weight weight;
  int n = 1;
};

// Arc with ord x_i = base_orders[i] (0 allowed: random unit), coefficients drawn from [1, 997].
GenericArc random_arc(const std::vector<int>& base_orders, int truncation, std::mt19937_64& rng);

// ord_t f(arc), or truncation + 1 when every coefficient up to the truncation vanishes.
int arc_order(const Polynomial& f, const GenericArc& arc);

struct ArcOrderResult {
  int order = 0;
  int rounds = 0;
  bool degenerate_warning = false;
};

int default_truncation(const Polynomial& f, const std::vector<int>& base_orders);

// Minimal ord_t over generic arcs with ord x_i = w_i. Preset arcs are tried first; rounds whose trials
// disagree or vanish up to the truncation are retried with fresh coefficients (at most 5 rounds).
ArcOrderResult generic_arc_order(const Polynomial& f, const std::vector<int>& base_orders, int trials, std::mt19937_64& rng,
                                 const std::vector<GenericArc>& preset = {});
ArcOrderResult generic_arc_order(const Polynomial& f, const Weight& w, int trials, std::uint64_t seed);

// Codimension of {ord x_i >= n w_i} in the arc space, by enumerating vanishing jet coordinates.
int contact_cylinder_codim(const ContactCylinder& c);

}  // namespace wbmld
