#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wbmld/blowup.hpp"
#include "wbmld/wps.hpp"

namespace wbmld {

// x_target <- x_target + coefficient * monomial, or the identity when target < 0.
struct CoordinateChange {
  int target = -1;
  ExponentVector monomial;
  Rational coefficient;

  bool is_identity() const { return target < 0; }
  std::vector<Polynomial> images(int nvars) const;
  // Only changes with w(monomial) < w(target) can move weighted orders.
  bool relevant_for(const Weight& w) const;
  std::string str() const;
};

class Catalog {
 public:
  // Identity first, then single substitutions with deg m <= depth, ordered by (target, degree, monomial, coefficient).
  static Catalog build(const RealIdeal& a, int depth);
  const std::vector<CoordinateChange>& entries() const { return entries_; }
  const std::vector<Rational>& coefficients() const { return coefficients_; }
  std::size_t size() const { return entries_.size(); }
  const CoordinateChange& operator[](std::size_t i) const { return entries_[i]; }

 private:
  std::vector<CoordinateChange> entries_;
  std::vector<Rational> coefficients_;
};

struct SearchOptions {
  int weight_bound = 8;
  int catalog_depth = 3;
  int jobs = 1;
};

struct SearchLogEntry {
  std::string plan;  // plan text
  Rational value;
  int length = 1;
};

struct OneStepResult {
  Rational best;
  BlowupPlan plan;
  Weight weight;
  std::size_t change_index = 0;
  std::vector<SearchLogEntry> log;  // best plan per weight
};
OneStepResult one_step_search(const RealIdeal& a, int weight_bound, int catalog_depth);

struct StandardWeightReport {
  std::vector<Polynomial> system;  // x_i as polynomials in the standard coordinates
  Weight weight;                   // (v1, v1, v3), v1 <= v3, gcd 1
  bool certified = false;
  Rational one_step_value;
};
StandardWeightReport standard_weight_infer(const RealIdeal& a, int catalog_depth, int weight_bound = 8);

// Weight of the form (r, r, s) up to permutation with r <= s, or (1, 1, 1).
bool is_standard_weight(const Weight& w);

struct ExtendedRational {
  bool minus_infinity = false;
  Rational value;
  std::string str() const { return minus_infinity ? "-inf" : value.str(); }
  friend bool operator==(const ExtendedRational&, const ExtendedRational&) = default;
};

struct MldResult {
  ExtendedRational value;
  BlowupPlan witness_plan;
  Rational witness_value;  // discrepancy of the witness plan
  bool certified = false;
  std::vector<SearchLogEntry> search_log;
  std::vector<std::string> notes;
  Rational one_step_value;
  BlowupPlan one_step_plan;
  bool skipped_irrational = false;  // some candidate center in the classification family was not rational
};

struct GeneralityWitness {
  int condition = 1;  // 1: bad curve on E1, 2: bad curve on E2 of I_L * a_{A2}
  std::optional<WeightedForm> curve;
  Rational order;
  bool holds = true;
  std::string reason;
};

struct GeneralityReport {
  bool general = true;
  std::vector<GeneralityWitness> witnesses;
};
GeneralityReport generality_check(const RealIdeal& a, const BlowupStep& first, const std::optional<BlowupStep>& second);

MldResult two_step_search(const RealIdeal& a, const SearchOptions& options);
MldResult two_step_search(const RealIdeal& a, int weight_bound, int catalog_depth);

std::optional<BlowupPlan> corollary_111_path(const RealIdeal& a, int weight_bound = 8);

MldResult mld(const RealIdeal& a, const SearchOptions& options);
MldResult mld(const RealIdeal& a, int weight_bound, int catalog_depth);

}  // namespace wbmld
