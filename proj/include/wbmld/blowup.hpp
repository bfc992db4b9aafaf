#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wbmld/polynomial.hpp"

namespace wbmld {

// Center of one weighted blow-up, in the coordinates of the current chart.
struct CenterSpec {
  enum class Kind { origin, point, curve };
  Kind kind = Kind::origin;
  std::vector<Rational> coordinates;  // point
  int exceptional_var = -1;           // curve: the chart coordinate cutting out the previous divisor
  Polynomial curve_poly{3};           // curve: second equation, monic in monic_var
  int monic_var = -1;

  static CenterSpec origin();
  static CenterSpec point(std::vector<Rational> coords);
  static CenterSpec curve(int exceptional_var, Polynomial poly, int monic_var);
  std::string str() const;
};

// One step. Point centers: weight has one entry per coordinate. Curve centers: weight is (w_u, w_h)
// with w_h the weight of the exceptional coordinate and w_u the weight of curve_poly.
// Local coordinates y relate to chart coordinates c by c = p + R(y) (points) or c = R(y) (curves);
// an empty recentering means R = identity.
struct BlowupStep {
  Weight weight;
  CenterSpec center;
  std::optional<int> chart;
  std::vector<Polynomial> recentering;
  std::string str() const;
};

struct BlowupPlan {
  std::vector<BlowupStep> steps;
  std::string str() const;  // plan-file text, one step per line
};

struct StepReport {
  int k_contribution = 0;
  std::vector<int> factor_orders;       // order of each factor's weak transform at this step
  std::vector<int> exceptional_orders;  // order of the total pullback of each earlier exceptional divisor
  std::vector<int> proper_orders;       // order of the proper transform of each earlier exceptional divisor
  std::vector<int> probe_orders;
  int chart = -1;
  std::string description;
};

struct DivisorRecord {
  int k = 0;
  std::vector<int> factor_orders;             // v_E of each factor
  std::vector<int> exceptional_multiplicities;  // v_E(E_i) for each earlier step
  std::vector<int> proper_orders;             // v_E of the proper transforms of earlier exceptional divisors
  std::vector<int> probe_orders;              // v_E of the probe polynomials
  Rational log_discrepancy;
  std::vector<StepReport> steps;
  std::vector<std::string> trace;
};

// Tracked data in the current chart.
struct ChartState {
  int nvars = 3;
  std::vector<IdealFactor> factors;             // weak transforms, original exponents
  std::vector<Polynomial> probes;               // weak transforms of probe polynomials
  std::vector<Polynomial> exceptional_totals;   // total pullbacks of earlier exceptional coordinates
  std::vector<Polynomial> exceptional_propers;  // same with later exceptional powers removed
  int exceptional_var = -1;  // chart coordinate of the latest exceptional divisor, -1 at the base
  int chart_weight = 1;      // weight of that coordinate in its step
  int steps_applied = 0;

  static ChartState initial(const RealIdeal& a, const std::vector<Polynomial>& probes = {});
  // Chart of a pair (A1, I_D * b): the ideal b already lives on A1 and D = {x_exceptional = 0}.
  static ChartState on_chart(const RealIdeal& b, int exceptional_var, int chart_weight);
};

// Orders of every tracked polynomial under the divisor of `step`, without moving to a chart.
StepReport step_valuation(const ChartState& state, const BlowupStep& step);

struct StepResult {
  ChartState state;
  StepReport report;
};
// Apply a non-final step: compute orders, move to the chart, take weak transforms.
StepResult apply_step(const ChartState& state, const BlowupStep& step);

DivisorRecord evaluate_plan(const RealIdeal& a, const BlowupPlan& plan, const std::vector<Polynomial>& probes = {});
DivisorRecord evaluate_plan_from(const ChartState& base, const BlowupPlan& plan);

// a(E) for the weighted blow-up of the origin with weight w.
Rational single_blowup_discrepancy(const RealIdeal& a, const Weight& w);

struct DecompositionReport {
  Rational lhs;                // a(E; A, a)
  Rational first_discrepancy;  // a(E1; A, a)
  int exceptional_multiplicity = 0;  // v_E(E1)
  Rational residual;           // a(E; A1, I_{E1} * a_{A1})
  bool holds = false;
};
DecompositionReport decomposition_check(const RealIdeal& a, const BlowupPlan& plan);

// t with a(E; A, a^t) = 0, i.e. (k_E + 1) / v_E(a).
Rational normalizing_exponent(const DivisorRecord& record, const RealIdeal& a);

// Validate and order a step's local coordinates; throws DomainError with a reason.
void validate_step(const ChartState& state, const BlowupStep& step, bool final_step);

// (h, u)-adic support of g at the generic point of V(h, u): pairs (a, b) with h^a u^b coefficients nonzero there.
std::vector<std::pair<int, int>> curve_support(const Polynomial& g, int h_var, const Polynomial& u, int monic_var);
int curve_order(const std::vector<std::pair<int, int>>& support, int w_u, int w_h);

// Plan text format.
BlowupPlan parse_plan(std::string_view text, int nvars);
BlowupStep parse_step(std::string_view line, int nvars, int line_number = 0);

}  // namespace wbmld
