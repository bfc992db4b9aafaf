#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "support/corpora.hpp"
#include "support/pullback_oracle.hpp"
#include "support/random_plans.hpp"
#include "support/wps_cases.hpp"
#include "wbmld/blowup.hpp"
#include "wbmld/errors.hpp"
#include "wbmld/jets.hpp"
#include "wbmld/parse.hpp"
#include "wbmld/search.hpp"
#include "wbmld/wps.hpp"

using namespace wbmld;
using namespace wbmld::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Polynomial P(const char* s, int n = 3) { return parse_polynomial(s, n); }

RealIdeal single(const char* f, Rational e, int n = 3) {
  RealIdeal a(n);
  a.add_factor({P(f, n)}, e);
  return a;
}

RealIdeal not1() { return single("(x^2+y^2+z^2)^2+x^5+y^5+z^5", Rational(7, 10)); }
RealIdeal three_times() { return single("(x1-x2)^2+x3^2+x1^4", Rational(6, 5)); }

const char* kNot1Plan =
    "step weight=(1,1,1) center=origin\n"
    "step weight=(1,2) center=curve(exc=x1, poly=x2^2+x3^2+1, monic_in=x2)\n";
const char* kThreeTimes2 =
    "step weight=(1,1,2) center=origin chart=x1\n"
    "step weight=(1,1) center=curve(exc=x1, poly=x2 - 1, monic_in=x2)\n";
const char* kThreeTimes3 =
    "step weight=(1,1,2) center=origin chart=x1\n"
    "step weight=(1,1) center=curve(exc=x1, poly=x2 - 1, monic_in=x2)\n"
    "step weight=(1,1) center=curve(exc=x1, poly=x2^2 + x3^2 + 1, monic_in=x2)\n";
const char* kThreeTimesAlt =
    "step weight=(1,2,2) center=origin recentering=(x1, x1-x2, x3)\n"
    "step weight=(1,1) center=curve(exc=x1, poly=x2^2+x3^2+1, monic_in=x2)\n";

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      pass = false;
      detail << what;
    }
  }
};

void not1_plan(Outcome& out) {
  auto t0 = Clock::now();
  DivisorRecord rec = evaluate_plan(not1(), parse_plan(kNot1Plan, 3));
  double secs = seconds_since(t0);
  out.require(rec.log_discrepancy == Rational(0), "a(E) = " + rec.log_discrepancy.str());
  out.require(rec.k == 6, "k_E = " + std::to_string(rec.k));
  out.require(rec.factor_orders == std::vector<int>{10}, "v_E(f) != 10");
  OracleValues o = pullback_oracle(not1(), parse_plan(kNot1Plan, 3));
  out.require(o.k == 6 && o.factor_orders == std::vector<int>{10} && o.log_discrepancy == Rational(0),
              "direct pullback disagrees");
  out.require(secs < 1.0, "took " + std::to_string(secs) + " s");
  if (out.pass) out.detail << "a(E) = 0, k_E = 6, v_E(f) = 10, " << secs * 1000 << " ms";
}

void not1_search(Outcome& out) {
  auto one = one_step_search(not1(), 8, 3);
  out.require(one.best == Rational(1, 5), "one-step best " + one.best.str());
  auto two = two_step_search(not1(), 8, 3);
  out.require(two.value == ExtendedRational{false, Rational(0)}, "two-step best " + two.value.str());
  if (out.pass) out.detail << "one-step 1/5 at " << one.weight.str() << ", two-step 0 via " << two.witness_plan.steps.back().str();
}

void three_times_example(Outcome& out) {
  RealIdeal a = three_times();
  DivisorRecord two = evaluate_plan(a, parse_plan(kThreeTimes2, 3));
  out.require(two.log_discrepancy == Rational(1, 5), "a(E2) = " + two.log_discrepancy.str());
  DivisorRecord three = evaluate_plan(a, parse_plan(kThreeTimes3, 3));
  out.require(three.log_discrepancy == Rational(0), "a(E) = " + three.log_discrepancy.str());
  out.require(!three.proper_orders.empty() && three.proper_orders[0] == 0, "v_E(E1') != 0");
  BlowupStep first{Weight{1, 1, 2}, CenterSpec::origin(), std::nullopt, {}};
  auto g = generality_check(a, first, std::nullopt);
  out.require(!g.general, "reported general");
  bool curve_ok = !g.witnesses.empty() && g.witnesses[0].curve && g.witnesses[0].curve->str() == "X1 - X2" &&
                  g.witnesses[0].order == Rational(12, 5);
  out.require(curve_ok, "bad curve or order differs");
  BlowupPlan alt = parse_plan(kThreeTimesAlt, 3);
  DivisorRecord first_alt = evaluate_plan(a, BlowupPlan{{alt.steps[0]}}, {P("x1"), P("x1-x2"), P("x3")});
  out.require(first_alt.probe_orders == std::vector<int>{1, 2, 2}, "alternate first step profile differs");
  out.require(first_alt.log_discrepancy == Rational(1, 5), "alternate a(E1) = " + first_alt.log_discrepancy.str());
  DivisorRecord alt_rec = evaluate_plan(a, alt);
  out.require(alt_rec.log_discrepancy == Rational(0), "alternate a(E) = " + alt_rec.log_discrepancy.str());
  if (out.pass) out.detail << "a(E2) = 1/5, a(E) = 0, bad curve X1 - X2 with ord 12/5, profile (1,2,2), v_E(E1') = 0";
}

void bezout_suite(Outcome& out) {
  auto t0 = Clock::now();
  std::vector<Weight> weights{Weight{2, 2, 3}, Weight{1, 1, 1}, Weight{1, 1, 2}, Weight{1, 1, 3}, Weight{1, 1, 4}, Weight{1, 1, 5}};
  RandomPoly gen(2024);
  int failures = 0, mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    BezoutCase c = random_bezout_case(gen, weights[i % weights.size()]);
    if (!bezout_bound_check(c.g, c.L, c.Q)) ++failures;
    if (restriction_order(c.g, c.L, c.Q) != restriction_order_oracle(c)) ++mismatches;
  }
  double secs = seconds_since(t0);
  out.require(failures == 0, std::to_string(failures) + " bound violations");
  out.require(mismatches == 0, std::to_string(mismatches) + " order mismatches with the parametrised oracle");
  out.require(secs < 30.0, "took " + std::to_string(secs) + " s");
  if (out.pass) out.detail << "500 cases, " << secs << " s";
}

void codim_suite(Outcome& out) {
  out.require(contact_cylinder_codim({Weight{2, 2, 3}, 1}) == 7, "codim for (2,2,3) is not 7");
  RandomPoly gen(77);
  int bad = 0;
  for (int i = 0; i < 49; ++i) {
    Weight w = gen.weight(gen.uniform(1, 3), 6);
    int n = gen.uniform(1, 4);
    if (contact_cylinder_codim({w, n}) != n * w.sum()) ++bad;
  }
  out.require(bad == 0, std::to_string(bad) + " mismatches");
  if (out.pass) out.detail << "50 cases including (2,2,3) -> 7";
}

void arc_oracle(Outcome& out) {
  RandomPoly gen(606);
  int bad = 0, retried = 0;
  for (int i = 0; i < 100; ++i) {
    int n = gen.uniform(1, 3);
    Polynomial f = gen.poly(n, gen.uniform(1, 5), 5, 6);
    Weight w = gen.weight(n, 6);
    auto r = generic_arc_order(f, w, 3, 5000 + i);
    if (r.rounds > 1) ++retried;
    if (r.order != weighted_order(f, w)) ++bad;
  }
  out.require(bad == 0, std::to_string(bad) + " mismatches");
  if (out.pass) out.detail << "100 cases, " << retried << " needed retries";
}

void decomposition(Outcome& out) {
  RandomPoly gen(909);
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    int n = gen.uniform(2, 3);
    RealIdeal a = random_monomial_ideal(gen, n);
    BlowupPlan plan = random_two_step_plan(gen, n);
    DecompositionReport r = decomposition_check(a, plan);
    OracleValues o = pullback_oracle(a, plan);
    Rational first = Rational(plan.steps[0].weight.sum()) - ideal_order(a, plan.steps[0].weight);
    bool ok = r.holds && r.lhs == o.log_discrepancy && r.first_discrepancy == first &&
              r.lhs == r.residual + Rational(r.exceptional_multiplicity) * r.first_discrepancy;
    if (!ok) {
      ++bad;
      std::cerr << "decomposition fails for\n" << plan.str() << "\n";
    }
  }
  out.require(bad == 0, std::to_string(bad) + " plans violate the identity");
  if (out.pass) out.detail << "100 plans";
}

void classification_audit(Outcome& out) {
  RandomPoly gen(31337);
  const SearchOptions opt{6, 2, 1};
  int accepted = 0, drawn = 0, no_gain = 0, not_general = 0, not_standard = 0;
  int per_weight_111 = 0, per_weight_11n = 0, per_weight_223 = 0;
  while (accepted < 50 && drawn < 400) {
    ++drawn;
    RealIdeal a = classification_candidate(gen);
    MldResult r = two_step_search(a, opt);
    if (r.value.minus_infinity || !(r.value.value < r.one_step_value) || r.witness_plan.steps.size() != 2) {
      ++no_gain;
      continue;
    }
    const BlowupStep& first = r.witness_plan.steps[0];
    if (!generality_check(a, first, r.witness_plan.steps[1]).general) {
      ++not_general;
      continue;
    }
    if (!first_step_is_standard(a, r.witness_plan, Catalog::build(a, opt.catalog_depth))) {
      ++not_standard;
      continue;
    }
    ++accepted;
    Weight w = first.weight;
    auto sh = standard_shape(w);
    bool family = sh && ((sh->r == 1) || (sh->r == 2 && sh->s == 3));
    Rational a1 = evaluate_plan(a, BlowupPlan{{first}}).log_discrepancy;
    bool in_unit = a1 > Rational(0) && a1 < Rational(1);
    if (w == Weight{1, 1, 1}) ++per_weight_111;
    else if (sh && sh->r == 1) ++per_weight_11n;
    else if (family) ++per_weight_223;
    out.require(family, "first weight " + w.str() + " outside (1,1,n), (2,2,3)");
    out.require(in_unit, "a(E1) = " + a1.str() + " for first weight " + w.str());
  }
  out.require(accepted == 50, "corpus has only " + std::to_string(accepted) + " ideals after " + std::to_string(drawn) + " draws");
  if (out.pass)
    out.detail << accepted << " ideals from " << drawn << " draws ((1,1,1): " << per_weight_111 << ", (1,1,n>1): " << per_weight_11n
               << ", (2,2,3): " << per_weight_223 << "; skipped " << no_gain << " without gain, " << not_general
               << " not general, " << not_standard << " with a non-standard first step)";
}

void fast_path(Outcome& out) {
  RandomPoly gen(4711);
  const SearchOptions opt{6, 2, 1};
  int accepted = 0, drawn = 0, bad = 0;
  while (accepted < 50 && drawn < 1000) {
    ++drawn;
    RealIdeal a = fast_path_candidate(gen);
    auto one = one_step_search(a, opt.weight_bound, opt.catalog_depth);
    if (one.best < Rational(1)) continue;
    auto sw = standard_weight_infer(a, opt.catalog_depth, opt.weight_bound);
    BlowupStep first{sw.weight, CenterSpec::origin(), std::nullopt, {}};
    if (sw.system != identity_images(3)) first.recentering = sw.system;
    if (!generality_check(a, first, std::nullopt).general) continue;
    ++accepted;
    MldResult r = two_step_search(a, opt);
    if (r.value.minus_infinity || r.value.value < one.best) {
      ++bad;
      std::cerr << "two-step " << r.value.str() << " below one-step " << one.best.str() << "\n" << r.witness_plan.str() << "\n";
    }
  }
  out.require(accepted == 50, "corpus has only " + std::to_string(accepted) + " ideals");
  out.require(bad == 0, std::to_string(bad) + " ideals improved by two steps");
  if (out.pass) out.detail << accepted << " ideals from " << drawn << " draws";
}

void surfaces(Outcome& out) {
  RandomPoly gen(2718);
  int compared = 0, bad = 0;
  for (int i = 0; i < 50; ++i) {
    RealIdeal a = surface_candidate(gen);
    Rational best = one_step_search(a, 8, 3).best;
    for (int s = 0; s < 30; ++s) {
      BlowupPlan plan = sample_surface_plan(gen, a);
      Rational v = evaluate_plan(a, plan).log_discrepancy;
      if (v < Rational(0)) continue;
      ++compared;
      if (v < best) {
        ++bad;
        std::cerr << "surface plan beats one step (" << v.str() << " < " << best.str() << ")\n" << plan.str() << "\n";
      }
    }
  }
  out.require(bad == 0, std::to_string(bad) + " sampled plans below the one-step minimum");
  if (out.pass) out.detail << "50 surfaces, " << compared << " sampled plans with a >= 0";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void(Outcome&)> run;
  };
  std::vector<Criterion> criteria{
      {"not1 two-step plan", not1_plan},
      {"not1 search", not1_search},
      {"3times example", three_times_example},
      {"Bezout bound", bezout_suite},
      {"contact codimension", codim_suite},
      {"arc order oracle", arc_oracle},
      {"decomposition identity", decomposition},
      {"first-step classification audit", classification_audit},
      {"one-step fast path", fast_path},
      {"surface one-step minimum", surfaces},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    auto t0 = Clock::now();
    try {
      criteria[i].run(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << "exception: " << e.what();
    }
    if (!out.pass) ++failed;
    std::cout << (out.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].name << ": " << out.detail.str() << " ["
              << seconds_since(t0) << " s]" << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
