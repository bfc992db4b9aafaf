#pragma once

#include <numeric>

#include "support/random_poly.hpp"
#include "wbmld/blowup.hpp"
#include "wbmld/errors.hpp"

namespace wbmld::testing {

inline RealIdeal random_monomial_ideal(RandomPoly& gen, int nvars) {
  RealIdeal a(nvars);
  int nf = gen.uniform(1, 2);
  for (int f = 0; f < nf; ++f) {
    std::vector<Polynomial> gens;
    int ng = gen.uniform(1, 3);
    for (int g = 0; g < ng; ++g) {
      ExponentVector e;
      while (e.total_degree() == 0) e = gen.exponent(nvars, 4);
      gens.push_back(Polynomial::monomial(nvars, e));
    }
    a.add_factor(gens, Rational(gen.uniform(1, 9), gen.uniform(1, 6)));
  }
  return a;
}

inline RealIdeal random_ideal(RandomPoly& gen, int nvars) {
  RealIdeal a(nvars);
  int nf = gen.uniform(1, 2);
  for (int f = 0; f < nf; ++f) {
    std::vector<Polynomial> gens;
    int ng = gen.uniform(1, 2);
    for (int g = 0; g < ng; ++g) gens.push_back(gen.poly(nvars, gen.uniform(1, 4), 5, 4, 1));
    a.add_factor(gens, Rational(gen.uniform(1, 9), gen.uniform(1, 6)));
  }
  return a;
}

inline Weight random_primitive_weight(RandomPoly& gen, int size, int max_entry) {
  for (;;) {
    Weight w = gen.weight(size, max_entry);
    if (w.is_primitive()) return w;
  }
}

inline Rational nonzero_small(RandomPoly& gen) {
  static const int nums[] = {1, -1, 2, -2, 3};
  return Rational(nums[gen.uniform(0, 4)], gen.uniform(1, 2));
}

// First step at the origin, second a point or a curve on E1.
inline BlowupPlan random_two_step_plan(RandomPoly& gen, int nvars, bool allow_curves = true) {
  for (;;) {
    BlowupPlan plan;
    BlowupStep s1;
    s1.weight = random_primitive_weight(gen, nvars, 3);
    s1.center = CenterSpec::origin();
    int j = 0;
    for (int i = 1; i < nvars; ++i)
      if (s1.weight[i] < s1.weight[j]) j = i;
    plan.steps.push_back(s1);
    int wj = s1.weight[j];
    BlowupStep s2;
    if (allow_curves && nvars == 3 && gen.uniform(0, 1) == 1) {
      int m = (j + gen.uniform(1, 2)) % 3;
      int z = 3 - j - m;
      auto var = [](int i) { return Polynomial::variable(3, i); };
      int d = gen.uniform(1, 2);
      Polynomial u = var(m).pow(d) + Polynomial::constant(3, nonzero_small(gen)) * var(z).pow(gen.uniform(1, 2)) +
                     Polynomial::constant(3, nonzero_small(gen));
      if (gen.uniform(0, 1)) u += Polynomial::constant(3, nonzero_small(gen)) * var(j);
      int p = gen.uniform(1, 3), q = gen.uniform(1, 3);
      if (std::gcd(p, q) != 1) continue;
      s2.weight = Weight{p, q};
      s2.center = CenterSpec::curve(j, u, m);
    } else {
      std::vector<Rational> pt(nvars, Rational(0));
      for (int i = 0; i < nvars; ++i)
        if (i != j) pt[i] = (wj > 1 || gen.uniform(0, 2) > 0) ? nonzero_small(gen) : Rational(0);
      s2.weight = random_primitive_weight(gen, nvars, 3);
      s2.center = CenterSpec::point(pt);
    }
    plan.steps.push_back(s2);
    try {
      validate_step(ChartState::initial(RealIdeal(nvars)), s1, false);
      ChartState probe;
      probe.nvars = nvars;
      probe.exceptional_var = j;
      probe.chart_weight = wj;
      validate_step(probe, s2, true);
    } catch (const DomainError&) {
      continue;
    }
    return plan;
  }
}

}  // namespace wbmld::testing
