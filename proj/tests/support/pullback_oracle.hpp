#pragma once

#include "wbmld/blowup.hpp"
#include "wbmld/polynomial.hpp"

namespace wbmld::testing {

struct OracleValues {
  int k = 0;
  std::vector<int> factor_orders;
  Rational log_discrepancy;
};

inline Polynomial det3(const std::vector<Polynomial>& R) {
  int n = static_cast<int>(R.size());
  auto d = [&](int i, int j) { return R[i].derivative(j); };
  if (n == 1) return d(0, 0);
  if (n == 2) return d(0, 0) * d(1, 1) - d(0, 1) * d(1, 0);
  return d(0, 0) * (d(1, 1) * d(2, 2) - d(1, 2) * d(2, 1)) - d(0, 1) * (d(1, 0) * d(2, 2) - d(1, 2) * d(2, 0)) +
         d(0, 2) * (d(1, 0) * d(2, 1) - d(1, 1) * d(2, 0));
}

// Total pullback of the original coordinates, Jacobian from scratch, final valuation applied directly.
inline OracleValues pullback_oracle(const RealIdeal& a, const BlowupPlan& plan) {
  const int n = a.nvars();
  auto var = [n](int i) { return Polynomial::variable(n, i); };
  std::vector<Polynomial> phi = identity_images(n);
  for (std::size_t s = 0; s + 1 < plan.steps.size(); ++s) {
    const BlowupStep& st = plan.steps[s];
    std::vector<Polynomial> R = st.recentering.empty() ? identity_images(n) : st.recentering;
    std::vector<Polynomial> chart_map;  // previous chart coordinates in terms of the new ones
    if (st.center.kind == CenterSpec::Kind::curve) {
      int h = st.center.exceptional_var, m = st.center.monic_var;
      int wu = st.weight[0], wh = st.weight[1];
      int chart = st.chart ? *st.chart : (wh <= wu ? h : m);
      // y-coordinates with y_m replaced by u: invert u = alpha*y_m + beta
      auto cs = st.center.curve_poly.coefficients_in(m);
      std::vector<Polynomial> Y = identity_images(n);
      if (chart == h) {
        Y[h] = var(h).pow(wh);
        Y[m] = var(h).pow(wu) * var(m);
      } else {
        Y[m] = var(m).pow(wu);
        Y[h] = var(m).pow(wh) * var(h);
      }
      std::vector<Polynomial> y = Y;
      y[m] = (Y[m] - cs[0].substitute(Y)) * cs[1].constant_term().inverse();
      for (auto& r : R) chart_map.push_back(r.substitute(y));
    } else {
      int chart = 0;
      for (int i = 1; i < n; ++i)
        if (st.weight[i] < st.weight[chart]) chart = i;
      if (st.chart) chart = *st.chart;
      std::vector<Polynomial> Y;
      for (int i = 0; i < n; ++i) Y.push_back(i == chart ? var(i).pow(st.weight[i]) : var(chart).pow(st.weight[i]) * var(i));
      for (int i = 0; i < n; ++i) {
        Polynomial c = R[i];
        if (st.center.kind == CenterSpec::Kind::point) c += Polynomial::constant(n, st.center.coordinates[i]);
        chart_map.push_back(c.substitute(Y));
      }
    }
    std::vector<Polynomial> next;
    for (const auto& p : phi) next.push_back(p.substitute(chart_map));
    phi = next;
  }
  Polynomial J = det3(phi);
  const BlowupStep& last = plan.steps.back();
  std::vector<Polynomial> L = last.recentering.empty() ? identity_images(n) : last.recentering;
  if (last.center.kind == CenterSpec::Kind::point)
    for (int i = 0; i < n; ++i) L[i] += Polynomial::constant(n, last.center.coordinates[i]);
  auto value = [&](const Polynomial& g) {
    Polynomial pulled = g.substitute(L);
    if (last.center.kind == CenterSpec::Kind::curve)
      return curve_order(curve_support(pulled, last.center.exceptional_var, last.center.curve_poly, last.center.monic_var),
                         last.weight[0], last.weight[1]);
    return weighted_order(pulled, last.weight);
  };
  OracleValues out;
  out.k = value(J) + last.weight.sum() - 1;
  Rational v = 0;
  for (const auto& f : a.factors()) {
    int best = -1;
    for (const auto& g : f.generators) {
      int d = value(g.substitute(phi));
      if (best < 0 || d < best) best = d;
    }
    out.factor_orders.push_back(best);
    v += f.exponent * Rational(best);
  }
  out.log_discrepancy = Rational(out.k + 1) - v;
  return out;
}

}  // namespace wbmld::testing
