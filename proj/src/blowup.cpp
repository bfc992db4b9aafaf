#include "wbmld/blowup.hpp"

#include <algorithm>
#include <cctype>

#include "wbmld/errors.hpp"
#include "wbmld/factor.hpp"
#include "wbmld/parse.hpp"

namespace wbmld {

CenterSpec CenterSpec::origin() { return CenterSpec{}; }

CenterSpec CenterSpec::point(std::vector<Rational> coords) {
  CenterSpec c;
  c.kind = Kind::point;
  c.coordinates = std::move(coords);
  return c;
}

CenterSpec CenterSpec::curve(int exceptional_var, Polynomial poly, int monic_var) {
  CenterSpec c;
  c.kind = Kind::curve;
  c.exceptional_var = exceptional_var;
  c.curve_poly = std::move(poly);
  c.monic_var = monic_var;
  return c;
}

static std::string var_name(int i) { return "x" + std::to_string(i + 1); }

static std::string short_rational(const Rational& r) { return r.is_integer() ? r.numerator().get_str() : r.str(); }

std::string CenterSpec::str() const {
  switch (kind) {
    case Kind::origin:
      return "origin";
    case Kind::point: {
      std::string s = "point(";
      for (std::size_t i = 0; i < coordinates.size(); ++i) {
        if (i) s += ",";
        s += short_rational(coordinates[i]);
      }
      return s + ")";
    }
    case Kind::curve:
      return "curve(exc=" + var_name(exceptional_var) + ", poly=" + curve_poly.str() + ", monic_in=" + var_name(monic_var) + ")";
  }
  return "";
}

std::string BlowupStep::str() const {
  std::string s = "step weight=" + weight.str() + " center=" + center.str();
  if (chart) s += " chart=" + var_name(*chart);
  if (!recentering.empty()) {
    s += " recentering=(";
    for (std::size_t i = 0; i < recentering.size(); ++i) {
      if (i) s += ", ";
      s += recentering[i].str();
    }
    s += ")";
  }
  return s;
}

std::string BlowupPlan::str() const {
  std::string s;
  for (const auto& st : steps) s += st.str() + "\n";
  return s;
}

ChartState ChartState::initial(const RealIdeal& a, const std::vector<Polynomial>& probes) {
  ChartState s;
  s.nvars = a.nvars();
  s.factors = a.factors();
  for (const auto& p : probes) {
    if (p.nvars() != a.nvars()) throw DomainError("probe polynomial lives in a ring of the wrong dimension");
    if (p.is_zero()) throw DomainError("probe polynomial is zero");
  }
  s.probes = probes;
  return s;
}

ChartState ChartState::on_chart(const RealIdeal& b, int exceptional_var, int chart_weight) {
  ChartState s;
  s.nvars = b.nvars();
  s.factors = b.factors();
  s.exceptional_var = exceptional_var;
  s.chart_weight = chart_weight;
  return s;
}

namespace {

Rational linear_det(const std::vector<Polynomial>& R) {
  int n = static_cast<int>(R.size());
  std::vector<std::vector<Rational>> M(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M[i][j] = R[i].coefficient(ExponentVector::unit(j));
  Rational det = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (!M[r][c].is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      std::swap(M[piv], M[c]);
      det = -det;
    }
    det *= M[c][c];
    for (int r = c + 1; r < n; ++r) {
      Rational f = M[r][c] / M[c][c];
      for (int k = c; k < n; ++k) M[r][k] -= f * M[c][k];
    }
  }
  return det;
}

Polynomial jacobian_det(const std::vector<Polynomial>& R) {
  int n = static_cast<int>(R.size());
  if (n == 1) return R[0].derivative(0);
  auto d = [&](int i, int j) { return R[i].derivative(j); };
  if (n == 2) return d(0, 0) * d(1, 1) - d(0, 1) * d(1, 0);
  return d(0, 0) * (d(1, 1) * d(2, 2) - d(1, 2) * d(2, 1)) - d(0, 1) * (d(1, 0) * d(2, 2) - d(1, 2) * d(2, 0)) +
         d(0, 2) * (d(1, 0) * d(2, 1) - d(1, 1) * d(2, 0));
}

std::vector<Polynomial> recentering_or_identity(const BlowupStep& step, int nvars) {
  return step.recentering.empty() ? identity_images(nvars) : step.recentering;
}

int default_point_chart(const Weight& w) {
  int j = 0;
  for (int i = 1; i < w.size(); ++i)
    if (w[i] < w[j]) j = i;
  return j;
}

// Chart coordinates c as polynomials in the step's local coordinates y.
std::vector<Polynomial> local_images(const BlowupStep& step, int nvars) {
  auto R = recentering_or_identity(step, nvars);
  if (step.center.kind == CenterSpec::Kind::point) {
    for (int i = 0; i < nvars; ++i) R[i] += Polynomial::constant(nvars, step.center.coordinates[i]);
  }
  return R;
}

}  // namespace

void validate_step(const ChartState& state, const BlowupStep& step, bool final_step) {
  int n = state.nvars;
  const Weight& w = step.weight;
  if (w.size() == 0) throw DomainError("step without a weight");
  if (!w.is_primitive()) throw DomainError("weight " + w.str() + " is not primitive");
  if (!step.recentering.empty()) {
    if (static_cast<int>(step.recentering.size()) != n) throw DomainError("recentering must list one image per coordinate");
    for (const auto& r : step.recentering)
      if (r.nvars() != n) throw DomainError("recentering image lives in a ring of the wrong dimension");
  }
  const auto& c = step.center;
  if (c.kind == CenterSpec::Kind::curve) {
    if (n != 3) throw DomainError("curve centers need three variables");
    if (w.size() != 2) throw DomainError("curve centers take a weight (w_u, w_h)");
    if (state.exceptional_var < 0) throw DomainError("a curve center must lie on an exceptional divisor");
    if (c.exceptional_var != state.exceptional_var)
      throw DomainError("curve center names " + var_name(c.exceptional_var) + " but the exceptional coordinate is " +
                        var_name(state.exceptional_var));
    if (c.monic_var < 0 || c.monic_var >= n || c.monic_var == c.exceptional_var)
      throw DomainError("invalid monic variable for curve center");
    const Polynomial& u = c.curve_poly;
    if (u.nvars() != n || u.is_zero() || !u.involves(c.monic_var))
      throw DomainError("curve polynomial must involve its monic variable");
    if (!u.coefficients_in(c.monic_var).back().is_constant())
      throw DomainError("curve polynomial " + u.str() + " is not monic in " + var_name(c.monic_var));
    Polynomial u0 = u.substitute_var(c.exceptional_var, Polynomial(n));
    auto parts = squarefree_decomposition(u0);
    if (parts.size() != 1 || parts[0].multiplicity != 1)
      throw DomainError("curve polynomial restricted to the exceptional divisor is not reduced");
    if (state.chart_weight > 1) {
      for (int i = 0; i < n; ++i)
        if (i != c.exceptional_var && exact_divide(u0, Polynomial::variable(n, i)))
          throw DomainError("curve center lies on the coordinate plane " + var_name(i) + "=0 of a weighted chart");
    }
    if (!step.recentering.empty()) {
      if (!(step.recentering[c.exceptional_var] == Polynomial::variable(n, c.exceptional_var)))
        throw DomainError("recentering of a curve step must fix the exceptional coordinate");
      Polynomial J = jacobian_det(step.recentering);
      if (!J.is_constant() || J.is_zero()) throw DomainError("recentering of a curve step must have constant nonzero Jacobian");
    }
    if (!final_step && u.degree_in(c.monic_var) != 1)
      throw DomainError("a non-final curve center must be linear in its monic variable");
    if (step.chart && *step.chart != c.exceptional_var && *step.chart != c.monic_var)
      throw DomainError("chart of a curve step must be the exceptional or the monic variable");
    return;
  }
  if (w.size() != n) throw DomainError("point weight " + w.str() + " does not match dimension " + std::to_string(n));
  std::vector<Rational> p(n, Rational(0));
  if (c.kind == CenterSpec::Kind::point) {
    if (static_cast<int>(c.coordinates.size()) != n) throw DomainError("point center has the wrong number of coordinates");
    p = c.coordinates;
  }
  if (state.exceptional_var < 0) {
    for (const auto& x : p)
      if (!x.is_zero()) throw DomainError("the first center must be the origin");
  } else {
    if (!p[state.exceptional_var].is_zero())
      throw DomainError("point center is not on the exceptional divisor " + var_name(state.exceptional_var) + "=0");
    if (state.chart_weight > 1) {
      for (int i = 0; i < n; ++i)
        if (i != state.exceptional_var && p[i].is_zero())
          throw DomainError("point center lies on the coordinate plane " + var_name(i) + "=0 of a weighted chart");
    }
  }
  if (!step.recentering.empty()) {
    for (const auto& r : step.recentering)
      if (!r.constant_term().is_zero()) throw DomainError("recentering must fix the origin");
    if (linear_det(step.recentering).is_zero()) throw DomainError("recentering is not invertible at the origin");
  }
  if (step.chart && (*step.chart < 0 || *step.chart >= n)) throw DomainError("chart index out of range");
}

std::vector<std::pair<int, int>> curve_support(const Polynomial& g, int h_var, const Polynomial& u, int monic_var) {
  if (g.is_zero()) throw DomainError("order of the zero polynomial along a curve");
  std::vector<std::pair<int, int>> raw;
  Polynomial rest = g;
  int b = 0;
  while (!rest.is_zero()) {
    auto [q, r] = divide_monic(rest, u, monic_var);
    if (!r.is_zero()) {
      auto cs = r.coefficients_in(h_var);
      for (int a = 0; a < static_cast<int>(cs.size()); ++a)
        if (!cs[a].is_zero()) {
          raw.emplace_back(a, b);
          break;  // larger a with the same b is dominated
        }
    }
    rest = q;
    ++b;
  }
  std::vector<std::pair<int, int>> out;
  for (const auto& x : raw) {
    bool dominated = false;
    for (const auto& y : raw)
      if (y != x && y.first <= x.first && y.second <= x.second) dominated = true;
    if (!dominated) out.push_back(x);
  }
  return out;
}

int curve_order(const std::vector<std::pair<int, int>>& support, int w_u, int w_h) {
  if (support.empty()) throw DomainError("empty curve support");
  int best = -1;
  for (const auto& [a, b] : support) {
    int v = a * w_h + b * w_u;
    if (best < 0 || v < best) best = v;
  }
  return best;
}

namespace {

// Valuation of the step's divisor on polynomials in chart coordinates.
class StepValuer {
 public:
  StepValuer(const ChartState& state, const BlowupStep& step) : step_(step) {
    images_ = local_images(step, state.nvars);
  }
  int operator()(const Polynomial& g) const {
    Polynomial pulled = g.substitute(images_);
    if (step_.center.kind == CenterSpec::Kind::curve) {
      const auto& c = step_.center;
      return curve_order(curve_support(pulled, c.exceptional_var, c.curve_poly, c.monic_var), step_.weight[0], step_.weight[1]);
    }
    return weighted_order(pulled, step_.weight);
  }

 private:
  const BlowupStep& step_;
  std::vector<Polynomial> images_;
};

int order_of_factor(const StepValuer& v, const IdealFactor& f) {
  int best = -1;
  for (const auto& g : f.generators) {
    int d = v(g);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

std::string describe(const BlowupStep& step, int index, const StepReport& r) {
  std::string s = "step " + std::to_string(index + 1) + ": weight " + step.weight.str() + " at " + step.center.str();
  if (r.chart >= 0) s += ", chart " + var_name(r.chart);
  s += ", k += " + std::to_string(r.k_contribution) + ", factor orders [";
  for (std::size_t i = 0; i < r.factor_orders.size(); ++i) s += (i ? "," : "") + std::to_string(r.factor_orders[i]);
  s += "]";
  if (!r.exceptional_orders.empty()) {
    s += ", exceptional orders [";
    for (std::size_t i = 0; i < r.exceptional_orders.size(); ++i) s += (i ? "," : "") + std::to_string(r.exceptional_orders[i]);
    s += "]";
  }
  return s;
}

StepReport valuation_report(const ChartState& state, const BlowupStep& step) {
  StepValuer v(state, step);
  StepReport r;
  r.k_contribution = step.weight.sum() - 1;
  for (const auto& f : state.factors) r.factor_orders.push_back(order_of_factor(v, f));
  for (const auto& t : state.exceptional_totals) r.exceptional_orders.push_back(v(t));
  for (const auto& t : state.exceptional_propers) r.proper_orders.push_back(v(t));
  for (const auto& p : state.probes) r.probe_orders.push_back(v(p));
  return r;
}

}  // namespace

StepReport step_valuation(const ChartState& state, const BlowupStep& step) {
  validate_step(state, step, true);
  StepReport r = valuation_report(state, step);
  r.description = describe(step, state.steps_applied, r);
  return r;
}

StepResult apply_step(const ChartState& state, const BlowupStep& step) {
  validate_step(state, step, false);
  const int n = state.nvars;
  StepReport report = valuation_report(state, step);

  std::vector<Polynomial> images;  // chart coordinates of `state` in terms of the new chart coordinates
  int chart = -1;
  int chart_weight = 1;
  auto var = [n](int i) { return Polynomial::variable(n, i); };
  if (step.center.kind == CenterSpec::Kind::curve) {
    const auto& c = step.center;
    int h = c.exceptional_var, m = c.monic_var;
    int wu = step.weight[0], wh = step.weight[1];
    chart = step.chart ? *step.chart : (wh <= wu ? h : m);
    auto coeffs = c.curve_poly.coefficients_in(m);
    Rational alpha = coeffs[1].constant_term();
    const Polynomial& beta = coeffs[0];
    std::vector<Polynomial> Z = identity_images(n);
    if (chart == h) {
      Z[h] = var(h).pow(wh);
      Z[m] = var(h).pow(wu) * var(m);
      chart_weight = wh;
    } else {
      Z[m] = var(m).pow(wu);
      Z[h] = var(m).pow(wh) * var(h);
      chart_weight = wu;
    }
    std::vector<Polynomial> y = Z;
    y[m] = (Z[m] - beta.substitute(Z)) * alpha.inverse();
    auto R = recentering_or_identity(step, n);
    for (auto& r : R) images.push_back(r.substitute(y));
  } else {
    const Weight& w = step.weight;
    chart = step.chart ? *step.chart : default_point_chart(w);
    chart_weight = w[chart];
    std::vector<Polynomial> Y(n, Polynomial(n));
    for (int i = 0; i < n; ++i) Y[i] = i == chart ? var(chart).pow(w[i]) : var(chart).pow(w[i]) * var(i);
    for (auto& r : local_images(step, n)) images.push_back(r.substitute(Y));
  }
  report.chart = chart;
  report.description = describe(step, state.steps_applied, report);

  ChartState next;
  next.nvars = n;
  for (std::size_t f = 0; f < state.factors.size(); ++f) {
    IdealFactor nf{{}, state.factors[f].exponent};
    int low = -1;
    std::vector<Polynomial> pulled;
    for (const auto& g : state.factors[f].generators) {
      pulled.push_back(g.substitute(images));
      int d = pulled.back().min_degree_in(chart);
      if (low < 0 || d < low) low = d;
    }
    if (low != report.factor_orders[f])
      throw InvariantError("chart order " + std::to_string(low) + " differs from the step valuation " +
                           std::to_string(report.factor_orders[f]));
    ExponentVector shift;
    shift[chart] = low;
    for (auto& g : pulled) {
      Polynomial r(n);
      for (const auto& [e, cf] : g.terms()) r.add_term(e - shift, cf);
      nf.generators.push_back(r);
    }
    next.factors.push_back(std::move(nf));
  }
  for (std::size_t i = 0; i < state.probes.size(); ++i) {
    auto split = extract_power(state.probes[i].substitute(images), chart);
    if (split.power != report.probe_orders[i]) throw InvariantError("chart order of a probe differs from the step valuation");
    next.probes.push_back(split.rest);
  }
  for (const auto& t : state.exceptional_totals) next.exceptional_totals.push_back(t.substitute(images));
  for (const auto& p : state.exceptional_propers) next.exceptional_propers.push_back(extract_power(p.substitute(images), chart).rest);
  next.exceptional_totals.push_back(var(chart));
  next.exceptional_propers.push_back(var(chart));
  next.exceptional_var = chart;
  next.chart_weight = chart_weight;
  next.steps_applied = state.steps_applied + 1;
  return {std::move(next), std::move(report)};
}

DivisorRecord evaluate_plan_from(const ChartState& base, const BlowupPlan& plan) {
  if (plan.steps.empty()) throw DomainError("empty blow-up plan");
  DivisorRecord rec;
  ChartState state = base;
  for (std::size_t i = 0; i + 1 < plan.steps.size(); ++i) {
    auto res = apply_step(state, plan.steps[i]);
    rec.steps.push_back(res.report);
    state = std::move(res.state);
  }
  StepReport last = step_valuation(state, plan.steps.back());
  rec.steps.push_back(last);
  std::size_t prior = plan.steps.size() - 1;
  rec.exceptional_multiplicities = last.exceptional_orders;
  rec.proper_orders = last.proper_orders;
  rec.k = last.k_contribution;
  for (std::size_t i = 0; i < prior; ++i) rec.k += rec.steps[i].k_contribution * rec.exceptional_multiplicities[i];
  rec.factor_orders = last.factor_orders;
  rec.probe_orders = last.probe_orders;
  for (std::size_t i = 0; i < prior; ++i) {
    for (std::size_t f = 0; f < rec.factor_orders.size(); ++f)
      rec.factor_orders[f] += rec.steps[i].factor_orders[f] * rec.exceptional_multiplicities[i];
    for (std::size_t p = 0; p < rec.probe_orders.size(); ++p)
      rec.probe_orders[p] += rec.steps[i].probe_orders[p] * rec.exceptional_multiplicities[i];
  }
  Rational v = 0;
  for (std::size_t f = 0; f < base.factors.size(); ++f) v += base.factors[f].exponent * Rational(rec.factor_orders[f]);
  rec.log_discrepancy = Rational(rec.k + 1) - v;
  for (const auto& s : rec.steps) rec.trace.push_back(s.description);
  std::string summary = "k_E = " + std::to_string(rec.k) + ", v_E = [";
  for (std::size_t f = 0; f < rec.factor_orders.size(); ++f) summary += (f ? "," : "") + std::to_string(rec.factor_orders[f]);
  summary += "], a(E) = " + rec.log_discrepancy.str();
  rec.trace.push_back(summary);
  return rec;
}

DivisorRecord evaluate_plan(const RealIdeal& a, const BlowupPlan& plan, const std::vector<Polynomial>& probes) {
  return evaluate_plan_from(ChartState::initial(a, probes), plan);
}

Rational single_blowup_discrepancy(const RealIdeal& a, const Weight& w) {
  if (w.size() != a.nvars()) throw DomainError("weight length does not match the number of variables");
  return Rational(w.sum()) - ideal_order(a, w);
}

DecompositionReport decomposition_check(const RealIdeal& a, const BlowupPlan& plan) {
  if (plan.steps.empty()) throw DomainError("empty blow-up plan");
  DecompositionReport rep;
  rep.lhs = evaluate_plan(a, plan).log_discrepancy;
  const auto& first = plan.steps.front();
  if (first.center.kind == CenterSpec::Kind::curve) throw DomainError("the first center must be the origin");
  validate_step(ChartState::initial(a), first, plan.steps.size() == 1);
  RealIdeal moved = first.recentering.empty() ? a : a.substitute(first.recentering);
  rep.first_discrepancy = single_blowup_discrepancy(moved, first.weight);
  if (plan.steps.size() == 1) {
    rep.exceptional_multiplicity = 1;
    rep.residual = 0;
  } else {
    auto res = apply_step(ChartState::initial(a), first);
    RealIdeal b(a.nvars(), res.state.factors);
    b.add_factor({Polynomial::variable(a.nvars(), res.state.exceptional_var)}, 1);
    ChartState base = ChartState::on_chart(b, res.state.exceptional_var, res.state.chart_weight);
    BlowupPlan rest{std::vector<BlowupStep>(plan.steps.begin() + 1, plan.steps.end())};
    DivisorRecord rec = evaluate_plan_from(base, rest);
    rep.residual = rec.log_discrepancy;
    rep.exceptional_multiplicity = rec.factor_orders.back();
  }
  rep.holds = rep.lhs == rep.residual + Rational(rep.exceptional_multiplicity) * rep.first_discrepancy;
  return rep;
}

Rational normalizing_exponent(const DivisorRecord& record, const RealIdeal& a) {
  Rational v = 0;
  for (std::size_t f = 0; f < a.factors().size(); ++f) v += a.factors()[f].exponent * Rational(record.factor_orders[f]);
  if (v.is_zero()) throw DomainError("the ideal has order zero along E");
  return Rational(record.k + 1) / v;
}

// ---- plan text ----

namespace {

struct Item {
  std::string key, value;
  int column;
};

std::vector<std::string> split_top_level(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::string inside_parens(const std::string& v, const std::string& what, int line, int col) {
  auto open = v.find('(');
  if (open == std::string::npos || v.back() != ')') throw ParseError("expected " + what + "(...)", line, col);
  return v.substr(open + 1, v.size() - open - 2);
}

int parse_var(const std::string& s, int nvars, int line, int col) {
  int i = variable_index(trim(s), nvars);
  if (i < 0) throw ParseError("unknown variable '" + trim(s) + "'", line, col);
  return i;
}

Polynomial parse_poly_at(const std::string& s, int nvars, int line, int col) {
  try {
    return parse_polynomial(s, nvars);
  } catch (const ParseError& e) {
    throw ParseError(e.detail(), line, col + std::max(0, e.column() - 1));
  }
}

}  // namespace

BlowupStep parse_step(std::string_view line, int nvars, int line_number) {
  std::string text(line);
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip();
  if (text.compare(pos, 4, "step") != 0) throw ParseError("expected 'step'", line_number, static_cast<int>(pos) + 1);
  pos += 4;
  std::vector<Item> items;
  for (;;) {
    skip();
    if (pos >= text.size()) break;
    int col = static_cast<int>(pos) + 1;
    std::size_t eq = text.find('=', pos);
    if (eq == std::string::npos) throw ParseError("expected key=value", line_number, col);
    std::string key = trim(text.substr(pos, eq - pos));
    pos = eq + 1;
    int depth = 0;
    std::size_t start = pos;
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (depth < 0) throw ParseError("unbalanced ')'", line_number, static_cast<int>(pos) + 1);
      if (depth == 0 && std::isspace(static_cast<unsigned char>(c))) break;
      ++pos;
    }
    if (depth != 0) throw ParseError("unbalanced '('", line_number, static_cast<int>(start) + 1);
    items.push_back({key, text.substr(start, pos - start), static_cast<int>(start) + 1});
  }
  BlowupStep step;
  bool have_weight = false, have_center = false;
  for (const auto& it : items) {
    if (it.key == "weight") {
      std::vector<int> w;
      for (const auto& part : split_top_level(inside_parens(it.value, "weight", line_number, it.column), ',')) {
        std::string t = trim(part);
        if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
          throw ParseError("weight entries must be positive integers", line_number, it.column);
        w.push_back(std::stoi(t));
      }
      try {
        step.weight = Weight(w);
      } catch (const DomainError& e) {
        throw ParseError(e.what(), line_number, it.column);
      }
      have_weight = true;
    } else if (it.key == "center") {
      have_center = true;
      if (it.value == "origin") {
        step.center = CenterSpec::origin();
      } else if (it.value.rfind("point", 0) == 0) {
        std::vector<Rational> coords;
        for (const auto& part : split_top_level(inside_parens(it.value, "point", line_number, it.column), ',')) {
          try {
            coords.push_back(Rational::parse(part));
          } catch (const ParseError& e) {
            throw ParseError(e.detail(), line_number, it.column);
          }
        }
        step.center = CenterSpec::point(coords);
      } else if (it.value.rfind("curve", 0) == 0) {
        int exc = -1, monic = -1;
        std::optional<Polynomial> poly;
        std::string body = inside_parens(it.value, "curve", line_number, it.column);
        for (const auto& part : split_top_level(body, ',')) {
          auto eq = part.find('=');
          if (eq == std::string::npos) throw ParseError("expected key=value inside curve(...)", line_number, it.column);
          std::string k = trim(part.substr(0, eq)), v = part.substr(eq + 1);
          if (k == "exc")
            exc = parse_var(v, nvars, line_number, it.column);
          else if (k == "poly")
            poly = parse_poly_at(v, nvars, line_number, it.column + 6);
          else if (k == "monic_in")
            monic = parse_var(v, nvars, line_number, it.column);
          else
            throw ParseError("unknown curve field '" + k + "'", line_number, it.column);
        }
        if (exc < 0 || monic < 0 || !poly) throw ParseError("curve(...) needs exc, poly and monic_in", line_number, it.column);
        step.center = CenterSpec::curve(exc, *poly, monic);
      } else {
        throw ParseError("unknown center '" + it.value + "'", line_number, it.column);
      }
    } else if (it.key == "chart") {
      step.chart = parse_var(it.value, nvars, line_number, it.column);
    } else if (it.key == "recentering") {
      for (const auto& part : split_top_level(inside_parens(it.value, "", line_number, it.column), ','))
        step.recentering.push_back(parse_poly_at(part, nvars, line_number, it.column));
    } else {
      throw ParseError("unknown step field '" + it.key + "'", line_number, it.column);
    }
  }
  if (!have_weight) throw ParseError("step without weight=", line_number, 1);
  if (!have_center) throw ParseError("step without center=", line_number, 1);
  return step;
}

BlowupPlan parse_plan(std::string_view text, int nvars) {
  BlowupPlan plan;
  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_number;
    auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    if (!trim(line).empty()) plan.steps.push_back(parse_step(line, nvars, line_number));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (plan.steps.empty()) throw ParseError("plan has no steps");
  return plan;
}

}  // namespace wbmld
