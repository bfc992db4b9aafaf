#include "wbmld/search.hpp"

#include <algorithm>
#include <atomic>
#include <climits>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "wbmld/errors.hpp"
#include "wbmld/factor.hpp"

namespace wbmld {

namespace {

std::string var_name(int i) { return "x" + std::to_string(i + 1); }

Polynomial var(int n, int i) { return Polynomial::variable(n, i); }

}  // namespace

std::vector<Polynomial> CoordinateChange::images(int nvars) const {
  auto R = identity_images(nvars);
  if (target >= 0) R[target] += Polynomial::monomial(nvars, monomial, coefficient);
  return R;
}

bool CoordinateChange::relevant_for(const Weight& w) const { return target < 0 || w.dot(monomial) < w[target]; }

std::string CoordinateChange::str() const {
  if (target < 0) return "identity";
  return var_name(target) + " <- " + var_name(target) + " + " + Polynomial::monomial(kMaxVars, monomial, coefficient).str();
}

namespace {

mpz_class height(const Rational& q) {
  mpz_class n = abs(q.numerator());
  return n > q.denominator() ? n : q.denominator();
}

void monomials_without(int nvars, int skip, int degree, int pos, ExponentVector cur, std::vector<ExponentVector>& out) {
  if (pos == nvars) {
    if (degree == 0) out.push_back(cur);
    return;
  }
  if (pos == skip) {
    monomials_without(nvars, skip, degree, pos + 1, cur, out);
    return;
  }
  for (int k = degree; k >= 0; --k) {
    ExponentVector e = cur;
    e[pos] = k;
    monomials_without(nvars, skip, degree - k, pos + 1, e, out);
  }
}

}  // namespace

Catalog Catalog::build(const RealIdeal& a, int depth) {
  if (depth < 0) throw DomainError("catalog depth must be nonnegative");
  const int n = a.nvars();
  std::vector<Rational> coefs{1, -1, 2, -2, Rational(1, 2), Rational(-1, 2)};
  for (const auto& f : a.factors())
    for (const auto& g : f.generators) {
      std::vector<Rational> cs;
      for (const auto& [e, c] : g.terms()) cs.push_back(c);
      for (std::size_t i = 0; i < cs.size(); ++i)
        for (std::size_t j = 0; j < cs.size(); ++j) {
          if (i == j) continue;
          Rational q = cs[i] / cs[j];
          if (height(q) <= 12) {
            coefs.push_back(q);
            coefs.push_back(-q);
          }
        }
    }
  auto key_less = [](const Rational& x, const Rational& y) {
    mpz_class hx = height(x), hy = height(y);
    if (hx != hy) return hx < hy;
    if (x.abs() != y.abs()) return x.abs() < y.abs();
    return x > y;
  };
  std::sort(coefs.begin(), coefs.end(), key_less);
  coefs.erase(std::unique(coefs.begin(), coefs.end()), coefs.end());
  if (coefs.size() > 16) coefs.resize(16);

  Catalog cat;
  cat.coefficients_ = coefs;
  cat.entries_.push_back(CoordinateChange{});
  for (int t = 0; t < n && n > 1; ++t)
    for (int d = 1; d <= depth; ++d) {
      std::vector<ExponentVector> ms;
      monomials_without(n, t, d, 0, ExponentVector{}, ms);
      for (const auto& m : ms)
        for (const auto& c : coefs) cat.entries_.push_back(CoordinateChange{t, m, c});
    }
  return cat;
}

bool is_standard_weight(const Weight& w) {
  if (w.size() != 3 || !w.is_primitive()) return false;
  auto e = w.entries();
  std::sort(e.begin(), e.end());
  return e[0] == e[1] && e[1] <= e[2];
}

namespace {

// Exponent lists of generators, for fast weighted orders.
struct CompiledFactor {
  std::vector<std::vector<ExponentVector>> gens;
  Rational exponent;
};
using CompiledIdeal = std::vector<CompiledFactor>;

CompiledIdeal compile(const std::vector<IdealFactor>& factors) {
  CompiledIdeal out;
  for (const auto& f : factors) {
    CompiledFactor cf{{}, f.exponent};
    for (const auto& g : f.generators) {
      std::vector<ExponentVector> es;
      for (const auto& [e, c] : g.terms()) es.push_back(e);
      cf.gens.push_back(std::move(es));
    }
    out.push_back(std::move(cf));
  }
  return out;
}

int order_of(const std::vector<ExponentVector>& g, const Weight& w) {
  int best = INT_MAX;
  for (const auto& e : g) best = std::min(best, w.dot(e));
  return best;
}

int order_of(const CompiledFactor& f, const Weight& w) {
  int best = INT_MAX;
  for (const auto& g : f.gens) best = std::min(best, order_of(g, w));
  return best == INT_MAX ? 0 : best;
}

Rational value_of(const CompiledIdeal& a, const Weight& w) {
  Rational v = 0;
  for (const auto& f : a) v += f.exponent * Rational(order_of(f, w));
  return v;
}

std::vector<Weight> all_weights(int n, int bound) {
  std::vector<Weight> out;
  std::vector<int> e(n, 1);
  while (true) {
    Weight w(e);
    if (w.is_primitive()) out.push_back(w);
    int i = n - 1;
    while (i >= 0 && e[i] == bound) e[i--] = 1;
    if (i < 0) break;
    ++e[i];
  }
  return out;
}

bool in_e1_family(const Weight& w) {
  auto sh = standard_shape(w);
  if (!sh) return false;
  return sh->r == 1 || (sh->r == 2 && sh->s == 3);
}

// First-step weights: standard weights for N = 3 (classification family first), all weights otherwise.
std::vector<Weight> first_step_weights(int n, int bound) {
  std::vector<Weight> out;
  for (const auto& w : all_weights(n, bound))
    if (n != 3 || is_standard_weight(w)) out.push_back(w);
  if (n == 3)
    std::stable_partition(out.begin(), out.end(), [](const Weight& w) { return in_e1_family(w); });
  return out;
}

BlowupStep origin_step(const Weight& w, const CoordinateChange& ch, int n, std::optional<int> chart = std::nullopt) {
  BlowupStep s;
  s.weight = w;
  s.center = CenterSpec::origin();
  s.chart = chart;
  if (!ch.is_identity()) s.recentering = ch.images(n);
  return s;
}

// Catalog plus transformed ideals, shared by the searches.
struct Context {
  const RealIdeal* a = nullptr;
  int n = 3;
  Catalog catalog;
  std::vector<RealIdeal> transformed;
  std::vector<CompiledIdeal> compiled;

  Context(const RealIdeal& ideal, int depth) : a(&ideal), n(ideal.nvars()), catalog(Catalog::build(ideal, depth)) {
    for (const auto& ch : catalog.entries()) {
      transformed.push_back(ch.is_identity() ? ideal : ideal.substitute(ch.images(n)));
      compiled.push_back(compile(transformed.back().factors()));
    }
  }
};

OneStepResult one_step_in(const Context& ctx, int bound) {
  if (bound < 1) throw DomainError("weight bound must be at least 1");
  OneStepResult res;
  bool have = false;
  for (const auto& w : all_weights(ctx.n, bound)) {
    Rational best_w;
    std::size_t best_j = 0;
    bool have_w = false;
    for (std::size_t j = 0; j < ctx.catalog.size(); ++j) {
      if (!ctx.catalog[j].relevant_for(w)) continue;
      Rational v = Rational(w.sum()) - value_of(ctx.compiled[j], w);
      if (!have_w || v < best_w) {
        best_w = v;
        best_j = j;
        have_w = true;
      }
    }
    BlowupPlan plan{{origin_step(w, ctx.catalog[best_j], ctx.n)}};
    res.log.push_back({plan.str(), best_w, 1});
    if (!have || best_w < res.best) {
      res.best = best_w;
      res.weight = w;
      res.change_index = best_j;
      res.plan = plan;
      have = true;
    }
  }
  return res;
}

void require_dimension(const RealIdeal& a) {
  if (a.nvars() < 2 || a.nvars() > 3) throw DomainError("searches support dimension 2 or 3");
}

}  // namespace

OneStepResult one_step_search(const RealIdeal& a, int weight_bound, int catalog_depth) {
  require_dimension(a);
  Context ctx(a, catalog_depth);
  return one_step_in(ctx, weight_bound);
}

StandardWeightReport standard_weight_infer(const RealIdeal& a, int catalog_depth, int weight_bound) {
  if (a.nvars() != 3) throw DomainError("standard weights are defined for three variables");
  if (catalog_depth < 0) throw DomainError("catalog depth must be nonnegative");
  std::optional<Rational> previous;
  OneStepResult best;
  std::vector<CoordinateChange> entries;
  for (int d = 0; d <= catalog_depth; ++d) {
    Context ctx(a, d);
    auto r = one_step_in(ctx, weight_bound);
    if (d == catalog_depth) {
      best = r;
      entries = ctx.catalog.entries();
    } else {
      previous = r.best;
    }
  }
  StandardWeightReport rep;
  rep.one_step_value = best.best;
  rep.certified = previous && *previous == best.best;

  const Weight& w = best.weight;
  int lo = 0, hi = 0;
  for (int i = 0; i < 3; ++i) {
    if (w[i] < w[lo]) lo = i;
    if (w[i] >= w[hi]) hi = i;
  }
  if (lo == hi) hi = 2, lo = 0;  // all equal
  int mid = 3 - lo - hi;
  // y in terms of z, where z = (z_lo, z_mid, z_hi) occupy positions 0, 1, 2.
  std::vector<Polynomial> y(3, Polynomial(3));
  y[lo] = var(3, 0);
  y[mid] = w[mid] > w[lo] ? var(3, 1) - var(3, 0) : var(3, 1);
  y[hi] = var(3, 2);
  auto phi = entries[best.change_index].images(3);
  for (const auto& p : phi) rep.system.push_back(p.substitute(y));
  int g = std::gcd(w[lo], w[hi]);
  rep.weight = Weight{w[lo] / g, w[lo] / g, w[hi] / g};
  return rep;
}

namespace {

// Minimal-order initial forms of each factor.
std::vector<std::vector<Polynomial>> minimal_initial_forms(const RealIdeal& b, const Weight& w) {
  std::vector<std::vector<Polynomial>> out;
  for (const auto& f : b.factors()) {
    int ord = factor_order(f, w);
    std::vector<Polynomial> forms;
    for (const auto& g : f.generators)
      if (weighted_order(g, w) == ord) forms.push_back(initial_form(g, w));
    out.push_back(std::move(forms));
  }
  return out;
}

Rational order_along(const RealIdeal& b, const std::vector<std::vector<Polynomial>>& forms, const Polynomial& B) {
  Rational total = 0;
  for (std::size_t f = 0; f < forms.size(); ++f) {
    int m = INT_MAX;
    for (const auto& F : forms[f]) m = std::min(m, F.is_constant() ? 0 : multiplicity_of(F, B));
    if (m != INT_MAX) total += b.factors()[f].exponent * Rational(m);
  }
  return total;
}

bool is_coordinate(const Polynomial& G) { return G.size() == 1 && G.total_degree() == 1; }

int default_chart(const Weight& w) {
  int j = 0;
  for (int i = 1; i < w.size(); ++i)
    if (w[i] < w[j]) j = i;
  return j;
}

struct PointSolutions {
  std::vector<std::vector<Rational>> points;  // coordinates of the two free variables
  bool irrational = false;
};

// Common rational zeros of polys in the variables a, b (univariate fall-back when b < 0).
PointSolutions common_zeros(const std::vector<Polynomial>& polys, int va, int vb) {
  PointSolutions out;
  std::vector<Polynomial> ps;
  for (const auto& p : polys)
    if (!p.is_zero()) ps.push_back(p);
  if (ps.empty()) return out;
  int n = ps[0].nvars();
  Polynomial E(n);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!ps[i].involves(vb)) {
      E = gcd(E, ps[i]);
      continue;
    }
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      Polynomial r = ps[j].involves(vb) ? resultant(ps[i], ps[j], vb) : ps[j];
      if (!r.is_zero()) E = gcd(E, r);
    }
  }
  if (E.is_zero() || E.is_constant()) return out;
  if (has_irrational_roots(E, va)) out.irrational = true;
  for (const auto& a0 : rational_roots(E, va)) {
    Polynomial G(n);
    for (const auto& p : ps) G = gcd(G, p.substitute_var(va, Polynomial::constant(n, a0)));
    if (G.is_zero() || G.is_constant()) continue;
    if (has_irrational_roots(G, vb)) out.irrational = true;
    for (const auto& b0 : rational_roots(G, vb)) out.points.push_back({a0, b0});
  }
  return out;
}

struct CurveCenter {
  Polynomial u{3};  // chart equation (X_c = 1)
  WeightedForm form;
  Rational gamma;
};

struct PointCenter {
  std::vector<Rational> coords;  // chart coordinates, exceptional coordinate 0
  Rational order;
};

struct CenterSet {
  std::vector<CurveCenter> curves;
  std::vector<PointCenter> points;
  bool irrational = false;
};

// Candidate second centers on E1 in chart c, from the initial divisor of b.
CenterSet find_centers(const RealIdeal& b, const Weight& w, bool prune) {
  CenterSet out;
  const int n = b.nvars();
  const int c = default_chart(w);
  auto divisor = initial_divisor(b, w);
  std::vector<int> free;
  for (int i = 0; i < n; ++i)
    if (i != c) free.push_back(i);
  std::vector<std::pair<Polynomial, Rational>> comps;
  for (const auto& d : divisor) {
    Polynomial u = d.component.poly.substitute_var(c, Polynomial::constant(n, 1));
    if (u.is_constant()) continue;
    comps.emplace_back(u, d.multiplicity);
    if (n == 3 && !is_coordinate(d.component.poly) && (!prune || d.multiplicity > 1))
      out.curves.push_back({u, d.component, d.multiplicity});
  }
  auto off_planes = [&](const std::vector<Rational>& p) {
    for (int i : free)
      if (p[i].is_zero()) return false;
    return true;
  };
  auto point_order = [&](const std::vector<Rational>& p) {
    std::vector<Polynomial> shift = identity_images(n);
    for (int i : free) shift[i] += Polynomial::constant(n, p[i]);
    Rational ord = 0;
    for (const auto& [u, g] : comps) ord += g * Rational(u.substitute(shift).lowest_degree());
    return ord;
  };
  std::set<std::vector<Rational>> seen;
  auto consider = [&](const std::vector<Rational>& pt2) {
    std::vector<Rational> p(n, Rational(0));
    for (std::size_t k = 0; k < free.size(); ++k) p[free[k]] = pt2[k];
    if (!off_planes(p) || !seen.insert(p).second) return;
    Rational ord = point_order(p);
    if (!prune || ord > 1) out.points.push_back({p, ord});
  };
  if (n == 2) {
    for (const auto& [u, g] : comps) {
      if (prune && !(g > 1)) continue;
      if (has_irrational_roots(u, free[0])) out.irrational = true;
      for (const auto& r : rational_roots(u, free[0])) consider({r});
    }
    return out;
  }
  int va = free[0], vb = free[1];
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const Polynomial& u = comps[i].first;
    auto sing = common_zeros({u, u.derivative(va), u.derivative(vb)}, va, vb);
    out.irrational = out.irrational || sing.irrational;
    for (const auto& p : sing.points) consider(p);
    for (std::size_t j = i + 1; j < comps.size(); ++j) {
      auto meet = common_zeros({u, comps[j].first}, va, vb);
      out.irrational = out.irrational || meet.irrational;
      for (const auto& p : meet.points) consider(p);
    }
  }
  return out;
}

std::string center_key(const RealIdeal& b, const Weight& w) {
  std::string key = w.str();
  for (const auto& forms : minimal_initial_forms(b, w)) {
    key += "|";
    for (const auto& F : forms) key += F.str() + ";";
  }
  return key;
}

struct Found {
  Rational value;
  BlowupPlan plan;
  std::string text;
};

bool better(const Found& x, const Found& y) {
  if (x.value != y.value) return x.value < y.value;
  if (x.plan.steps.size() != y.plan.steps.size()) return x.plan.steps.size() < y.plan.steps.size();
  const auto& wx = x.plan.steps[0].weight;
  const auto& wy = y.plan.steps[0].weight;
  if (wx != wy) return wx < wy;
  std::string cx = x.plan.steps.back().center.str(), cy = y.plan.steps.back().center.str();
  if (cx != cy) return cx < cy;
  return x.text < y.text;
}

void offer(std::optional<Found>& best, Found f) {
  if (!best || better(f, *best)) best = std::move(f);
}

// Curve centers: equation monic in a free variable, possibly after a shear.
struct CurveSetup {
  Polynomial u{3};
  int monic_var = -1;
  std::vector<Polynomial> recentering;
};

std::optional<CurveSetup> monic_setup(const Polynomial& u, int c) {
  const int n = u.nvars();
  auto try_var = [&](const Polynomial& p, int m) -> std::optional<Polynomial> {
    if (!p.involves(m)) return std::nullopt;
    Polynomial lc = p.coefficients_in(m).back();
    if (!lc.is_constant()) return std::nullopt;
    return p * lc.constant_term().inverse();
  };
  for (int m = 0; m < n; ++m)
    if (m != c)
      if (auto p = try_var(u, m)) return CurveSetup{*p, m, {}};
  for (Rational lambda : {Rational(1), Rational(-1), Rational(2), Rational(-2)})
    for (int a = 0; a < n; ++a)
      for (int m = 0; m < n; ++m) {
        if (a == c || m == c || a == m) continue;
        auto R = identity_images(n);
        R[a] += var(n, m) * lambda;
        if (auto p = try_var(u.substitute(R), m)) return CurveSetup{*p, m, R};
      }
  return std::nullopt;
}

std::vector<Weight> second_point_weights(int n, int bound) { return first_step_weights(n, bound); }

struct ItemResult {
  std::optional<Found> best;
  std::vector<SearchLogEntry> log;
  std::vector<std::string> notes;
  bool irrational = false;
};

class TwoStepSearcher {
 public:
  TwoStepSearcher(const Context& ctx, int bound, bool prune) : ctx_(ctx), bound_(bound), prune_(prune) {
    for (std::size_t j = 0; j < ctx.catalog.size(); ++j) {
      const auto& ch = ctx.catalog[j];
      if (ch.is_identity() || ch.monomial.total_degree() == 1) second_changes_.push_back(j);
    }
    point_weights_ = second_point_weights(ctx.n, bound);
  }

  ItemResult run(const Weight& w, std::size_t j, std::map<std::string, CenterSet>& cache) const {
    ItemResult out;
    const RealIdeal& b = ctx_.transformed[j];
    const int n = ctx_.n;
    std::string key = center_key(b, w);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, find_centers(b, w, prune_)).first;
    const CenterSet& centers = it->second;
    out.irrational = centers.irrational;
    if (centers.curves.empty() && centers.points.empty()) return out;

    const int c = default_chart(w);
    BlowupStep first = origin_step(w, ctx_.catalog[j], n, c);
    auto res1 = apply_step(ChartState::initial(*ctx_.a), first);
    const ChartState& state = res1.state;
    const int k1 = w.sum() - 1;
    const auto& o1 = res1.report.factor_orders;

    for (const auto& cc : centers.curves) {
      auto setup = monic_setup(cc.u, c);
      if (!setup) {
        out.notes.push_back("curve " + cc.form.str() + " on E1 of " + w.str() + " skipped: no monic chart equation");
        continue;
      }
      BlowupStep second;
      second.weight = Weight{1, 1};
      second.center = CenterSpec::curve(c, setup->u, setup->monic_var);
      second.recentering = setup->recentering;
      try {
        validate_step(state, second, true);
      } catch (const DomainError& e) {
        out.notes.push_back("curve " + cc.form.str() + " skipped: " + e.what());
        continue;
      }
      std::vector<std::vector<std::vector<std::pair<int, int>>>> supports;
      for (const auto& f : state.factors) {
        std::vector<std::vector<std::pair<int, int>>> fs;
        for (const auto& g : f.generators) {
          Polynomial pg = setup->recentering.empty() ? g : g.substitute(setup->recentering);
          fs.push_back(curve_support(pg, c, setup->u, setup->monic_var));
        }
        supports.push_back(std::move(fs));
      }
      std::optional<Found> local;
      for (int wu = 1; wu <= bound_; ++wu)
        for (int wh = 1; wh <= bound_; ++wh) {
          if (std::gcd(wu, wh) != 1) continue;
          Rational v = Rational(k1 * wh + wu + wh);
          for (std::size_t f = 0; f < supports.size(); ++f) {
            int o2 = INT_MAX;
            for (const auto& s : supports[f]) o2 = std::min(o2, curve_order(s, wu, wh));
            v -= state.factors[f].exponent * Rational(o1[f] * wh + o2);
          }
          if (local && !(v < local->value)) continue;
          second.weight = Weight{wu, wh};
          BlowupPlan plan{{first, second}};
          local = Found{v, plan, plan.str()};
        }
      if (local) {
        out.log.push_back({local->text, local->value, 2});
        offer(out.best, *local);
      }
    }

    for (const auto& pc : centers.points) {
      std::vector<Polynomial> shift = identity_images(n);
      for (int i = 0; i < n; ++i) shift[i] += Polynomial::constant(n, pc.coords[i]);
      std::vector<IdealFactor> translated;
      for (const auto& f : state.factors) {
        IdealFactor tf{{}, f.exponent};
        for (const auto& g : f.generators) tf.generators.push_back(g.substitute(shift));
        translated.push_back(std::move(tf));
      }
      std::optional<Found> local;
      for (std::size_t idx : second_changes_) {
        const auto& ch = ctx_.catalog[idx];
        std::vector<Polynomial> R = ch.images(n);
        std::vector<IdealFactor> moved = translated;
        if (!ch.is_identity())
          for (auto& f : moved)
            for (auto& g : f.generators) g = g.substitute(R);
        CompiledIdeal comp = compile(moved);
        std::vector<ExponentVector> t1;
        for (const auto& [e, cf] : R[c].terms()) t1.push_back(e);
        for (const auto& w2 : point_weights_) {
          if (!ch.relevant_for(w2)) continue;
          int m = order_of(t1, w2);
          Rational v = Rational(k1 * m + w2.sum());
          for (std::size_t f = 0; f < comp.size(); ++f)
            v -= comp[f].exponent * Rational(o1[f] * m + order_of(comp[f], w2));
          if (local && !(v < local->value)) continue;
          BlowupStep second;
          second.weight = w2;
          second.center = CenterSpec::point(pc.coords);
          if (!ch.is_identity()) second.recentering = R;
          BlowupPlan plan{{first, second}};
          local = Found{v, plan, plan.str()};
        }
      }
      if (local) {
        out.log.push_back({local->text, local->value, 2});
        offer(out.best, *local);
      }
    }
    return out;
  }

 private:
  const Context& ctx_;
  int bound_;
  bool prune_;
  std::vector<std::size_t> second_changes_;
  std::vector<Weight> point_weights_;
};

struct WorkItem {
  Weight w;
  std::size_t change;
};

std::vector<WorkItem> first_step_items(const Context& ctx, int bound) {
  std::vector<WorkItem> items;
  for (const auto& w : first_step_weights(ctx.n, bound))
    for (std::size_t j = 0; j < ctx.catalog.size(); ++j)
      if (ctx.catalog[j].relevant_for(w)) items.push_back({w, j});
  return items;
}

std::vector<ItemResult> run_items(const TwoStepSearcher& searcher, const std::vector<WorkItem>& items, int jobs) {
  std::vector<ItemResult> results(items.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    std::map<std::string, CenterSet> cache;
    while (true) {
      std::size_t i = next++;
      if (i >= items.size()) return;
      try {
        results[i] = searcher.run(items[i].w, items[i].change, cache);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  int threads = std::max(1, jobs);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

MldResult two_step_in(const Context& ctx, const SearchOptions& opt) {
  MldResult res;
  OneStepResult one = one_step_in(ctx, opt.weight_bound);
  res.one_step_value = one.best;
  res.one_step_plan = one.plan;
  std::optional<Found> best = Found{one.best, one.plan, one.plan.str()};
  res.search_log = one.log;

  TwoStepSearcher searcher(ctx, opt.weight_bound, true);
  auto items = first_step_items(ctx, opt.weight_bound);
  auto results = run_items(searcher, items, opt.jobs);
  std::size_t expanded = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto& r = results[i];
    if (r.irrational && in_e1_family(items[i].w)) {
      Rational a1 = Rational(items[i].w.sum()) - value_of(ctx.compiled[items[i].change], items[i].w);
      if (a1 > 0 && a1 < 1) res.skipped_irrational = true;
    }
    if (!r.log.empty()) ++expanded;
    for (auto& e : r.log) res.search_log.push_back(std::move(e));
    for (auto& n : r.notes) res.notes.push_back(std::move(n));
    if (r.best) offer(best, *r.best);
  }
  res.notes.push_back(std::to_string(items.size()) + " first steps, " + std::to_string(expanded) + " with second centers");
  if (res.skipped_irrational) res.notes.push_back("irrational candidate centers skipped");

  DivisorRecord check = evaluate_plan(*ctx.a, best->plan);
  if (check.log_discrepancy != best->value)
    throw InvariantError("search value " + best->value.str() + " differs from plan evaluation " + check.log_discrepancy.str() +
                         " for\n" + best->text);
  res.witness_plan = best->plan;
  res.witness_value = best->value;
  res.value = best->value < 0 ? ExtendedRational{true, Rational(0)} : ExtendedRational{false, best->value};
  return res;
}

}  // namespace

MldResult two_step_search(const RealIdeal& a, const SearchOptions& options) {
  require_dimension(a);
  if (options.weight_bound < 1) throw DomainError("weight bound must be at least 1");
  Context ctx(a, options.catalog_depth);
  return two_step_in(ctx, options);
}

MldResult two_step_search(const RealIdeal& a, int weight_bound, int catalog_depth) {
  return two_step_search(a, SearchOptions{weight_bound, catalog_depth, 1});
}

namespace {

std::vector<Polynomial> invert_linear(const std::vector<Polynomial>& R) {
  const int n = static_cast<int>(R.size());
  std::vector<std::vector<Rational>> M(n, std::vector<Rational>(2 * n, Rational(0)));
  for (int i = 0; i < n; ++i) {
    for (const auto& [e, c] : R[i].terms())
      if (e.total_degree() != 1) throw DomainError("only linear recenterings of curve steps are supported here");
    for (int j = 0; j < n; ++j) M[i][j] = R[i].coefficient(ExponentVector::unit(j));
    M[i][n + i] = 1;
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    while (piv < n && M[piv][col].is_zero()) ++piv;
    if (piv == n) throw DomainError("recentering is not invertible");
    std::swap(M[piv], M[col]);
    Rational d = M[col][col];
    for (auto& x : M[col]) x /= d;
    for (int r = 0; r < n; ++r) {
      if (r == col || M[r][col].is_zero()) continue;
      Rational f = M[r][col];
      for (int k = 0; k < 2 * n; ++k) M[r][k] -= f * M[col][k];
    }
  }
  // R maps y to c; the inverse gives y_j = sum M[j][n+i] c_i.
  std::vector<Polynomial> inv(n, Polynomial(n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (!M[j][n + i].is_zero()) inv[j] += var(n, i) * M[j][n + i];
  return inv;
}

std::optional<WeightedForm> homogenize(const Polynomial& u0, const Weight& w, int c) {
  int D = 0;
  for (const auto& [e, cf] : u0.terms()) D = std::max(D, w.dot(e));
  Polynomial G(3);
  for (const auto& [e, cf] : u0.terms()) {
    int gap = D - w.dot(e);
    if (gap % w[c] != 0) return std::nullopt;
    ExponentVector f = e;
    f[c] += gap / w[c];
    G.add_term(f, cf);
  }
  return WeightedForm::make(G.monic(), w);
}

GeneralityWitness witness_for(int condition, const RealIdeal& b, const std::vector<std::vector<Polynomial>>& forms,
                              const WeightedForm& B, const std::string& reason) {
  GeneralityWitness gw;
  gw.condition = condition;
  gw.curve = B;
  gw.order = order_along(b, forms, B.poly);
  gw.holds = gw.order <= 1;
  gw.reason = reason;
  return gw;
}

// Degree-r components (other than coordinates) of the initial divisor.
std::vector<WeightedForm> degree_r_components(const RealIdeal& b, const Weight& w, int r) {
  std::vector<WeightedForm> out;
  for (const auto& d : initial_divisor(b, w))
    if (d.component.degree == r && !is_coordinate(d.component.poly)) out.push_back(d.component);
  return out;
}

}  // namespace

GeneralityReport generality_check(const RealIdeal& a, const BlowupStep& first, const std::optional<BlowupStep>& second) {
  if (a.nvars() != 3) throw DomainError("generality is defined for three variables");
  if (first.center.kind != CenterSpec::Kind::origin) throw DomainError("the first step must be centered at the origin");
  auto sh = standard_shape(first.weight);
  if (!is_standard_weight(first.weight) || !sh) throw DomainError("the first step is not a standard blow-up");
  GeneralityReport rep;
  const Weight& w = first.weight;
  RealIdeal b = first.recentering.empty() ? a : a.substitute(first.recentering);
  auto forms = minimal_initial_forms(b, w);
  const int c = first.chart ? *first.chart : default_chart(w);

  if (sh->r == sh->s) {
    rep.witnesses.push_back({1, std::nullopt, Rational(0), true, "weight_111"});
  } else if (!second) {
    auto comps = degree_r_components(b, w, sh->r);
    if (comps.empty()) rep.witnesses.push_back({1, std::nullopt, Rational(0), true, "no_degree_r_component"});
    for (const auto& B : comps) rep.witnesses.push_back(witness_for(1, b, forms, B, "degree_r_component"));
  } else if (second->center.kind == CenterSpec::Kind::curve) {
    const auto& cs = second->center;
    Polynomial u = cs.curve_poly;
    if (!second->recentering.empty()) u = u.substitute(invert_linear(second->recentering));
    Polynomial u0 = u.substitute_var(cs.exceptional_var, Polynomial(3));
    auto G = homogenize(u0, w, c);
    if (!G) {
      rep.witnesses.push_back({1, std::nullopt, Rational(0), true, "center_not_weighted_homogeneous"});
    } else {
      E1Center center{E1Center::Kind::curve, std::nullopt, G};
      auto bc = bad_curve(w, center);
      if (!bc.exists)
        rep.witnesses.push_back({1, std::nullopt, Rational(0), true, bc.reason});
      else
        rep.witnesses.push_back(witness_for(1, b, forms, *bc.curve, bc.reason));
    }
  } else {
    std::vector<Rational> q = second->center.kind == CenterSpec::Kind::point ? second->center.coordinates
                                                                              : std::vector<Rational>(3, Rational(0));
    q[c] = 1;
    E1Center center{E1Center::Kind::point, WPSPoint::make(q, w), std::nullopt};
    auto bc = bad_curve(w, center);
    if (!bc.exists)
      rep.witnesses.push_back({1, std::nullopt, Rational(0), true, bc.reason});
    else
      rep.witnesses.push_back(witness_for(1, b, forms, *bc.curve, bc.reason));
  }

  if (second && second->center.kind != CenterSpec::Kind::curve) {
    auto sh2 = standard_shape(second->weight);
    if (!is_standard_weight(second->weight) || !sh2) throw DomainError("the second step is not a standard blow-up");
    if (sh2->r == sh2->s) {
      rep.witnesses.push_back({2, std::nullopt, Rational(0), true, "weight_111"});
    } else {
      BlowupStep f1 = first;
      f1.chart = c;
      auto res1 = apply_step(ChartState::initial(a), f1);
      std::vector<Polynomial> L = second->recentering.empty() ? identity_images(3) : second->recentering;
      if (second->center.kind == CenterSpec::Kind::point)
        for (int i = 0; i < 3; ++i) L[i] += Polynomial::constant(3, second->center.coordinates[i]);
      RealIdeal local(3);
      for (const auto& f : res1.state.factors) {
        std::vector<Polynomial> gens;
        for (const auto& g : f.generators) gens.push_back(g.substitute(L));
        local.add_factor(gens, f.exponent);
      }
      local.add_factor({res1.state.exceptional_totals[0].substitute(L)}, Rational(1));
      auto forms2 = minimal_initial_forms(local, second->weight);
      auto comps = degree_r_components(local, second->weight, sh2->r);
      if (comps.empty()) rep.witnesses.push_back({2, std::nullopt, Rational(0), true, "no_degree_r_component"});
      for (const auto& B : comps) rep.witnesses.push_back(witness_for(2, local, forms2, B, "degree_r_component"));
    }
  }
  for (const auto& gw : rep.witnesses) rep.general = rep.general && gw.holds;
  return rep;
}

std::optional<BlowupPlan> corollary_111_path(const RealIdeal& a, int weight_bound) {
  if (a.nvars() != 3) throw DomainError("the usual blow-up path is defined for three variables");
  Context ctx(a, 0);
  Weight w{1, 1, 1};
  TwoStepSearcher searcher(ctx, weight_bound, false);
  std::map<std::string, CenterSet> cache;
  ItemResult r = searcher.run(w, 0, cache);
  const auto& best = r.best;
  if (!best) return std::nullopt;
  const auto& c = best->plan.steps[1].center;
  if (c.kind != CenterSpec::Kind::curve) return std::nullopt;
  Polynomial u0 = c.curve_poly.substitute_var(c.exceptional_var, Polynomial(3));
  if (u0.total_degree() < 2) return std::nullopt;
  return best->plan;
}

namespace {

bool has_divisorial_component(const RealIdeal& a) {
  for (const auto& f : a.factors()) {
    Polynomial g(a.nvars());
    for (const auto& p : f.generators) g = gcd(g, p);
    if (!g.is_constant() && g.constant_term().is_zero()) return true;
  }
  return false;
}

RealIdeal plus_maximal_power(const RealIdeal& a, int s) {
  const int n = a.nvars();
  std::vector<ExponentVector> ms;
  monomials_without(n, -1, s, 0, ExponentVector{}, ms);
  RealIdeal out(n);
  for (const auto& f : a.factors()) {
    auto gens = f.generators;
    for (const auto& m : ms) gens.push_back(Polynomial::monomial(n, m));
    out.add_factor(gens, f.exponent);
  }
  return out;
}

}  // namespace

MldResult mld(const RealIdeal& a, const SearchOptions& opt) {
  require_dimension(a);
  if (opt.weight_bound < 1) throw DomainError("weight bound must be at least 1");
  Context ctx(a, opt.catalog_depth);
  OneStepResult one = one_step_in(ctx, opt.weight_bound);
  MldResult res;

  auto finish_one_step = [&](bool certified) {
    res.one_step_value = one.best;
    res.one_step_plan = one.plan;
    res.witness_plan = one.plan;
    res.witness_value = one.best;
    res.search_log = one.log;
    res.value = one.best < 0 ? ExtendedRational{true, Rational(0)} : ExtendedRational{false, one.best};
    res.certified = certified;
  };

  if (one.best < 0) {
    finish_one_step(true);
    res.notes.push_back("negative discrepancy from one weighted blow-up");
    return res;
  }
  if (has_divisorial_component(a)) {
    Context base(a, 0);
    for (int s = 1; s <= 3 * opt.weight_bound; ++s) {
      Context cs(plus_maximal_power(a, s), 0);
      auto r = one_step_in(cs, opt.weight_bound);
      if (r.best < 0) {
        one.plan = r.plan;
        one.best = evaluate_plan(a, r.plan).log_discrepancy;
        finish_one_step(true);
        res.notes.push_back("negative discrepancy found on a + m^" + std::to_string(s));
        return res;
      }
    }
    res.notes.push_back("a + m^s scan up to s = " + std::to_string(3 * opt.weight_bound) + " found no negative divisor");
  }
  if (one.best >= 1 && a.nvars() == 3) {
    auto sw = standard_weight_infer(a, opt.catalog_depth, opt.weight_bound);
    BlowupStep first;
    first.weight = sw.weight;
    first.center = CenterSpec::origin();
    bool identity = sw.system == identity_images(3);
    if (!identity) first.recentering = sw.system;
    auto g = generality_check(a, first, std::nullopt);
    if (g.general) {
      finish_one_step(true);
      res.notes.push_back("one-step value >= 1 with a general standard first step " + sw.weight.str());
      return res;
    }
    res.notes.push_back("standard first step " + sw.weight.str() + " is not general; running the two-step search");
  }
  auto notes = res.notes;
  res = two_step_in(ctx, opt);
  res.notes.insert(res.notes.begin(), notes.begin(), notes.end());
  if (res.value.minus_infinity) {
    res.certified = true;
    return res;
  }
  bool general = false;
  if (a.nvars() == 3 && is_standard_weight(res.witness_plan.steps[0].weight)) {
    std::optional<BlowupStep> second;
    if (res.witness_plan.steps.size() > 1) second = res.witness_plan.steps[1];
    try {
      general = generality_check(a, res.witness_plan.steps[0], second).general;
    } catch (const DomainError& e) {
      res.notes.push_back(std::string("generality not checked: ") + e.what());
    }
  }
  res.certified = a.nvars() == 3 && opt.weight_bound >= 3 && general && !res.skipped_irrational;
  return res;
}

MldResult mld(const RealIdeal& a, int weight_bound, int catalog_depth) {
  return mld(a, SearchOptions{weight_bound, catalog_depth, 1});
}

}  // namespace wbmld
