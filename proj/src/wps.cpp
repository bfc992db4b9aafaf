#include "wbmld/wps.hpp"

#include <algorithm>

#include "wbmld/errors.hpp"
#include "wbmld/factor.hpp"

namespace wbmld {

WeightedForm WeightedForm::make(const Polynomial& poly, const Weight& w) {
  if (poly.is_zero()) throw DomainError("the zero polynomial is not a weighted form");
  if (w.size() != poly.nvars()) throw DomainError("weight length does not match the number of variables");
  if (!is_weighted_homogeneous(poly, w)) throw DomainError(poly.str() + " is not weighted homogeneous for " + w.str());
  return WeightedForm{poly, w, weighted_degree(poly, w)};
}

std::string WeightedForm::str() const {
  std::vector<std::string> names;
  for (int i = 0; i < poly.nvars(); ++i) names.push_back("X" + std::to_string(i + 1));
  return poly.str(names);
}

WPSPoint WPSPoint::make(std::vector<Rational> coords, const Weight& w) {
  if (static_cast<int>(coords.size()) != w.size()) throw DomainError("point and weight dimensions differ");
  if (std::all_of(coords.begin(), coords.end(), [](const Rational& q) { return q.is_zero(); }))
    throw DomainError("the zero vector is not a point of a weighted projective space");
  return WPSPoint{std::move(coords), w};
}

bool WPSPoint::off_coordinate_planes() const {
  return std::none_of(coords.begin(), coords.end(), [](const Rational& q) { return q.is_zero(); });
}

std::optional<WPSPoint> WPSPoint::normalized() const {
  std::size_t k = 0;
  while (coords[k].is_zero()) ++k;
  auto lambda = rational_nth_root(coords[k].inverse(), weight[static_cast<int>(k)]);
  if (!lambda) return std::nullopt;
  WPSPoint p = *this;
  for (int i = 0; i < weight.size(); ++i) p.coords[i] *= lambda->pow(weight[i]);
  return p;
}

std::optional<StandardShape> standard_shape(const Weight& w) {
  if (w.size() != 3) return std::nullopt;
  int r = w.min();
  std::vector<int> small, big;
  for (int i = 0; i < 3; ++i) (w[i] == r ? small : big).push_back(i);
  if (small.size() == 3) return StandardShape{r, r, 0, 1, 2};
  if (small.size() != 2) return std::nullopt;
  return StandardShape{r, w[big[0]], small[0], small[1], big[0]};
}

static StandardShape require_shape(const Weight& w) {
  auto sh = standard_shape(w);
  if (!sh) throw DomainError("weight " + w.str() + " is not of the form (r,r,s)");
  return *sh;
}

int restriction_order(const WeightedForm& g, const WeightedForm& L, const WPSPoint& Q) {
  if (!(g.weight == L.weight) || !(Q.weight == g.weight)) throw DomainError("forms and point use different weights");
  StandardShape sh = require_shape(g.weight);
  if (L.degree != sh.r) throw DomainError("the curve must have degree " + std::to_string(sh.r));
  if (!Q.off_coordinate_planes()) throw DomainError("the point must lie off the coordinate planes");
  if (!L.poly.evaluate(Q.coords).is_zero()) throw DomainError("the point is not on the curve");
  if (exact_divide(g.poly, L.poly)) throw DomainError("the form vanishes on the whole curve");
  std::vector<Rational> D(3, Rational(0));
  if (sh.r < sh.s) {
    D[sh.big] = 1;
  } else {
    Rational a = L.poly.coefficient(ExponentVector::unit(0)), b = L.poly.coefficient(ExponentVector::unit(1)),
             c = L.poly.coefficient(ExponentVector::unit(2));
    std::vector<std::vector<Rational>> options{{b, -a, 0}, {c, 0, -a}, {0, c, -b}};
    bool found = false;
    for (const auto& o : options) {
      bool zero = std::all_of(o.begin(), o.end(), [](const Rational& x) { return x.is_zero(); });
      if (zero) continue;
      // not proportional to Q
      bool prop = (o[0] * Q.coords[1] == o[1] * Q.coords[0]) && (o[0] * Q.coords[2] == o[2] * Q.coords[0]) &&
                  (o[1] * Q.coords[2] == o[2] * Q.coords[1]);
      if (prop) continue;
      D = o;
      found = true;
      break;
    }
    if (!found) throw InvariantError("no direction along the line");
  }
  Polynomial t = Polynomial::variable(1, 0);
  std::vector<Polynomial> images;
  for (int i = 0; i < 3; ++i) images.push_back(Polynomial::constant(1, Q.coords[i]) + t * D[i]);
  Polynomial restricted = g.poly.substitute(images);
  if (restricted.is_zero()) throw InvariantError("restriction vanished although the curve does not divide the form");
  return restricted.lowest_degree();
}

bool bezout_bound_check(const WeightedForm& g, const WeightedForm& L, const WPSPoint& Q) {
  StandardShape sh = require_shape(g.weight);
  return sh.r * sh.s * restriction_order(g, L, Q) <= g.degree;
}

BadCurveReport bad_curve(const Weight& w, const E1Center& center) {
  StandardShape sh = require_shape(w);
  BadCurveReport rep;
  if (sh.r == sh.s) {
    rep.reason = "weight_111";
    return rep;
  }
  switch (center.kind) {
    case E1Center::Kind::generic:
      rep.reason = "divisor_is_E1";
      return rep;
    case E1Center::Kind::point: {
      if (!center.point) throw DomainError("point center without coordinates");
      const WPSPoint& Q = *center.point;
      if (!(Q.weight == w)) throw DomainError("point and weight differ");
      if (Q.coords[sh.small1].is_zero() && Q.coords[sh.small2].is_zero()) {
        rep.reason = "singular_point";
        return rep;
      }
      Polynomial ell = Polynomial::variable(3, sh.small1) * Q.coords[sh.small2] - Polynomial::variable(3, sh.small2) * Q.coords[sh.small1];
      rep.exists = true;
      rep.curve = WeightedForm::make(ell.monic(), w);
      rep.reason = "unique_degree_v1_curve_through_point";
      return rep;
    }
    case E1Center::Kind::curve: {
      if (!center.curve) throw DomainError("curve center without equation");
      const WeightedForm& C = *center.curve;
      if (C.degree > sh.r) {
        rep.reason = "center_degree_exceeds";
        return rep;
      }
      rep.exists = true;
      rep.curve = WeightedForm{C.poly.monic(), C.weight, C.degree};
      rep.reason = "center_is_degree_v1_curve";
      return rep;
    }
  }
  return rep;
}

std::vector<DivisorComponent> initial_divisor(const RealIdeal& a, const Weight& w) {
  if (w.size() != a.nvars()) throw DomainError("weight length does not match the number of variables");
  struct Part {
    Polynomial p;
    Rational m;
  };
  std::vector<Part> done;
  for (const auto& f : a.factors()) {
    int ord = factor_order(f, w);
    const Polynomial* gen = nullptr;
    for (const auto& g : f.generators)
      if (weighted_order(g, w) == ord) {
        gen = &g;
        break;
      }
    Polynomial F = initial_form(*gen, w);
    std::vector<Part> work;
    for (const auto& [p, m] : squarefree_decomposition(F)) work.push_back({p, f.exponent * Rational(m)});
    while (!work.empty()) {
      Part q = work.back();
      work.pop_back();
      bool merged = false;
      for (std::size_t i = 0; i < done.size(); ++i) {
        Polynomial g = gcd(q.p, done[i].p);
        if (g.is_constant()) continue;
        Part r = done[i];
        done.erase(done.begin() + static_cast<long>(i));
        done.push_back({g, r.m + q.m});
        Polynomial r_rest = *exact_divide(r.p, g);
        if (!r_rest.is_constant()) done.push_back({r_rest.monic(), r.m});
        Polynomial q_rest = *exact_divide(q.p, g);
        if (!q_rest.is_constant()) work.push_back({q_rest.monic(), q.m});
        merged = true;
        break;
      }
      if (!merged) done.push_back(q);
    }
  }
  std::vector<DivisorComponent> out;
  Rational total = 0;
  for (const auto& d : done) {
    out.push_back({WeightedForm::make(d.p.monic(), w), d.m});
    total += d.m * Rational(out.back().component.degree);
  }
  if (total != ideal_order(a, w)) throw InvariantError("initial divisor degree does not match the ideal order");
  std::sort(out.begin(), out.end(), [](const DivisorComponent& x, const DivisorComponent& y) {
    if (x.component.degree != y.component.degree) return x.component.degree < y.component.degree;
    return x.component.str() < y.component.str();
  });
  return out;
}

std::vector<WeightedForm> common_minimal_degree_divisors(const std::vector<Polynomial>& forms, const Weight& w) {
  StandardShape sh = require_shape(w);
  if (sh.r == sh.s) throw DomainError("degree-r divisors are only enumerated for r < s");
  Polynomial G(3);
  for (const auto& F : forms)
    for (const auto& c : F.coefficients_in(sh.big))
      if (!c.is_zero()) G = gcd(G, c);
  std::vector<WeightedForm> out;
  if (G.is_zero() || G.is_constant()) return out;
  // G is a binary form in X_small1, X_small2; its rational linear factors other than the coordinates.
  Polynomial dehom = G.substitute_var(sh.small2, Polynomial::constant(3, 1));
  for (const Rational& t : rational_roots(dehom, sh.small1)) {
    if (t.is_zero()) continue;
    Polynomial ell = Polynomial::variable(3, sh.small1) - Polynomial::variable(3, sh.small2) * t;
    out.push_back(WeightedForm::make(ell.monic(), w));
  }
  return out;
}

}  // namespace wbmld

namespace wbmld {

namespace {

std::vector<ExponentVector> forms_of_degree(const Weight& w, int d) {
  std::vector<ExponentVector> out;
  for (int a = 0; a * w[0] <= d; ++a)
    for (int b = 0; a * w[0] + b * w[1] <= d; ++b) {
      int rest = d - a * w[0] - b * w[1];
      if (rest % w[2] == 0) out.push_back(ExponentVector{a, b, rest / w[2]});
    }
  return out;
}

}  // namespace

BezoutInstance random_bezout_instance(const Weight& w, std::mt19937_64& rng) {
  StandardShape sh = require_shape(w);
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto nonzero = [&](int range) {
    int v = 0;
    while (v == 0) v = uni(-range, range);
    return Rational(v, uni(1, 3));
  };
  auto random_form = [&](int d) {
    Polynomial p(3);
    auto ms = forms_of_degree(w, d);
    if (ms.empty()) return p;
    while (p.is_zero())
      for (const auto& m : ms)
        if (uni(0, 2) > 0) p.add_term(m, nonzero(6));
    return p;
  };
  while (true) {
    std::vector<Rational> q{nonzero(4), nonzero(4), nonzero(4)};
    Polynomial X1 = Polynomial::variable(3, sh.small1), X2 = Polynomial::variable(3, sh.small2),
               X3 = Polynomial::variable(3, sh.big);
    Polynomial L = X1 * q[sh.small2] - X2 * q[sh.small1];
    Polynomial F = X3.pow(sh.r) - X1.pow(sh.s) * (q[sh.big].pow(sh.r) / q[sh.small1].pow(sh.s));
    int k = uni(0, 3);
    int extra = uni(0, 2 * sh.r * sh.s);
    Polynomial h = random_form(extra);
    if (h.is_zero()) continue;
    Polynomial g = F.pow(k) * h;
    int deg = k * sh.r * sh.s + extra;
    if (deg >= sh.r && uni(0, 1)) g += L * random_form(deg - sh.r);
    if (g.is_zero() || !is_weighted_homogeneous(g, w) || exact_divide(g, L)) continue;
    return BezoutInstance{WeightedForm::make(g, w), WeightedForm::make(L.monic(), w), WPSPoint::make(q, w)};
  }
}

}  // namespace wbmld
