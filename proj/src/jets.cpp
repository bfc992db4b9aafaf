#include "wbmld/jets.hpp"

#include <algorithm>

#include "wbmld/errors.hpp"

namespace wbmld {

GenericArc random_arc(const std::vector<int>& base_orders, int truncation, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(1, 997);
  GenericArc arc;
  arc.truncation = truncation;
  for (int w : base_orders) {
    if (w < 0) throw DomainError("arc orders must be nonnegative");
    std::vector<Rational> c(truncation + 1, Rational(0));
    for (int j = w; j <= truncation; ++j) c[j] = coef(rng);
    arc.coefficients.push_back(std::move(c));
  }
  return arc;
}

namespace {

using Series = std::vector<Rational>;

Series multiply(const Series& a, const Series& b, int T) {
  Series r(T + 1, Rational(0));
  for (int i = 0; i <= T; ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; i + j <= T; ++j)
      if (!b[j].is_zero()) r[i + j] += a[i] * b[j];
  }
  return r;
}

}  // namespace

int arc_order(const Polynomial& f, const GenericArc& arc) {
  if (static_cast<int>(arc.coefficients.size()) != f.nvars()) throw DomainError("arc dimension mismatch");
  const int T = arc.truncation;
  std::vector<std::vector<Series>> powers(f.nvars());
  for (int i = 0; i < f.nvars(); ++i) {
    Series one(T + 1, Rational(0));
    one[0] = 1;
    powers[i].push_back(one);
  }
  auto power = [&](int i, int k) -> const Series& {
    while (static_cast<int>(powers[i].size()) <= k) powers[i].push_back(multiply(powers[i].back(), arc.coefficients[i], T));
    return powers[i][k];
  };
  Series total(T + 1, Rational(0));
  for (const auto& [e, c] : f.terms()) {
    Series t(T + 1, Rational(0));
    t[0] = c;
    for (int i = 0; i < f.nvars(); ++i)
      if (e[i]) t = multiply(t, power(i, e[i]), T);
    for (int j = 0; j <= T; ++j) total[j] += t[j];
  }
  for (int j = 0; j <= T; ++j)
    if (!total[j].is_zero()) return j;
  return T + 1;
}

int default_truncation(const Polynomial& f, const std::vector<int>& base_orders) {
  int maxw = 1;
  for (int w : base_orders) maxw = std::max(maxw, w);
  return 2 * f.total_degree() * maxw + maxw;
}

ArcOrderResult generic_arc_order(const Polynomial& f, const std::vector<int>& base_orders, int trials, std::mt19937_64& rng,
                                 const std::vector<GenericArc>& preset) {
  if (f.is_zero()) throw DomainError("arc order of the zero polynomial");
  if (static_cast<int>(base_orders.size()) != f.nvars()) throw DomainError("weight dimension mismatch");
  if (trials < 1) throw DomainError("at least one trial is required");
  const int T = default_truncation(f, base_orders);
  ArcOrderResult res;
  int best = T + 1;
  std::size_t next_preset = 0;
  for (int round = 0; round < 5; ++round) {
    ++res.rounds;
    std::vector<int> orders;
    for (int t = 0; t < trials; ++t) {
      GenericArc arc = next_preset < preset.size() ? preset[next_preset++] : random_arc(base_orders, T, rng);
      if (arc.truncation < T) throw DomainError("preset arc is truncated below the required order");
      orders.push_back(arc_order(f, arc));
    }
    for (int o : orders) best = std::min(best, o);
    bool consistent = std::all_of(orders.begin(), orders.end(), [&](int o) { return o == orders[0] && o <= T; });
    if (consistent) {
      res.order = best;
      return res;
    }
  }
  res.degenerate_warning = true;
  if (best > T) throw DomainError("every arc vanished up to the truncation order");
  res.order = best;
  return res;
}

ArcOrderResult generic_arc_order(const Polynomial& f, const Weight& w, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return generic_arc_order(f, w.entries(), trials, rng);
}

int contact_cylinder_codim(const ContactCylinder& c) {
  if (c.n < 1) throw DomainError("contact order must be positive");
  int top = c.n * c.weight.max();
  int count = 0;
  for (int i = 0; i < c.weight.size(); ++i)
    for (int j = 0; j <= top; ++j)
      if (j < c.n * c.weight[i]) ++count;  // x_i^{(j)} = 0
  return count;
}

}  // namespace wbmld
