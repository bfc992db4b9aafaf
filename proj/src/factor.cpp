#include "wbmld/factor.hpp"

#include <algorithm>
#include <optional>

#include "wbmld/errors.hpp"

namespace wbmld {

std::optional<Polynomial> exact_divide(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw DomainError("division by the zero polynomial");
  if (a.nvars() != b.nvars()) throw DomainError("polynomials live in different rings");
  Polynomial q(a.nvars()), r = a;
  const auto& [lb, cb] = b.leading_term();
  Rational cb_inv = cb.inverse();
  while (!r.is_zero()) {
    const auto& [lr, cr] = r.leading_term();
    if (!lb.divides(lr)) return std::nullopt;
    Polynomial t = Polynomial::monomial(a.nvars(), lr - lb, cr * cb_inv);
    q += t;
    r -= t * b;
  }
  return q;
}

static Polynomial must_divide(const Polynomial& a, const Polynomial& b) {
  auto q = exact_divide(a, b);
  if (!q) throw InvariantError("expected exact division of " + a.str() + " by " + b.str());
  return *q;
}

static int main_variable(const Polynomial& a, const Polynomial& b) {
  for (int i = a.nvars() - 1; i >= 0; --i)
    if (a.involves(i) || b.involves(i)) return i;
  return -1;
}

static Polynomial content_in(const Polynomial& f, int var) {
  if (!f.involves(var)) return f.monic();
  Polynomial g(f.nvars());
  for (const auto& c : f.coefficients_in(var)) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) break;
  }
  return g;
}

static Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, int var) {
  int db = b.degree_in(var);
  Polynomial lcb = b.coefficients_in(var).back();
  Polynomial r = a;
  while (!r.is_zero() && r.degree_in(var) >= db) {
    int dr = r.degree_in(var);
    Polynomial lr = r.coefficients_in(var).back();
    ExponentVector shift;
    shift[var] = dr - db;
    r = lcb * r - lr * Polynomial::monomial(a.nvars(), shift) * b;
  }
  return r;
}

static Polynomial primitive_part(const Polynomial& f, int var) { return must_divide(f, content_in(f, var)).monic(); }

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.nvars() != b.nvars()) throw DomainError("polynomials live in different rings");
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Polynomial::constant(a.nvars(), 1);
  int v = main_variable(a, b);
  if (!a.involves(v)) return gcd(a, content_in(b, v));
  if (!b.involves(v)) return gcd(content_in(a, v), b);
  Polynomial ca = content_in(a, v), cb = content_in(b, v);
  Polynomial g = gcd(ca, cb);
  Polynomial pa = must_divide(a, ca).monic(), pb = must_divide(b, cb).monic();
  if (pa.degree_in(v) < pb.degree_in(v)) std::swap(pa, pb);
  while (!pb.is_zero()) {
    Polynomial r = pseudo_remainder(pa, pb, v);
    pa = pb;
    if (r.is_zero()) {
      pb = Polynomial(a.nvars());
    } else if (!r.involves(v)) {
      pa = Polynomial::constant(a.nvars(), 1);
      pb = Polynomial(a.nvars());
    } else {
      pb = primitive_part(r, v);
    }
  }
  return (g * pa).monic();
}

std::vector<PowerFactor> squarefree_decomposition(const Polynomial& f) {
  if (f.is_zero()) throw DomainError("square-free decomposition of the zero polynomial");
  std::vector<PowerFactor> out;
  if (f.is_constant()) return out;
  int v = main_variable(f, f);
  Polynomial c = content_in(f, v);
  Polynomial p = must_divide(f, c).monic();
  out = squarefree_decomposition(c);

  Polynomial dp = p.derivative(v);
  Polynomial g = gcd(p, dp);
  Polynomial w = must_divide(p, g);
  Polynomial y = must_divide(dp, g);
  Polynomial z = y - w.derivative(v);
  int i = 1;
  while (!w.is_constant()) {
    Polynomial h = gcd(w, z);
    w = must_divide(w, h);
    y = must_divide(z, h);
    z = y - w.derivative(v);
    if (!h.is_constant()) out.push_back({h.monic(), i});
    ++i;
  }
  return out;
}

int multiplicity_of(const Polynomial& f, const Polynomial& u) {
  if (u.is_constant()) throw DomainError("multiplicity of a constant factor");
  if (f.is_zero()) throw DomainError("multiplicity in the zero polynomial");
  int m = 0;
  Polynomial r = f;
  while (auto q = exact_divide(r, u)) {
    r = *q;
    ++m;
  }
  return m;
}

Polynomial resultant(const Polynomial& f, const Polynomial& g, int var) {
  if (f.is_zero() || g.is_zero()) return Polynomial(f.nvars());
  auto fc = f.coefficients_in(var), gc = g.coefficients_in(var);
  int m = static_cast<int>(fc.size()) - 1, n = static_cast<int>(gc.size()) - 1;
  if (m == 0) return fc[0].pow(n);
  if (n == 0) return gc[0].pow(m);
  int N = m + n;
  std::vector<std::vector<Polynomial>> M(N, std::vector<Polynomial>(N, Polynomial(f.nvars())));
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) M[r][r + k] = fc[m - k];
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) M[n + r][r + k] = gc[n - k];
  int sign = 1;
  Polynomial prev = Polynomial::constant(f.nvars(), 1);
  for (int k = 0; k < N - 1; ++k) {
    if (M[k][k].is_zero()) {
      int piv = -1;
      for (int i = k + 1; i < N; ++i)
        if (!M[i][k].is_zero()) {
          piv = i;
          break;
        }
      if (piv < 0) return Polynomial(f.nvars());
      std::swap(M[k], M[piv]);
      sign = -sign;
    }
    for (int i = k + 1; i < N; ++i) {
      for (int j = k + 1; j < N; ++j) M[i][j] = must_divide(M[i][j] * M[k][k] - M[i][k] * M[k][j], prev);
      M[i][k] = Polynomial(f.nvars());
    }
    prev = M[k][k];
  }
  return sign > 0 ? M[N - 1][N - 1] : -M[N - 1][N - 1];
}

namespace {

using UPoly = std::vector<mpq_class>;  // index = degree

void trim(UPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

UPoly to_upoly(const Polynomial& f, int var) {
  UPoly p(f.degree_in(var) + 1);
  for (const auto& [e, c] : f.terms()) {
    for (int i = 0; i < f.nvars(); ++i)
      if (i != var && e[i] != 0) throw DomainError("polynomial " + f.str() + " is not univariate");
    p[e[var]] += c.raw();
  }
  trim(p);
  return p;
}

int sign_at(const UPoly& p, const mpq_class& x) {
  mpq_class acc = 0;
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
  return sgn(acc);
}

UPoly remainder(UPoly a, const UPoly& b) {
  int db = static_cast<int>(b.size()) - 1;
  while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
    mpq_class f = a.back() / b.back();
    int shift = static_cast<int>(a.size()) - 1 - db;
    for (int k = 0; k <= db; ++k) a[shift + k] -= f * b[k];
    a.pop_back();
    trim(a);
  }
  return a;
}

UPoly derivative(const UPoly& p) {
  UPoly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<long>(k));
  trim(d);
  return d;
}

struct Sturm {
  std::vector<UPoly> seq;
  explicit Sturm(const UPoly& p) {
    seq.push_back(p);
    seq.push_back(derivative(p));
    while (!seq.back().empty() && seq.back().size() > 1) {
      UPoly r = remainder(seq[seq.size() - 2], seq.back());
      if (r.empty()) break;
      for (auto& c : r) c = -c;
      seq.push_back(r);
    }
  }
  int variations(const mpq_class& x) const {
    int v = 0, last = 0;
    for (const auto& s : seq) {
      int sg = sign_at(s, x);
      if (sg == 0) continue;
      if (last != 0 && sg != last) ++v;
      last = sg;
    }
    return v;
  }
  // roots in (a, b]
  int count(const mpq_class& a, const mpq_class& b) const { return variations(a) - variations(b); }
};

mpz_class floor_q(const mpq_class& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

// Simplest fraction strictly between a and b (a < b); b may be "infinite".
mpq_class simplest_between(const mpq_class& a, const mpq_class* b) {
  mpz_class fl = floor_q(a);
  mpq_class next(fl + 1);
  if (!b || next < *b) return next;
  mpq_class lo = a - mpq_class(fl);
  mpq_class hi = *b - mpq_class(fl);
  mpq_class inv_hi = 1 / hi;
  if (sgn(lo) == 0) return mpq_class(fl) + 1 / simplest_between(inv_hi, nullptr);
  mpq_class inv_lo = 1 / lo;
  return mpq_class(fl) + 1 / simplest_between(inv_hi, &inv_lo);
}

UPoly squarefree_part(const UPoly& p) {
  UPoly a = p, b = derivative(p);
  while (!b.empty()) {
    UPoly r = remainder(a, b);
    a = b;
    b = r;
  }
  UPoly g = a;
  for (auto& c : g) c /= a.back();
  UPoly q(p.size() >= g.size() ? p.size() - g.size() + 1 : 0);
  UPoly r = p;
  int dg = static_cast<int>(g.size()) - 1;
  while (!r.empty() && static_cast<int>(r.size()) - 1 >= dg) {
    int shift = static_cast<int>(r.size()) - 1 - dg;
    mpq_class f = r.back() / g.back();
    q[shift] = f;
    for (int k = 0; k <= dg; ++k) r[shift + k] -= f * g[k];
    r.pop_back();
    trim(r);
  }
  trim(q);
  return q;
}

// Candidate roots p/q with p | a0 and q | an, when both are small enough to factor.
std::optional<std::vector<mpz_class>> small_divisors(mpz_class v) {
  v = abs(v);
  if (v > mpz_class("1000000000000")) return std::nullopt;
  unsigned long long n = v.get_ui();
  std::vector<mpz_class> low, high;
  for (unsigned long long d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    low.emplace_back(static_cast<unsigned long>(d));
    if (d * d != n) high.emplace_back(static_cast<unsigned long>(n / d));
  }
  low.insert(low.end(), high.rbegin(), high.rend());
  return low;
}

std::optional<std::vector<mpq_class>> roots_by_divisors(const UPoly& p) {
  mpz_class den = 1;
  for (const auto& c : p) den = lcm(den, c.get_den());
  std::vector<mpz_class> z;
  mpz_class content = 0;
  for (const auto& c : p) {
    z.push_back(mpz_class(c * mpq_class(den)));
    content = gcd(content, z.back());
  }
  for (auto& c : z) c /= content;
  std::vector<mpq_class> roots;
  std::size_t shift = 0;
  while (shift < z.size() && sgn(z[shift]) == 0) ++shift;
  if (shift > 0) roots.push_back(0);
  auto num = small_divisors(z[shift]);
  auto dn = small_divisors(z.back());
  if (!num || !dn || num->size() * dn->size() > 20000) return std::nullopt;
  for (const auto& q : *dn)
    for (const auto& a : *num) {
      if (gcd(a, q) != 1) continue;
      for (int sg : {1, -1}) {
        mpq_class r(mpz_class(a * sg), q);
        if (sign_at(p, r) == 0) roots.push_back(r);
      }
    }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<mpq_class> upoly_rational_roots(const UPoly& input) {
  std::vector<mpq_class> roots;
  if (input.size() <= 1) return roots;
  UPoly p = squarefree_part(input);
  if (p.size() <= 1) return roots;
  if (auto fast = roots_by_divisors(p)) return *fast;
  // Integer, primitive form for the denominator bound.
  mpz_class den = 1;
  for (const auto& c : p) den = lcm(den, c.get_den());
  mpz_class lead = abs(mpz_class(p.back() * mpq_class(den)));
  mpq_class bound = 1;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    mpq_class r = abs(p[k] / p.back());
    if (r + 1 > bound) bound = r + 1;
  }
  mpq_class width_target = mpq_class(1, 1) / mpq_class(lead * lead * 4);
  Sturm st(p);
  struct Interval {
    mpq_class a, b;
    int n;
  };
  std::vector<Interval> work{{-bound, bound, st.count(-bound, bound)}};
  while (!work.empty()) {
    Interval iv = work.back();
    work.pop_back();
    if (iv.n == 0) continue;
    if (iv.n == 1 && iv.b - iv.a < width_target) {
      if (sign_at(p, iv.b) == 0) {
        roots.push_back(iv.b);
      } else {
        mpq_class c = simplest_between(iv.a, &iv.b);
        if (sign_at(p, c) == 0) roots.push_back(c);
      }
      continue;
    }
    mpq_class m = (iv.a + iv.b) / 2;
    int left = st.count(iv.a, m);
    work.push_back({iv.a, m, left});
    work.push_back({m, iv.b, iv.n - left});
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

}  // namespace

std::vector<Rational> rational_roots(const Polynomial& f, int var) {
  if (f.is_zero()) throw DomainError("roots of the zero polynomial");
  std::vector<Rational> out;
  for (const auto& r : upoly_rational_roots(to_upoly(f, var))) out.emplace_back(r);
  return out;
}

bool has_irrational_roots(const Polynomial& f, int var) {
  if (f.is_zero()) throw DomainError("roots of the zero polynomial");
  UPoly p = to_upoly(f, var);
  if (p.size() <= 1) return false;
  UPoly s = squarefree_part(p);
  return static_cast<int>(s.size()) - 1 > static_cast<int>(upoly_rational_roots(p).size());
}

std::optional<Rational> rational_nth_root(const Rational& q, int n) {
  if (n <= 0) throw DomainError("root index must be positive");
  if (n == 1) return q;
  if (q.sign() < 0 && n % 2 == 0) return std::nullopt;
  auto root = [n](mpz_class v) -> std::optional<mpz_class> {
    bool neg = sgn(v) < 0;
    if (neg) v = -v;
    mpz_class r;
    if (!mpz_root(r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(n))) return std::nullopt;
    return neg ? mpz_class(-r) : r;
  };
  auto a = root(q.numerator());
  auto b = root(q.denominator());
  if (!a || !b) return std::nullopt;
  return Rational(mpq_class(*a, *b));
}

}  // namespace wbmld
