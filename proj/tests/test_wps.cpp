#include <gtest/gtest.h>

#include "support/wps_cases.hpp"
#include "wbmld/errors.hpp"
#include "wbmld/parse.hpp"
#include "wbmld/wps.hpp"

using namespace wbmld;
using namespace wbmld::testing;

namespace {

Polynomial P(const char* s) { return parse_polynomial(s, 3); }

}  // namespace

TEST(WeightedForms, RejectsInhomogeneous) {
  EXPECT_THROW(WeightedForm::make(P("x1 + x3"), Weight{1, 1, 2}), DomainError);
  EXPECT_EQ(WeightedForm::make(P("x1^2 + x3"), Weight{1, 1, 2}).degree, 2);
}

TEST(WeightedForms, StandardShape) {
  auto sh = standard_shape(Weight{2, 3, 2});
  ASSERT_TRUE(sh);
  EXPECT_EQ(sh->r, 2);
  EXPECT_EQ(sh->s, 3);
  EXPECT_EQ(sh->big, 1);
  EXPECT_FALSE(standard_shape(Weight{1, 2, 3}));
  EXPECT_FALSE(standard_shape(Weight{1, 2, 2}));
}

TEST(WeightedForms, NormalizedPoint) {
  auto p = WPSPoint::make({Rational(4), Rational(1), Rational(3)}, Weight{2, 2, 3}).normalized();
  ASSERT_TRUE(p);
  EXPECT_EQ(p->coords[0], Rational(1));
  EXPECT_EQ(p->coords[1], Rational(1, 4));
  EXPECT_EQ(p->coords[2], Rational(3, 8));
}

TEST(Restriction, FamilyExample) {
  for (int n = 1; n <= 5; ++n) {
    Weight w{1, 1, n};
    Polynomial g = P("x1*x3") - Polynomial::variable(3, 1).pow(n + 1);
    auto G = WeightedForm::make(g, w);
    auto L = WeightedForm::make(P("x2 - x1"), w);
    auto Q = WPSPoint::make({Rational(1), Rational(1), Rational(1)}, w);
    EXPECT_EQ(restriction_order(G, L, Q), 1) << n;
    EXPECT_TRUE(bezout_bound_check(G, L, Q));
  }
}

TEST(Restriction, RejectsInvalidInput) {
  Weight w{1, 1, 2};
  auto L = WeightedForm::make(P("x2 - x1"), w);
  auto Q = WPSPoint::make({Rational(1), Rational(1), Rational(1)}, w);
  EXPECT_THROW(restriction_order(WeightedForm::make(P("(x2-x1)*x3"), w), L, Q), DomainError);
  EXPECT_THROW(restriction_order(WeightedForm::make(P("x3"), w), L, WPSPoint::make({Rational(1), Rational(2), Rational(1)}, w)),
               DomainError);
  EXPECT_THROW(restriction_order(WeightedForm::make(P("x3"), w), L, WPSPoint::make({Rational(0), Rational(0), Rational(1)}, w)),
               DomainError);
  EXPECT_THROW(restriction_order(WeightedForm::make(P("x3"), w), WeightedForm::make(P("x3"), w), Q), DomainError);
}

TEST(Restriction, ProjectivePlaneLine) {
  Weight w{1, 1, 1};
  auto L = WeightedForm::make(P("x1 + x2 - 2*x3"), w);
  auto Q = WPSPoint::make({Rational(1), Rational(1), Rational(1)}, w);
  EXPECT_EQ(restriction_order(WeightedForm::make(P("(x1-x2)^3 + x3*(x1 - x3)^2"), w), L, Q), 2);
  EXPECT_EQ(restriction_order(WeightedForm::make(P("x1^2 + x2^2 + x3^2"), w), L, Q), 0);
}

class BezoutRandom : public ::testing::TestWithParam<std::vector<int>> {};

TEST_P(BezoutRandom, BoundAndOracleAgree) {
  Weight w(GetParam());
  RandomPoly gen(1000 + w.sum() * 17 + w.max());
  for (int i = 0; i < 100; ++i) {
    BezoutCase c = random_bezout_case(gen, w);
    int ord = restriction_order(c.g, c.L, c.Q);
    EXPECT_EQ(ord, restriction_order_oracle(c)) << c.g.str();
    EXPECT_TRUE(bezout_bound_check(c.g, c.L, c.Q)) << c.g.str() << " ord " << ord;
  }
}

INSTANTIATE_TEST_SUITE_P(Weights, BezoutRandom,
                         ::testing::Values(std::vector<int>{2, 2, 3}, std::vector<int>{1, 1, 1}, std::vector<int>{1, 1, 2},
                                           std::vector<int>{1, 1, 3}, std::vector<int>{1, 1, 4}, std::vector<int>{1, 1, 5},
                                           std::vector<int>{3, 2, 2}));

TEST(BadCurve, Cases) {
  Weight w{1, 1, 2};
  EXPECT_FALSE(bad_curve(Weight{1, 1, 1}, E1Center{}).exists);
  EXPECT_EQ(bad_curve(Weight{1, 1, 1}, E1Center{}).reason, "weight_111");
  EXPECT_FALSE(bad_curve(w, E1Center{}).exists);

  E1Center pt{E1Center::Kind::point, WPSPoint::make({Rational(1), Rational(2), Rational(3)}, w), std::nullopt};
  auto rep = bad_curve(w, pt);
  ASSERT_TRUE(rep.exists);
  EXPECT_EQ(rep.curve->str(), "X1 - 1/2*X2");

  E1Center conic{E1Center::Kind::curve, std::nullopt, WeightedForm::make(P("x1^2 + x3"), w)};
  EXPECT_FALSE(bad_curve(w, conic).exists);
  EXPECT_EQ(bad_curve(w, conic).reason, "center_degree_exceeds");

  E1Center line{E1Center::Kind::curve, std::nullopt, WeightedForm::make(P("2*x1 - 2*x2"), w)};
  rep = bad_curve(w, line);
  ASSERT_TRUE(rep.exists);
  EXPECT_EQ(rep.curve->str(), "X1 - X2");
}

TEST(InitialDivisor, GoldenValues) {
  RealIdeal not1(3);
  not1.add_factor({P("(x^2+y^2+z^2)^2+x^5+y^5+z^5")}, Rational(7, 10));
  auto d = initial_divisor(not1, Weight{1, 1, 1});
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].component.str(), "X1^2 + X2^2 + X3^2");
  EXPECT_EQ(d[0].multiplicity, Rational(7, 5));

  RealIdeal tt(3);
  tt.add_factor({P("(x1-x2)^2+x3^2+x1^4")}, Rational(6, 5));
  d = initial_divisor(tt, Weight{1, 1, 2});
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].component.str(), "X1 - X2");
  EXPECT_EQ(d[0].multiplicity, Rational(12, 5));
}

TEST(InitialDivisor, MergesSharedComponents) {
  RealIdeal a(3);
  a.add_factor({P("x1^2*(x2 - x3)")}, Rational(1, 2));
  a.add_factor({P("x1*(x2 - x3)^2*(x2 + x3)")}, Rational(1, 3));
  auto d = initial_divisor(a, Weight{1, 1, 1});
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[0].component.str(), "X1");
  EXPECT_EQ(d[0].multiplicity, Rational(4, 3));
  EXPECT_EQ(d[1].component.str(), "X2 + X3");
  EXPECT_EQ(d[1].multiplicity, Rational(1, 3));
  EXPECT_EQ(d[2].component.str(), "X2 - X3");
  EXPECT_EQ(d[2].multiplicity, Rational(7, 6));
}

TEST(InitialDivisor, DegreeSumMatchesOrder) {
  RandomPoly gen(77);
  for (int i = 0; i < 60; ++i) {
    Weight w = gen.weight(3, 3);
    RealIdeal a(3);
    int nf = gen.uniform(1, 3);
    for (int f = 0; f < nf; ++f) a.add_factor({gen.poly(3, 4, 5, 4, 1)}, Rational(gen.uniform(1, 5), gen.uniform(1, 4)));
    Rational total = 0;
    for (const auto& c : initial_divisor(a, w)) total += c.multiplicity * Rational(c.component.degree);
    EXPECT_EQ(total, ideal_order(a, w));
  }
}

TEST(CommonDivisors, FindsSharedLine) {
  Weight w{1, 1, 2};
  auto out = common_minimal_degree_divisors({P("x3*(x1 - 2*x2) + (x1 - 2*x2)^3"), P("x1^2*(x1-2*x2)*(x1+x2)*x3")}, w);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].str(), "X1 - 2*X2");
  EXPECT_TRUE(common_minimal_degree_divisors({P("x1*x3"), P("x1^3")}, w).empty());
  EXPECT_TRUE(common_minimal_degree_divisors({P("x3^2 + x1^4")}, w).empty());
}
