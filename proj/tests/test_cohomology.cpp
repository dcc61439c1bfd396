#include <gtest/gtest.h>

#include "support.hpp"

using namespace cohodyn;
using namespace testing_support;

namespace {

ModelPtr X() {
  static const ModelPtr x = share(blowup_points(3, 4, std::nullopt, "X"));
  return x;
}

CohomologyClass cls(const ModelPtr& m, int p, const std::string& e) { return parse_class(m, p, e); }

}  // namespace

TEST(Blowup, BasesFollowTheNamingScheme) {
  auto x = X();
  EXPECT_EQ(x->bases[0], (std::vector<std::string>{"1"}));
  EXPECT_EQ(x->bases[1], (std::vector<std::string>{"H", "E0", "E1", "E2", "E3"}));
  EXPECT_EQ(x->bases[2], (std::vector<std::string>{"H2", "L0", "L1", "L2", "L3"}));
  EXPECT_EQ(x->bases[3], (std::vector<std::string>{"H3"}));
  auto y = blowup_points(4, 2);
  EXPECT_EQ(y.name, "Bl4_2");
  EXPECT_EQ(y.bases[2], (std::vector<std::string>{"H2", "E0_2", "E1_2"}));
  EXPECT_EQ(y.bases[3], (std::vector<std::string>{"H3", "L0", "L1"}));
}

TEST(Blowup, PairingTableInDimensionThree) {
  auto x = X();
  EXPECT_EQ(pair(cls(x, 1, "H"), cls(x, 2, "H2")), 1);
  EXPECT_EQ(pair(cls(x, 2, "H2"), cls(x, 1, "H")), 1);
  EXPECT_EQ(pair(cls(x, 1, "E2"), cls(x, 2, "L2")), -1);
  EXPECT_EQ(pair(cls(x, 1, "E2"), cls(x, 2, "L1")), 0);
  EXPECT_EQ(pair(cls(x, 1, "H"), cls(x, 2, "L0")), 0);
  EXPECT_EQ(pair(cls(x, 0, "1"), cls(x, 3, "H3")), 1);
  EXPECT_THROW(pair(cls(x, 1, "H"), cls(x, 1, "H")), DegreeError);
}

TEST(Blowup, ReferencePowersSelfConsistent) {
  // pair(w^j, w^{k-j}) equals the top power w^k for every split.
  for (int k = 2; k <= 5; ++k)
    for (int m = 0; m <= 3; ++m) {
      RatVector weights{Rational(rand_int(1, 5))};
      for (int i = 0; i < m; ++i) weights.push_back(Rational(rand_int(0, 3), rand_int(1, 3)));
      auto model = share(blowup_points(k, m, weights));
      Rational top = (*model->kahler_powers[static_cast<std::size_t>(k)])[0];
      Rational oracle = pow(weights[0], static_cast<unsigned>(k));
      for (int i = 0; i < m; ++i) oracle -= pow(weights[static_cast<std::size_t>(i) + 1], static_cast<unsigned>(k));
      EXPECT_EQ(top, oracle);
      for (int j = 0; j <= k; ++j) {
        auto a = CohomologyClass::from(model, j, *model->kahler_powers[static_cast<std::size_t>(j)]);
        auto b = CohomologyClass::from(model, k - j, *model->kahler_powers[static_cast<std::size_t>(k - j)]);
        EXPECT_EQ(pair(a, b), top) << "k=" << k << " m=" << m << " j=" << j;
      }
    }
}

TEST(Blowup, RejectsBadArguments) {
  EXPECT_THROW(blowup_points(1, 2), DimensionError);
  EXPECT_THROW(blowup_points(3, -1), DimensionError);
  EXPECT_THROW(blowup_points(3, 2, RatVector{1, 0}), DimensionError);
  EXPECT_THROW(projective_space(0), DimensionError);
}

TEST(Product, PairingFactorsThroughTheFactors) {
  auto a = share(blowup_points(2, 1, std::nullopt, "A"));
  auto b = share(projective_space(2));
  auto ab = share(product_model(*a, *b));
  EXPECT_EQ(ab->name, "AxP2");
  EXPECT_EQ(ab->dim, 4);
  // Independent oracle: pair(a1|b1, a2|b2) = pair_A(a1, a2) pair_B(b1, b2).
  auto split = [](const std::string& s) { return std::pair{s.substr(0, s.find('|')), s.substr(s.find('|') + 1)}; };
  for (int p = 0; p <= 4; ++p)
    for (std::size_t i = 0; i < ab->rank(p); ++i)
      for (std::size_t j = 0; j < ab->rank(4 - p); ++j) {
        auto [a1, b1] = split(ab->bases[static_cast<std::size_t>(p)][i]);
        auto [a2, b2] = split(ab->bases[static_cast<std::size_t>(4 - p)][j]);
        int pa = *a->degree_of(a1), pb = *b->degree_of(b1);
        int qa = *a->degree_of(a2), qb = *b->degree_of(b2);
        Rational oracle = 0;
        if (pa + qa == 2 && pb + qb == 2)
          oracle = pair(cls(a, pa, a1), cls(a, qa, a2)) * pair(cls(b, pb, b1), cls(b, qb, b2));
        EXPECT_EQ(ab->pairing(p)(i, j), oracle) << ab->bases[static_cast<std::size_t>(p)][i] << " . "
                                                << ab->bases[static_cast<std::size_t>(4 - p)][j];
      }
}

TEST(Product, ReferencePowerIsBinomial) {
  auto p1 = share(projective_space(1));
  auto sq = share(product_model(*p1, *p1));
  // (h1 + h2)^2 = 2 h1 h2 on P1 x P1.
  auto w2 = CohomologyClass::from(sq, 2, *sq->kahler_powers[2]);
  EXPECT_EQ(format_class(w2), "2H|H");
  EXPECT_EQ(format_class(CohomologyClass::from(sq, 1, sq->kahler_class)), "H|1+1|H");
}

TEST(ClassExpr, ParsesAndFormats) {
  auto x = X();
  EXPECT_EQ(format_class(cls(x, 2, "H2 - L2 - L3")), "H2-L2-L3");
  EXPECT_EQ(format_class(cls(x, 2, "-H2+L0+L1")), "-H2+L0+L1");
  EXPECT_EQ(format_class(cls(x, 1, "3H - 2E0 -2*E1 - 1/2 E2")), "3H-2E0-2E1-1/2*E2");
  EXPECT_EQ(format_class(cls(x, 1, "E0 + E0 - 2E0")), "0");
  EXPECT_EQ(cls(x, 0, "5").coeffs, RatVector{5});
  EXPECT_THROW(cls(x, 2, "H2 - Q7"), LookupError);
  EXPECT_THROW(cls(x, 2, "H2 -"), ParseError);
  // Whitespace is insignificant, so juxtaposed names read as one unknown name.
  EXPECT_THROW(cls(x, 2, "H2 L0"), LookupError);
  EXPECT_THROW(cls(x, 2, "2*"), ParseError);
  EXPECT_THROW(cls(x, 2, "1/0*H2"), ParseError);
  EXPECT_THROW(cls(x, 2, ""), ParseError);
}

TEST(ClassExpr, RoundTripsRandomClasses) {
  auto x = X();
  for (int i = 0; i < 200; ++i) {
    int p = static_cast<int>(rand_int(0, 3));
    auto c = CohomologyClass::from(x, p, rand_vector(x->rank(p)));
    EXPECT_EQ(cls(x, p, format_class(c)), c);
  }
}

TEST(Positivity, ObstructionAgainstReferencePower) {
  auto x = X();
  auto v = positivity_obstruction(cls(x, 2, "-H2+L0+L1"));
  EXPECT_TRUE(v.obstructed);
  EXPECT_EQ(v.mass, -1);
  auto w = positivity_obstruction(cls(x, 2, "H2-L0-L1"));
  EXPECT_FALSE(w.obstructed);
  EXPECT_EQ(w.mass, 1);
  // Exceptional classes have zero mass against H: no verdict either way.
  EXPECT_FALSE(positivity_obstruction(cls(x, 1, "-E0")).obstructed);
}

TEST(Positivity, KahlerReferenceDetectsExceptionalSigns) {
  auto x = share(blowup_points(3, 4, RatVector{4, 1, 1, 1, 1}, "Xk"));
  // (4H - sum E_i)^2 = 16 H2 - sum L_i; E0 pairs to -(-1) = +1.
  EXPECT_EQ(positivity_obstruction(parse_class(x, 1, "E0")).mass, 1);
  EXPECT_TRUE(positivity_obstruction(parse_class(x, 1, "-E0")).obstructed);
}

TEST(Cone, CurveClassesOfTheBlowup) {
  auto x = X();
  std::vector<RatVector> gens;
  for (const char* g : {"H2", "L0", "L1", "L2", "L3"}) gens.push_back(cls(x, 2, g).coeffs);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      std::string e = "H2";
      for (int l = 0; l < 4; ++l)
        if (l != i && l != j) e += "-L" + std::to_string(l);
      gens.push_back(cls(x, 2, e).coeffs);
    }
  EXPECT_FALSE(cone_membership(cls(x, 2, "-H2+L0+L1").coeffs, gens).member);
  auto r = cone_membership(cls(x, 2, "2H2-L2-L3+L0").coeffs, gens);
  EXPECT_TRUE(r.member);
}
