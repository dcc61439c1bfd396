#include <cmath>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace cohodyn;
using namespace testing_support;

namespace {

HomogeneousLift power2() { return to_homogeneous(power_lift(2, 2), "power2_P2"); }

/// [x^2 : y^2 + xy : z^2 + xz/2], holomorphic on P^2 (no common zero but 0).
HomogeneousLift mixed() {
  HomogeneousLift f;
  f.k = 2;
  f.degree = 2;
  f.coordinates = {{{1.0, {2, 0, 0}}},
                   {{1.0, {0, 2, 0}}, {1.0, {1, 1, 0}}},
                   {{1.0, {0, 0, 2}}, {0.5, {1, 0, 1}}}};
  f.validate();
  return f;
}

double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

Point random_point(std::size_t n) {
  Point z(n);
  for (auto& c : z) c = Complex(uniform(-3, 3), uniform(-3, 3));
  return z;
}

}  // namespace

TEST(Green, PowerMapClosedForm) {
  auto g = green_potential(power2(), {1, 2, 3}, 2);
  EXPECT_NEAR(g.value(), std::log(3.0), 1e-14);
  EXPECT_TRUE(g.converged);
  for (int i = 0; i < 50; ++i) {
    auto z = random_point(3);
    EXPECT_NEAR(green_potential(to_homogeneous(power_lift(2, 3)), z, 3).value(), std::log(max_norm(z)), 1e-13);
  }
}

TEST(Green, ScalingInvariance) {
  auto f = mixed();
  for (int i = 0; i < 100; ++i) {
    auto z = random_point(3);
    Complex c(uniform(-4, 4), uniform(-4, 4));
    Point cz = z;
    for (auto& x : cz) x *= c;
    double lhs = green_potential(f, cz, 40).value();
    double rhs = green_potential(f, z, 40).value() + std::log(std::abs(c));
    EXPECT_NEAR(lhs, rhs, 1e-10);
  }
}

TEST(Green, ConvergesWithATailBound) {
  auto f = mixed();
  auto a = green_potential(f, {0.3, -1.2, 2.0}, 20);
  auto b = green_potential(f, {0.3, -1.2, 2.0}, 45);
  EXPECT_LE(std::abs(a.value() - b.value()), a.tail_bound);
  EXPECT_TRUE(b.converged);
}

TEST(Green, Errors) {
  auto cremona = to_homogeneous(reciprocal_lift(2));
  EXPECT_THROW(green_potential(cremona, {0, 0, 1}, 5), NumericalError);
  EXPECT_THROW(green_potential(power2(), {0, 0, 0}, 5), DegenerateInputError);
  EXPECT_THROW(green_potential(power2(), {1, 2}, 5), DimensionError);
  HomogeneousLift bad = power2();
  bad.coordinates[1][0].exponents = {1, 0, 0};
  EXPECT_THROW(bad.validate(), DegreeError);
}

namespace {

/// Hyperplane weight of a symmetric monomial map by brute-force partial sums:
/// the factor removed at step n has total degree d d_{n-1} - d_n, split
/// evenly over the k+1 coordinates.
double symmetric_weight_oracle(const MonomialLift& f, int terms) {
  auto seq = degree_sequence(f, static_cast<std::size_t>(terms));
  double d = f.degree().convert_to<double>(), w = 0;
  for (int n = 2; n <= terms; ++n) {
    double removed = d * seq.degrees[static_cast<std::size_t>(n) - 2].convert_to<double>() -
                     seq.degrees[static_cast<std::size_t>(n) - 1].convert_to<double>();
    w += std::pow(d, -n) * removed / static_cast<double>(f.size());
  }
  return w;
}

}  // namespace

TEST(Extracted, CremonaWeightsAreExact) {
  auto t = extracted_invariant_current(reciprocal_lift(3), 20);
  EXPECT_TRUE(t.exact);
  for (const auto& w : t.weights) EXPECT_EQ(w, Rational(1, 4));
  EXPECT_NEAR(to_double(t.weights[0]), symmetric_weight_oracle(reciprocal_lift(3), 30), 1e-12);
  auto s = extracted_invariant_current(reciprocal_lift(2), 20);
  for (const auto& w : s.weights) EXPECT_EQ(w, Rational(1, 3));
  EXPECT_NEAR(to_double(s.weights[0]), symmetric_weight_oracle(reciprocal_lift(2), 40), 1e-12);
}

TEST(Extracted, InvariantUnderPullback) {
  for (auto f : {reciprocal_lift(2), reciprocal_lift(3), reciprocal_lift(4)}) {
    auto t = extracted_invariant_current(f, 20);
    auto pulled = pull_back_hyperplane_weights(f, t.weights);
    for (std::size_t i = 0; i < pulled.size(); ++i) EXPECT_EQ(pulled[i], Rational(f.degree()) * t.weights[i]);
  }
}

TEST(Extracted, StableAndDegreeOneMapsCarryNoWeight) {
  EXPECT_TRUE(extracted_invariant_current(power_lift(2, 2), 10).is_zero());
  auto id = extracted_invariant_current(identity_lift(2), 10);
  EXPECT_TRUE(id.is_zero());
  EXPECT_TRUE(id.exact);
  EXPECT_THROW(extracted_invariant_current(power_lift(2, 2), 1), DegenerateInputError);
}

TEST(ProductCurrent, CremonaSquared) {
  auto f = reciprocal_lift(3);
  auto t = extracted_invariant_current(f, 20);
  auto r = product_invariant_current(t, t, f, f);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.scale_factor, 9);
  EXPECT_EQ(r.atoms.size(), 16u);
  for (const auto& a : r.atoms) EXPECT_EQ(a.weight, Rational(1, 16));
  EXPECT_EQ(r.atoms[1].name(), "{x0=0}x{x1=0}");
}

TEST(ProductCurrent, MixedFactors) {
  auto f1 = reciprocal_lift(2), f2 = reciprocal_lift(3);
  auto r = product_invariant_current(extracted_invariant_current(f1, 20), extracted_invariant_current(f2, 20), f1, f2);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.scale_factor, 6);
  EXPECT_EQ(r.atoms.size(), 12u);
}

TEST(ProductCurrent, NonInvariantFactorIsRejected) {
  auto f = reciprocal_lift(2);
  HypersurfaceCurrent t;
  t.k = 2;
  t.weights = {1, 0, 0};
  EXPECT_THROW(product_invariant_current(t, t, f, f), PreconditionError);
}

TEST(Lelong, LogDistanceHasNumberOne) {
  const Point a{Complex(0.3, -0.2), Complex(1.1, 0.4)};
  Potential u = [a](const Point& z) {
    double r2 = 0;
    for (std::size_t i = 0; i < z.size(); ++i) r2 += std::norm(z[i] - a[i]);
    return 0.5 * std::log(r2);
  };
  auto est = lelong_estimate(u, a);
  EXPECT_NEAR(est.nu, 1.0, 0.02);
  EXPECT_EQ(est.failures, 0u);
}

TEST(Lelong, CoordinateDivisorWithMultiplicity) {
  // u = 2 log|z_1 - a_1| has Lelong number 2 at a; the sphere maximum is
  // attained in the z_1 direction.
  const Point a{Complex(0.5, 0), Complex(-0.25, 0.75)};
  Potential u = [a](const Point& z) { return 2 * std::log(std::abs(z[0] - a[0])); };
  EXPECT_NEAR(lelong_estimate(u, a).nu, 2.0, 0.02);
}

TEST(Lelong, GreenPotentialIsContinuousAtAGenericPoint) {
  auto est = lelong_estimate(green_as_potential(power2(), 20), {1, Complex(2, 1), 3});
  EXPECT_NEAR(est.nu, 0.0, 0.02);
}

TEST(Lelong, StableUnderDoublingTheSampleCount) {
  const Point a{Complex(0.1, 0.2), Complex(-0.3, 0.1)};
  Potential u = [a](const Point& z) { return 0.5 * std::log(std::norm(z[0] - a[0]) + std::norm(z[1] - a[1])); };
  LelongOptions opt;
  opt.samples = 1024;
  double n1 = lelong_estimate(u, a, opt).nu;
  opt.samples = 2048;
  double n2 = lelong_estimate(u, a, opt).nu;
  EXPECT_NEAR(n1, n2, 0.02);
}

TEST(Lelong, SamplesAreUnitAndDeterministic) {
  auto s = sphere_samples(3, 100, 7);
  auto t = sphere_samples(3, 100, 7);
  for (std::size_t i = 0; i < s.size(); ++i) {
    double r = 0;
    for (const auto& c : s[i]) r += std::norm(c);
    EXPECT_NEAR(r, 1.0, 1e-12);
    EXPECT_EQ(s[i], t[i]);
  }
  EXPECT_NE(sphere_samples(3, 1, 8)[0], s[0]);
}

TEST(Lelong, TooManyFailuresIsANumericalError) {
  Potential bad = [](const Point&) -> double { throw NumericalError("nope"); };
  EXPECT_THROW(lelong_estimate(bad, {0, 0}), NumericalError);
  LelongOptions opt;
  opt.r_inner = 1;
  EXPECT_THROW(lelong_estimate(bad, {0, 0}, opt), DegenerateInputError);
}
