#include <gtest/gtest.h>

#include "support.hpp"

using namespace cohodyn;
using namespace testing_support;

namespace {

using IntMat = std::vector<std::vector<long long>>;

IntMat mul(const IntMat& a, const IntMat& b) {
  IntMat c(a.size(), std::vector<long long>(b[0].size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t l = 0; l < b.size(); ++l)
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][l] * b[l][j];
  return c;
}

/// Degree of f^n from the raw n-th power of the exponent matrix, reduced
/// once at the end.
long long single_reduction_degree(const IntMat& e, int n) {
  IntMat p = e;
  for (int i = 1; i < n; ++i) p = mul(e, p);
  long long deg = 0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    long long mn = p[0][j];
    for (const auto& row : p) mn = std::min(mn, row[j]);
    deg += p[0][j] - mn;
  }
  return deg;
}

IntMat to_int(const MonomialLift& f) {
  IntMat m;
  for (const auto& r : f.rows()) {
    m.emplace_back();
    for (const auto& x : r) m.back().push_back(x.convert_to<long long>());
  }
  return m;
}

/// Number of N-torsion points w of the torus with A w = 0 mod N: the
/// preimages of 1 among roots of unity, which is |det A| once N is a
/// multiple of it.
long long torsion_kernel_count(const RatMatrix& a, long long n) {
  const std::size_t k = a.rows();
  std::vector<long long> w(k, 0);
  long long count = 0;
  while (true) {
    bool zero = true;
    for (std::size_t i = 0; i < k && zero; ++i) {
      long long s = 0;
      for (std::size_t j = 0; j < k; ++j) s += numerator(a(i, j)).convert_to<long long>() * w[j];
      zero = ((s % n) + n) % n == 0;
    }
    count += zero;
    std::size_t pos = 0;
    while (pos < k && ++w[pos] == n) w[pos++] = 0;
    if (pos == k) break;
  }
  return count;
}

MonomialLift random_dominant_lift(int k, long long lo, long long hi) {
  while (true) {
    std::vector<std::vector<long long>> rows(static_cast<std::size_t>(k) + 1,
                                             std::vector<long long>(static_cast<std::size_t>(k) + 1));
    // Torus part random; coordinate 0 absorbs the homogenising degree.
    for (std::size_t i = 1; i < rows.size(); ++i)
      for (std::size_t j = 1; j < rows.size(); ++j) {
        rows[i][j] = rand_int(lo, hi);
        rows[i][0] -= rows[i][j];
      }
    try {
      return lift(rows);
    } catch (const DominanceError&) {
    }
  }
}

}  // namespace

TEST(Monomial, LiftsAreReduced) {
  auto f = reciprocal_lift(3);
  EXPECT_EQ(monomial_text(f), "0 1 1 1\n1 0 1 1\n1 1 0 1\n1 1 1 0\n");
  EXPECT_EQ(f.degree(), 3);
  EXPECT_THROW(lift(std::vector<std::vector<long long>>{{1, 0}, {2, 0}}), DegenerateInputError);
  EXPECT_THROW(lift(std::vector<std::vector<long long>>{{1, 0, 0}, {1, 0, 0}, {0, 0, 1}}), DominanceError);
  EXPECT_THROW(parse_monomial_text("1 0\n0 x\n"), ParseError);
  EXPECT_EQ(parse_monomial_text("# comment\n-1 0 0\n0 -1 0\n0 0 -1\n"), reciprocal_lift(2));
}

TEST(Monomial, CremonaDegreeSequence) {
  auto seq = degree_sequence(reciprocal_lift(3), 8);
  std::vector<Integer> expect{3, 1, 3, 1, 3, 1, 3, 1};
  EXPECT_EQ(seq.degrees, expect);
  EXPECT_EQ(seq.factors[1], (std::vector<Integer>{2, 2, 2, 2}));
  auto st = is_1_stable(reciprocal_lift(3), 8);
  EXPECT_FALSE(st.stable);
  EXPECT_EQ(st.first_unstable, 2u);
  auto d = first_dynamical_degree(reciprocal_lift(3), 8);
  EXPECT_TRUE(d.exact);
  EXPECT_EQ(d.interval.lo, 1);
  EXPECT_EQ(topological_degree(reciprocal_lift(3)), 1);
}

TEST(Monomial, DegreeSequenceMatchesSingleReductionOracle) {
  for (int i = 0; i < 60; ++i) {
    int k = static_cast<int>(rand_int(1, 3));
    auto f = random_dominant_lift(k, -2, 2);
    auto seq = degree_sequence(f, 5);
    for (int n = 1; n <= 5; ++n)
      EXPECT_EQ(seq.degrees[static_cast<std::size_t>(n) - 1], single_reduction_degree(to_int(f), n))
          << monomial_text(f) << "n=" << n;
  }
}

TEST(Monomial, TopologicalDegreeCountsTorsionPreimages) {
  for (int i = 0; i < 40; ++i) {
    auto f = random_dominant_lift(2, -3, 3);
    Integer det = topological_degree(f);
    long long n = det.convert_to<long long>();
    if (n > 40) continue;
    EXPECT_EQ(torsion_kernel_count(f.torus_matrix(), n), n) << monomial_text(f);
    EXPECT_EQ(torsion_kernel_count(f.torus_matrix(), 2 * n), n) << monomial_text(f);
  }
}

TEST(Monomial, StableMapsAreCertified) {
  auto p = power_lift(2, 3);
  auto st = is_1_stable(p, 4);
  EXPECT_TRUE(st.stable);
  EXPECT_TRUE(st.certified);
  auto d = first_dynamical_degree(p, 6);
  EXPECT_TRUE(d.exact);
  EXPECT_EQ(d.interval.lo, 3);
  EXPECT_EQ(topological_degree(p), 9);
}

TEST(Monomial, FeketeBoundBracketsTheGrowthRate) {
  // [x0^2 : x1 x2 : x0 x1], torus matrix [[1,1],[1,0]]: degrees grow like the golden ratio.
  auto f = lift(std::vector<std::vector<long long>>{{2, 0, 0}, {0, 1, 1}, {1, 1, 0}});
  auto d = first_dynamical_degree(f, 24, Rational(1, 1000));
  EXPECT_FALSE(d.exact);
  const double golden = (1 + std::sqrt(5.0)) / 2;
  EXPECT_LE(to_double(d.interval.lo), golden);
  EXPECT_GE(to_double(d.interval.hi), golden);
}

TEST(Monomial, StepCapIsEnforced) {
  EXPECT_THROW(degree_sequence(reciprocal_lift(2), 10, 5), CapabilityError);
}

TEST(Monomial, CsvFormat) {
  auto csv = degree_sequence_csv(degree_sequence(reciprocal_lift(2), 3));
  EXPECT_EQ(csv, "n,degree,extracted\n1,2,0;0;0\n2,1,1;1;1\n3,2,0;0;0\n");
}
