#pragma once

#include <random>

#include "cohodyn.hpp"

namespace testing_support {

using namespace cohodyn;

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240611);
  return g;
}

inline long long rand_int(long long lo, long long hi) {
  return std::uniform_int_distribution<long long>(lo, hi)(rng());
}

/// Small rationals n/d with |n| <= num_max, 1 <= d <= den_max.
inline Rational rand_rational(long long num_max = 6, long long den_max = 4) {
  return Rational(rand_int(-num_max, num_max), rand_int(1, den_max));
}

inline RatVector rand_vector(std::size_t n, long long num_max = 6, long long den_max = 4) {
  RatVector v(n);
  for (auto& x : v) x = rand_rational(num_max, den_max);
  return v;
}

inline RatMatrix rand_matrix(std::size_t r, std::size_t c, long long num_max = 6, long long den_max = 4) {
  RatMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rand_rational(num_max, den_max);
  return m;
}

inline RatMatrix int_matrix(std::size_t r, std::size_t c, long long lo, long long hi) {
  RatMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rand_int(lo, hi);
  return m;
}

/// Permutation expansion of the determinant.
inline Rational leibniz_det(const RatMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Rational total = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    Rational term = inversions % 2 ? -1 : 1;
    for (std::size_t i = 0; i < n && term != 0; ++i) term *= m(i, perm[i]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

}  // namespace testing_support
