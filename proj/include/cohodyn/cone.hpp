#pragma once

#include <optional>
#include <vector>

#include "cohodyn/matrix.hpp"

namespace cohodyn {

struct ConeMembership {
  bool member = false;
  /// Nonnegative coefficients with sum_i c_i g_i = v (members only).
  RatVector coefficients;

  explicit operator bool() const { return member; }
};

/// Decides whether v is a nonnegative combination of the generators by a
/// phase-one simplex on  G c + a = v,  c, a >= 0,  minimise sum(a).
/// Pivoting uses Bland's rule, which cannot cycle.
inline ConeMembership cone_membership(const RatVector& v, const std::vector<RatVector>& generators) {
  const std::size_t n = v.size();
  const std::size_t m = generators.size();
  for (const auto& g : generators)
    if (g.size() != n) throw DimensionError("cone_membership: generator length mismatch");

  bool v_zero = true;
  for (const auto& x : v) v_zero = v_zero && x == 0;
  if (v_zero) return {true, RatVector(m)};
  if (m == 0) return {false, {}};

  // Tableau columns: m structural, n artificial, then rhs.
  const std::size_t cols = m + n + 1;
  const std::size_t rhs = m + n;
  RatMatrix t(n + 1, cols);  // last row is the objective (reduced costs)
  std::vector<std::size_t> basis(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational s = v[i] < 0 ? Rational(-1) : Rational(1);
    for (std::size_t j = 0; j < m; ++j) t(i, j) = s * generators[j][i];
    t(i, m + i) = 1;
    t(i, rhs) = s * v[i];
    basis[i] = m + i;
  }
  // Objective row: minimise sum of artificials -> reduced costs = -sum of rows.
  for (std::size_t j = 0; j < cols; ++j) {
    if (j >= m && j < m + n) continue;
    Rational s = 0;
    for (std::size_t i = 0; i < n; ++i) s += t(i, j);
    t(n, j) = -s;
  }

  while (true) {
    // Bland: entering variable is the lowest index with negative reduced cost.
    std::optional<std::size_t> enter;
    for (std::size_t j = 0; j < m + n; ++j)
      if (t(n, j) < 0) {
        enter = j;
        break;
      }
    if (!enter) break;
    std::optional<std::size_t> leave;
    Rational best;
    for (std::size_t i = 0; i < n; ++i) {
      if (t(i, *enter) <= 0) continue;
      Rational ratio = t(i, rhs) / t(i, *enter);
      if (!leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (!leave) break;  // unbounded direction cannot occur in phase one
    const std::size_t r = *leave;
    Rational inv = 1 / t(r, *enter);
    for (std::size_t j = 0; j < cols; ++j) t(r, j) *= inv;
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == r || t(i, *enter) == 0) continue;
      Rational f = t(i, *enter);
      for (std::size_t j = 0; j < cols; ++j)
        if (t(r, j) != 0) t(i, j) -= f * t(r, j);
    }
    basis[r] = *enter;
  }

  // Optimal value is -t(n, rhs).
  if (t(n, rhs) != 0) return {false, {}};
  RatVector c(m);
  for (std::size_t i = 0; i < n; ++i)
    if (basis[i] < m) c[basis[i]] = t(i, rhs);
  return {true, std::move(c)};
}

}  // namespace cohodyn
