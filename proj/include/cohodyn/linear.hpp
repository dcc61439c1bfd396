#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cohodyn/matrix.hpp"

namespace cohodyn {

/// Reduced row echelon form computed in place; returns the pivot columns.
inline std::vector<std::size_t> rref(RatMatrix& m, std::size_t pivot_limit = SIZE_MAX) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  const std::size_t ncols = std::min(m.cols(), pivot_limit);
  for (std::size_t col = 0; col < ncols && row < m.rows(); ++col) {
    std::size_t sel = row;
    while (sel < m.rows() && m(sel, col) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row)
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(sel, c), m(row, c));
    Rational inv = 1 / m(row, col);
    for (std::size_t c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      Rational f = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c) m(r, c) -= f * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t rank(RatMatrix m) { return rref(m).size(); }

/// Exact determinant by fraction-free (Bareiss) elimination on the
/// integer matrix obtained by clearing denominators row by row.
inline Rational determinant(const RatMatrix& m) {
  if (!m.is_square()) throw DimensionError("determinant of non-square " + m.shape());
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  std::vector<Integer> a(n * n);
  Rational scale = 1;
  for (std::size_t r = 0; r < n; ++r) {
    Integer den = 1;
    for (std::size_t c = 0; c < n; ++c) den = lcm(den, denominator(m(r, c)));
    scale /= den;
    for (std::size_t c = 0; c < n; ++c) a[r * n + c] = numerator(m(r, c) * den);
  }
  auto at = [&](std::size_t r, std::size_t c) -> Integer& { return a[r * n + c]; };
  Integer prev = 1;
  int sgn = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      std::size_t sel = k + 1;
      while (sel < n && at(sel, k) == 0) ++sel;
      if (sel == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(at(k, c), at(sel, c));
      sgn = -sgn;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
      at(i, k) = 0;
    }
    prev = at(k, k);
  }
  return Rational(sgn) * Rational(at(n - 1, n - 1)) * scale;
}

inline std::optional<RatMatrix> inverse(const RatMatrix& m) {
  if (!m.is_square()) throw DimensionError("inverse of non-square " + m.shape());
  const std::size_t n = m.rows();
  RatMatrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
    aug(r, n + r) = 1;
  }
  if (rref(aug, n).size() != n) return std::nullopt;
  RatMatrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = aug(r, n + c);
  return inv;
}

/// Basis of the right null space, one vector per free column.
inline std::vector<RatVector> kernel_basis(const RatMatrix& m) {
  RatMatrix r = m;
  auto pivots = rref(r);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<RatVector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    RatVector v(m.cols());
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(i, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Whether v lies in the span of the given vectors.
inline bool in_span(const std::vector<RatVector>& span_vectors, const RatVector& v) {
  if (span_vectors.empty()) {
    for (const auto& x : v)
      if (x != 0) return false;
    return true;
  }
  RatMatrix a(v.size(), span_vectors.size());
  for (std::size_t j = 0; j < span_vectors.size(); ++j) {
    if (span_vectors[j].size() != v.size()) throw DimensionError("in_span: length mismatch");
    for (std::size_t i = 0; i < v.size(); ++i) a(i, j) = span_vectors[j][i];
  }
  RatMatrix aug(v.size(), span_vectors.size() + 1);
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < span_vectors.size(); ++j) aug(i, j) = a(i, j);
    aug(i, span_vectors.size()) = v[i];
  }
  return rank(a) == rank(aug);
}

enum class SolveStatus { Unique, Inconsistent, Underdetermined };

struct LinearSolution {
  SolveStatus status = SolveStatus::Inconsistent;
  RatMatrix solution;               // set when status == Unique
  std::size_t free_variables = 0;   // set when status == Underdetermined
  /// One particular solution (free variables zero) when consistent.
  std::optional<RatMatrix> particular;
};

inline std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Unique: return "unique";
    case SolveStatus::Inconsistent: return "inconsistent";
    case SolveStatus::Underdetermined: return "underdetermined";
  }
  return "?";
}

/// Solves a X = b exactly. Inconsistency and underdetermination are values.
inline LinearSolution solve_linear(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows())
    throw DimensionError("solve_linear: a is " + a.shape() + " but b is " + b.shape());
  const std::size_t n = a.cols();
  RatMatrix aug(a.rows(), n + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) aug(r, n + c) = b(r, c);
  }
  auto pivots = rref(aug, n);
  for (std::size_t r = pivots.size(); r < a.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c)
      if (aug(r, n + c) != 0) return LinearSolution{SolveStatus::Inconsistent, {}, 0, std::nullopt};

  RatMatrix x(n, b.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i)
    for (std::size_t c = 0; c < b.cols(); ++c) x(pivots[i], c) = aug(i, n + c);

  LinearSolution out;
  out.particular = x;
  if (pivots.size() < n) {
    out.status = SolveStatus::Underdetermined;
    out.free_variables = n - pivots.size();
  } else {
    out.status = SolveStatus::Unique;
    out.solution = std::move(x);
  }
  return out;
}

}  // namespace cohodyn
