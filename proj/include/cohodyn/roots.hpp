#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "cohodyn/polynomial.hpp"

namespace cohodyn {

/// Closed interval [lo, hi] holding `multiplicity` roots (with multiplicity).
struct RootInterval {
  Rational lo;
  Rational hi;
  unsigned multiplicity = 1;

  bool exact() const { return lo == hi; }
  Rational width() const { return hi - lo; }
};

/// Closed rational interval used for certified real quantities.
struct RationalInterval {
  Rational lo;
  Rational hi;

  bool exact() const { return lo == hi; }
  Rational width() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  std::string to_string() const {
    return "[" + cohodyn::to_string(lo) + ", " + cohodyn::to_string(hi) + "]";
  }
  friend bool operator==(const RationalInterval&, const RationalInterval&) = default;
};

enum class Ordering { Less, Equal, Greater, Indeterminate };

inline std::string to_string(Ordering o) {
  switch (o) {
    case Ordering::Less: return "less";
    case Ordering::Equal: return "equal";
    case Ordering::Greater: return "greater";
    case Ordering::Indeterminate: return "indeterminate";
  }
  return "?";
}

/// Certified comparison of an enclosed quantity against a threshold. An
/// interval straddling the threshold is never resolved by guessing.
inline Ordering compare(const RationalInterval& x, const Rational& threshold) {
  if (x.hi < threshold) return Ordering::Less;
  if (x.lo > threshold) return Ordering::Greater;
  if (x.exact() && x.lo == threshold) return Ordering::Equal;
  return Ordering::Indeterminate;
}

inline Ordering compare(const RationalInterval& a, const RationalInterval& b) {
  if (a.hi < b.lo) return Ordering::Less;
  if (a.lo > b.hi) return Ordering::Greater;
  if (a.exact() && b.exact() && a.lo == b.lo) return Ordering::Equal;
  return Ordering::Indeterminate;
}

inline const Rational& default_root_width() {
  static const Rational w(1, 1000000000);
  return w;
}

/// Sturm chain of a polynomial.
class SturmSequence {
 public:
  explicit SturmSequence(const IntPolynomial& p) {
    if (p.is_zero()) throw DegenerateInputError("Sturm sequence of zero polynomial");
    chain_.push_back(p);
    if (p.degree() == 0) return;
    chain_.push_back(p.derivative().primitive());
    while (chain_.back().degree() > 0) {
      auto r = detail::rem(detail::to_rat(chain_[chain_.size() - 2]),
                           detail::to_rat(chain_.back()));
      if (r.empty()) break;
      // -remainder, scaled by a positive constant.
      IntPolynomial next = detail::to_primitive_int(r);
      // to_primitive_int may flip the sign to make the lead positive; restore -r's sign.
      Rational lead = r.back();
      if ((lead > 0) == (next.leading() > 0)) next = IntPolynomial{} - next;
      chain_.push_back(next);
    }
  }

  int variations(const Rational& x) const {
    int count = 0;
    int last = 0;
    for (const auto& q : chain_) {
      int s = q.sign_at(x);
      if (s == 0) continue;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  }

  /// Number of distinct real roots in the half-open interval (a, b].
  int count(const Rational& a, const Rational& b) const { return variations(a) - variations(b); }

  const IntPolynomial& polynomial() const { return chain_.front(); }

 private:
  std::vector<IntPolynomial> chain_;
};

/// Strict bound: every complex root z satisfies |z| < cauchy_bound(p).
inline Rational cauchy_bound(const IntPolynomial& p) {
  if (p.degree() <= 0) return 1;
  Rational m = 0;
  Rational lead = abs(Rational(p.leading()));
  for (int i = 0; i < p.degree(); ++i) m = std::max(m, abs(Rational(p.coeff(i))) / lead);
  // Round up to an integer for short bisection endpoints.
  return Rational(ceil(m) + 1);
}

namespace detail {

/// Isolates the distinct real roots of a square-free polynomial.
inline std::vector<RootInterval> isolate_squarefree(const IntPolynomial& f, const Rational& width) {
  std::vector<RootInterval> out;
  if (f.degree() <= 0) return out;
  if (f.degree() == 1) {
    Rational r = Rational(-f.coeff(0)) / Rational(f.coeff(1));
    out.push_back({r, r, 1});
    return out;
  }
  SturmSequence sturm(f);
  Rational bound = cauchy_bound(f);

  struct Pending {
    Rational lo, hi;
    int roots;
  };
  std::vector<Pending> stack{{-bound, bound, sturm.count(-bound, bound)}};
  std::vector<RootInterval> isolated;
  while (!stack.empty()) {
    Pending cur = stack.back();
    stack.pop_back();
    if (cur.roots == 0) continue;
    if (cur.roots == 1) {
      // Prefer an exact rational root if the simplest rational in range is one.
      Rational q = simplest_between(cur.lo, cur.hi);
      if (q > cur.lo && f.sign_at(q) == 0) {
        isolated.push_back({q, q, 1});
        continue;
      }
      isolated.push_back({cur.lo, cur.hi, 1});
      continue;
    }
    Rational mid = simplest_between(cur.lo + (cur.hi - cur.lo) / 4, cur.hi - (cur.hi - cur.lo) / 4);
    int left = sturm.count(cur.lo, mid);
    stack.push_back({mid, cur.hi, cur.roots - left});
    stack.push_back({cur.lo, mid, left});
  }

  // Refine each (lo, hi] to the requested width; roots at hi become exact.
  for (auto& iv : isolated) {
    if (iv.exact()) continue;
    if (f.sign_at(iv.hi) == 0) {
      iv.lo = iv.hi;
      continue;
    }
    while (iv.hi - iv.lo > width) {
      Rational q = simplest_between(iv.lo, iv.hi);
      if (q > iv.lo && f.sign_at(q) == 0) {
        iv.lo = iv.hi = q;
        break;
      }
      Rational mid = (iv.lo + iv.hi) / 2;
      int s = f.sign_at(mid);
      if (s == 0) {
        iv.lo = iv.hi = mid;
        break;
      }
      if (sturm.count(iv.lo, mid) == 1) iv.hi = mid; else iv.lo = mid;
    }
  }
  std::sort(isolated.begin(), isolated.end(),
            [](const RootInterval& a, const RootInterval& b) { return a.lo < b.lo; });

  // Closed intervals may still touch at a shared non-root endpoint; shrink
  // them apart. The enclosed root lies strictly inside (lo, hi].
  auto shrink = [&](RootInterval& iv) {
    if (iv.exact()) return;
    Rational mid = (iv.lo + iv.hi) / 2;
    if (f.sign_at(mid) == 0) {
      iv.lo = iv.hi = mid;
    } else if (sturm.count(iv.lo, mid) == 1) {
      iv.hi = mid;
    } else {
      iv.lo = mid;
    }
    if (!iv.exact() && f.sign_at(iv.hi) == 0) iv.lo = iv.hi;
  };
  for (std::size_t i = 0; i + 1 < isolated.size(); ++i) {
    while (isolated[i].hi >= isolated[i + 1].lo) {
      shrink(isolated[i]);
      shrink(isolated[i + 1]);
    }
  }
  return isolated;
}

}  // namespace detail

/// Disjoint closed intervals of width <= width jointly enclosing every real
/// root of p, with multiplicities from the square-free decomposition.
inline std::vector<RootInterval> isolate_real_roots(const IntPolynomial& p, const Rational& width) {
  if (p.is_zero()) throw DegenerateInputError("isolate_real_roots: zero polynomial");
  if (width <= 0) throw DegenerateInputError("isolate_real_roots: width must be positive");
  auto factors = squarefree_decomposition(p);
  IntPolynomial sqf{1};
  for (const auto& f : factors) sqf = sqf * f;
  sqf = sqf.primitive();
  auto intervals = detail::isolate_squarefree(sqf, width);
  std::vector<SturmSequence> factor_sturm;
  for (const auto& f : factors) factor_sturm.emplace_back(f.degree() > 0 ? f : IntPolynomial{1});
  for (auto& iv : intervals) {
    iv.multiplicity = 0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (factors[i].degree() <= 0) continue;
      bool has_root = iv.exact() ? factors[i].sign_at(iv.lo) == 0
                                 : factor_sturm[i].count(iv.lo, iv.hi) > 0;
      if (has_root) {
        iv.multiplicity = static_cast<unsigned>(i + 1);
        break;
      }
    }
  }
  return intervals;
}

inline int count_real_roots(const IntPolynomial& p) {
  IntPolynomial sqf = squarefree_part(p);
  if (sqf.degree() <= 0) return 0;
  SturmSequence s(sqf);
  Rational b = cauchy_bound(sqf);
  return s.count(-b, b);
}

namespace detail {

/// Enclosure of max |root| over the real roots of p (p must have one).
inline RationalInterval max_abs_real_root(const IntPolynomial& p, const Rational& width) {
  auto roots = isolate_real_roots(p, width);
  if (roots.empty()) throw DegenerateInputError("max_abs_real_root: no real roots");
  Rational lo = 0, hi = 0;
  for (const auto& r : roots) {
    Rational max_abs = std::max(abs(r.lo), abs(r.hi));
    Rational min_abs = (r.lo <= 0 && r.hi >= 0) ? Rational(0) : std::min(abs(r.lo), abs(r.hi));
    lo = std::max(lo, min_abs);
    hi = std::max(hi, max_abs);
  }
  return {lo, hi};
}

/// Companion matrix of a polynomial (roots = eigenvalues).
inline RatMatrix companion(const IntPolynomial& p) {
  const auto n = static_cast<std::size_t>(p.degree());
  RatMatrix c(n, n);
  Rational lead = Rational(p.leading());
  for (std::size_t i = 1; i < n; ++i) c(i, i - 1) = 1;
  for (std::size_t i = 0; i < n; ++i) c(i, n - 1) = -Rational(p.coeff(i)) / lead;
  return c;
}

}  // namespace detail

/// Certified enclosure of the spectral radius max |lambda| of a square matrix.
///
/// When every eigenvalue is real the enclosure comes straight from Sturm
/// isolation. Otherwise the distinct eigenvalues are squared through the
/// Kronecker square of the companion matrix of the square-free part: its
/// eigenvalues are all products lambda_i * lambda_j, each of modulus at most
/// rho^2, and rho^2 = lambda * conj(lambda) is itself a real one. So rho^2 is
/// the largest |real root| of that characteristic polynomial.
inline RationalInterval spectral_radius(const RatMatrix& m, const Rational& tol) {
  if (!m.is_square()) throw DimensionError("spectral_radius of non-square " + m.shape());
  if (tol <= 0) throw DegenerateInputError("spectral_radius: tolerance must be positive");
  if (m.rows() == 0) return {0, 0};
  IntPolynomial p = char_poly(m);
  IntPolynomial sqf = squarefree_part(p);
  if (sqf.degree() == 1 || count_real_roots(sqf) == sqf.degree())
    return detail::max_abs_real_root(sqf, tol);

  RatMatrix c = detail::companion(sqf);
  IntPolynomial squares = char_poly(kronecker(c, c));
  Rational w = tol;
  for (int attempt = 0; attempt < 64; ++attempt) {
    RationalInterval sq = detail::max_abs_real_root(squares, w);
    auto lo = nth_root_bounds(sq.lo, 2, tol / 4);
    auto hi = nth_root_bounds(sq.hi, 2, tol / 4);
    RationalInterval out{lo.first, hi.second};
    if (out.width() <= tol) return out;
    w /= 4;
  }
  throw DegenerateInputError("spectral_radius: failed to reach the requested tolerance");
}

}  // namespace cohodyn
