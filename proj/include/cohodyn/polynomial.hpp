#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cohodyn/linear.hpp"
#include "cohodyn/matrix.hpp"
#include "cohodyn/rational.hpp"

namespace cohodyn {

/// Dense univariate polynomial with integer coefficients, lowest degree first.
/// The zero polynomial has no coefficients.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<Integer> coeffs) : c_(std::move(coeffs)) { trim(); }
  IntPolynomial(std::initializer_list<long long> coeffs) {
    for (auto v : coeffs) c_.emplace_back(v);
    trim();
  }

  static IntPolynomial monomial(const Integer& coeff, std::size_t degree) {
    std::vector<Integer> c(degree + 1);
    c[degree] = coeff;
    return IntPolynomial(std::move(c));
  }

  bool is_zero() const noexcept { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Integer>& coefficients() const noexcept { return c_; }
  const Integer& leading() const { return c_.back(); }
  Integer coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Integer(0); }

  Rational eval(const Rational& x) const {
    // Horner on the numerator to avoid repeated normalisation.
    if (c_.empty()) return 0;
    const Integer n = numerator(x), d = denominator(x);
    Integer acc = c_.back();
    Integer dpow = 1;
    for (std::size_t i = c_.size() - 1; i-- > 0;) {
      dpow *= d;
      acc = acc * n + c_[i] * dpow;
    }
    return Rational(acc, dpow);
  }

  int sign_at(const Rational& x) const { return cohodyn::sign(eval(x)); }

  IntPolynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Integer> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long long>(i);
    return IntPolynomial(std::move(d));
  }

  Integer content() const {
    Integer g = 0;
    for (const auto& x : c_) g = gcd(g, x);
    return g;
  }

  /// Divides out the content and makes the leading coefficient positive.
  IntPolynomial primitive() const {
    if (is_zero()) return {};
    Integer g = content();
    if (leading() < 0) g = -g;
    std::vector<Integer> out(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) out[i] = c_[i] / g;
    return IntPolynomial(std::move(out));
  }

  /// p(-x)
  IntPolynomial reflect() const {
    std::vector<Integer> out = c_;
    for (std::size_t i = 1; i < out.size(); i += 2) out[i] = -out[i];
    return IntPolynomial(std::move(out));
  }

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<Integer> out(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) + b.coeff(i);
    return IntPolynomial(std::move(out));
  }
  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<Integer> out(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) - b.coeff(i);
    return IntPolynomial(std::move(out));
  }
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Integer> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return IntPolynomial(std::move(out));
  }

  /// Exact division; the caller guarantees b divides a over Z.
  friend IntPolynomial exact_div(const IntPolynomial& a, const IntPolynomial& b) {
    if (b.is_zero()) throw DegenerateInputError("polynomial division by zero");
    if (a.is_zero()) return {};
    std::vector<Integer> rem = a.c_;
    const std::size_t db = b.c_.size() - 1;
    if (rem.size() < b.c_.size()) throw DegenerateInputError("exact_div: divisor does not divide");
    std::vector<Integer> q(rem.size() - db);
    for (std::size_t i = q.size(); i-- > 0;) {
      const Integer& top = rem[i + db];
      if (top == 0) continue;
      if (top % b.leading() != 0) throw DegenerateInputError("exact_div: divisor does not divide");
      q[i] = top / b.leading();
      for (std::size_t j = 0; j <= db; ++j) rem[i + j] -= q[i] * b.c_[j];
    }
    for (const auto& r : rem)
      if (r != 0) throw DegenerateInputError("exact_div: nonzero remainder");
    return IntPolynomial(std::move(q));
  }

  std::string to_string(const std::string& var = "x") const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
      const Integer& c = c_[i];
      if (c == 0) continue;
      bool neg = c < 0;
      Integer mag = neg ? Integer(-c) : c;
      if (out.empty()) out += neg ? "-" : "";
      else out += neg ? " - " : " + ";
      if (mag != 1 || i == 0) out += mag.str();
      if (i > 0) out += var + (i > 1 ? "^" + std::to_string(i) : "");
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Integer> c_;
};

namespace detail {

using RatPoly = std::vector<Rational>;  // lowest degree first, trimmed

inline void trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline RatPoly to_rat(const IntPolynomial& p) {
  RatPoly out;
  for (const auto& c : p.coefficients()) out.emplace_back(c);
  return out;
}

inline IntPolynomial to_primitive_int(const RatPoly& p) {
  if (p.empty()) return {};
  Integer den = 1;
  for (const auto& c : p) den = lcm(den, denominator(c));
  std::vector<Integer> out;
  for (const auto& c : p) out.push_back(numerator(c * den));
  return IntPolynomial(std::move(out)).primitive();
}

/// Remainder of a modulo b over Q.
inline RatPoly rem(RatPoly a, const RatPoly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    Rational f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= f * b[j];
    a.pop_back();
    trim(a);
  }
  return a;
}

}  // namespace detail

/// Monic-up-to-content gcd over Q, returned primitive with positive leading coefficient.
inline IntPolynomial gcd(const IntPolynomial& a, const IntPolynomial& b) {
  auto x = detail::to_rat(a.primitive());
  auto y = detail::to_rat(b.primitive());
  while (!y.empty()) {
    auto r = detail::rem(x, y);
    x = std::move(y);
    y = detail::to_rat(detail::to_primitive_int(r));
  }
  return detail::to_primitive_int(x);
}

namespace detail {

inline RatPoly quotient(RatPoly a, const RatPoly& b) {
  trim(a);
  if (a.size() < b.size()) return {};
  RatPoly q(a.size() - b.size() + 1);
  for (std::size_t i = q.size(); i-- > 0;) {
    q[i] = a[i + b.size() - 1] / b.back();
    for (std::size_t j = 0; j < b.size(); ++j) a[i + j] -= q[i] * b[j];
  }
  trim(q);
  return q;
}

inline RatPoly derivative(const RatPoly& x) {
  RatPoly out;
  for (std::size_t i = 1; i < x.size(); ++i) out.push_back(x[i] * static_cast<long long>(i));
  trim(out);
  return out;
}

inline RatPoly monic_gcd(RatPoly x, RatPoly y) {
  trim(x);
  trim(y);
  while (!y.empty()) {
    auto r = rem(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  if (!x.empty()) {
    Rational lead = x.back();
    for (auto& c : x) c /= lead;
  }
  return x;
}

}  // namespace detail

/// Square-free decomposition (Yun): p = c * prod_i factors[i]^(i+1) with
/// pairwise coprime square-free factors. Trailing constant factors are dropped,
/// intermediate ones are kept as the constant polynomial 1.
inline std::vector<IntPolynomial> squarefree_decomposition(const IntPolynomial& p) {
  using detail::RatPoly;
  if (p.is_zero()) throw DegenerateInputError("square-free decomposition of zero polynomial");
  std::vector<IntPolynomial> factors;
  RatPoly f = detail::to_rat(p.primitive());
  if (f.size() <= 1) return factors;
  RatPoly df = detail::derivative(f);
  RatPoly a0 = detail::monic_gcd(f, df);
  RatPoly b = detail::quotient(f, a0);
  RatPoly c = detail::quotient(df, a0);
  auto sub = [](RatPoly x, const RatPoly& y) {
    if (x.size() < y.size()) x.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] -= y[i];
    detail::trim(x);
    return x;
  };
  RatPoly d = sub(c, detail::derivative(b));
  while (b.size() > 1) {
    RatPoly a = detail::monic_gcd(b, d);
    factors.push_back(detail::to_primitive_int(a));
    b = detail::quotient(b, a);
    c = detail::quotient(d, a);
    d = sub(c, detail::derivative(b));
  }
  while (!factors.empty() && factors.back().degree() == 0) factors.pop_back();
  return factors;
}

inline IntPolynomial squarefree_part(const IntPolynomial& p) {
  if (p.is_zero()) throw DegenerateInputError("square-free part of zero polynomial");
  return exact_div(p.primitive(), gcd(p, p.derivative())).primitive();
}

/// det(xI - m), scaled to a primitive integer polynomial with positive
/// leading coefficient. Fraction-free elimination over Z[x]; the k-th leading
/// principal minor of xI - M is monic of degree k, so no pivoting is needed.
inline IntPolynomial char_poly(const RatMatrix& m) {
  if (!m.is_square()) throw DimensionError("char_poly of non-square " + m.shape());
  const std::size_t n = m.rows();
  if (n == 0) return IntPolynomial{1};
  Integer den = 1;
  for (const auto& e : m.entries()) den = lcm(den, denominator(e));
  // q(y) = det(yI - D M) with D M integral; p(x) ~ q(D x).
  std::vector<IntPolynomial> a(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      Integer v = -numerator(m(r, c) * den);
      a[r * n + c] = r == c ? IntPolynomial(std::vector<Integer>{v, Integer(1)})
                            : IntPolynomial(std::vector<Integer>{v});
    }
  auto at = [&](std::size_t r, std::size_t c) -> IntPolynomial& { return a[r * n + c]; };
  IntPolynomial prev{1};
  for (std::size_t k = 0; k + 1 < n; ++k) {
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        at(i, j) = exact_div(at(i, j) * at(k, k) - at(i, k) * at(k, j), prev);
      at(i, k) = IntPolynomial{};
    }
    prev = at(k, k);
  }
  const IntPolynomial& q = at(n - 1, n - 1);
  std::vector<Integer> out(q.coefficients().size());
  Integer dpow = 1;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = q.coeff(i) * dpow;
    dpow *= den;
  }
  return IntPolynomial(std::move(out)).primitive();
}

}  // namespace cohodyn
