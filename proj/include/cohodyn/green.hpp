#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cohodyn/monomial.hpp"

namespace cohodyn {

using Complex = std::complex<double>;
using Point = std::vector<Complex>;

struct Term {
  Complex coeff;
  std::vector<int> exponents;
};

/// Homogeneous polynomial lift F = (F_0, ..., F_k) of a self-map of P^k.
struct HomogeneousLift {
  int k = 0;
  int degree = 0;
  std::vector<std::vector<Term>> coordinates;
  /// Coprimality of the coordinates has been checked (built-ins) or merely assumed.
  bool verified = false;
  std::string name;

  void validate() const {
    if (k < 1) throw DimensionError("lift: dimension must be positive");
    if (degree < 1) throw DegenerateInputError("lift: degree must be positive");
    if (coordinates.size() != static_cast<std::size_t>(k) + 1)
      throw DimensionError("lift: expected " + std::to_string(k + 1) + " coordinates");
    for (std::size_t i = 0; i < coordinates.size(); ++i) {
      if (coordinates[i].empty())
        throw DegenerateInputError("lift: coordinate " + std::to_string(i) + " is identically zero");
      for (const auto& t : coordinates[i]) {
        if (t.exponents.size() != coordinates.size())
          throw DimensionError("lift: exponent vector length in coordinate " + std::to_string(i));
        int total = 0;
        for (int e : t.exponents) {
          if (e < 0) throw DegenerateInputError("lift: negative exponent");
          total += e;
        }
        if (total != degree)
          throw DegreeError("lift: coordinate " + std::to_string(i) + " is not homogeneous of degree " +
                            std::to_string(degree));
      }
    }
  }

  Point operator()(const Point& z) const {
    Point out(coordinates.size());
    for (std::size_t i = 0; i < coordinates.size(); ++i) {
      Complex s = 0;
      for (const auto& t : coordinates[i]) {
        Complex m = t.coeff;
        for (std::size_t j = 0; j < z.size(); ++j)
          if (t.exponents[j]) m *= std::pow(z[j], t.exponents[j]);
        s += m;
      }
      out[i] = s;
    }
    return out;
  }

  /// Upper bound of log ||F(w)|| over the unit max-norm polydisc.
  double log_sup_bound() const {
    double best = 0;
    for (const auto& c : coordinates) {
      double s = 0;
      for (const auto& t : c) s += std::abs(t.coeff);
      best = std::max(best, s);
    }
    return std::log(best);
  }
};

inline double max_norm(const Point& z) {
  double m = 0;
  for (const auto& c : z) m = std::max(m, std::abs(c));
  return m;
}

/// Lift of a monomial map with unit coefficients.
inline HomogeneousLift to_homogeneous(const MonomialLift& f, std::string name = {}) {
  HomogeneousLift h;
  h.k = f.k();
  h.degree = f.degree().convert_to<int>();
  h.name = std::move(name);
  h.verified = true;  // reduced monomial lifts share no common factor
  for (const auto& row : f.rows()) {
    Term t{1.0, {}};
    for (const auto& e : row) t.exponents.push_back(e.convert_to<int>());
    h.coordinates.push_back({t});
  }
  return h;
}

struct GreenOptions {
  double convergence_tol = 1e-12;
  double underflow_guard = 1e-300;
};

struct GreenEvaluation {
  Point point;
  std::size_t iterations = 0;
  /// partial_sums[n] = log||z|| + sum_{j<n} d^{-(j+1)} log||F(z_j)||, n = 0..N.
  std::vector<double> partial_sums;
  bool converged = false;
  double tail_bound = 0;

  double value() const { return partial_sums.back(); }
};

/// G(z) = lim d^{-n} log ||F^n(z)|| with the max-modulus norm, evaluated along
/// the renormalised orbit z_{j+1} = F(z_j) / ||F(z_j)||.
inline GreenEvaluation green_potential(const HomogeneousLift& f, const Point& z, std::size_t iterations,
                                       const GreenOptions& opt = {}) {
  if (z.size() != static_cast<std::size_t>(f.k) + 1)
    throw DimensionError("green_potential: point needs " + std::to_string(f.k + 1) + " coordinates");
  if (iterations < 1) throw DegenerateInputError("green_potential: need at least one iteration");
  double norm = max_norm(z);
  if (!(norm > 0)) throw DegenerateInputError("green_potential: zero point");

  GreenEvaluation out;
  out.point = z;
  out.iterations = iterations;
  out.partial_sums.push_back(std::log(norm));
  Point w = z;
  for (auto& c : w) c /= norm;
  const double d = f.degree;
  double scale = 1.0 / d;
  double biggest_term = 0;
  for (std::size_t j = 0; j < iterations; ++j) {
    Point fw = f(w);
    double n = max_norm(fw);
    if (!(n > opt.underflow_guard) || !std::isfinite(n))
      throw NumericalError("green_potential: orbit reached the indeterminacy locus at step " +
                           std::to_string(j + 1) + " (||F(z_j)|| = " + std::to_string(n) + ")");
    double term = std::log(n);
    biggest_term = std::max(biggest_term, std::abs(term));
    out.partial_sums.push_back(out.partial_sums.back() + scale * term);
    scale /= d;
    for (std::size_t i = 0; i < fw.size(); ++i) w[i] = fw[i] / n;
  }
  double last_step = std::abs(out.partial_sums.back() - out.partial_sums[out.partial_sums.size() - 2]);
  out.converged = last_step < opt.convergence_tol;
  // Remaining terms are d^{-(j+1)} log||F(z_j)|| for j >= N; bound them by the
  // largest magnitude seen (or the sup bound) times the geometric tail.
  double term_bound = std::max(biggest_term, std::abs(f.log_sup_bound()));
  out.tail_bound = d > 1 ? term_bound * std::pow(d, -static_cast<double>(iterations)) / (d - 1)
                         : std::numeric_limits<double>::infinity();
  return out;
}

/// Weighted sum of coordinate hyperplanes {x_i = 0}.
struct HypersurfaceCurrent {
  int k = 0;
  std::vector<Rational> weights;  // weight of {x_i = 0}
  /// Weights are the exact infinite sums (periodic extraction ledger).
  bool exact = false;
  double tail_bound = 0;
  /// Degree d with f^* T = d T expected.
  Integer map_degree = 1;

  bool is_zero() const {
    for (const auto& w : weights)
      if (w != 0) return false;
    return true;
  }
  static std::string hyperplane_name(std::size_t i) { return "{x" + std::to_string(i) + "=0}"; }
};

/// Hypersurface part of the Green current of a monomial map: the weight of
/// {x_i = 0} is sum_n d^{-n} c_{n,i}, c_n the factor removed while forming
/// f^n. When the reduced iterates cycle, the series is summed in closed form.
inline HypersurfaceCurrent extracted_invariant_current(const MonomialLift& f, std::size_t n_steps,
                                                       std::size_t step_cap = default_step_cap()) {
  if (n_steps < 2) throw DegenerateInputError("extracted_invariant_current: need at least two steps");
  HypersurfaceCurrent out;
  out.k = f.k();
  out.map_degree = f.degree();
  out.weights.assign(f.size(), Rational(0));
  const Rational d(f.degree());
  if (d == 1) {
    out.exact = true;
    return out;
  }
  auto seq = degree_sequence(f, n_steps, step_cap);
  auto period = detail::find_lift_period(seq.lifts);
  auto add_term = [&](std::size_t n, const Rational& scale) {
    // factors[n-1] belongs to f^n
    Rational w = scale / pow(d, static_cast<unsigned>(n));
    for (std::size_t i = 0; i < f.size(); ++i)
      if (seq.factors[n - 1][i] != 0) out.weights[i] += w * Rational(seq.factors[n - 1][i]);
  };
  if (period) {
    // lifts are 0-based: lift[n0] is f^{n0+1}. Factors of f^{n+1} depend only
    // on f^n, so they repeat with the lifts: c_{n+P} = c_n for n >= n0 + 1.
    const std::size_t n0 = period->first + 1;  // f^{n0} == f^{n0+P}
    const std::size_t P = period->second;
    for (std::size_t n = 1; n <= n0; ++n) add_term(n, 1);
    Rational geometric = 1 / (1 - 1 / pow(d, static_cast<unsigned>(P)));
    for (std::size_t n = n0 + 1; n <= n0 + P; ++n) add_term(n, geometric);
    out.exact = true;
    return out;
  }
  Integer cmax = 0;
  for (std::size_t n = 1; n <= seq.steps(); ++n) {
    add_term(n, 1);
    for (const auto& c : seq.factors[n - 1]) cmax = std::max(cmax, c);
  }
  double dd = to_double(d);
  out.tail_bound = static_cast<double>(f.size()) * cmax.convert_to<double>() *
                   std::pow(dd, -static_cast<double>(n_steps)) / (1 - 1 / dd);
  return out;
}

/// Weights of f^* T for T = sum_i w_i {x_i = 0}: f^*{x_j = 0} = sum_l E[j][l] {x_l = 0}.
inline std::vector<Rational> pull_back_hyperplane_weights(const MonomialLift& f,
                                                          const std::vector<Rational>& weights) {
  std::vector<Rational> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (weights[j] == 0) continue;
    for (std::size_t l = 0; l < f.size(); ++l)
      if (f(j, l) != 0) out[l] += weights[j] * Rational(f(j, l));
  }
  return out;
}

struct ProductAtom {
  std::size_t first = 0;   // hyperplane index in the first factor
  std::size_t second = 0;  // hyperplane index in the second factor
  Rational weight;
  std::string name() const {
    return HypersurfaceCurrent::hyperplane_name(first) + "x" + HypersurfaceCurrent::hyperplane_name(second);
  }
};

struct ProductCurrent {
  bool pass = false;
  Integer scale_factor = 0;  // d1 * d2
  std::vector<ProductAtom> atoms;
  /// Atom whose pullback weight failed the eigen-equation, if any.
  std::optional<std::string> failing_atom;
};

/// T = T_1 x T_2 on P^{k1} x P^{k2}, atoms {x_i=0} x {y_j=0} of codimension 2.
/// Checks (f_1 x f_2)^* T = d_1 d_2 T atom by atom.
inline ProductCurrent product_invariant_current(const HypersurfaceCurrent& t1, const HypersurfaceCurrent& t2,
                                                const MonomialLift& f1, const MonomialLift& f2) {
  if (t1.weights.size() != f1.size() || t2.weights.size() != f2.size())
    throw DimensionError("product_invariant_current: current and map dimensions differ");
  const std::pair<const HypersurfaceCurrent*, const MonomialLift*> factors[] = {{&t1, &f1}, {&t2, &f2}};
  for (const auto& [t, f] : factors) {
    auto pulled = pull_back_hyperplane_weights(*f, t->weights);
    for (std::size_t i = 0; i < pulled.size(); ++i)
      if (pulled[i] != Rational(f->degree()) * t->weights[i])
        throw PreconditionError("product_invariant_current: factor current is not invariant at " +
                                HypersurfaceCurrent::hyperplane_name(i) + " (pullback weight " +
                                to_string(pulled[i]) + ", expected " +
                                to_string(Rational(f->degree()) * t->weights[i]) + ")");
  }
  ProductCurrent out;
  out.scale_factor = f1.degree() * f2.degree();
  for (std::size_t i = 0; i < f1.size(); ++i)
    for (std::size_t j = 0; j < f2.size(); ++j)
      if (t1.weights[i] != 0 && t2.weights[j] != 0)
        out.atoms.push_back({i, j, t1.weights[i] * t2.weights[j]});
  // (f1 x f2)^*[V_a x W_b] = sum_{l,m} E1[a][l] E2[b][m] [V_l x W_m]
  std::vector<Rational> pulled(f1.size() * f2.size());
  for (const auto& atom : out.atoms)
    for (std::size_t l = 0; l < f1.size(); ++l)
      for (std::size_t m = 0; m < f2.size(); ++m)
        if (f1(atom.first, l) != 0 && f2(atom.second, m) != 0)
          pulled[l * f2.size() + m] += atom.weight * Rational(f1(atom.first, l) * f2(atom.second, m));
  const Rational factor(out.scale_factor);
  out.pass = true;
  for (std::size_t l = 0; l < f1.size(); ++l)
    for (std::size_t m = 0; m < f2.size(); ++m) {
      Rational expected = factor * t1.weights[l] * t2.weights[m];
      if (pulled[l * f2.size() + m] != expected) {
        out.pass = false;
        out.failing_atom = HypersurfaceCurrent::hyperplane_name(l) + "x" + HypersurfaceCurrent::hyperplane_name(m);
        return out;
      }
    }
  return out;
}

}  // namespace cohodyn
