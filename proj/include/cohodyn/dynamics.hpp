#pragma once

#include <algorithm>
#include <sstream>
#include <optional>
#include <string>
#include <vector>

#include "cohodyn/class_expr.hpp"
#include "cohodyn/map_model.hpp"
#include "cohodyn/monomial.hpp"
#include "cohodyn/roots.hpp"

namespace cohodyn {

/// delta_p enclosure; `determinate` is false when wider than the tolerance.
using DynamicalDegree = DegreeEstimate;

namespace detail {

inline Rational max_abs_entry(const RatMatrix& m) {
  Rational best = 0;
  for (const auto& x : m.entries()) best = std::max(best, abs(x));
  return best;
}

inline Rational top_degree_entry(const MapModel& f) {
  if (auto it = f.pullback.find(f.dim()); it != f.pullback.end()) return abs(it->second(0, 0));
  if (f.monomial) return Rational(topological_degree(*f.monomial));
  if (f.topological_degree) return Rational(*f.topological_degree);
  throw CapabilityError("map " + f.name + ": topological degree unknown; supply the top-degree "
                        "pullback or a monomial lift");
}

/// For P^k sources every H^{1,1} pullback is the scalar degree of the lift.
inline bool monomial_drives_degree_one(const MapModel& f, int p) {
  return p == 1 && f.monomial && f.source->rank(1) == 1 && f.source->dim == f.monomial->k();
}

}  // namespace detail

/// delta_p(f) = lim r_p(f^n)^{1/n}.
///
/// Sources of certainty, in order: p = 0 or p = k (the action is scalar and
/// multiplicative), involutions (f^2 = id, so delta_p = 1), declared
/// p-stability (spectral radius of M_p), a monomial lift at p = 1, and
/// finally supplied iterate matrices (Fekete bound on a submultiplicative
/// norm). M_p^n alone is never used when stability is not declared.
inline DynamicalDegree dynamical_degree(const MapModel& f, int p, std::size_t n_steps,
                                        const Rational& tol = default_root_width(),
                                        std::size_t step_cap = default_step_cap()) {
  f.source->check_degree(p);
  if (!f.is_self_map()) throw CapabilityError("dynamical_degree: " + f.name + " is not a self-map");
  DynamicalDegree out;
  out.exact = true;
  if (p == 0) {
    out.interval = {1, 1};
    out.method = "degree 0";
    return out;
  }
  if (p == f.dim()) {
    Rational t = detail::top_degree_entry(f);
    out.interval = {t, t};
    out.method = "topological degree";
    return out;
  }
  if (f.involution) {
    out.interval = {1, 1};
    out.method = "involution: (f^2)^* = id";
    return out;
  }
  if (f.declared_stable.count(p)) {
    out.interval = spectral_radius(f.matrix(p), tol);
    out.exact = out.interval.exact();
    out.determinate = out.interval.width() <= tol;
    out.method = "spectral radius of M_" + std::to_string(p) + " (declared stable)";
    return out;
  }
  if (detail::monomial_drives_degree_one(f, p)) {
    out = first_dynamical_degree(*f.monomial, std::max<std::size_t>(n_steps, 4), tol, step_cap);
    out.method = "monomial lift: " + out.method;
    return out;
  }
  if (auto it = f.iterate_pullbacks.find(p); it != f.iterate_pullbacks.end() && !it->second.empty()) {
    // a_n = rank * max|entry| is submultiplicative under matrix products; the
    // supplied sequence is checked for a_{n+m} <= a_n a_m before use.
    const auto& seq = it->second;
    const std::size_t n = std::min(seq.size(), n_steps);
    const Rational r(static_cast<long long>(f.source->rank(p)));
    std::vector<Rational> a;
    for (std::size_t i = 0; i < n; ++i) a.push_back(r * detail::max_abs_entry(seq[i]));
    bool submultiplicative = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; i + j + 1 < n; ++j)
        if (a[i + j + 1] > a[i] * a[j]) submultiplicative = false;
    Rational hi = a[0];
    for (std::size_t i = 0; i < n; ++i)
      hi = std::min(hi, nth_root_bounds(a[i], static_cast<unsigned>(i + 1), tol / 2).second);
    out.interval = {1, std::max(Rational(1), hi)};
    out.exact = out.interval.exact();
    out.determinate = submultiplicative && out.interval.width() <= tol;
    out.method = "Fekete bound over " + std::to_string(n) + " supplied iterates";
    if (!submultiplicative) out.method += " (supplied norms are not submultiplicative; bound uncertified)";
    return out;
  }
  throw CapabilityError("dynamical_degree: map " + f.name + " is not declared " + std::to_string(p) +
                        "-stable; supply the iterate pullbacks (f^n)^* in degree " + std::to_string(p) +
                        (p == 1 ? " or a monomial lift" : "") + ", or declare stability");
}

enum class StabilityVerdict { Stable, UnstableAt, Unknown };

inline std::string to_string(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::Stable: return "STABLE";
    case StabilityVerdict::UnstableAt: return "UNSTABLE";
    case StabilityVerdict::Unknown: return "UNKNOWN";
  }
  return "?";
}

struct StabilityReport {
  int p = 0;
  StabilityVerdict verdict = StabilityVerdict::Unknown;
  std::size_t failing_step = 0;
  std::size_t checked_steps = 0;
  /// Which data the verdict rests on.
  std::string source;
  /// For UnstableAt: M_p^n and (f^n)^* at the failing step.
  std::optional<RatMatrix> power;
  std::optional<RatMatrix> iterate;
  std::string witness;
};

/// Compares M_p^n with (f^n)^* for n <= N. (f^n)^* is taken from supplied
/// iterates, from f o f = id, from the monomial degree sequence at p = 1, or
/// from multiplicativity in degrees 0 and k. Without any of these the
/// verdict is Unknown.
inline StabilityReport stability_check(const MapModel& f, int p, std::size_t n_steps,
                                       std::size_t step_cap = default_step_cap()) {
  f.source->check_degree(p);
  StabilityReport r;
  r.p = p;
  const RatMatrix& m = f.matrix(p);
  std::vector<RatMatrix> truth;
  if (auto it = f.iterate_pullbacks.find(p); it != f.iterate_pullbacks.end() && !it->second.empty()) {
    truth.assign(it->second.begin(), it->second.begin() + static_cast<std::ptrdiff_t>(
                                                             std::min(it->second.size(), n_steps)));
    r.source = "supplied iterates";
  } else if (f.involution) {
    for (std::size_t n = 1; n <= n_steps; ++n)
      truth.push_back(n % 2 ? m : RatMatrix::identity(m.rows()));
    r.source = "f o f = id";
  } else if (detail::monomial_drives_degree_one(f, p)) {
    auto seq = degree_sequence(*f.monomial, n_steps, step_cap);
    for (const auto& d : seq.degrees) truth.push_back(RatMatrix{{Rational(d)}});
    r.source = "monomial degree sequence";
  } else if (p == 0 || p == f.dim()) {
    for (std::size_t n = 1; n <= n_steps; ++n) truth.push_back(m.power(static_cast<unsigned>(n)));
    r.source = "scalar action in degree " + std::to_string(p);
  } else {
    r.verdict = StabilityVerdict::Unknown;
    r.source = f.declared_stable.count(p) ? "declared stable by the model (not verifiable without iterates)"
                                          : "no iterate data";
    return r;
  }
  RatMatrix power = m;
  for (std::size_t n = 1; n <= truth.size(); ++n) {
    if (n > 1) power = power * m;
    r.checked_steps = n;
    if (!(power == truth[n - 1])) {
      r.verdict = StabilityVerdict::UnstableAt;
      r.failing_step = n;
      r.power = power;
      r.iterate = truth[n - 1];
      std::ostringstream w;
      w << "(M_" << p << ")^" << n << " = " << inline_text(power) << " but (f^" << n << ")^* = " << inline_text(truth[n - 1]);
      r.witness = w.str();
      return r;
    }
  }
  r.verdict = StabilityVerdict::Stable;
  r.witness = "(M_" + std::to_string(p) + ")^n = (f^n)^* for n <= " + std::to_string(r.checked_steps);
  return r;
}

enum class Tri { Holds, Fails, Indeterminate };

inline std::string to_string(Tri t) {
  switch (t) {
    case Tri::Holds: return "HOLDS";
    case Tri::Fails: return "FAILS";
    case Tri::Indeterminate: return "INDETERMINATE";
  }
  return "?";
}

struct LargeTopDegree {
  Tri verdict = Tri::Indeterminate;
  int k = 0;
  Rational delta_k;
  RationalInterval delta_k_minus_1;
  std::string method;
};

namespace detail {

inline LargeTopDegree decide_large_topdeg(int k, const Rational& dk, const RationalInterval& dkm1,
                                          std::string method) {
  LargeTopDegree out{Tri::Indeterminate, k, dk, dkm1, std::move(method)};
  if (dk > dkm1.hi) out.verdict = Tri::Holds;
  else if (dk <= dkm1.lo) out.verdict = Tri::Fails;
  return out;
}

}  // namespace detail

/// delta_k(f) > delta_{k-1}(f). Every dynamical degree of a dominant map is
/// >= 1, so delta_k <= 1 fails without estimating delta_{k-1}.
inline LargeTopDegree large_topological_degree(const MapModel& f, std::size_t n_steps,
                                               const Rational& tol = default_root_width(),
                                               std::size_t step_cap = default_step_cap()) {
  const int k = f.dim();
  Rational dk = detail::top_degree_entry(f);
  if (dk <= 1) return {Tri::Fails, k, dk, {1, 1}, "delta_k <= 1 <= delta_{k-1}"};
  auto dkm1 = dynamical_degree(f, k - 1, n_steps, tol, step_cap);
  return detail::decide_large_topdeg(k, dk, dkm1.interval, dkm1.method);
}

/// Monomial version: delta_k = |det A|; delta_{k-1} lies in
/// [max(1, delta_k^{(k-1)/k}), delta_1^{k-1}] by log-concavity.
inline LargeTopDegree large_topological_degree(const MonomialLift& f, std::size_t n_steps,
                                               const Rational& tol = default_root_width(),
                                               std::size_t step_cap = default_step_cap()) {
  const int k = f.k();
  Rational dk(topological_degree(f));
  if (dk <= 1) return {Tri::Fails, k, dk, {1, 1}, "delta_k <= 1 <= delta_{k-1}"};
  auto d1 = first_dynamical_degree(f, std::max<std::size_t>(n_steps, 4), tol, step_cap);
  if (k == 2) return detail::decide_large_topdeg(k, dk, d1.interval, "monomial: " + d1.method);
  Rational hi = pow(d1.interval.hi, static_cast<unsigned>(k - 1));
  // delta_k^{(k-1)/k} = (delta_k^{k-1})^{1/k}
  Rational lo = std::max(Rational(1), nth_root_bounds(pow(dk, static_cast<unsigned>(k - 1)),
                                                      static_cast<unsigned>(k), tol).first);
  return detail::decide_large_topdeg(k, dk, {lo, hi}, "log-concavity bounds from delta_1 and delta_k");
}

enum class InvariantMethod { Eigen, Cesaro };

struct InvariantClassResult {
  Rational lambda;
  CohomologyClass theta;
  InvariantMethod method = InvariantMethod::Eigen;
  /// Eigen: a basis of ker(M_p - lambda).
  std::vector<CohomologyClass> kernel;
  /// Cesaro: schedule N_i and ||M theta_{N_i} - lambda theta_{N_i}||_1.
  std::vector<std::size_t> schedule;
  std::vector<Rational> residual_norm_history;
  std::string verdict;
  std::vector<std::string> warnings;
};

/// Exact eigenspace of M_p for a rational eigenvalue. theta is the first
/// kernel vector scaled so its first nonzero coordinate is 1.
inline InvariantClassResult invariant_class_eigen(const MapModel& f, int p, const Rational& lambda) {
  const RatMatrix& m = f.matrix(p);
  if (!m.is_square()) throw DimensionError("invariant_class_eigen: M_" + std::to_string(p) + " is not square");
  IntPolynomial chi = char_poly(m);
  if (chi.eval(lambda) != 0) {
    std::string roots;
    for (const auto& r : isolate_real_roots(chi, Rational(1, 1000))) {
      if (!roots.empty()) roots += ", ";
      roots += RationalInterval{r.lo, r.hi}.to_string();
      if (r.multiplicity > 1) roots += " (x" + std::to_string(r.multiplicity) + ")";
    }
    throw SpectrumError("invariant_class_eigen: " + to_string(lambda) + " is not an eigenvalue of M_" +
                        std::to_string(p) + " of " + f.name + "; char poly " + chi.to_string() +
                        ", real roots in " + (roots.empty() ? "(none)" : roots));
  }
  RatMatrix shifted = m - lambda * RatMatrix::identity(m.rows());
  InvariantClassResult out;
  out.lambda = lambda;
  out.method = InvariantMethod::Eigen;
  for (auto& v : kernel_basis(shifted)) out.kernel.push_back(CohomologyClass::from(f.source, p, std::move(v)));
  RatVector t = out.kernel.front().coeffs;
  for (const auto& x : t)
    if (x != 0) {
      Rational s = x;
      for (auto& y : t) y /= s;
      break;
    }
  out.theta = CohomologyClass::from(f.source, p, std::move(t));
  out.verdict = "EXACT: kernel dimension " + std::to_string(out.kernel.size());
  return out;
}

inline std::size_t default_cesaro_doublings() { return 10; }

/// theta_N = (1/N) sum_{j<N} M_p^j alpha / lambda^j on the schedule
/// N = 1, 2, 4, ..., 2^a, with the L1 residual ||M theta_N - lambda theta_N||.
inline InvariantClassResult invariant_class_cesaro(const MapModel& f, int p, const CohomologyClass& alpha,
                                                   const Rational& lambda,
                                                   std::size_t doublings = default_cesaro_doublings(),
                                                   const Rational& tol = default_root_width(),
                                                   std::size_t step_cap = default_step_cap()) {
  if (lambda == 0) throw DegenerateInputError("invariant_class_cesaro: lambda must be nonzero");
  if (!same_manifold(alpha.manifold, f.source) || alpha.p != p)
    throw ModelError("invariant_class_cesaro: alpha must be a degree-" + std::to_string(p) + " class on " +
                     f.source->name);
  const RatMatrix& m = f.matrix(p);
  if (doublings >= 63 || (std::size_t{1} << doublings) > step_cap)
    throw CapabilityError("invariant_class_cesaro: schedule 2^" + std::to_string(doublings) +
                          " exceeds the configured step limit " + std::to_string(step_cap));
  InvariantClassResult out;
  out.lambda = lambda;
  out.method = InvariantMethod::Cesaro;
  auto rho = spectral_radius(m, tol);
  if (compare(rho, abs(lambda)) != Ordering::Less && compare(rho, abs(lambda)) != Ordering::Equal)
    out.warnings.push_back("|lambda| = " + to_string(abs(lambda)) + " may be below the spectral radius " +
                           rho.to_string() + "; averages need not converge");

  RatVector term = alpha.coeffs;  // M^j alpha / lambda^j
  RatVector sum(term.size());
  std::size_t next = 1;
  RatVector theta;
  for (std::size_t j = 0; j < (std::size_t{1} << doublings); ++j) {
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += term[i];
    if (j + 1 == next) {
      theta = sum;
      Rational inv_n(1, static_cast<long long>(next));
      for (auto& x : theta) x *= inv_n;
      RatVector res = m * theta;
      for (std::size_t i = 0; i < res.size(); ++i) res[i] -= lambda * theta[i];
      out.schedule.push_back(next);
      out.residual_norm_history.push_back(l1_norm(res));
      next *= 2;
    }
    term = m * term;
    for (auto& x : term) x /= lambda;
  }
  out.theta = CohomologyClass::from(f.source, p, std::move(theta));
  const auto& h = out.residual_norm_history;
  if (h.back() == 0) {
    std::size_t first = 0;
    while (h[first] != 0) ++first;
    out.verdict = "CONVERGED: residual exactly 0 from N=" + std::to_string(out.schedule[first]);
  } else if (h.size() >= 2 && h.back() < h[h.size() - 2]) {
    out.verdict = "CONVERGING: residual " + to_string(h.back()) + " at N=" + std::to_string(out.schedule.back());
  } else {
    out.verdict = "NOT CONVERGING: residual " + to_string(h.back()) + " at N=" +
                  std::to_string(out.schedule.back());
  }
  return out;
}

enum class Applicability { Applicable, NotApplicable };

struct SeriesApplicability {
  Applicability verdict = Applicability::NotApplicable;
  RationalInterval delta_p_minus_1;
  std::string reason;
};

/// The potential series R = sum_j (f^j)^* beta / lambda^j needs
/// |lambda| > delta_{p-1}; applicable only when the whole certified interval
/// lies strictly below |lambda|.
inline SeriesApplicability applicability_check_series(const MapModel& f, int p, const Rational& lambda,
                                                      std::size_t n_steps = 16,
                                                      const Rational& tol = default_root_width(),
                                                      std::size_t step_cap = default_step_cap()) {
  if (p < 1) throw DegreeError("applicability_check_series: p must be at least 1");
  SeriesApplicability out;
  if (lambda == 0) {
    out.reason = "lambda = 0";
    return out;
  }
  auto d = dynamical_degree(f, p - 1, n_steps, tol, step_cap);
  out.delta_p_minus_1 = d.interval;
  const std::string cmp = "|lambda| = " + to_string(abs(lambda)) + ", delta_" + std::to_string(p - 1) +
                          " in " + d.interval.to_string();
  if (abs(lambda) > d.interval.hi) {
    out.verdict = Applicability::Applicable;
    out.reason = cmp + " (strictly greater)";
  } else if (abs(lambda) <= d.interval.lo) {
    out.reason = cmp + " (not strictly greater)";
  } else {
    out.reason = cmp + " (interval straddles |lambda|; indeterminate)";
  }
  return out;
}

}  // namespace cohodyn
