#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cohodyn/linear.hpp"
#include "cohodyn/roots.hpp"

namespace cohodyn {

/// Homogeneous lift of a monomial self-map of P^k,
///     [x_0 : ... : x_k] -> [x^{E_0} : ... : x^{E_k}],
/// kept reduced: every row of E sums to the degree and every column has
/// minimum 0, so the coordinates share no monomial factor.
class MonomialLift {
 public:
  MonomialLift() = default;

  int k() const noexcept { return static_cast<int>(size_) - 1; }
  std::size_t size() const noexcept { return size_; }
  const Integer& degree() const noexcept { return degree_; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return e_[i * size_ + j]; }
  const std::vector<Integer>& entries() const noexcept { return e_; }

  std::vector<std::vector<Integer>> rows() const {
    std::vector<std::vector<Integer>> out(size_);
    for (std::size_t i = 0; i < size_; ++i)
      out[i].assign(e_.begin() + static_cast<std::ptrdiff_t>(i * size_),
                    e_.begin() + static_cast<std::ptrdiff_t>((i + 1) * size_));
    return out;
  }

  /// Exponents of x_1..x_k of coordinate i / coordinate 0 in the chart x_0 = 1.
  RatMatrix torus_matrix() const {
    const std::size_t k = size_ - 1;
    RatMatrix a(k, k);
    for (std::size_t i = 1; i <= k; ++i)
      for (std::size_t j = 1; j <= k; ++j) a(i - 1, j - 1) = Rational((*this)(i, j) - (*this)(0, j));
    return a;
  }

  friend bool operator==(const MonomialLift&, const MonomialLift&) = default;

  /// Builds the reduced lift from an exponent matrix whose rows already have
  /// equal sums; subtracts column minima. Returns the removed minima.
  static MonomialLift reduce(std::size_t size, std::vector<Integer> e, std::vector<Integer>* removed) {
    std::vector<Integer> mins(size);
    for (std::size_t j = 0; j < size; ++j) {
      mins[j] = e[j];
      for (std::size_t i = 1; i < size; ++i) mins[j] = std::min(mins[j], e[i * size + j]);
      for (std::size_t i = 0; i < size; ++i) e[i * size + j] -= mins[j];
    }
    MonomialLift out;
    out.size_ = size;
    out.e_ = std::move(e);
    out.degree_ = 0;
    for (std::size_t j = 0; j < size; ++j) out.degree_ += out.e_[j];
    if (removed) *removed = std::move(mins);
    return out;
  }

 private:
  std::size_t size_ = 0;
  std::vector<Integer> e_;
  Integer degree_ = 0;
};

inline Integer topological_degree(const MonomialLift& f) {
  if (f.k() == 0) return 1;
  Rational det = determinant(f.torus_matrix());
  return numerator(abs(det));
}

/// Canonical lift of a Laurent monomial map. Row i holds the (possibly
/// negative) exponents of coordinate i; the minimal homogenising shift is
/// added to every row.
inline MonomialLift lift(const std::vector<std::vector<Integer>>& rows) {
  const std::size_t n = rows.size();
  if (n < 2) throw DimensionError("monomial lift: need k+1 >= 2 rows");
  for (const auto& r : rows)
    if (r.size() != n)
      throw DimensionError("monomial lift: each row needs " + std::to_string(n) + " exponents");
  Integer sum0 = 0;
  for (const auto& x : rows[0]) sum0 += x;
  std::vector<Integer> e;
  for (const auto& r : rows) {
    Integer s = 0;
    for (const auto& x : r) s += x;
    if (s != sum0)
      throw DegenerateInputError("monomial lift: rows have different total degree, map is not "
                                 "homogeneous");
    e.insert(e.end(), r.begin(), r.end());
  }
  MonomialLift f = MonomialLift::reduce(n, std::move(e), nullptr);
  if (f.degree() <= 0 || determinant(f.torus_matrix()) == 0)
    throw DominanceError("monomial map is not dominant (singular torus matrix)");
  return f;
}

inline MonomialLift lift(const std::vector<std::vector<long long>>& rows) {
  std::vector<std::vector<Integer>> big;
  for (const auto& r : rows) big.emplace_back(r.begin(), r.end());
  return lift(big);
}

/// Composition a o b with the common monomial factor removed. `removed`
/// receives the per-coordinate exponents of that factor.
inline MonomialLift compose_reduce(const MonomialLift& a, const MonomialLift& b,
                                   std::vector<Integer>* removed = nullptr) {
  if (a.size() != b.size()) throw DimensionError("compose_reduce: maps on different P^k");
  const std::size_t n = a.size();
  std::vector<Integer> e(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l) {
      if (a(i, l) == 0) continue;
      for (std::size_t j = 0; j < n; ++j) e[i * n + j] += a(i, l) * b(l, j);
    }
  return MonomialLift::reduce(n, std::move(e), removed);
}

inline MonomialLift identity_lift(int k) {
  std::vector<std::vector<long long>> rows(static_cast<std::size_t>(k) + 1,
                                           std::vector<long long>(static_cast<std::size_t>(k) + 1));
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i][i] = 1;
  return lift(rows);
}

inline MonomialLift power_lift(int k, long long d) {
  std::vector<std::vector<long long>> rows(static_cast<std::size_t>(k) + 1,
                                           std::vector<long long>(static_cast<std::size_t>(k) + 1));
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i][i] = d;
  return lift(rows);
}

/// The coordinate-reciprocal map [1/x_0 : ... : 1/x_k].
inline MonomialLift reciprocal_lift(int k) {
  std::vector<std::vector<long long>> rows(static_cast<std::size_t>(k) + 1,
                                           std::vector<long long>(static_cast<std::size_t>(k) + 1));
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i][i] = -1;
  return lift(rows);
}

/// Degrees of f, f^2, ..., f^N (f^{n+1} = f o f^n) and, for each n, the
/// factor removed while forming f^n (zero at n = 1). Conservation:
///     deg f^n = deg f^{n-1} * deg f - sum_j factors[n-1][j].
struct DegreeSequence {
  std::vector<Integer> degrees;
  std::vector<std::vector<Integer>> factors;
  std::vector<MonomialLift> lifts;  // reduced lifts of f^1..f^N

  std::size_t steps() const { return degrees.size(); }
};

inline std::size_t default_step_cap() { return 4096; }

inline DegreeSequence degree_sequence(const MonomialLift& f, std::size_t n_steps,
                                      std::size_t step_cap = default_step_cap()) {
  if (n_steps < 1) throw DegenerateInputError("degree_sequence: need at least one step");
  if (n_steps > step_cap)
    throw CapabilityError("degree_sequence: " + std::to_string(n_steps) +
                          " steps exceed the configured limit " + std::to_string(step_cap));
  DegreeSequence seq;
  seq.lifts.push_back(f);
  seq.degrees.push_back(f.degree());
  seq.factors.emplace_back(f.size(), Integer(0));
  for (std::size_t n = 2; n <= n_steps; ++n) {
    std::vector<Integer> removed;
    seq.lifts.push_back(compose_reduce(f, seq.lifts.back(), &removed));
    seq.degrees.push_back(seq.lifts.back().degree());
    seq.factors.push_back(std::move(removed));
  }
  return seq;
}

/// CSV with columns n, degree, extracted (factor exponents joined by ';').
inline std::string degree_sequence_csv(const DegreeSequence& seq) {
  std::ostringstream os;
  os << "n,degree,extracted\n";
  for (std::size_t i = 0; i < seq.steps(); ++i) {
    os << (i + 1) << ',' << seq.degrees[i] << ',';
    for (std::size_t j = 0; j < seq.factors[i].size(); ++j) os << (j ? ";" : "") << seq.factors[i][j];
    os << '\n';
  }
  return os.str();
}

struct MonomialStability {
  bool stable = true;
  /// Stability certified for all n (zero patterns of the iterates cycle
  /// without any extraction), not only up to the inspected step.
  bool certified = false;
  std::size_t first_unstable = 0;       // n with deg f^n < (deg f)^n, when unstable
  std::vector<Integer> factor;          // factor extracted at that step
  std::size_t steps = 0;
};

namespace detail {

inline std::vector<bool> zero_pattern(const MonomialLift& f) {
  std::vector<bool> z;
  for (const auto& x : f.entries()) z.push_back(x == 0);
  return z;
}

/// Window in which repeats of iterates are searched for.
inline constexpr std::size_t kPeriodWindow = 8;

/// First (n0, period) with lifts[n0 + period] == lifts[n0] (0-based), if any.
inline std::optional<std::pair<std::size_t, std::size_t>> find_lift_period(
    const std::vector<MonomialLift>& lifts) {
  for (std::size_t n = 1; n < lifts.size(); ++n)
    for (std::size_t p = 1; p <= kPeriodWindow && p <= n; ++p)
      if (lifts[n] == lifts[n - p]) return std::make_pair(n - p, p);
  return std::nullopt;
}

/// True when no extraction happened and the zero patterns already cycle.
inline bool stability_certified(const DegreeSequence& seq) {
  for (const auto& fac : seq.factors)
    for (const auto& x : fac)
      if (x != 0) return false;
  for (std::size_t n = 1; n < seq.lifts.size(); ++n)
    for (std::size_t p = 1; p <= kPeriodWindow && p <= n; ++p)
      if (zero_pattern(seq.lifts[n]) == zero_pattern(seq.lifts[n - p])) return true;
  return false;
}

}  // namespace detail

inline MonomialStability is_1_stable(const MonomialLift& f, std::size_t n_steps,
                                     std::size_t step_cap = default_step_cap()) {
  if (n_steps < 2) throw DegenerateInputError("is_1_stable: need at least two steps");
  auto seq = degree_sequence(f, n_steps, step_cap);
  MonomialStability out;
  out.steps = n_steps;
  for (std::size_t n = 1; n < seq.steps(); ++n) {
    bool extracted = false;
    for (const auto& x : seq.factors[n]) extracted = extracted || x != 0;
    if (extracted) {
      out.stable = false;
      out.first_unstable = n + 1;
      out.factor = seq.factors[n];
      return out;
    }
  }
  out.certified = detail::stability_certified(seq);
  return out;
}

/// Enclosure of a dynamical degree together with how it was obtained.
struct DegreeEstimate {
  RationalInterval interval;
  bool exact = false;
  /// False when the enclosure is wider than the requested tolerance.
  bool determinate = true;
  std::string method;
};

/// delta_1 = lim deg(f^n)^{1/n}. Exact when the reduced iterates become
/// periodic (delta_1 = 1) or stability is certified (delta_1 = deg f).
/// Otherwise [1, min_n deg(f^n)^{1/n}]: degrees of dominant maps are >= 1,
/// and submultiplicativity makes every d_n^{1/n} an upper bound.
inline DegreeEstimate first_dynamical_degree(const MonomialLift& f, std::size_t n_steps,
                                             const Rational& tol = default_root_width(),
                                             std::size_t step_cap = default_step_cap()) {
  if (n_steps < 4) throw DegenerateInputError("first_dynamical_degree: need at least four steps");
  auto seq = degree_sequence(f, n_steps, step_cap);
  DegreeEstimate out;
  if (detail::find_lift_period(seq.lifts)) {
    out.interval = {1, 1};
    out.exact = true;
    out.method = "periodic reduced iterates";
    return out;
  }
  if (detail::stability_certified(seq)) {
    Rational d(f.degree());
    out.interval = {d, d};
    out.exact = true;
    out.method = "certified 1-stable";
    return out;
  }
  Rational hi = Rational(seq.degrees[0]);
  for (std::size_t n = 1; n < seq.steps(); ++n) {
    auto b = nth_root_bounds(Rational(seq.degrees[n]), static_cast<unsigned>(n + 1), tol / 2);
    hi = std::min(hi, b.second);
  }
  out.interval = {1, std::max(Rational(1), hi)};
  out.exact = out.interval.exact();
  out.determinate = out.interval.width() <= tol;
  out.method = "Fekete upper bound over " + std::to_string(n_steps) + " steps";
  return out;
}

/// Reads the text form: k+1 lines of k+1 signed integers (Laurent exponents).
inline MonomialLift parse_monomial_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<Integer>> rows;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<Integer> row;
    std::string tok;
    while (ls >> tok) {
      try {
        row.emplace_back(tok);
      } catch (const std::exception&) {
        throw ParseError("monomial map: bad integer '" + tok + "'");
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return lift(rows);
}

inline std::string monomial_text(const MonomialLift& f) {
  std::ostringstream os;
  for (const auto& r : f.rows()) {
    for (std::size_t j = 0; j < r.size(); ++j) os << (j ? " " : "") << r[j];
    os << '\n';
  }
  return os.str();
}

}  // namespace cohodyn
