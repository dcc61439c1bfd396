#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cohodyn/linear.hpp"
#include "cohodyn/matrix.hpp"

namespace cohodyn {

/// A compact manifold seen through its (p,p) cohomology: one named basis per
/// degree p = 0..dim and the intersection pairing
///     P_p : H^{p,p} x H^{k-p,k-p} -> Q
/// stored as a |basis_p| x |basis_{k-p}| matrix.
struct CohomologyModel {
  std::string name;
  int dim = 0;
  std::vector<std::vector<std::string>> bases;
  std::vector<RatMatrix> pairings;
  /// Coefficients of the reference positive class in H^{1,1}.
  RatVector kahler_class;
  /// kahler_powers[j] = coefficients of kahler_class^j in H^{j,j}, when known.
  std::vector<std::optional<RatVector>> kahler_powers;
  std::string kahler_note;

  std::size_t rank(int p) const { return bases.at(static_cast<std::size_t>(p)).size(); }

  const RatMatrix& pairing(int p) const {
    check_degree(p);
    return pairings[static_cast<std::size_t>(p)];
  }

  void check_degree(int p) const {
    if (p < 0 || p > dim)
      throw DegreeError("degree " + std::to_string(p) + " outside 0.." + std::to_string(dim) +
                        " on " + name);
  }

  std::optional<std::size_t> index_of(int p, const std::string& generator) const {
    check_degree(p);
    const auto& b = bases[static_cast<std::size_t>(p)];
    for (std::size_t i = 0; i < b.size(); ++i)
      if (b[i] == generator) return i;
    return std::nullopt;
  }

  /// Degree in which a generator name lives (first match).
  std::optional<int> degree_of(const std::string& generator) const {
    for (int p = 0; p <= dim; ++p)
      if (index_of(p, generator)) return p;
    return std::nullopt;
  }

  void validate() const {
    if (dim < 1) throw ModelError(name + ": dimension must be positive");
    const auto k = static_cast<std::size_t>(dim);
    if (bases.size() != k + 1 || pairings.size() != k + 1)
      throw ModelError(name + ": expected " + std::to_string(k + 1) + " graded pieces");
    for (std::size_t p = 0; p <= k; ++p) {
      std::set<std::string> seen;
      for (const auto& g : bases[p])
        if (!seen.insert(g).second)
          throw NamingError(name + ": repeated generator '" + g + "' in degree " + std::to_string(p));
      const auto& P = pairings[p];
      if (P.rows() != bases[p].size() || P.cols() != bases[k - p].size())
        throw ModelError(name + ": pairing in degree " + std::to_string(p) + " has shape " +
                         P.shape());
      if (!(pairings[k - p] == P.transpose()))
        throw ModelError(name + ": pairing in degree " + std::to_string(k - p) +
                         " is not the transpose of degree " + std::to_string(p));
    }
    if (bases[0].size() != 1 || bases[k].size() != 1 || pairings[0](0, 0) != 1)
      throw ModelError(name + ": H^{0,0} and top degree must be one-dimensional with pairing 1");
    if (kahler_class.size() != bases[1].size())
      throw ModelError(name + ": kahler class has wrong length");
    if (!kahler_powers.empty()) {
      if (kahler_powers.size() != k + 1) throw ModelError(name + ": kahler power table size");
      for (std::size_t j = 0; j <= k; ++j)
        if (kahler_powers[j] && kahler_powers[j]->size() != bases[j].size())
          throw ModelError(name + ": kahler power " + std::to_string(j) + " has wrong length");
      if (kahler_powers[k] && (*kahler_powers[k])[0] <= 0)
        throw ModelError(name + ": kahler class has non-positive top self-intersection");
    }
  }

  friend bool operator==(const CohomologyModel& a, const CohomologyModel& b) {
    return a.name == b.name && a.dim == b.dim && a.bases == b.bases && a.pairings == b.pairings &&
           a.kahler_class == b.kahler_class && a.kahler_powers == b.kahler_powers;
  }
};

using ModelPtr = std::shared_ptr<const CohomologyModel>;

inline bool same_manifold(const ModelPtr& a, const ModelPtr& b) {
  return a == b || (a && b && a->name == b->name && a->bases == b->bases &&
                    a->pairings == b->pairings);
}

/// Exact class in H^{p,p} of a model.
struct CohomologyClass {
  ModelPtr manifold;
  int p = 0;
  RatVector coeffs;

  static CohomologyClass zero(ModelPtr m, int p) {
    m->check_degree(p);
    return {m, p, RatVector(m->rank(p))};
  }
  static CohomologyClass basis(ModelPtr m, int p, std::size_t i) {
    auto c = zero(std::move(m), p);
    c.coeffs.at(i) = 1;
    return c;
  }
  static CohomologyClass from(ModelPtr m, int p, RatVector coeffs) {
    m->check_degree(p);
    if (coeffs.size() != m->rank(p))
      throw DimensionError("class on " + m->name + " degree " + std::to_string(p) + " needs " +
                           std::to_string(m->rank(p)) + " coefficients");
    return {std::move(m), p, std::move(coeffs)};
  }

  bool is_zero() const {
    for (const auto& x : coeffs)
      if (x != 0) return false;
    return true;
  }

  friend bool operator==(const CohomologyClass& a, const CohomologyClass& b) {
    return a.p == b.p && same_manifold(a.manifold, b.manifold) && a.coeffs == b.coeffs;
  }

  friend CohomologyClass operator+(const CohomologyClass& a, const CohomologyClass& b) {
    require_compatible(a, b);
    CohomologyClass out = a;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += b.coeffs[i];
    return out;
  }
  friend CohomologyClass operator-(const CohomologyClass& a, const CohomologyClass& b) {
    require_compatible(a, b);
    CohomologyClass out = a;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] -= b.coeffs[i];
    return out;
  }
  friend CohomologyClass operator*(const Rational& s, const CohomologyClass& a) {
    CohomologyClass out = a;
    for (auto& x : out.coeffs) x *= s;
    return out;
  }
  CohomologyClass operator-() const { return Rational(-1) * *this; }

  static void require_compatible(const CohomologyClass& a, const CohomologyClass& b) {
    if (!same_manifold(a.manifold, b.manifold))
      throw ModelError("classes live on different manifolds");
    if (a.p != b.p)
      throw DegreeError("classes have different degrees " + std::to_string(a.p) + " and " +
                        std::to_string(b.p));
  }
};

/// Class of the integration current of a subvariety; `effective` is declared.
struct VarietyClass {
  std::string name;
  int codim = 1;
  CohomologyClass cls;
  bool effective = true;
};

/// Intersection number of y in H^{p,p} with x in H^{k-p,k-p}.
inline Rational pair(const CohomologyClass& y, const CohomologyClass& x) {
  if (!same_manifold(y.manifold, x.manifold))
    throw ModelError("pair: classes live on different manifolds");
  const int k = y.manifold->dim;
  if (y.p + x.p != k)
    throw DegreeError("pair: degrees " + std::to_string(y.p) + " and " + std::to_string(x.p) +
                      " are not complementary in dimension " + std::to_string(k));
  return dot(y.coeffs, y.manifold->pairing(y.p) * x.coeffs);
}

inline std::string generator_name_h(int p) {
  if (p == 0) return "1";
  if (p == 1) return "H";
  return "H" + std::to_string(p);
}

namespace detail {

inline std::string exceptional_name(int i, int p, int k) {
  if (p == 1) return "E" + std::to_string(i);
  if (p == k - 1) return "L" + std::to_string(i);
  return "E" + std::to_string(i) + "_" + std::to_string(p);
}

}  // namespace detail

/// Blowup of P^k at m distinct points.
///
/// Degree p (0 < p < k) has basis h^p and, per point i, the class e_i^(p) of
/// a codimension-(p-1) linear subspace of the exceptional divisor E_i ~ P^{k-1}
/// (e^(1) = E_i, e^(k-1) = L_i a line in E_i). The only nonzero pairings are
///     h^p . h^{k-p} = 1,   e_i^(p) . e_i^(k-p) = -1.
/// `kahler` optionally gives (a, b_0..b_{m-1}) for the class aH - sum b_i E_i;
/// the default is H, which is nef but not Kahler once m > 0.
inline CohomologyModel blowup_points(int k, int m, std::optional<RatVector> kahler = std::nullopt,
                                     std::string name = {}) {
  if (k < 2) throw DimensionError("blowup_points: dimension must be at least 2");
  if (m < 0) throw DimensionError("blowup_points: negative number of points");
  CohomologyModel model;
  model.name = name.empty() ? "Bl" + std::to_string(k) + "_" + std::to_string(m) : std::move(name);
  model.dim = k;
  const auto uk = static_cast<std::size_t>(k);
  model.bases.resize(uk + 1);
  for (int p = 0; p <= k; ++p) {
    auto& b = model.bases[static_cast<std::size_t>(p)];
    b.push_back(generator_name_h(p));
    if (p > 0 && p < k)
      for (int i = 0; i < m; ++i) b.push_back(detail::exceptional_name(i, p, k));
  }
  for (int p = 0; p <= k; ++p) {
    const auto up = static_cast<std::size_t>(p);
    RatMatrix P(model.bases[up].size(), model.bases[uk - up].size());
    P(0, 0) = 1;
    if (p > 0 && p < k)
      for (std::size_t i = 1; i < P.rows(); ++i) P(i, i) = -1;
    model.pairings.push_back(std::move(P));
  }

  RatVector weights(static_cast<std::size_t>(m) + 1);
  weights[0] = 1;
  if (kahler) {
    if (kahler->size() != weights.size())
      throw DimensionError("blowup_points: kahler class needs " + std::to_string(weights.size()) +
                           " coefficients (a, b_0..b_{m-1})");
    weights = *kahler;
    model.kahler_note = "user-supplied class aH - sum b_i E_i";
  } else {
    model.kahler_note = "H is nef but not Kahler; obstruction pairings remain sound";
  }
  model.kahler_class = RatVector(model.bases[1].size());
  model.kahler_class[0] = weights[0];
  for (int i = 0; i < m && k > 1; ++i)
    model.kahler_class[static_cast<std::size_t>(i) + 1] = -weights[static_cast<std::size_t>(i) + 1];
  // (aH - sum b_i E_i)^j = a^j h^j - sum b_i^j e_i^(j) for 0 < j < k, and
  // (a^k - sum b_i^k) times the point class at j = k.
  model.kahler_powers.resize(uk + 1);
  for (int j = 0; j <= k; ++j) {
    RatVector c(model.bases[static_cast<std::size_t>(j)].size());
    c[0] = pow(weights[0], static_cast<unsigned>(j));
    for (int i = 0; i < m && j > 0; ++i) {
      Rational bj = pow(weights[static_cast<std::size_t>(i) + 1], static_cast<unsigned>(j));
      if (j < k) c[static_cast<std::size_t>(i) + 1] = -bj;
      else c[0] -= bj;
    }
    model.kahler_powers[static_cast<std::size_t>(j)] = std::move(c);
  }
  model.validate();
  return model;
}

/// Projective space P^k (k >= 1), generators 1, H, H2, ..., Hk.
inline CohomologyModel projective_space(int k) {
  if (k < 1) throw DimensionError("projective_space: dimension must be positive");
  if (k >= 2) return blowup_points(k, 0, std::nullopt, "P" + std::to_string(k));
  CohomologyModel model;
  model.name = "P1";
  model.dim = 1;
  model.bases = {{"1"}, {"H"}};
  model.pairings = {RatMatrix{{1}}, RatMatrix{{1}}};
  model.kahler_class = {1};
  model.kahler_powers = {RatVector{1}, RatVector{1}};
  model.validate();
  return model;
}

namespace detail {

/// Product basis in degree p: blocks by descending first-factor degree p1,
/// generators (a_i, b_j) with the first factor's index varying slowest.
struct KunnethBlock {
  int p1 = 0;
  int p2 = 0;
  std::size_t offset = 0;
  std::size_t size = 0;
};

inline std::vector<KunnethBlock> kunneth_blocks(const CohomologyModel& a, const CohomologyModel& b,
                                                int p) {
  std::vector<KunnethBlock> blocks;
  std::size_t offset = 0;
  for (int p1 = std::min(a.dim, p); p1 >= std::max(0, p - b.dim); --p1) {
    int p2 = p - p1;
    std::size_t size = a.rank(p1) * b.rank(p2);
    blocks.push_back({p1, p2, offset, size});
    offset += size;
  }
  return blocks;
}

inline Integer binomial(unsigned n, unsigned r) {
  Integer out = 1;
  for (unsigned i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

}  // namespace detail

/// Kunneth product: H^{p,p}(A x B) = sum_{p1+p2=p} H^{p1,p1}(A) (x) H^{p2,p2}(B).
inline CohomologyModel product_model(const CohomologyModel& a, const CohomologyModel& b,
                                     std::string name = {}) {
  a.validate();
  b.validate();
  CohomologyModel model;
  model.name = name.empty() ? a.name + "x" + b.name : std::move(name);
  model.dim = a.dim + b.dim;
  const int k = model.dim;
  for (int p = 0; p <= k; ++p) {
    std::vector<std::string> basis;
    for (const auto& blk : detail::kunneth_blocks(a, b, p))
      for (const auto& ga : a.bases[static_cast<std::size_t>(blk.p1)])
        for (const auto& gb : b.bases[static_cast<std::size_t>(blk.p2)]) basis.push_back(ga + "|" + gb);
    model.bases.push_back(std::move(basis));
  }
  for (int p = 0; p <= k; ++p) {
    RatMatrix P(model.bases[static_cast<std::size_t>(p)].size(),
                model.bases[static_cast<std::size_t>(k - p)].size());
    auto rows = detail::kunneth_blocks(a, b, p);
    auto cols = detail::kunneth_blocks(a, b, k - p);
    for (const auto& r : rows)
      for (const auto& c : cols) {
        if (r.p1 + c.p1 != a.dim) continue;
        RatMatrix block = kronecker(a.pairing(r.p1), b.pairing(r.p2));
        for (std::size_t i = 0; i < block.rows(); ++i)
          for (std::size_t j = 0; j < block.cols(); ++j) P(r.offset + i, c.offset + j) = block(i, j);
      }
    model.pairings.push_back(std::move(P));
  }

  // omega = omega_a (x) 1 + 1 (x) omega_b and its binomial powers.
  auto embed = [&](int p, int p1, const RatVector& ca, const RatVector& cb, RatVector& out,
                   const Rational& scale) {
    for (const auto& blk : detail::kunneth_blocks(a, b, p)) {
      if (blk.p1 != p1) continue;
      for (std::size_t i = 0; i < ca.size(); ++i)
        for (std::size_t j = 0; j < cb.size(); ++j)
          out[blk.offset + i * cb.size() + j] += scale * ca[i] * cb[j];
    }
  };
  model.kahler_class = RatVector(model.bases[1].size());
  embed(1, 1, a.kahler_class, RatVector{1}, model.kahler_class, 1);
  embed(1, 0, RatVector{1}, b.kahler_class, model.kahler_class, 1);
  model.kahler_powers.resize(static_cast<std::size_t>(k) + 1);
  bool factors_have_powers = a.kahler_powers.size() == static_cast<std::size_t>(a.dim) + 1 &&
                             b.kahler_powers.size() == static_cast<std::size_t>(b.dim) + 1;
  for (int j = 0; j <= k && factors_have_powers; ++j) {
    RatVector c(model.bases[static_cast<std::size_t>(j)].size());
    bool ok = true;
    for (int i = std::max(0, j - b.dim); i <= std::min(j, a.dim); ++i) {
      const auto& pa = a.kahler_powers[static_cast<std::size_t>(i)];
      const auto& pb = b.kahler_powers[static_cast<std::size_t>(j - i)];
      if (!pa || !pb) {
        ok = false;
        break;
      }
      embed(j, i, *pa, *pb, c,
            Rational(detail::binomial(static_cast<unsigned>(j), static_cast<unsigned>(i))));
    }
    if (ok) model.kahler_powers[static_cast<std::size_t>(j)] = std::move(c);
  }
  model.kahler_note = "sum of the factor reference classes";
  model.validate();
  return model;
}

struct PositivityVerdict {
  bool obstructed = false;
  /// pair(c, kahler^{k-p})
  Rational mass;
};

/// A positive closed current has nonnegative mass against a nef power, so a
/// negative pairing certifies that c is not the class of one.
inline PositivityVerdict positivity_obstruction(const CohomologyClass& c) {
  const auto& m = *c.manifold;
  const int j = m.dim - c.p;
  if (m.kahler_powers.size() <= static_cast<std::size_t>(j) ||
      !m.kahler_powers[static_cast<std::size_t>(j)])
    throw CapabilityError("positivity_obstruction: kahler power " + std::to_string(j) + " on " +
                          m.name + " is not available; supply it in the model's kahler_powers");
  auto power = CohomologyClass::from(c.manifold, j, *m.kahler_powers[static_cast<std::size_t>(j)]);
  Rational mass = pair(c, power);
  return {mass < 0, mass};
}

inline ModelPtr share(CohomologyModel m) { return std::make_shared<const CohomologyModel>(std::move(m)); }

}  // namespace cohodyn
