#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cohodyn/cohomology.hpp"
#include "cohodyn/linear.hpp"
#include "cohodyn/monomial.hpp"

namespace cohodyn {

struct ImageEntry {
  std::string variety;
  bool total_image = true;
};

/// Declared incidence of a variety under the map. These are assertions; only
/// their codimension bookkeeping is validated.
struct IncidenceFact {
  std::string variety;
  std::vector<ImageEntry> image;
  int preimage_codim = 1;
  std::vector<std::string> preimage_components;
  /// Optional declared coefficients of the components in f^*[V]. When absent
  /// they are solved from the class identity.
  std::optional<RatVector> multiplicities;
  std::string provenance;
};

/// A dominant meromorphic map described by its cohomological action.
///
/// pullback[p] is f^* on H^{p,p}: shape |source basis_p| x |target basis_p|,
/// column j holding the image of target generator j in the source basis. With
/// this orientation pullback of a composition is M(g o f) = M(f) M(g).
struct MapModel {
  std::string name;
  ModelPtr source;
  ModelPtr target;
  std::map<int, RatMatrix> pullback;
  /// (f^{-1})^* per degree for birational maps, when declared.
  std::map<int, RatMatrix> inverse_pullback;
  /// User-supplied (f^n)^* for n = 1, 2, ... per degree.
  std::map<int, std::vector<RatMatrix>> iterate_pullbacks;
  std::map<std::string, VarietyClass> varieties;
  std::vector<IncidenceFact> incidence;
  std::optional<MonomialLift> monomial;
  std::set<int> declared_stable;
  /// f o f = id as a map. This does not force (f^*)^2 = id on cohomology.
  bool involution = false;
  /// inverse_pullback is declared to be the exact matrix inverse of pullback.
  bool inverse_exact = false;
  std::optional<Integer> topological_degree;
  /// Free-form caveats carried with derived maps (e.g. compositions).
  std::vector<std::string> notes;

  bool is_self_map() const { return same_manifold(source, target); }
  int dim() const { return source->dim; }

  const RatMatrix& matrix(int p) const {
    auto it = pullback.find(p);
    if (it == pullback.end())
      throw CapabilityError("map " + name + " has no pullback matrix in degree " + std::to_string(p));
    return it->second;
  }

  const VarietyClass& variety(const std::string& v) const {
    auto it = varieties.find(v);
    if (it == varieties.end()) throw LookupError("map " + name + " declares no variety '" + v + "'");
    return it->second;
  }

  const IncidenceFact* incidence_for(const std::string& v) const {
    for (const auto& f : incidence)
      if (f.variety == v) return &f;
    return nullptr;
  }

  void validate() const {
    if (!source || !target) throw ModelError("map " + name + ": missing manifold");
    if (source->dim != target->dim)
      throw ModelError("map " + name + ": source and target dimensions differ");
    for (const auto& [p, m] : pullback) {
      source->check_degree(p);
      if (m.rows() != source->rank(p) || m.cols() != target->rank(p))
        throw DimensionError("map " + name + ": pullback in degree " + std::to_string(p) +
                             " has shape " + m.shape() + ", expected " +
                             std::to_string(source->rank(p)) + "x" + std::to_string(target->rank(p)));
    }
    if (auto it = pullback.find(0); it != pullback.end() && !(it->second == RatMatrix{{1}}))
      throw ModelError("map " + name + ": pullback on H^{0,0} must be (1)");
    if (topological_degree) {
      if (auto it = pullback.find(dim()); it != pullback.end() && it->second(0, 0) != Rational(*topological_degree))
        throw ModelError("map " + name + ": top-degree pullback disagrees with topological degree");
    }
    for (const auto& [p, n] : inverse_pullback) {
      if (n.rows() != target->rank(p) || n.cols() != source->rank(p))
        throw DimensionError("map " + name + ": inverse pullback in degree " + std::to_string(p) +
                             " has shape " + n.shape());
      auto it = pullback.find(p);
      if (inverse_exact && it != pullback.end() &&
          !(n * it->second == RatMatrix::identity(target->rank(p))))
        throw ModelError("map " + name + ": inverse pullback in degree " + std::to_string(p) +
                         " is declared exact but N M is not the identity");
    }
    if (involution && !is_self_map())
      throw ModelError("map " + name + ": an involution must be a self-map");
    for (const auto& [p, seq] : iterate_pullbacks)
      for (const auto& m : seq)
        if (m.rows() != source->rank(p) || m.cols() != source->rank(p))
          throw DimensionError("map " + name + ": iterate pullback in degree " + std::to_string(p) +
                               " has shape " + m.shape());
    for (const auto& [vname, v] : varieties) {
      if (v.name != vname) throw ModelError("map " + name + ": variety key mismatch for " + vname);
      if (v.cls.p != v.codim)
        throw ModelError("variety " + vname + ": class degree differs from codimension");
      if (v.codim < 1 || v.codim > dim()) throw ModelError("variety " + vname + ": bad codimension");
    }
    for (const auto& fact : incidence) {
      const auto& v = variety(fact.variety);
      if (fact.preimage_codim < 1)
        throw ModelError("incidence for " + fact.variety + ": preimage codimension must be >= 1");
      for (const auto& img : fact.image) (void)variety(img.variety);
      for (const auto& c : fact.preimage_components) {
        const auto& w = variety(c);
        if (fact.preimage_codim >= v.codim && w.codim != v.codim)
          throw ModelError("incidence for " + fact.variety + ": component " + c +
                           " has codimension " + std::to_string(w.codim) + ", expected " +
                           std::to_string(v.codim));
      }
      if (fact.multiplicities && fact.multiplicities->size() != fact.preimage_components.size())
        throw ModelError("incidence for " + fact.variety + ": multiplicity count mismatch");
    }
  }
};

inline CohomologyClass pullback_class(const MapModel& f, const CohomologyClass& c) {
  if (!same_manifold(c.manifold, f.target))
    throw ModelError("pullback_class: class lives on " + c.manifold->name + ", map " + f.name +
                     " targets " + f.target->name);
  return CohomologyClass::from(f.source, c.p, f.matrix(c.p) * c.coeffs);
}

/// Solves (M y).x = y.(A x) for M on H^{p,p}, i.e. M^T P_p = P_p A, where A
/// acts on H^{k-p,k-p}: A = M_{k-p} for involutions, A = N_{k-p} otherwise.
inline RatMatrix derive_dual_action(const MapModel& f, int p) {
  const int k = f.dim();
  f.source->check_degree(p);
  const RatMatrix* a = nullptr;
  if (f.involution) {
    a = &f.matrix(k - p);
  } else if (auto it = f.inverse_pullback.find(k - p); it != f.inverse_pullback.end()) {
    a = &it->second;
  } else {
    throw CapabilityError("derive_dual_action: map " + f.name +
                          " is neither a declared involution nor carries an inverse pullback in "
                          "degree " + std::to_string(k - p));
  }
  if (!f.is_self_map())
    throw CapabilityError("derive_dual_action: map " + f.name + " is not a self-map");
  const RatMatrix& P = f.source->pairing(p);
  if (!P.is_square()) throw ModelError("derive_dual_action: pairing in degree " + std::to_string(p) + " is not square");
  auto pinv = inverse(P);
  if (!pinv) throw ModelError("derive_dual_action: pairing in degree " + std::to_string(p) + " is degenerate");
  // M^T = P A P^{-1}
  RatMatrix m = (P * *a * *pinv).transpose();
  if (!(m.transpose() * P == P * *a))
    throw ModelError("derive_dual_action: duality identity failed");
  return m;
}

/// Pushforward as the pairing adjoint of pullback:
///     pair(f_* c, x) = pair(c, f^* x)   for all x in H^{k-p,k-p}(target).
inline CohomologyClass pushforward_class(const MapModel& f, const CohomologyClass& c) {
  if (!same_manifold(c.manifold, f.source))
    throw ModelError("pushforward_class: class does not live on the source of " + f.name);
  const int k = f.dim();
  const int p = c.p;
  const RatMatrix& m = f.matrix(k - p);
  const RatMatrix& ps = f.source->pairing(p);
  const RatMatrix& pt = f.target->pairing(p);
  if (!pt.is_square()) throw ModelError("pushforward_class: target pairing is not square");
  auto pinv = inverse(pt.transpose());
  if (!pinv) throw ModelError("pushforward_class: target pairing in degree " + std::to_string(p) + " is degenerate");
  RatVector z = *pinv * (m.transpose() * (ps.transpose() * c.coeffs));
  return CohomologyClass::from(f.target, p, std::move(z));
}

/// g o f. The pullback product is valid for the actual composite in degree p
/// only when stability is known there; other degrees carry a caveat note.
inline MapModel compose(const MapModel& g, const MapModel& f) {
  if (!same_manifold(f.target, g.source))
    throw ModelError("compose: " + f.name + " does not land on the source of " + g.name);
  MapModel out;
  out.name = g.name + "o" + f.name;
  out.source = f.source;
  out.target = g.target;
  for (const auto& [p, mf] : f.pullback)
    if (auto it = g.pullback.find(p); it != g.pullback.end()) out.pullback[p] = mf * it->second;
  bool same = f.name == g.name && same_manifold(f.source, g.source);
  for (const auto& [p, m] : out.pullback) {
    (void)m;
    bool valid = p == 0 || (same && f.declared_stable.count(p));
    if (valid) out.declared_stable.insert(p);
    else out.notes.push_back("degree " + std::to_string(p) +
                             ": product of pullbacks, equals the composite's pullback only under "
                             "algebraic stability");
  }
  if (f.topological_degree && g.topological_degree)
    out.topological_degree = *f.topological_degree * *g.topological_degree;
  if (f.monomial && g.monomial) out.monomial = compose_reduce(*g.monomial, *f.monomial);
  return out;
}

/// f x g on the Kunneth product. Requires full pullback tables on both factors.
inline MapModel product_map(const MapModel& f, const MapModel& g) {
  for (const MapModel* h : {&f, &g})
    for (int p = 0; p <= h->dim(); ++p)
      if (!h->pullback.count(p))
        throw CapabilityError("product_map: factor " + h->name + " lacks a pullback in degree " +
                              std::to_string(p));
  MapModel out;
  out.name = f.name + "x" + g.name;
  out.source = share(product_model(*f.source, *g.source));
  out.target = f.is_self_map() && g.is_self_map() ? out.source
                                                   : share(product_model(*f.target, *g.target));
  const int k = f.dim() + g.dim();
  for (int p = 0; p <= k; ++p) {
    auto src_blocks = detail::kunneth_blocks(*f.source, *g.source, p);
    auto tgt_blocks = detail::kunneth_blocks(*f.target, *g.target, p);
    RatMatrix m(out.source->rank(p), out.target->rank(p));
    for (std::size_t b = 0; b < src_blocks.size(); ++b) {
      RatMatrix block = kronecker(f.matrix(src_blocks[b].p1), g.matrix(src_blocks[b].p2));
      for (std::size_t i = 0; i < block.rows(); ++i)
        for (std::size_t j = 0; j < block.cols(); ++j)
          m(src_blocks[b].offset + i, tgt_blocks[b].offset + j) = block(i, j);
    }
    out.pullback[p] = std::move(m);
  }
  for (int p = 0; p <= k; ++p) {
    bool stable = true;
    for (const auto& blk : detail::kunneth_blocks(*f.source, *g.source, p))
      stable = stable && f.declared_stable.count(blk.p1) && g.declared_stable.count(blk.p2);
    if (stable) out.declared_stable.insert(p);
  }
  out.involution = f.involution && g.involution;
  if (f.topological_degree && g.topological_degree)
    out.topological_degree = *f.topological_degree * *g.topological_degree;
  return out;
}

}  // namespace cohodyn
