#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cohodyn/class_expr.hpp"
#include "cohodyn/map_model.hpp"

namespace cohodyn {

struct SiuAtom {
  Rational weight;
  VarietyClass variety;
  /// The weight turned negative under pullback.
  bool lost_positivity = false;
};

/// Finite Siu ledger T = R + sum_j lambda_j [V_j] in H^{p,p}. The total class
/// is cached and recomputed after every mutation.
class SiuLedger {
 public:
  SiuLedger(ModelPtr manifold, int p) : residual_(CohomologyClass::zero(manifold, p)), total_(residual_) {}
  SiuLedger(CohomologyClass residual, std::vector<SiuAtom> atoms, std::optional<Rational> tail_mass = {})
      : residual_(std::move(residual)), atoms_(std::move(atoms)), tail_mass_(std::move(tail_mass)),
        total_(residual_) {
    revalidate();
  }

  const ModelPtr& manifold() const { return residual_.manifold; }
  int p() const { return residual_.p; }
  const CohomologyClass& residual() const { return residual_; }
  const std::vector<SiuAtom>& atoms() const { return atoms_; }
  const std::optional<Rational>& tail_mass() const { return tail_mass_; }
  const CohomologyClass& total() const { return total_; }

  void set_residual(CohomologyClass r) {
    residual_ = std::move(r);
    revalidate();
  }
  void set_tail_mass(std::optional<Rational> m) { tail_mass_ = std::move(m); }

  /// Adds weight to the atom on the variety, appending it when new. Atoms of
  /// zero weight are removed.
  void add_atom(const Rational& weight, const VarietyClass& v, bool lost_positivity = false) {
    auto it = std::find_if(atoms_.begin(), atoms_.end(), [&](const SiuAtom& a) { return a.variety.name == v.name; });
    if (it == atoms_.end()) {
      atoms_.push_back({weight, v, lost_positivity});
    } else {
      it->weight += weight;
      it->lost_positivity = it->lost_positivity || lost_positivity;
    }
    revalidate();
  }

  /// Weight of the atom on a named variety (0 when absent).
  Rational weight_of(const std::string& name) const {
    for (const auto& a : atoms_)
      if (a.variety.name == name) return a.weight;
    return 0;
  }

  bool has_lost_positivity() const {
    return std::any_of(atoms_.begin(), atoms_.end(), [](const SiuAtom& a) { return a.lost_positivity; });
  }

  /// Atomwise comparison: same residual and the same weight on every variety.
  friend bool operator==(const SiuLedger& a, const SiuLedger& b) {
    if (!(a.residual_ == b.residual_)) return false;
    for (const auto& x : a.atoms_)
      if (x.weight != b.weight_of(x.variety.name)) return false;
    for (const auto& x : b.atoms_)
      if (x.weight != a.weight_of(x.variety.name)) return false;
    return true;
  }

  friend SiuLedger operator+(const SiuLedger& a, const SiuLedger& b) {
    SiuLedger out = a;
    out.residual_ = a.residual_ + b.residual_;
    for (const auto& x : b.atoms_) out.add_atom(x.weight, x.variety, x.lost_positivity);
    out.revalidate();
    if (a.tail_mass_ || b.tail_mass_)
      out.tail_mass_ = a.tail_mass_.value_or(Rational(0)) + b.tail_mass_.value_or(Rational(0));
    return out;
  }

 private:
  void revalidate() {
    std::erase_if(atoms_, [](const SiuAtom& a) { return a.weight == 0; });
    auto t = residual_;
    for (const auto& a : atoms_) {
      if (a.variety.codim != residual_.p || !same_manifold(a.variety.cls.manifold, residual_.manifold))
        throw ModelError("siu ledger: atom " + a.variety.name + " is not a codimension-" +
                         std::to_string(residual_.p) + " variety of " + residual_.manifold->name);
      t = t + a.weight * a.variety.cls;
    }
    total_ = std::move(t);
  }

  CohomologyClass residual_;
  std::vector<SiuAtom> atoms_;
  std::optional<Rational> tail_mass_;
  CohomologyClass total_;
};

/// Coefficients mu with f^*[V] = sum_i mu_i [W_i] over the declared preimage
/// components of V. Declared multiplicities are checked against the class
/// identity; otherwise mu is solved and must be unique.
inline RatVector variety_pullback_coefficients(const MapModel& f, const VarietyClass& v) {
  const IncidenceFact* fact = f.incidence_for(v.name);
  if (!fact) throw CapabilityError("siu_pullback: map " + f.name + " declares no incidence fact for " + v.name);
  if (fact->preimage_codim < v.codim)
    throw CapabilityError("siu_pullback: the preimage of " + v.name + " under " + f.name +
                          " has codimension " + std::to_string(fact->preimage_codim) + " < " +
                          std::to_string(v.codim) + "; variety pullback is not defined there");
  const CohomologyClass target = pullback_class(f, v.cls);
  const auto& comps = fact->preimage_components;
  RatMatrix a(target.coeffs.size(), comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const auto& w = f.variety(comps[i]);
    if (w.codim != v.codim)
      throw IncidenceDataError("siu_pullback: component " + w.name + " of the preimage of " + v.name +
                               " has codimension " + std::to_string(w.codim));
    for (std::size_t r = 0; r < a.rows(); ++r) a(r, i) = w.cls.coeffs[r];
  }
  if (fact->multiplicities) {
    if (!(a * *fact->multiplicities == target.coeffs))
      throw IncidenceDataError("siu_pullback: declared multiplicities for " + v.name +
                               " do not reproduce f^*[" + v.name + "] = " + format_class(target));
    return *fact->multiplicities;
  }
  auto sol = solve_linear(a, RatMatrix::column(target.coeffs));
  if (sol.status == SolveStatus::Inconsistent)
    throw IncidenceDataError("siu_pullback: f^*[" + v.name + "] = " + format_class(target) +
                             " is not a combination of the declared preimage components");
  if (sol.status == SolveStatus::Underdetermined)
    throw IncidenceDataError("siu_pullback: coefficients for " + v.name + " are underdetermined (" +
                             std::to_string(sol.free_variables) +
                             " free); declare multiplicities in the incidence fact");
  return sol.solution.col(0);
}

/// f^# applied to a ledger: atom (lambda, V) becomes (lambda mu_i, W_i) and
/// the residual is pulled back by M_p. Negative weights are kept and flagged.
inline SiuLedger siu_pullback(const MapModel& f, const SiuLedger& ledger) {
  if (!same_manifold(ledger.manifold(), f.target))
    throw ModelError("siu_pullback: ledger lives on " + ledger.manifold()->name + ", map " + f.name +
                     " targets " + f.target->name);
  SiuLedger out(pullback_class(f, ledger.residual()), {}, ledger.tail_mass());
  for (const auto& atom : ledger.atoms()) {
    RatVector mu = variety_pullback_coefficients(f, atom.variety);
    const auto& comps = f.incidence_for(atom.variety.name)->preimage_components;
    for (std::size_t i = 0; i < comps.size(); ++i)
      if (mu[i] != 0) out.add_atom(atom.weight * mu[i], f.variety(comps[i]));
  }
  std::vector<SiuAtom> flagged = out.atoms();
  for (auto& a : flagged) a.lost_positivity = a.weight < 0;
  out = SiuLedger(out.residual(), std::move(flagged), out.tail_mass());
  if (!(out.total() == pullback_class(f, ledger.total())))
    throw IncidenceDataError("siu_pullback: total class of the pulled-back ledger differs from f^* of the total");
  return out;
}

/// "(w)·Name [LOST-POSITIVITY]" per atom.
inline std::string format_atom(const SiuAtom& a) {
  std::string s = "(" + to_string(a.weight) + ")·" + a.variety.name;
  if (a.lost_positivity) s += " [LOST-POSITIVITY]";
  return s;
}

}  // namespace cohodyn
