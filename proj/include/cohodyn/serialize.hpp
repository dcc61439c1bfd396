#pragma once

#include <functional>
#include <string>

#include <json.hpp>

#include "cohodyn/builtins.hpp"
#include "cohodyn/green.hpp"
#include "cohodyn/siu.hpp"

namespace cohodyn {

using Json = nlohmann::ordered_json;

// Canonical JSON forms. Rationals are strings "n" or "n/d"; matrices are
// arrays of rows. Writing then reading reproduces every object exactly.

namespace detail {

template <class F>
auto parse_guard(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

}  // namespace detail

inline Json rational_json(const Rational& q) { return to_string(q); }

inline Rational rational_from(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw ParseError("expected a rational as a string \"n/d\" or an integer, got " + j.dump());
}

inline Json vector_json(const RatVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(rational_json(x));
  return out;
}

inline RatVector vector_from(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an array of rationals, got " + j.dump());
  RatVector v;
  for (const auto& x : j) v.push_back(rational_from(x));
  return v;
}

inline Json matrix_json(const RatMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i)));
  return out;
}

/// Rows of a matrix. An empty row list needs the column count from context.
inline RatMatrix matrix_from(const Json& j, std::size_t cols_if_empty = 0) {
  if (!j.is_array()) throw ParseError("expected a matrix (array of rows), got " + j.dump());
  if (j.empty()) return RatMatrix(0, cols_if_empty);
  std::vector<RatVector> rows;
  for (const auto& r : j) rows.push_back(vector_from(r));
  RatMatrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw DimensionError("matrix rows have different lengths");
    for (std::size_t c = 0; c < m.cols(); ++c) m(i, c) = rows[i][c];
  }
  return m;
}

// ---------------------------------------------------------------- models

inline Json model_json(const CohomologyModel& m) {
  Json j;
  j["name"] = m.name;
  j["dim"] = m.dim;
  j["bases"] = m.bases;
  Json pairings = Json::array();
  for (const auto& p : m.pairings) pairings.push_back(matrix_json(p));
  j["pairings"] = pairings;
  j["kahler_class"] = vector_json(m.kahler_class);
  Json powers = Json::array();
  for (const auto& p : m.kahler_powers) powers.push_back(p ? vector_json(*p) : Json(nullptr));
  j["kahler_powers"] = powers;
  j["kahler_note"] = m.kahler_note;
  return j;
}

/// Full form as written by model_json, or a constructor form
/// {"blowup": {"dim": k, "points": m, "kahler": [...]}, "name": ...} /
/// {"projective": k}.
inline CohomologyModel model_from(const Json& j) {
  return detail::parse_guard("manifold definition", [&] {
    if (j.contains("blowup")) {
      const auto& b = j.at("blowup");
      std::optional<RatVector> kahler;
      if (b.contains("kahler")) kahler = vector_from(b.at("kahler"));
      return blowup_points(b.at("dim").get<int>(), b.at("points").get<int>(), kahler,
                           j.value("name", std::string{}));
    }
    if (j.contains("projective")) {
      auto m = projective_space(j.at("projective").get<int>());
      if (j.contains("name")) m.name = j.at("name").get<std::string>();
      return m;
    }
    CohomologyModel m;
    m.name = j.at("name").get<std::string>();
    m.dim = j.at("dim").get<int>();
    m.bases = j.at("bases").get<std::vector<std::vector<std::string>>>();
    const auto& pj = j.at("pairings");
    if (m.bases.size() != static_cast<std::size_t>(m.dim) + 1 || pj.size() != m.bases.size())
      throw ModelError(m.name + ": expected " + std::to_string(m.dim + 1) + " bases and pairings");
    for (std::size_t p = 0; p < pj.size(); ++p)
      m.pairings.push_back(matrix_from(pj[p], m.bases[m.bases.size() - 1 - p].size()));
    m.kahler_class = vector_from(j.at("kahler_class"));
    if (j.contains("kahler_powers"))
      for (const auto& p : j.at("kahler_powers"))
        m.kahler_powers.push_back(p.is_null() ? std::nullopt : std::optional<RatVector>(vector_from(p)));
    m.kahler_note = j.value("kahler_note", std::string{});
    m.validate();
    return m;
  });
}

// ---------------------------------------------------------------- maps

inline Json lift_rows_json(const MonomialLift& f) {
  Json rows = Json::array();
  for (const auto& r : f.rows()) {
    Json row = Json::array();
    for (const auto& x : r) row.push_back(x.convert_to<long long>());
    rows.push_back(row);
  }
  return rows;
}

inline MonomialLift lift_rows_from(const Json& j) {
  return detail::parse_guard("monomial lift", [&] {
    std::vector<std::vector<Integer>> rows;
    for (const auto& r : j) {
      std::vector<Integer> row;
      for (const auto& x : r) row.emplace_back(x.is_string() ? Integer(x.get<std::string>()) : Integer(x.get<long long>()));
      rows.push_back(std::move(row));
    }
    return lift(rows);
  });
}

inline Json map_json(const MapModel& f) {
  Json j;
  j["name"] = f.name;
  j["source"] = f.source->name;
  j["target"] = f.target->name;
  auto table = [](const std::map<int, RatMatrix>& t) {
    Json o = Json::object();
    for (const auto& [p, m] : t) o[std::to_string(p)] = matrix_json(m);
    return o;
  };
  j["pullback"] = table(f.pullback);
  j["inverse_pullback"] = table(f.inverse_pullback);
  Json it = Json::object();
  for (const auto& [p, seq] : f.iterate_pullbacks) {
    Json a = Json::array();
    for (const auto& m : seq) a.push_back(matrix_json(m));
    it[std::to_string(p)] = a;
  }
  j["iterate_pullbacks"] = it;
  Json vs = Json::array();
  for (const auto& [name, v] : f.varieties)
    vs.push_back({{"name", name}, {"codim", v.codim}, {"class", vector_json(v.cls.coeffs)}, {"effective", v.effective}});
  j["varieties"] = vs;
  Json inc = Json::array();
  for (const auto& fact : f.incidence) {
    Json img = Json::array();
    for (const auto& e : fact.image) img.push_back({{"variety", e.variety}, {"total", e.total_image}});
    Json o = {{"variety", fact.variety}, {"image", img}, {"preimage_codim", fact.preimage_codim},
              {"preimage_components", fact.preimage_components}};
    if (fact.multiplicities) o["multiplicities"] = vector_json(*fact.multiplicities);
    o["provenance"] = fact.provenance;
    inc.push_back(o);
  }
  j["incidence"] = inc;
  if (f.monomial) j["monomial"] = lift_rows_json(*f.monomial);
  j["declared_stable"] = f.declared_stable;
  j["involution"] = f.involution;
  j["inverse_exact"] = f.inverse_exact;
  if (f.topological_degree) j["topological_degree"] = to_string(*f.topological_degree);
  j["notes"] = f.notes;
  return j;
}

using ModelResolver = std::function<ModelPtr(const std::string&)>;

/// Variety classes may be given as coefficient arrays or class expressions.
inline MapModel map_from(const Json& j, const ModelResolver& resolve) {
  return detail::parse_guard("map definition", [&] {
    MapModel f;
    f.name = j.at("name").get<std::string>();
    f.source = resolve(j.at("source").get<std::string>());
    f.target = j.contains("target") ? resolve(j.at("target").get<std::string>()) : f.source;
    if (f.target->name == f.source->name) f.target = f.source;
    auto table = [&](const Json& o, std::map<int, RatMatrix>& out, bool inverse) {
      for (const auto& [key, m] : o.items()) {
        int p = std::stoi(key);
        f.source->check_degree(p);
        out[p] = matrix_from(m, inverse ? f.source->rank(p) : f.target->rank(p));
      }
    };
    table(j.at("pullback"), f.pullback, false);
    if (j.contains("inverse_pullback")) table(j.at("inverse_pullback"), f.inverse_pullback, true);
    if (j.contains("iterate_pullbacks"))
      for (const auto& [key, seq] : j.at("iterate_pullbacks").items())
        for (const auto& m : seq) f.iterate_pullbacks[std::stoi(key)].push_back(matrix_from(m));
    if (j.contains("varieties"))
      for (const auto& v : j.at("varieties")) {
        std::string name = v.at("name").get<std::string>();
        int codim = v.at("codim").get<int>();
        const auto& c = v.at("class");
        auto cls = c.is_string() ? parse_class(f.source, codim, c.get<std::string>())
                                 : CohomologyClass::from(f.source, codim, vector_from(c));
        f.varieties[name] = VarietyClass{name, codim, cls, v.value("effective", true)};
      }
    if (j.contains("incidence"))
      for (const auto& o : j.at("incidence")) {
        IncidenceFact fact;
        fact.variety = o.at("variety").get<std::string>();
        if (o.contains("image"))
          for (const auto& e : o.at("image"))
            fact.image.push_back({e.at("variety").get<std::string>(), e.value("total", true)});
        fact.preimage_codim = o.at("preimage_codim").get<int>();
        fact.preimage_components = o.value("preimage_components", std::vector<std::string>{});
        if (o.contains("multiplicities")) fact.multiplicities = vector_from(o.at("multiplicities"));
        fact.provenance = o.value("provenance", std::string{});
        f.incidence.push_back(std::move(fact));
      }
    if (j.contains("monomial")) f.monomial = lift_rows_from(j.at("monomial"));
    if (j.contains("declared_stable")) f.declared_stable = j.at("declared_stable").get<std::set<int>>();
    f.involution = j.value("involution", false);
    f.inverse_exact = j.value("inverse_exact", false);
    if (j.contains("topological_degree")) {
      const auto& t = j.at("topological_degree");
      f.topological_degree = t.is_string() ? Integer(t.get<std::string>()) : Integer(t.get<long long>());
    }
    f.notes = j.value("notes", std::vector<std::string>{});
    f.validate();
    return f;
  });
}

// ---------------------------------------------------------------- ledgers

using VarietyResolver = std::function<VarietyClass(const std::string&)>;

inline Json ledger_json(const SiuLedger& l) {
  Json atoms = Json::array();
  for (const auto& a : l.atoms()) {
    Json o = {{"weight", rational_json(a.weight)}, {"variety", a.variety.name},
              {"class", vector_json(a.variety.cls.coeffs)}};
    if (a.lost_positivity) o["lost_positivity"] = true;
    atoms.push_back(o);
  }
  Json j = {{"manifold", l.manifold()->name}, {"p", l.p()}, {"residual", vector_json(l.residual().coeffs)},
            {"atoms", atoms}};
  if (l.tail_mass()) j["tail_mass"] = rational_json(*l.tail_mass());
  j["total"] = vector_json(l.total().coeffs);
  return j;
}

/// Atoms name varieties; their classes come from the resolver unless given
/// inline. The residual is a coefficient array or a class expression.
inline SiuLedger ledger_from(const Json& j, const ModelPtr& manifold, const VarietyResolver& resolve) {
  return detail::parse_guard("ledger", [&] {
    int p = j.at("p").get<int>();
    CohomologyClass residual = CohomologyClass::zero(manifold, p);
    if (j.contains("residual")) {
      const auto& r = j.at("residual");
      residual = r.is_string() ? parse_class(manifold, p, r.get<std::string>())
                               : CohomologyClass::from(manifold, p, vector_from(r));
    }
    std::vector<SiuAtom> atoms;
    for (const auto& a : j.at("atoms")) {
      std::string name = a.at("variety").get<std::string>();
      VarietyClass v;
      if (a.contains("class")) {
        v = VarietyClass{name, p, CohomologyClass::from(manifold, p, vector_from(a.at("class"))), true};
      } else {
        v = resolve(name);
      }
      atoms.push_back({rational_from(a.at("weight")), v, a.value("lost_positivity", false)});
    }
    std::optional<Rational> tail;
    if (j.contains("tail_mass")) tail = rational_from(j.at("tail_mass"));
    SiuLedger l(residual, std::move(atoms), tail);
    if (j.contains("total") && !(l.total().coeffs == vector_from(j.at("total"))))
      throw ModelError("ledger: stored total class disagrees with residual plus atoms");
    return l;
  });
}

// ---------------------------------------------------------------- lifts

inline Json homogeneous_lift_json(const HomogeneousLift& f) {
  Json coords = Json::array();
  for (const auto& c : f.coordinates) {
    Json terms = Json::array();
    for (const auto& t : c)
      terms.push_back({{"coeff_re", t.coeff.real()}, {"coeff_im", t.coeff.imag()}, {"exponents", t.exponents}});
    coords.push_back(terms);
  }
  return {{"name", f.name}, {"k", f.k}, {"degree", f.degree}, {"verified", f.verified}, {"coordinates", coords}};
}

/// User lifts are marked unverified unless the file says otherwise.
inline HomogeneousLift homogeneous_lift_from(const Json& j) {
  return detail::parse_guard("homogeneous lift", [&] {
    HomogeneousLift f;
    f.name = j.value("name", std::string{});
    f.degree = j.at("degree").get<int>();
    const auto& coords = j.at("coordinates");
    f.k = j.value("k", static_cast<int>(coords.size()) - 1);
    for (const auto& c : coords) {
      std::vector<Term> terms;
      for (const auto& t : c)
        terms.push_back({Complex(t.value("coeff_re", 0.0), t.value("coeff_im", 0.0)),
                         t.at("exponents").get<std::vector<int>>()});
      f.coordinates.push_back(std::move(terms));
    }
    f.verified = j.value("verified", false);
    f.validate();
    return f;
  });
}

// ---------------------------------------------------------------- verdicts

inline Json interval_json(const RationalInterval& x) {
  return {{"lo", rational_json(x.lo)}, {"hi", rational_json(x.hi)}};
}

}  // namespace cohodyn
