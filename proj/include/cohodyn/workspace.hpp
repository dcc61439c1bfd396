#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <string>

#include "cohodyn/serialize.hpp"

namespace cohodyn {

struct WorkspaceConfig {
  Rational tol = default_root_width();
  std::size_t max_steps = default_step_cap();
};

/// Named definitions shared across CLI invocations. Names missing from the
/// workspace fall back to the built-in maps and manifolds.
class Workspace {
 public:
  std::map<std::string, ModelPtr> manifolds;
  std::map<std::string, MapModel> maps;
  std::map<std::string, MonomialLift> monomials;
  std::map<std::string, HomogeneousLift> lifts;
  std::map<std::string, Json> ledgers;  // stored in file form, resolved on use
  WorkspaceConfig config;

  ModelPtr manifold(const std::string& name) const {
    if (auto it = manifolds.find(name); it != manifolds.end()) return it->second;
    static const std::regex pk(R"(P(\d+))");
    std::smatch m;
    if (std::regex_match(name, m, pk)) return share(projective_space(std::stoi(m[1])));
    if (name == "X") return builtin_J_X().source;
    throw LookupError("unknown manifold '" + name + "'");
  }

  MapModel map(const std::string& name) const {
    if (auto it = maps.find(name); it != maps.end()) return it->second;
    try {
      return builtin(name);
    } catch (const LookupError&) {
      throw LookupError("unknown map '" + name + "' (not in the workspace and not a builtin)");
    }
  }

  MonomialLift monomial(const std::string& name) const {
    if (auto it = monomials.find(name); it != monomials.end()) return it->second;
    MapModel f = map(name);
    if (!f.monomial) throw CapabilityError("map '" + name + "' carries no monomial lift");
    return *f.monomial;
  }

  HomogeneousLift homogeneous(const std::string& name) const {
    if (auto it = lifts.find(name); it != lifts.end()) return it->second;
    return to_homogeneous(monomial(name), name);
  }

  /// Registers a map and the manifolds it lives on.
  void add_map(const MapModel& f) {
    manifolds[f.source->name] = f.source;
    manifolds[f.target->name] = f.target;
    maps[f.name] = f;
  }

  Json to_json() const {
    Json j;
    Json ms = Json::object();
    for (const auto& [n, m] : manifolds) ms[n] = model_json(*m);
    j["manifolds"] = ms;
    Json fs = Json::object();
    for (const auto& [n, f] : maps) fs[n] = map_json(f);
    j["maps"] = fs;
    Json mono = Json::object();
    for (const auto& [n, f] : monomials) mono[n] = lift_rows_json(f);
    j["monomials"] = mono;
    Json ls = Json::object();
    for (const auto& [n, f] : lifts) ls[n] = homogeneous_lift_json(f);
    j["lifts"] = ls;
    Json ld = Json::object();
    for (const auto& [n, l] : ledgers) ld[n] = l;
    j["ledgers"] = ld;
    j["config"] = {{"tol", to_string(config.tol)}, {"max_steps", config.max_steps}};
    return j;
  }

  std::string serialize() const { return to_json().dump(2) + "\n"; }

  static Workspace from_json(const Json& j) {
    Workspace w;
    w.merge(j);
    return w;
  }

  /// Adds every definition in j. Transactional: on any error the workspace
  /// is left exactly as it was.
  void merge(const Json& j) {
    Workspace next = *this;
    next.merge_unchecked(j);
    *this = std::move(next);
  }

  static Workspace load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) return {};
    return from_json(read_json(in, path));
  }

  void save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw LookupError("cannot write workspace file " + path);
    out << serialize();
  }

  static Json read_json(std::istream& in, const std::string& what) {
    try {
      return Json::parse(in);
    } catch (const std::exception& e) {
      throw ParseError(what + ": " + e.what());
    }
  }

  static Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LookupError("cannot open " + path);
    return read_json(in, path);
  }

 private:
  void merge_unchecked(const Json& j) {
    if (j.contains("config")) {
      const auto& c = j.at("config");
      if (c.contains("tol")) config.tol = rational_from(c.at("tol"));
      if (c.contains("max_steps")) config.max_steps = c.at("max_steps").get<std::size_t>();
    }
    if (j.contains("manifolds"))
      for (const auto& [n, m] : j.at("manifolds").items()) {
        auto model = model_from(m);
        if (model.name != n) throw NamingError("manifold entry '" + n + "' defines '" + model.name + "'");
        manifolds[n] = share(std::move(model));
      }
    if (j.contains("maps"))
      for (const auto& [n, m] : j.at("maps").items()) {
        auto f = map_from(m, [this](const std::string& s) { return manifold(s); });
        if (f.name != n) throw NamingError("map entry '" + n + "' defines '" + f.name + "'");
        maps[n] = std::move(f);
      }
    if (j.contains("monomials"))
      for (const auto& [n, m] : j.at("monomials").items()) monomials[n] = lift_rows_from(m);
    if (j.contains("lifts"))
      for (const auto& [n, m] : j.at("lifts").items()) lifts[n] = homogeneous_lift_from(m);
    if (j.contains("ledgers"))
      for (const auto& [n, m] : j.at("ledgers").items()) {
        (void)ledger_from(m, manifold(m.at("manifold").get<std::string>()),
                          [&](const std::string& v) -> VarietyClass {
                            throw LookupError("stored ledger '" + n + "' atom " + v + " has no inline class");
                          });
        ledgers[n] = m;
      }
  }
};

/// Step cap from COHODYN_MAX_STEPS, else the given default.
inline std::size_t env_step_cap(std::size_t fallback) {
  if (const char* s = std::getenv("COHODYN_MAX_STEPS")) {
    try {
      std::size_t pos = 0;
      unsigned long long v = std::stoull(s, &pos);
      if (pos == std::string(s).size() && v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw ParseError(std::string("COHODYN_MAX_STEPS must be a positive integer, got '") + s + "'");
  }
  return fallback;
}

}  // namespace cohodyn
