#pragma once

#include <regex>
#include <string>
#include <vector>

#include "cohodyn/class_expr.hpp"
#include "cohodyn/map_model.hpp"

namespace cohodyn {

namespace detail {

inline RatMatrix from_columns(const std::vector<std::vector<long long>>& cols) {
  RatMatrix m(cols.front().size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < cols[j].size(); ++i) m(i, j) = Rational(cols[j][i]);
  return m;
}

inline void add_variety(MapModel& f, const std::string& name, int codim, const std::string& expr) {
  f.varieties[name] = VarietyClass{name, codim, parse_class(f.source, codim, expr), true};
}

inline std::string pair_label(int i, int j) { return std::to_string(i) + std::to_string(j); }

/// Scalar pullbacks M_p = (d^p) on P^k, and the matching top degree.
inline void scalar_tables(MapModel& f, int k, const Integer& d) {
  Integer dp = 1;
  for (int p = 0; p <= k; ++p) {
    f.pullback[p] = RatMatrix{{Rational(dp)}};
    dp *= d;
  }
}

}  // namespace detail

/// The lift of the coordinate-reciprocal involution to the blowup of P^3 at
/// the four coordinate points. Sigma_ij is the strict transform of the line
/// through the coordinate points i and j.
inline MapModel builtin_J_X() {
  MapModel f;
  f.name = "J_X";
  f.source = f.target = share(blowup_points(3, 4, std::nullopt, "X"));
  f.pullback[0] = RatMatrix{{1}};
  f.pullback[1] = detail::from_columns({{3, -2, -2, -2, -2},
                                        {1, 0, -1, -1, -1},
                                        {1, -1, 0, -1, -1},
                                        {1, -1, -1, 0, -1},
                                        {1, -1, -1, -1, 0}});
  f.pullback[2] = detail::from_columns({{3, -1, -1, -1, -1},
                                        {2, 0, -1, -1, -1},
                                        {2, -1, 0, -1, -1},
                                        {2, -1, -1, 0, -1},
                                        {2, -1, -1, -1, 0}});
  f.pullback[3] = RatMatrix{{1}};
  f.involution = true;
  f.declared_stable = {0, 1, 2, 3};
  f.topological_degree = Integer(1);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      std::vector<int> rest;
      for (int a = 0; a < 4; ++a)
        if (a != i && a != j) rest.push_back(a);
      detail::add_variety(f, "Sigma_" + detail::pair_label(i, j), 2,
                          "H2-L" + std::to_string(rest[0]) + "-L" + std::to_string(rest[1]));
      std::string v = "Sigma_" + detail::pair_label(i, j);
      std::string w = "Sigma_" + detail::pair_label(rest[0], rest[1]);
      f.incidence.push_back({v, {{w, true}}, 2, {w}, std::nullopt,
                             "J_X(Sigma_ij) = Sigma_kl with {i,j,k,l} = {0,1,2,3}; J_X is an involution"});
    }
  f.validate();
  return f;
}

/// The coordinate-reciprocal involution of P^3. Its indeterminacy locus is
/// the union of the coordinate lines Sigma_ij.
inline MapModel builtin_J_P3() {
  MapModel f;
  f.name = "J_P3";
  f.source = f.target = share(projective_space(3));
  f.pullback[0] = RatMatrix{{1}};
  f.pullback[1] = RatMatrix{{3}};
  f.pullback[2] = RatMatrix{{3}};
  f.pullback[3] = RatMatrix{{1}};
  f.involution = true;
  f.declared_stable = {0, 3};
  f.topological_degree = Integer(1);
  f.monomial = reciprocal_lift(3);
  for (int i = 0; i < 4; ++i) detail::add_variety(f, "Plane_" + std::to_string(i), 1, "H");
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) detail::add_variety(f, "Sigma_" + detail::pair_label(i, j), 2, "H2");
  for (int i = 0; i < 4; ++i) {
    std::vector<std::string> others;
    for (int j = 0; j < 4; ++j)
      if (j != i) others.push_back("Plane_" + std::to_string(j));
    f.incidence.push_back({"Plane_" + std::to_string(i), {}, 1, others, RatVector{1, 1, 1},
                           "x_i o J = prod_{j != i} x_j up to the common factor"});
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      std::string v = "Sigma_" + detail::pair_label(i, j);
      f.incidence.push_back({v, {}, 1, {}, std::nullopt,
                             "the line lies in the indeterminacy locus; its preimage contains a plane"});
    }
  f.validate();
  return f;
}

/// The standard quadratic involution [yz : xz : xy] of P^2.
inline MapModel builtin_sigma_P2() {
  MapModel f;
  f.name = "sigma_P2";
  f.source = f.target = share(projective_space(2));
  f.pullback[0] = RatMatrix{{1}};
  f.pullback[1] = RatMatrix{{2}};
  f.pullback[2] = RatMatrix{{1}};
  f.involution = true;
  f.declared_stable = {0, 2};
  f.topological_degree = Integer(1);
  f.monomial = reciprocal_lift(2);
  for (int i = 0; i < 3; ++i) detail::add_variety(f, "Line_" + std::to_string(i), 1, "H");
  for (int i = 0; i < 3; ++i) {
    std::vector<std::string> others;
    for (int j = 0; j < 3; ++j)
      if (j != i) others.push_back("Line_" + std::to_string(j));
    f.incidence.push_back({"Line_" + std::to_string(i), {}, 1, others, RatVector{1, 1},
                           "x_i o sigma = prod_{j != i} x_j"});
  }
  f.validate();
  return f;
}

/// [x_0^d : ... : x_k^d]. Hyp_i is the coordinate hyperplane {x_i = 0}; "H"
/// stands for a generic hyperplane, whose preimage is a degree-d hypersurface.
inline MapModel power_map(int k, long long d) {
  if (d < 1) throw DegenerateInputError("power_map: degree must be positive");
  MapModel f;
  f.name = "power" + std::to_string(d) + "_P" + std::to_string(k);
  f.source = f.target = share(projective_space(k));
  detail::scalar_tables(f, k, Integer(d));
  for (int p = 0; p <= k; ++p) f.declared_stable.insert(p);
  f.involution = d == 1;
  f.topological_degree = f.pullback[k](0, 0).convert_to<Integer>();
  f.monomial = power_lift(k, d);
  detail::add_variety(f, "H", 1, "H");
  f.incidence.push_back({"H", {}, 1, {"H"}, std::nullopt, "preimage of a generic hyperplane"});
  for (int i = 0; i <= k; ++i) {
    std::string v = "Hyp_" + std::to_string(i);
    detail::add_variety(f, v, 1, "H");
    f.incidence.push_back({v, {{v, true}}, 1, {v}, RatVector{Rational(d)}, "x_i o f = x_i^d"});
  }
  f.validate();
  return f;
}

inline MapModel identity_map(const ModelPtr& m) {
  MapModel f;
  f.name = "identity";
  f.source = f.target = m;
  for (int p = 0; p <= m->dim; ++p) {
    f.pullback[p] = RatMatrix::identity(m->rank(p));
    f.declared_stable.insert(p);
  }
  f.involution = true;
  f.inverse_exact = true;
  f.inverse_pullback = f.pullback;
  f.topological_degree = Integer(1);
  if (m->name == "P" + std::to_string(m->dim)) {
    f.monomial = identity_lift(m->dim);
    detail::add_variety(f, "H", 1, "H");
    f.incidence.push_back({"H", {{"H", true}}, 1, {"H"}, std::nullopt, "identity"});
  }
  f.validate();
  return f;
}

/// Names: J_X, J_P3, sigma_P2, identity (on P3), identity(k), power_map(k,d),
/// power{d}_P{k}.
inline MapModel builtin(const std::string& name) {
  std::smatch m;
  static const std::regex power_call(R"(power_map\(\s*(\d+)\s*,\s*(\d+)\s*\))");
  static const std::regex power_alias(R"(power(\d+)_P(\d+))");
  static const std::regex identity_call(R"(identity\(\s*(\d+)\s*\))");
  if (name == "J_X") return builtin_J_X();
  if (name == "J_P3") return builtin_J_P3();
  if (name == "sigma_P2") return builtin_sigma_P2();
  if (name == "identity") return identity_map(share(projective_space(3)));
  if (std::regex_match(name, m, power_call)) {
    auto f = power_map(std::stoi(m[1]), std::stoll(m[2]));
    return f;
  }
  if (std::regex_match(name, m, power_alias)) return power_map(std::stoi(m[2]), std::stoll(m[1]));
  if (std::regex_match(name, m, identity_call)) {
    auto f = identity_map(share(projective_space(std::stoi(m[1]))));
    f.name = name;
    return f;
  }
  throw LookupError("unknown builtin map '" + name +
                    "' (known: J_X, J_P3, sigma_P2, identity, identity(k), power_map(k,d), power{d}_P{k})");
}

inline std::vector<std::string> builtin_names() {
  return {"J_X", "J_P3", "sigma_P2", "identity", "identity(k)", "power_map(k,d)", "power{d}_P{k}"};
}

}  // namespace cohodyn
