// Acceptance runner: one PASS/FAIL line per criterion, each with its runtime
// budget. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "properties.hpp"

using namespace cohodyn;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

CohomologyClass cls(const ModelPtr& m, int p, const std::string& e) { return parse_class(m, p, e); }

Check intersection_table() {
  Check c;
  auto x = share(blowup_points(3, 4, std::nullopt, "X"));
  const std::vector<std::string> h11{"H", "E0", "E1", "E2", "E3"}, h22{"H2", "L0", "L1", "L2", "L3"};
  std::size_t count = 0;
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = 0; b < 5; ++b, ++count) {
      Rational want = (a == 0 && b == 0) ? 1 : (a == b ? -1 : 0);
      Rational got = pair(cls(x, 1, h11[a]), cls(x, 2, h22[b]));
      c.require(got == want, h11[a] + "." + h22[b] + " = " + to_string(got));
    }
  c.require(count == 25, "pairing count");
  if (c.ok) c.detail = "25 pairings exact";
  return c;
}

Check pullback_matrices() {
  Check c;
  auto j = builtin("J_X");
  const std::vector<std::pair<std::string, std::string>> d1{{"H", "3H-2E0-2E1-2E2-2E3"},
                                                            {"E0", "H-E1-E2-E3"},
                                                            {"E1", "H-E0-E2-E3"},
                                                            {"E2", "H-E0-E1-E3"},
                                                            {"E3", "H-E0-E1-E2"}};
  const std::vector<std::pair<std::string, std::string>> d2{{"H2", "3H2-L0-L1-L2-L3"},
                                                            {"L0", "2H2-L1-L2-L3"},
                                                            {"L1", "2H2-L0-L2-L3"},
                                                            {"L2", "2H2-L0-L1-L3"},
                                                            {"L3", "2H2-L0-L1-L2"}};
  for (int p : {1, 2})
    for (const auto& [g, img] : p == 1 ? d1 : d2)
      c.require(pullback_class(j, cls(j.target, p, g)) == cls(j.source, p, img), "image of " + g);
  c.require(derive_dual_action(j, 2) == j.matrix(2), "dual action at p=2");
  if (c.ok) c.detail = "10 images, dual action reproduces M_2";
  return c;
}

Check siu_sign_flip() {
  Check c;
  auto j = builtin("J_X");
  SiuLedger in(j.target, 2);
  in.add_atom(1, j.variety("Sigma_01"));
  const SiuLedger once = siu_pullback(j, in);
  c.require(once.atoms().size() == 1, "one atom after pullback");
  if (!c.ok) return c;
  c.require(format_atom(once.atoms()[0]) == "(-1)·Sigma_23 [LOST-POSITIVITY]", format_atom(once.atoms()[0]));
  c.require(once.total() == Rational(-1) * j.variety("Sigma_23").cls, "class of the pullback");
  c.require(pullback_class(j, j.variety("Sigma_01").cls) == cls(j.source, 2, "-H2+L0+L1"), "-H2+L0+L1");
  const SiuLedger twice = siu_pullback(j, once);
  c.require(twice == in, "round trip");
  if (c.ok) c.detail = format_atom(once.atoms()[0]) + ", round trip (1)·Sigma_01";
  return c;
}

Check class_shadow() {
  Check c;
  auto j = builtin("J_X");
  for (int p : {1, 2}) {
    const auto& m = j.matrix(p);
    c.require(m * m == RatMatrix::identity(m.rows()), "M^2 = I at p=" + std::to_string(p));
    auto r = spectral_radius(m, default_root_width());
    c.require(r.lo == 1 && r.hi == 1, "spectral radius " + r.to_string());
  }
  if (c.ok) c.detail = "M_1^2 = M_2^2 = I, radius [1, 1]";
  return c;
}

Check invariant_class() {
  Check c;
  auto j = builtin("J_X");
  auto eig = invariant_class_eigen(j, 2, 1);
  std::vector<RatVector> span;
  for (const auto& k : eig.kernel) span.push_back(k.coeffs);
  c.require(in_span(span, cls(j.source, 2, "L0+L1-L2-L3").coeffs), "kernel misses L0+L1-L2-L3");
  auto ces = invariant_class_cesaro(j, 2, j.variety("Sigma_01").cls, 1);
  bool zero_by_two = false;
  for (std::size_t i = 0; i < ces.schedule.size(); ++i)
    if (ces.schedule[i] <= 2 && ces.residual_norm_history[i] == 0) zero_by_two = true;
  c.require(zero_by_two, "Cesaro residual not 0 by N=2");
  if (c.ok) c.detail = "kernel dim " + std::to_string(eig.kernel.size()) + ", " + ces.verdict;
  return c;
}

Check monomial_stability() {
  Check c;
  auto f = reciprocal_lift(3);
  auto seq = degree_sequence(f, 8);
  std::vector<Integer> want{3, 1, 3, 1, 3, 1, 3, 1};
  c.require(seq.degrees == want, "degree sequence");
  auto st = is_1_stable(f, 8);
  c.require(!st.stable && st.first_unstable == 2, "UnstableAt(2)");
  auto d = first_dynamical_degree(f, 8);
  c.require(d.interval.lo == 1 && d.interval.hi == 1, "delta_1 " + d.interval.to_string());
  c.require(topological_degree(f) == 1, "topological degree");
  if (c.ok) c.detail = "(3,1,3,1,3,1,3,1), UnstableAt(2), delta_1 = [1, 1], topdeg 1";
  return c;
}

Check product_current() {
  Check c;
  auto f = reciprocal_lift(3);
  auto t = extracted_invariant_current(f, 20);
  c.require(t.exact, "weights not exact");
  for (const auto& w : t.weights) c.require(w == Rational(1, 4), "weight " + to_string(w));
  auto r = product_invariant_current(t, t, f, f);
  c.require(r.pass, "product check failed");
  c.require(r.scale_factor == 9, "scale factor " + to_string(r.scale_factor));
  c.require(r.atoms.size() == 16, "atom count " + std::to_string(r.atoms.size()));
  for (const auto& a : r.atoms) {
    const std::string want = HypersurfaceCurrent::hyperplane_name(a.first) + "x" + HypersurfaceCurrent::hyperplane_name(a.second);
    c.require(a.name() == want && a.first < 4 && a.second < 4, "atom " + a.name() + " is not a coordinate product");
  }
  if (c.ok) c.detail = "weights 1/4, PASS with factor 9 on 16 coordinate products";
  return c;
}

Check green_anchor() {
  Check c;
  auto f = to_homogeneous(power_lift(2, 2), "power2_P2");
  auto g = green_potential(f, {1, 2, 3}, 2);
  c.require(std::abs(g.value() - std::log(3.0)) <= 1e-14, "G(1,2,3) off by " + std::to_string(g.value() - std::log(3.0)));
  auto o = properties::green_scaling(100);
  c.require(o.ok(), o.first_failure);
  if (c.ok) c.detail = "G(1,2,3) = log 3, scaling over 100 points";
  return c;
}

Check lelong() {
  Check c;
  const Point a{Complex(0.3, -0.2), Complex(1.1, 0.4)};
  Potential u = [a](const Point& z) { return 0.5 * std::log(std::norm(z[0] - a[0]) + std::norm(z[1] - a[1])); };
  LelongOptions opt;
  opt.samples = 4096;
  double nu1 = lelong_estimate(u, a, opt).nu;
  c.require(std::abs(nu1 - 1) <= 0.02, "log distance nu = " + std::to_string(nu1));
  auto f = to_homogeneous(power_lift(2, 2), "power2_P2");
  double nu0 = lelong_estimate(green_as_potential(f, 20), {1, Complex(2, 1), 3}, opt).nu;
  c.require(std::abs(nu0) <= 0.02, "Green nu = " + std::to_string(nu0));
  char buf[96];
  std::snprintf(buf, sizeof buf, "nu(log|z-a|) = %.4f, nu(G) = %.4f", nu1, nu0);
  if (c.ok) c.detail = buf;
  return c;
}

Check obstruction() {
  Check c;
  auto j = builtin("J_X");
  auto v = cls(j.source, 2, "-H2+L0+L1");
  auto ob = positivity_obstruction(v);
  c.require(ob.obstructed && ob.mass == -1, "obstruction mass " + to_string(ob.mass));
  c.require(pair(v, cls(j.source, 1, "H")) == -1, "pairing with H");
  std::vector<RatVector> gens;
  for (const auto& g : {"H2", "L0", "L1", "L2", "L3"}) gens.push_back(cls(j.source, 2, g).coeffs);
  for (const auto& [name, var] : j.varieties)
    if (var.codim == 2) gens.push_back(var.cls.coeffs);
  c.require(gens.size() == 11, "generator count " + std::to_string(gens.size()));
  c.require(!cone_membership(v.coeffs, gens).member, "class found in the cone");
  if (c.ok) c.detail = "Obstructed (mass -1), NotMember of 11-generator cone";
  return c;
}

Check property_suites() {
  Check c;
  const std::size_t n = 200;
  std::string summary;
  for (const auto& [name, run] : std::vector<std::pair<std::string, std::function<properties::Outcome(std::size_t)>>>{
           {"pairing", properties::pairing_bilinearity},
           {"ledger", properties::ledger_linearity},
           {"degree", properties::degree_submultiplicativity},
           {"adjoint", properties::adjoint_pushforward}}) {
    auto o = run(n);
    c.require(o.instances >= n, name + ": only " + std::to_string(o.instances) + " instances");
    c.require(o.failures == 0, name + ": " + o.first_failure);
    summary += (summary.empty() ? "" : ", ") + name + " " + std::to_string(o.instances);
  }
  if (c.ok) c.detail = summary + " instances clean";
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double budget_s;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria{
      {1, 1, intersection_table}, {2, 1, pullback_matrices}, {3, 1, siu_sign_flip}, {4, 1, class_shadow},
      {5, 1, invariant_class},    {6, 1, monomial_stability}, {7, 5, product_current}, {8, 5, green_anchor},
      {9, 10, lelong},            {10, 1, obstruction},       {11, 60, property_suites}};
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Check r;
    try {
      r = cr.run();
    } catch (const std::exception& e) {
      r.ok = false;
      r.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.ok && secs >= cr.budget_s) {
      r.ok = false;
      r.detail += " (over the " + std::to_string(static_cast<int>(cr.budget_s)) + " s budget)";
    }
    failed += !r.ok;
    std::printf("%s criterion %d: %s [%.3f s]\n", r.ok ? "PASS" : "FAIL", cr.id, r.detail.c_str(), secs);
  }
  return failed;
}
