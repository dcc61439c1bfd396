#include <filesystem>
#include <fstream>
#include <functional>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace cohodyn;
using namespace testing_support;

namespace {

std::size_t digest(const Workspace& w) { return std::hash<std::string>{}(w.serialize()); }

Workspace populated() {
  Workspace w;
  w.add_map(builtin("J_X"));
  w.add_map(builtin("power2_P2"));
  w.monomials["cremona3"] = reciprocal_lift(3);
  w.lifts["p2"] = to_homogeneous(power_lift(2, 2), "p2");
  auto j = builtin("J_X");
  SiuLedger l(j.target, 2);
  l.add_atom(1, j.variety("Sigma_01"));
  w.ledgers["s01"] = ledger_json(l);
  return w;
}

}  // namespace

TEST(Serialize, RationalsAndMatrices) {
  EXPECT_EQ(rational_from(Json("3/6")), Rational(1, 2));
  EXPECT_EQ(rational_from(Json(4)), 4);
  EXPECT_THROW(rational_from(Json("1/0")), ParseError);
  for (int i = 0; i < 50; ++i) {
    auto m = rand_matrix(static_cast<std::size_t>(rand_int(1, 4)), static_cast<std::size_t>(rand_int(1, 4)));
    EXPECT_EQ(matrix_from(matrix_json(m)), m);
  }
  EXPECT_THROW(matrix_from(Json::parse(R"([["1","2"],["3"]])")), DimensionError);
  EXPECT_THROW(matrix_from(Json::parse(R"([["1","x"]])")), ParseError);
}

TEST(Serialize, ModelsRoundTrip) {
  for (const auto& m : {blowup_points(3, 4, std::nullopt, "X"), blowup_points(4, 2, RatVector{3, 1, 1}),
                        product_model(projective_space(1), blowup_points(2, 1))}) {
    auto back = model_from(model_json(m));
    EXPECT_TRUE(same_manifold(share(back), share(m)));
    EXPECT_EQ(back.kahler_class, m.kahler_class);
  }
  auto short_form = model_from(Json::parse(R"({"blowup": {"dim": 3, "points": 4}, "name": "X"})"));
  EXPECT_TRUE(same_manifold(share(short_form), builtin("J_X").source));
  EXPECT_EQ(model_from(Json::parse(R"({"projective": 2})")).name, "P2");
}

TEST(Serialize, MapsRoundTrip) {
  auto resolve = [](const std::string& n) -> ModelPtr {
    if (n == "X") return builtin("J_X").source;
    return share(projective_space(std::stoi(n.substr(1))));
  };
  for (const auto& name : {"J_X", "J_P3", "sigma_P2", "power3_P2"}) {
    auto f = builtin(name);
    auto back = map_from(map_json(f), resolve);
    EXPECT_EQ(map_json(back), map_json(f)) << name;
  }
}

TEST(Serialize, LedgerAcceptsExpressionsAndChecksTheTotal) {
  auto j = builtin("J_X");
  auto resolve = [&](const std::string& v) { return j.variety(v); };
  auto l = ledger_from(Json::parse(R"({"manifold":"X","p":2,"residual":"H2-L0","atoms":[{"weight":"1/2","variety":"Sigma_01"}]})"),
                       j.target, resolve);
  EXPECT_EQ(format_class(l.total()), "3/2*H2-L0-1/2*L2-1/2*L3");
  auto again = ledger_from(ledger_json(l), j.target, resolve);
  EXPECT_EQ(again, l);
  auto bad = ledger_json(l);
  bad["total"] = vector_json({1, 0, 0, 0, 0});
  EXPECT_THROW(ledger_from(bad, j.target, resolve), ModelError);
}

TEST(Workspace, SerializationIsStable) {
  auto w = populated();
  auto text = w.serialize();
  auto back = Workspace::from_json(Json::parse(text));
  EXPECT_EQ(back.serialize(), text);
  EXPECT_EQ(back.monomial("cremona3"), reciprocal_lift(3));
  EXPECT_EQ(back.map("J_X").matrix(2), builtin("J_X").matrix(2));
}

TEST(Workspace, LoadingIsTransactional) {
  auto w = populated();
  const auto before = digest(w);
  // The manifold entry is valid, the map has a 1x2 matrix on P2: nothing loads.
  Json bad = Json::parse(R"({
    "manifolds": {"Z": {"blowup": {"dim": 2, "points": 1}, "name": "Z"}},
    "maps": {"broken": {"name": "broken", "source": "P2", "target": "P2",
                        "pullback": {"0": [["1"]], "1": [["2", "3"]], "2": [["4"]]}}}
  })");
  EXPECT_THROW(w.merge(bad), Error);
  EXPECT_EQ(digest(w), before);
  EXPECT_FALSE(w.manifolds.count("Z"));
  Json misnamed = Json::parse(R"({"manifolds": {"Q": {"projective": 2}}})");
  EXPECT_THROW(w.merge(misnamed), NamingError);
  EXPECT_EQ(digest(w), before);
  Json unresolved = Json::parse(R"({"maps": {"m": {"name": "m", "source": "Nowhere", "target": "P2", "pullback": {}}}})");
  EXPECT_THROW(w.merge(unresolved), LookupError);
  EXPECT_EQ(digest(w), before);
}

TEST(Workspace, FallsBackToBuiltins) {
  Workspace w;
  EXPECT_EQ(w.manifold("P4")->dim, 4);
  EXPECT_EQ(w.manifold("X")->rank(1), 5u);
  EXPECT_EQ(w.map("J_P3").name, "J_P3");
  EXPECT_EQ(w.monomial("J_P3"), reciprocal_lift(3));
  EXPECT_EQ(w.homogeneous("power2_P2").degree, 2);
  EXPECT_THROW(w.manifold("Y9"), LookupError);
  EXPECT_THROW(w.map("nope"), LookupError);
  EXPECT_THROW(w.monomial("J_X"), CapabilityError);
}

TEST(Workspace, FilesRoundTrip) {
  auto path = (std::filesystem::temp_directory_path() / "cohodyn_ws_test.json").string();
  std::filesystem::remove(path);
  EXPECT_TRUE(Workspace::load_file(path).maps.empty());
  auto w = populated();
  w.save_file(path);
  EXPECT_EQ(Workspace::load_file(path).serialize(), w.serialize());
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(Workspace::load_file(path), ParseError);
  std::filesystem::remove(path);
}

TEST(Workspace, StepCapFromEnvironment) {
  ::setenv("COHODYN_MAX_STEPS", "12", 1);
  EXPECT_EQ(env_step_cap(4096), 12u);
  ::setenv("COHODYN_MAX_STEPS", "twelve", 1);
  EXPECT_THROW(env_step_cap(4096), ParseError);
  ::unsetenv("COHODYN_MAX_STEPS");
  EXPECT_EQ(env_step_cap(4096), 4096u);
}
