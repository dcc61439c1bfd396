#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cohodyn/serialize.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

/// Runs the CLI against a private workspace file; stderr is folded into out.
class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cohodyn_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliResult run(const std::string& args, const std::string& env = "") const {
    std::string cmd = env + " " + COHODYN_CLI + std::string(" --workspace ") + (dir_ / "ws.json").string() + " " +
                      args + " 2>&1";
    CliResult r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }

  std::string workspace_text() const {
    std::ifstream in(dir_ / "ws.json");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return dir_ / name;
  }

  static std::string last_line(const std::string& s) {
    auto t = s;
    while (!t.empty() && t.back() == '\n') t.pop_back();
    return t.substr(t.rfind('\n') == std::string::npos ? 0 : t.rfind('\n') + 1);
  }

  fs::path dir_;
};

std::string data(const std::string& f) { return std::string(COHODYN_SAMPLE_DATA) + "/" + f; }

}  // namespace

TEST_F(Cli, ManifoldPairs) {
  ASSERT_EQ(run("manifold new-blowup --dim 3 --points 4 --name X").code, 0);
  EXPECT_EQ(run("manifold pair X H2 H").out, "1\n");
  EXPECT_EQ(run("manifold pair X L0 E0").out, "-1\n");
  EXPECT_EQ(run("manifold pair X L0 H").out, "0\n");
  auto show = run("manifold show X");
  EXPECT_NE(show.out.find("H^{1,1}: H E0 E1 E2 E3"), std::string::npos);
  auto miss = run("manifold pair Nowhere H H");
  EXPECT_EQ(miss.code, 2);
  EXPECT_NE(miss.out.find("unknown manifold 'Nowhere'"), std::string::npos);
  EXPECT_EQ(run("manifold pair X Q7 H").code, 2);
}

TEST_F(Cli, MapPullbacksAndDegrees) {
  ASSERT_EQ(run("map builtin J_X").code, 0);
  EXPECT_EQ(run("map pullback J_X --p 2 --class \"H2-L2-L3\"").out, "-H2+L0+L1\n");
  EXPECT_EQ(run("map pullback identity --p 1 --class H").out, "H\n");
  auto csv = run("map degrees J_P3 --steps 6");
  EXPECT_EQ(csv.out,
            "n,degree,extracted\n1,3,0;0;0;0\n2,1,2;2;2;2\n3,3,0;0;0;0\n4,1,2;2;2;2\n5,3,0;0;0;0\n6,1,2;2;2;2\n");
  auto dual = run("map dual J_X --p 2");
  EXPECT_NE(dual.out.find("stored M_2 agrees"), std::string::npos);
  auto st = run("map stability J_P3 --p 1 --steps 4");
  EXPECT_NE(st.out.find("UNSTABLE at n=2"), std::string::npos);
  auto v = cohodyn::Json::parse(last_line(st.out));
  EXPECT_EQ(v["verdict"], "UnstableAt");
  EXPECT_EQ(v["n"], 2);
}

TEST_F(Cli, CapabilityErrorsExitThree) {
  auto m = write("quad.json", R"({"maps": {"quad": {"name": "quad", "source": "P2", "target": "P2",
    "pullback": {"0": [["1"]], "1": [["2"]], "2": [["1"]]}}}})");
  ASSERT_EQ(run("map load " + m.string()).code, 0);
  auto r = run("dynamics degree quad --p 1");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("not declared 1-stable"), std::string::npos);
  auto ledger = write("plane.json", R"({"manifold":"P3","p":2,"atoms":[{"weight":"1","variety":"Sigma_01"}]})");
  auto s = run("dynamics siu-pullback J_P3 --ledger " + ledger.string());
  EXPECT_EQ(s.code, 3);
  EXPECT_NE(s.out.find("variety pullback is not defined"), std::string::npos);
}

TEST_F(Cli, NumericalErrorsExitFour) {
  auto r = run("green potential J_P3 --point 0,0,1,1 --iters 3");
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.out.find("step 1"), std::string::npos);
}

TEST_F(Cli, DynamicsVerdicts) {
  auto s = run("dynamics siu-pullback J_X --ledger " + data("sigma01.json"));
  ASSERT_EQ(s.code, 0) << s.out;
  EXPECT_NE(s.out.find("(-1)·Sigma_23 [LOST-POSITIVITY]"), std::string::npos);
  EXPECT_TRUE(cohodyn::Json::parse(last_line(s.out))["lost_positivity"].get<bool>());

  auto inv = run("dynamics invariant J_X --p 2 --lambda 1 --contains \"L0+L1-L2-L3\"");
  EXPECT_NE(inv.out.find("CONTAINS L0+L1-L2-L3"), std::string::npos);
  auto ces = run("dynamics invariant J_X --p 2 --lambda 1 --cesaro \"H2-L2-L3\"");
  EXPECT_NE(ces.out.find("CONVERGED: residual exactly 0 from N=2"), std::string::npos);

  auto big = run("dynamics large-topdeg power2_P2");
  EXPECT_NE(big.out.find("HOLDS: delta_2=4 > delta_1=2"), std::string::npos);
  EXPECT_EQ(cohodyn::Json::parse(last_line(big.out))["verdict"], "HOLDS");

  auto series = run("dynamics series-check power2_P2 --p 2 --lambda 4");
  EXPECT_NE(series.out.find("APPLICABLE"), std::string::npos);
}

TEST_F(Cli, GreenCommands) {
  auto ex = run("green extracted J_P3 --steps 20");
  for (int i = 0; i < 4; ++i)
    EXPECT_NE(ex.out.find("{x" + std::to_string(i) + "=0}: 1/4 (exact, periodic ledger)"), std::string::npos);
  auto pr = run("green product J_P3 J_P3");
  EXPECT_NE(pr.out.find("PASS: f#(T) = 9·T atomwise"), std::string::npos);
  auto g = run("green potential power2_P2 --point 1,2,3 --iters 5");
  EXPECT_NE(g.out.find("G = 1.098612288668110e+00"), std::string::npos);
  auto grid = run("green grid power2_P2 --n 3 --lo -1 --hi 1");
  std::istringstream lines(grid.out);
  std::string header, row;
  std::getline(lines, header);
  EXPECT_EQ(header, "z0_re,z0_im,z1_re,z1_im,z2_re,z2_im,G,converged,tail_bound");
  int rows = 0;
  while (std::getline(lines, row)) ++rows;
  EXPECT_EQ(rows, 9);
  auto lel = run("green lelong power2_P2 --center 1,2+1i,3 --samples 512");
  auto v = cohodyn::Json::parse(last_line(lel.out));
  EXPECT_LT(std::abs(std::stod(v["nu"].get<std::string>())), 0.02);
}

TEST_F(Cli, OutputIsDeterministic) {
  for (const char* cmd : {"green lelong power2_P2 --center 1,2,3 --samples 256", "manifold show X",
                          "dynamics degree J_X --p 1", "green grid power2_P2 --n 4"}) {
    auto a = run(cmd), b = run(cmd);
    EXPECT_EQ(a.out, b.out) << cmd;
  }
}

TEST_F(Cli, LoadingIsTransactional) {
  ASSERT_EQ(run("map builtin J_X").code, 0);
  const auto before = workspace_text();
  auto bad = write("bad.json", R"({
    "manifolds": {"Z": {"blowup": {"dim": 2, "points": 1}, "name": "Z"}},
    "maps": {"broken": {"name": "broken", "source": "Z", "pullback": {"1": [["1", "0"], ["0"]]}}}
  })");
  auto r = run("map load " + bad.string());
  EXPECT_NE(r.code, 0);
  EXPECT_EQ(workspace_text(), before);
  EXPECT_EQ(run("map show broken").code, 2);
}

TEST_F(Cli, WorkspacePersistsDefinitions) {
  auto mono = write("cremona.txt", "-1 0 0\n0 -1 0\n0 0 -1\n");
  ASSERT_EQ(run("map monomial-load c2 " + mono.string()).code, 0);
  EXPECT_NE(run("green extracted c2").out.find("{x2=0}: 1/3 (exact, periodic ledger)"), std::string::npos);
  ASSERT_EQ(run("green lift-load p2 " + data("power2_p2.json")).code, 0);
  EXPECT_NE(run("green potential p2 --point 1,2,3 --iters 2").out.find("G = 1.098612288668110e+00"),
            std::string::npos);
  ASSERT_EQ(run("dynamics siu-pullback J_X --ledger " + data("sigma01.json") + " --save once").code, 0);
  auto twice = run("dynamics siu-pullback J_X --ledger once");
  EXPECT_NE(twice.out.find("(1)·Sigma_01"), std::string::npos);
}

TEST_F(Cli, StepCapEnvironment) {
  auto r = run("map degrees J_P3 --steps 50", "COHODYN_MAX_STEPS=10");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("exceed the configured limit 10"), std::string::npos);
}

TEST_F(Cli, ObstructionAndCone) {
  auto ob = run("manifold obstruction X --p 2 --class \"-H2+L0+L1\"");
  EXPECT_NE(ob.out.find("OBSTRUCTED"), std::string::npos);
  EXPECT_EQ(cohodyn::Json::parse(last_line(ob.out))["mass"], "-1");
  auto cone = run("manifold cone X --p 2 --class \"-H2+L0+L1\" --basis --varieties J_X");
  EXPECT_NE(cone.out.find("NOT-MEMBER (11 generators)"), std::string::npos);
  auto in = run("manifold cone X --p 2 --class \"H2-L2-L3\" --basis --varieties J_X");
  EXPECT_NE(in.out.find("MEMBER"), std::string::npos);
  EXPECT_EQ(in.out.find("NOT-MEMBER"), std::string::npos);
}
