#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "promc/certificate.hpp"
#include "promc/cli.hpp"

using namespace promc;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
  std::string all() const { return out + err; }
};

Outcome run(std::vector<std::string> args) {
  std::vector<const char*> argv{"promc"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return std::string(PROMC_SOURCE_DIR) + "/samples/" + name + ".json"; }
std::string fixture(const std::string& name) { return std::string(PROMC_SOURCE_DIR) + "/tests/fixtures/" + name + ".json"; }

std::string scratch(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("promc_cli_" + name + ".json")).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST(Cli, HomCountsOnSamples) {
  auto r = run({"hom", sample("collapse")});
  EXPECT_EQ(r.code, 0) << r.all();
  EXPECT_TRUE(contains(r.out, "hom(X, Y): 1 class"));
  r = run({"hom", sample("singleton")});
  EXPECT_EQ(r.code, 0) << r.all();
}

TEST(Cli, DetectSpecialExitReflectsVerdict) {
  auto r = run({"detect-special", sample("collapse"), "--map", "f", "--kind", "fib"});
  EXPECT_EQ(r.code, 0) << r.all();
  EXPECT_TRUE(contains(r.out, "special fib"));
  r = run({"detect-special", sample("collapse"), "--map", "f", "--kind", "acyclic-fib"});
  EXPECT_EQ(r.code, 1) << r.all();
  EXPECT_TRUE(contains(r.out, "fails at level 1"));
  r = run({"detect-special", sample("collapse"), "--map", "f", "--kind", "cofib"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, EverySubcommandSucceedsOnItsSample) {
  const std::vector<std::vector<std::string>> cases = {
      {"levelize", sample("pro_iso"), "--map", "f"},
      {"matching", sample("collapse"), "--map", "f"},
      {"matching", sample("collapse"), "--map", "f", "--level", "1"},
      {"factor", sample("collapse"), "--map", "f", "--mode", "L1"},
      {"factor", sample("disk"), "--map", "q", "--mode", "L2"},
      {"pro-factor-iso", sample("pro_iso"), "--map", "f"},
      {"cocell", sample("collapse"), "--map", "f", "--kind", "fib"},
      {"tower-limit", sample("tower")},
      {"adjunction", sample("tower")},
  };
  for (const auto& c : cases) {
    const auto r = run(c);
    EXPECT_EQ(r.code, 0) << c[0] << ": " << r.all();
    EXPECT_TRUE(r.err.empty()) << c[0] << ": " << r.err;
  }
}

TEST(Cli, TowerOutputsReportDepth) {
  auto r = run({"tower-limit", sample("tower")});
  EXPECT_TRUE(contains(r.out, "lim Y = {p,q}")) << r.out;
  r = run({"adjunction", sample("tower"), "--depth", "5"});
  EXPECT_EQ(r.code, 0) << r.all();
  EXPECT_TRUE(contains(r.out, "to depth 5")) << r.out;
}

TEST(Cli, EmittedCertificatesVerify) {
  const std::vector<std::vector<std::string>> cases = {
      {"factor", sample("collapse"), "--map", "f", "--mode", "L1"},
      {"factor", sample("disk"), "--map", "q", "--mode", "L2"},
      {"pro-factor-iso", sample("pro_iso"), "--map", "f"},
      {"levelize", sample("pro_iso"), "--map", "f"},
      {"cocell", sample("collapse"), "--map", "f", "--kind", "fib"},
      {"adjunction", sample("tower")},
      {"hom", sample("collapse")},
  };
  int n = 0;
  for (auto c : cases) {
    const auto path = scratch("emit" + std::to_string(n++));
    c.push_back("-o");
    c.push_back(path);
    const auto r = run(c);
    ASSERT_EQ(r.code, 0) << c[0] << ": " << r.all();
    const auto v = run({"verify", path});
    EXPECT_EQ(v.code, 0) << c[0] << ": " << v.all();
    EXPECT_TRUE(contains(v.out, "certificate verified")) << v.out;
    std::filesystem::remove(path);
  }
}

TEST(Cli, CertificatesAreByteIdenticalAcrossRuns) {
  const auto a = scratch("same_a"), b = scratch("same_b");
  ASSERT_EQ(run({"pro-factor-iso", sample("pro_iso"), "--map", "f", "-o", a}).code, 0);
  ASSERT_EQ(run({"pro-factor-iso", sample("pro_iso"), "--map", "f", "-o", b}).code, 0);
  EXPECT_FALSE(slurp(a).empty());
  EXPECT_EQ(slurp(a), slurp(b));
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(Cli, CheckAxiomsIsSeeded) {
  const auto a = run({"check-axioms", "--trials", "2", "--seed", "11", "--instance", "set-bij"});
  const auto b = run({"check-axioms", "--trials", "2", "--seed", "11", "--instance", "set-bij"});
  EXPECT_EQ(a.code, 0) << a.all();
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(contains(a.out, "seed 11"));
  EXPECT_TRUE(contains(a.out, "set-bij factor-L1: 2/2"));
}

TEST(Cli, SeedFallsBackToTheEnvironment) {
  ::setenv("PROMC_SEED", "42", 1);
  auto r = run({"check-axioms", "--trials", "1", "--instance", "chain-f2"});
  EXPECT_EQ(r.code, 0) << r.all();
  EXPECT_TRUE(contains(r.out, "seed 42")) << r.out;
  ::setenv("PROMC_SEED", "minus one", 1);
  r = run({"check-axioms", "--trials", "1", "--instance", "chain-f2"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(contains(r.all(), "PROMC_SEED"));
  ::unsetenv("PROMC_SEED");
  r = run({"check-axioms", "--trials", "1", "--instance", "chain-f2"});
  EXPECT_TRUE(contains(r.out, "seed 0")) << r.out;
}

TEST(Cli, UsageAndInputErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"hom", "/nonexistent/promc.json"}).code, 2);
  EXPECT_EQ(run({"factor", sample("collapse"), "--map", "f", "--mode", "L3"}).code, 2);
  EXPECT_EQ(run({"factor", sample("collapse"), "--map", "nope"}).code, 2);
  EXPECT_EQ(run({"two-of-three", sample("pro_iso"), "--side", "up", "--top", "f", "--left", "idX", "--right", "idY",
                 "--bottom", "f"})
                .code,
            2);
  // Several maps and no --map.
  const auto r = run({"factor", sample("pro_iso")});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(contains(r.err, "--map")) << r.err;
}

TEST(Cli, FixturesFailWithTheirWitness) {
  auto r = run({"hom", fixture("broken_functoriality"), "--source", "X", "--target", "X"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(contains(r.all(), "@ objects.X")) << r.all();
  r = run({"detect-special", fixture("non_natural_map"), "--map", "g"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(contains(r.all(), "@ maps.g")) << r.all();
  r = run({"verify", fixture("falsified_certificate")});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(contains(r.all(), "claims[1]")) << r.all();
  r = run({"check-axioms", fixture("falsified_special"), "--trials", "1", "--seed", "0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(contains(r.all(), "falsified at level 1")) << r.all();
}

TEST(Cli, TamperedCertificateOnDiskIsRejected) {
  const auto path = scratch("tamper");
  ASSERT_EQ(run({"factor", sample("collapse"), "--map", "f", "--mode", "L1", "-o", path}).code, 0);
  auto c = io::json::parse(slurp(path));
  for (auto& claim : c["claims"])
    if (claim["kind"] == "special") claim["levels"]["1"]["we"] = !claim["levels"]["1"]["we"].get<bool>();
  std::ofstream(path) << c.dump(2);
  const auto r = run({"verify", path});
  EXPECT_EQ(r.code, 1) << r.all();
  std::filesystem::remove(path);
}
