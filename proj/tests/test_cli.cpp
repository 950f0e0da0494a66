#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pathlim/cli.hpp"
#include "support.hpp"

using pathlim::testing::data_path;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "pathlim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = pathlim::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string g(int i) { return data_path("g" + std::to_string(i) + ".txt"); }

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = ::testing::TempDir() + name;
  std::ofstream(path) << text;
  return path;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(CliAnalyze, Fixtures) {
  const auto r4 = run({"analyze", g(4)});
  EXPECT_EQ(r4.code, 0);
  EXPECT_TRUE(contains(r4.out, "classes: 2"));
  EXPECT_TRUE(contains(r4.out, "rho: 1.41421356"));
  EXPECT_TRUE(contains(r4.out, "height: 1"));
  EXPECT_TRUE(contains(r4.out, "umbrella: true"));

  const auto r3 = run({"analyze", g(3), "--from", "a"});
  EXPECT_EQ(r3.code, 0);
  EXPECT_TRUE(contains(r3.out, "height: 2"));
  EXPECT_TRUE(contains(r3.out, "umbrella: false"));
  EXPECT_TRUE(contains(r3.out, "U(a): {a}"));
}

TEST(CliAnalyze, Errors) {
  EXPECT_EQ(run({"analyze", temp_file("empty.txt", "")}).code, pathlim::kExitInput);
  EXPECT_EQ(run({"analyze", temp_file("bad.txt", "a b\n")}).code, pathlim::kExitInput);
  EXPECT_EQ(run({"analyze", data_path("missing.txt")}).code, pathlim::kExitInput);
  const auto dag = run({"analyze", temp_file("dag.txt", "a b 1\n")});
  EXPECT_EQ(dag.code, pathlim::kExitDegenerate);
  EXPECT_TRUE(contains(dag.err, "spectral radius 0"));
  EXPECT_EQ(run({"analyze", g(4), "--from", "z"}).code, pathlim::kExitInput);
}

TEST(CliResidual, Examples) {
  const auto r2 = run({"residual", g(2), "--check"});
  EXPECT_EQ(r2.code, 0);
  EXPECT_TRUE(contains(r2.out, "vertex,a,b\na,0,1\nb,0,1\n"));
  EXPECT_TRUE(contains(r2.out, "check-gap: "));

  const auto r3 = run({"residual", g(3)});
  EXPECT_EQ(r3.code, 0);
  EXPECT_EQ(lines(r3.out).front(), "height: 2");

  EXPECT_EQ(run({"residual", g(3), "--method", "umbrella"}).code, pathlim::kExitPrecondition);
  EXPECT_EQ(run({"residual", g(3), "--method", "auto"}).code, 0);
  EXPECT_EQ(run({"residual", g(3), "--method", "magic"}).code, pathlim::kExitInput);
  EXPECT_EQ(run({"residual", g(4), "--method", "umbrella"}).out, run({"residual", g(4), "--method", "auto"}).out);
}

TEST(CliKernel, Examples) {
  const auto k2 = run({"kernel", g(2), "--from", "a"});
  EXPECT_EQ(k2.code, 0);
  EXPECT_TRUE(contains(k2.out, "a,0.5,0.5\nb,0,1\n"));
  const auto k3 = run({"kernel", g(3), "--from", "a"});
  EXPECT_TRUE(contains(k3.out, "U(a) = {a}"));
  EXPECT_TRUE(contains(k3.out, "vertex,a\na,1\n"));
  EXPECT_EQ(run({"kernel", g(4), "--from", "z"}).code, pathlim::kExitInput);
  EXPECT_EQ(run({"kernel", g(4)}).code, pathlim::kExitInput);
}

TEST(CliConverge, Examples) {
  const auto c4 = run({"converge", g(4), "--from", "a"});
  EXPECT_EQ(c4.code, 0);
  EXPECT_TRUE(contains(c4.out, "verdict: DIVERGES"));
  EXPECT_TRUE(contains(c4.out, "witness: a b\n"));
  EXPECT_TRUE(contains(c4.out, "witness limits: 0.666666667 0.5"));
  EXPECT_TRUE(contains(run({"converge", g(2), "--from", "a"}).out, "verdict: CONVERGES (aperiodic)"));
  const auto c5 = run({"converge", g(5), "--from", "a"});
  EXPECT_TRUE(contains(c5.out, "verdict: CONVERGES\n"));
  const auto short4 = run({"converge", g(4), "--from", "a", "--max-len", "1"});
  EXPECT_EQ(lines(short4.out).size(), lines(c4.out).size() - 6);
}

TEST(CliSample, ShapeAndDeterminism) {
  const std::vector<std::string> cmd{"sample", g(2), "--from", "a", "--mode", "uniform:8", "--count", "10", "--seed", "7"};
  const auto first = run(cmd);
  EXPECT_EQ(first.code, 0);
  const auto ls = lines(first.out);
  ASSERT_EQ(ls.size(), 10u);
  for (const auto& l : ls) {
    std::istringstream in(l);
    int n = 0;
    for (std::string t; in >> t;) ++n;
    EXPECT_EQ(n, 9);
  }
  EXPECT_EQ(run(cmd).out, first.out);
}

TEST(CliSample, SeedFromEnvironment) {
  const std::vector<std::string> base{"sample", g(2), "--from", "a", "--mode", "walk:12", "--count", "20"};
  auto with_seed = base;
  with_seed.insert(with_seed.end(), {"--seed", "99"});
  const auto explicit_seed = run(with_seed).out;
  ::setenv("PATHLIM_SEED", "99", 1);
  const auto from_env = run(base).out;
  auto other = base;
  other.insert(other.end(), {"--seed", "5"});
  const auto overridden = run(other).out;
  ::setenv("PATHLIM_SEED", "not-a-number", 1);
  const auto bad = run(base).code;
  ::unsetenv("PATHLIM_SEED");
  EXPECT_EQ(from_env, explicit_seed);
  EXPECT_EQ(overridden, explicit_seed);
  EXPECT_EQ(bad, pathlim::kExitInput);
}

TEST(CliSample, Errors) {
  EXPECT_EQ(run({"sample", g(2), "--from", "a", "--mode", "boltzmann:0.6"}).code, pathlim::kExitPrecondition);
  EXPECT_EQ(run({"sample", g(2), "--from", "a", "--mode", "gibbs:1"}).code, pathlim::kExitInput);
  EXPECT_EQ(run({"sample", g(2), "--from", "a"}).code, pathlim::kExitInput);
  const auto dag = temp_file("dag2.txt", "a b 1\n");
  EXPECT_EQ(run({"sample", dag, "--from", "a", "--mode", "uniform:3"}).code, pathlim::kExitPrecondition);
  EXPECT_EQ(run({"sample", dag, "--from", "a", "--mode", "walk:3"}).code, pathlim::kExitDegenerate);
}

TEST(CliVerify, Fixtures) {
  for (int i = 1; i <= 5; ++i) {
    const auto r = run({"verify", g(i)});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_FALSE(contains(r.out, "FAIL"));
  }
}

TEST(CliVerify, CorruptionHook) {
  ::setenv("PATHLIM_VERIFY_CORRUPT", "1", 1);
  const auto r = run({"verify", g(2)});
  ::unsetenv("PATHLIM_VERIFY_CORRUPT");
  EXPECT_EQ(r.code, pathlim::kExitVerifyFailed);
  EXPECT_TRUE(contains(r.out, "FAIL residual"));
}

TEST(CliVerify, EnumerationCap) {
  // Complete digraph on four vertices: 4^k paths of length k from each vertex.
  std::string text;
  for (const char* a : {"a", "b", "c", "d"})
    for (const char* b : {"a", "b", "c", "d"}) text += std::string(a) + " " + b + " 1\n";
  const auto r = run({"verify", temp_file("complete.txt", text), "--enum-cap", "1000"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(contains(r.out, "WARN path-counts"));
  EXPECT_TRUE(contains(r.out, "PASS residual"));
}

TEST(CliVerify, DegenerateInput) {
  const auto r = run({"verify", temp_file("dag3.txt", "a b 1\nb c 1\n")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "SKIP residual"));
}

TEST(CliExport, Variants) {
  const auto dot = run({"export", g(4), "--dot"});
  EXPECT_EQ(dot.code, 0);
  EXPECT_TRUE(contains(dot.out, "digraph condensation"));
  const auto theta = run({"export", g(3), "--theta"});
  EXPECT_EQ(theta.out, "vertex,a,b\na,0,1\nb,0,0\n");
  const auto proj = run({"export", g(4), "--projector"});
  EXPECT_EQ(proj.out, "vertex,a,b,c\na,0,0.5,1\nb,0,1,0\nc,0,0,1\n");
  EXPECT_TRUE(contains(run({"export", g(2), "--kernel", "--from", "a"}).out, "a,0.5,0.5"));
  EXPECT_EQ(run({"export", g(2)}).code, pathlim::kExitInput);
  EXPECT_EQ(run({"export", g(2), "--dot", "--theta"}).code, pathlim::kExitInput);
  EXPECT_EQ(run({"export", g(2), "--kernel"}).code, pathlim::kExitInput);
  EXPECT_EQ(run({"export", g(3), "--projector"}).code, pathlim::kExitPrecondition);
}

TEST(CliUsage, HelpAndUnknown) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({}).code, pathlim::kExitInput);
  EXPECT_EQ(run({"frobnicate"}).code, pathlim::kExitInput);
  EXPECT_EQ(run({"analyze", g(2), "-f", "a"}).code, pathlim::kExitInput);
}
