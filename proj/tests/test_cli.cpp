// Runs the hvol executable and checks reports and exit codes.

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <sys/wait.h>

#include <json.hpp>

using Json = nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(HVOL_CLI) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string model(const std::string& name) { return std::string(HVOL_MODELS) + "/" + name; }

}  // namespace

TEST(Cli, ComputeAffineSpace) {
  auto r = run("compute --model " + model("c3.json") + " --valuation 1,1,1");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["results"]["nvol"], "27");
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["schema"], 1);
  for (const auto& c : j["checks"]) {
    EXPECT_TRUE(c.contains("lhs"));
    EXPECT_TRUE(c.contains("rhs"));
    EXPECT_TRUE(c.contains("tolerance"));
  }
}

TEST(Cli, InlineModelMatchesFile) {
  auto a = run("compute --model " + model("conifold.json"));
  auto b = run("compute --model '{\"schema\":1,\"type\":\"toric_cone\",\"label\":\"conifold\",\"rays\":[[1,0,0],[1,1,0],[1,0,1],[1,1,1]]}'");
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, MinimizeConjecturedWeight) {
  auto r = run("minimize --model " + model("a4_3.json"));
  ASSERT_EQ(r.exit_code, 0) << r.out;
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["results"]["min_nvol"], "27/2");
  const auto& a = j["results"]["argmin_approx"];
  EXPECT_NEAR(a[3].get<double>() / a[0].get<double>(), 0.5, 1e-6);
}

TEST(Cli, MinimizeIsByteDeterministic) {
  const std::string args = "minimize --model " + model("conifold.json") + " --seed 5";
  auto a = run(args), b = run(args);
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  auto csv = run(args + " --format csv");
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "step,value,x0,x1,x2");
}

TEST(Cli, QuotientCyclic) {
  auto r = run("quotient --group '{\"type\":\"cyclic\",\"r\":7,\"a\":3}'");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_EQ(Json::parse(r.out)["results"]["min_nvol"], "4/7");
  auto q8 = run("quotient --group " + model("group_q8.json"));
  EXPECT_EQ(Json::parse(q8.out)["results"]["min_nvol"], "1/2");
}

TEST(Cli, FiltrationAutoLambda) {
  auto r = run("filtration --model " + model("a1_3.json") + " --v0 1,1,1,1 --v1 1,1,1,2 --lambda auto");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["results"]["fujita_gap"], "1/3");
  EXPECT_NEAR(j["results"]["lambda"].get<double>(), 2.0 / 3, 1e-15);
  EXPECT_NEAR(j["results"]["derivative_s0"]["formC"].get<double>(), 2.0 / 3, 1e-12);
  auto csv = run("filtration --model " + model("a1_3.json") + " --v0 1,1,1,1 --v1 1,1,1,2 --format csv --samples 10");
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 12);
}

TEST(Cli, SelftestFilterAndMutation) {
  auto ok = run("selftest --filter quotient");
  ASSERT_EQ(ok.exit_code, 0) << ok.out;
  EXPECT_EQ(Json::parse(ok.out)["results"]["criteria"].size(), 3u);
  auto bad = run("selftest --filter fujita_sharpness --mutate volume");
  EXPECT_EQ(bad.exit_code, 2);
  EXPECT_EQ(Json::parse(bad.out)["status"], "check_failed");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("compute --model '{\"schema\":1,\"type\":\"cube\"}'").exit_code, 3);
  EXPECT_EQ(run("compute --model '{broken'").exit_code, 3);
  EXPECT_EQ(run("compute --model " + model("c3.json") + " --valuation 1,0,1").exit_code, 3);
  EXPECT_EQ(run("selftest --filter nothing-matches").exit_code, 3);
  EXPECT_EQ(run("frobnicate").exit_code, 3);
  auto err = run("compute --model '{\"schema\":1,\"type\":\"polarized_cone\",\"n\":3,\"r\":\"4\",\"degH\":\"1\"}'");
  EXPECT_EQ(err.exit_code, 3);
  EXPECT_EQ(Json::parse(err.out)["error"]["code"], "InvalidIndex");
}
