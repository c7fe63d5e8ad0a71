#include "cli.hpp"

#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "bbem");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = bbem::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, UnknownSuiteIsUsageError) {
  const Outcome o = run({"verify", "--suite", "nonsense"});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("unknown suite"), std::string::npos);
}

TEST(Cli, ParseErrorsAreUsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"kernels", "--eval", "1,2"}).code, 2);
  EXPECT_EQ(run({"kernels", "--eval", "1,2", "--alpha", "1"}).code, 2);
  EXPECT_EQ(run({"kernels", "--eval", "0,0,0", "--alpha", "1"}).code, 2);
  EXPECT_EQ(run({"solve", "--config", "/nonexistent/config.json"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, KernelsPrintsTensor) {
  const Outcome o = run({"kernels", "--eval", "1,0,0", "--alpha", "1"});
  ASSERT_EQ(o.code, 0);
  const auto j = nlohmann::json::parse(o.out);
  // G_11(e_1) = (2 - 4/e) / (4 pi) for alpha = 1.
  EXPECT_NEAR(j["G"][0][0].get<double>(), (2.0 - 4.0 / std::exp(1.0)) / (4.0 * M_PI), 1e-14);
  EXPECT_NEAR(j["Pi"][0].get<double>(), 1.0 / (4.0 * M_PI), 1e-15);
}

TEST(Cli, VerifyKernelsPasses) {
  const Outcome o = run({"verify", "--suite", "kernels"});
  EXPECT_EQ(o.code, 0) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j["suite"], "kernels");
  EXPECT_TRUE(j["passed"].get<bool>());
}
