#include "cli.hpp"

#include "bbem/config.hpp"
#include "bbem/kernels.hpp"
#include "bbem/suites.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace bbem::cli {

namespace {

constexpr int kOk = 0;
constexpr int kNumerical = 1;
constexpr int kUsage = 2;

Vec3 parse_point(const std::string& text) {
  Vec3 x;
  std::size_t begin = 0;
  for (int k = 0; k < 3; ++k) {
    const std::size_t end = k < 2 ? text.find(',', begin) : text.size();
    if (end == std::string::npos) throw UsageError("--eval expects x,y,z");
    const char* first = text.data() + begin;
    const char* last = text.data() + end;
    const auto r = std::from_chars(first, last, x[k]);
    if (r.ec != std::errc() || r.ptr != last) throw UsageError("--eval: cannot parse '" + std::string(first, last) + "'");
    begin = end + 1;
  }
  return x;
}

nlohmann::ordered_json kernel_values(const Vec3& x, double alpha) {
  BrinkmanParams params;
  params.alpha = alpha;
  const Mat3 g = brinkman_velocity_tensor(x, params);
  const Vec3 pi = pressure_vector(x);
  nlohmann::ordered_json j;
  j["x"] = {x[0], x[1], x[2]};
  j["alpha"] = alpha;
  j["G"] = nlohmann::ordered_json::array();
  for (int i = 0; i < 3; ++i) j["G"].push_back({g(i, 0), g(i, 1), g(i, 2)});
  j["Pi"] = {pi[0], pi[1], pi[2]};
  return j;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Boundary-integral solver for Brinkman and Darcy-Forchheimer-Brinkman flow"};
  app.require_subcommand(1);

  std::string config_path, out_dir, suite, eval_point;
  int max_level = 3;
  std::uint64_t seed = kDefaultSuiteSeed;
  double alpha = 1.0;

  auto* solve = app.add_subcommand("solve", "Run one configured problem and write its reports");
  solve->add_option("--config", config_path, "JSON run configuration")->required();
  solve->add_option("--out", out_dir, "Output directory (overrides the config)");

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", suite, "kernels, jumps, nullspaces, green, solvers, mixed or semilinear")->required();
  verify->add_option("--max-level", max_level, "Finest refinement level");
  verify->add_option("--seed", seed, "Sampling seed");
  verify->add_option("--out", out_dir, "Write the JSON report to this file");

  auto* converge = app.add_subcommand("converge", "Run a refinement study and print its CSV table");
  converge->add_option("--config", config_path, "JSON run configuration with a levels list")->required();
  converge->add_option("--out", out_dir, "Write the CSV table to this file");

  auto* kernels = app.add_subcommand("kernels", "Evaluate the fundamental solution at one point");
  kernels->add_option("--eval", eval_point, "Point x,y,z")->required();
  kernels->add_option("--alpha", alpha, "Brinkman parameter")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, r;
    const int code = app.exit(e, o, r);
    out << o.str();
    err << r.str();
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve) {
      const RunConfig c = load_config(config_path);
      const std::filesystem::path dir = out_dir.empty() ? std::filesystem::path(c.output_directory) : std::filesystem::path(out_dir);
      const RunOutcome r = run_config(c, dir);
      out << r.report.dump(2) << '\n';
      return kOk;
    }
    if (*verify) {
      SuiteOptions options;
      options.seed = seed;
      options.max_level = max_level;
      const SuiteReport report = verify_suite(suite, options);
      const std::string text = report.to_json(true);
      if (!out_dir.empty()) {
        std::ofstream f(out_dir);
        if (!f) throw UsageError(out_dir + ": cannot write");
        f << text << '\n';
      }
      out << text << '\n';
      for (const auto& check : report.checks)
        err << (check.passed ? "PASS " : "FAIL ") << check.name << '\n';
      return report.passed() ? kOk : kNumerical;
    }
    if (*converge) {
      const ConvergenceTable table = convergence_study(load_config(config_path));
      if (!out_dir.empty()) {
        std::ofstream f(out_dir);
        if (!f) throw UsageError(out_dir + ": cannot write");
        table.write_csv(f);
      }
      table.write_csv(out);
      return kOk;
    }
    if (*kernels) {
      if (!(alpha >= 0.0)) throw UsageError("--alpha must be >= 0");
      const Vec3 x = parse_point(eval_point);
      if (x.norm() == 0.0) throw UsageError("--eval: the kernels are singular at the origin");
      out << kernel_values(x, alpha).dump(2) << '\n';
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace bbem::cli
