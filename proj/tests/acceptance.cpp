// Acceptance gate: runs every verification suite at the pinned scale and
// prints one PASS/FAIL line per criterion. Determinism (criterion 12) reruns
// every suite with 4 worker threads and compares the reproducible JSON with
// the single-thread run byte for byte.

#include "bbem/parallel.hpp"
#include "bbem/suites.hpp"

#include <chrono>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

using namespace bbem;

namespace {

constexpr int kCriteria = 12;

const char* const kTitles[kCriteria] = {
    "kernel identities",
    "Stokes limit and decay envelope",
    "jump relations",
    "null space and invertibility of the adjoint double layer",
    "single layer annihilates the normal",
    "manufactured Dirichlet and Neumann solves",
    "mixed solve on the creased cube",
    "Neumann-to-Dirichlet consistency",
    "Green identity",
    "Newtonian potential",
    "semilinear Picard iteration",
    "determinism across thread counts",
};

struct Tally {
  int checks = 0;
  std::vector<std::string> failures;
};

}  // namespace

int main() {
  std::map<int, Tally> tally;
  std::map<std::string, std::string> single_thread;

  set_thread_count(1);
  for (const std::string& name : suite_names()) {
    const SuiteReport report = verify_suite(name);
    std::printf("suite %-10s %s  (%.1f s)\n", name.c_str(), report.passed() ? "passed" : "FAILED", report.wall_time_s);
    for (const CheckResult& c : report.checks) {
      std::printf("  [%s] c%-2d %-40s %.6g %s %.6g%s%s\n", c.passed ? "ok" : "FAIL", c.criterion, c.name.c_str(),
                  c.value, to_string(c.relation).c_str(), c.threshold, c.detail.empty() ? "" : "  ",
                  c.detail.c_str());
      if (c.criterion < 1 || c.criterion > kCriteria) continue;
      ++tally[c.criterion].checks;
      if (!c.passed) tally[c.criterion].failures.push_back(name + "/" + c.name);
    }
    single_thread[name] = report.to_json(false);
    std::fflush(stdout);
  }

  set_thread_count(4);
  for (const std::string& name : suite_names()) {
    const bool same = verify_suite(name).to_json(false) == single_thread[name];
    std::printf("suite %-10s 1 vs 4 threads: %s\n", name.c_str(), same ? "identical" : "DIFFERENT");
    ++tally[12].checks;
    if (!same) tally[12].failures.push_back(name);
    std::fflush(stdout);
  }

  std::printf("\n");
  int failed = 0;
  for (int k = 1; k <= kCriteria; ++k) {
    const Tally& t = tally[k];
    const bool pass = t.checks > 0 && t.failures.empty();
    if (!pass) ++failed;
    std::printf("CRITERION %2d %s: %s (%d checks", k, pass ? "PASS" : "FAIL", kTitles[k - 1], t.checks);
    for (const std::string& f : t.failures) std::printf("; failed %s", f.c_str());
    std::printf(")\n");
  }
  std::printf("%d of %d criteria pass\n", kCriteria - failed, kCriteria);
  return failed == 0 ? 0 : 1;
}
