#pragma once

// Verification suites: batteries of property and oracle checks at pinned
// meshes, levels and seeds. Each check names the acceptance criterion it
// certifies (0 for supporting checks).

#include "bbem/common.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bbem {

enum class Relation { Less, LessEqual, GreaterEqual, Greater, Equal };

std::string to_string(Relation r);

struct CheckResult {
  std::string name;
  int criterion = 0;
  double value = 0.0;
  Relation relation = Relation::LessEqual;
  double threshold = 0.0;
  bool passed = false;
  /// Wall-clock checks are excluded from the reproducible report fields.
  bool timing = false;
  std::string detail;
  /// Per-level or per-parameter values behind `value`.
  std::vector<double> series;
};

/// Evaluates value <relation> threshold.
CheckResult make_check(std::string name, int criterion, double value, Relation relation, double threshold,
                       std::string detail = {}, std::vector<double> series = {});

inline constexpr std::uint64_t kDefaultSuiteSeed = 0x6262656d5eedull;

struct SuiteOptions {
  std::uint64_t seed = kDefaultSuiteSeed;
  /// Finest refinement level; the pinned acceptance scale is 3.
  int max_level = 3;
};

struct SuiteReport {
  std::string name;
  std::uint64_t seed = 0;
  int max_level = 0;
  std::vector<CheckResult> checks;
  double wall_time_s = 0.0;

  bool passed() const;
  /// With include_timing false the document holds only reproducible fields:
  /// timing checks and wall times are omitted.
  std::string to_json(bool include_timing = true) const;
};

const std::vector<std::string>& suite_names();

/// Throws UsageError for an unknown name.
SuiteReport verify_suite(const std::string& name, const SuiteOptions& options = {});

}  // namespace bbem
