#pragma once

// JSON run configuration, the single-run driver and the convergence study.
// Schema: tools/config.schema.json.

#include "bbem/semilinear.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace bbem {

enum class RunKind { Dirichlet, Neumann, Mixed, Semilinear };

struct GeometryConfig {
  enum class Kind { Icosphere, Cube, OffFile } kind = Kind::Icosphere;
  int level = 2;
  double size = 1.0;  ///< sphere radius or cube side
  std::string path;   ///< OFF file, resolved against the config's directory
};

/// Boundary or volume field from a fixed catalog.
///   zero
///   constant        value
///   rotation        value x x (rigid rotation with angular velocity `value`)
///   trig            amplitude * (sin(pi y), cos(pi z), sin(pi x) cos(pi y))
///   file            one "vx vy vz" line per panel (boundary fields only)
struct FieldConfig {
  enum class Kind { Zero, Constant, Rotation, Trig, File } kind = Kind::Zero;
  Vec3 value = Vec3::Zero();
  double amplitude = 1.0;
  std::string path;
};

struct DataConfig {
  bool manufactured = true;
  std::optional<Vec3> source_point;  ///< default_source_point() when absent
  int column = 1;
  FieldConfig dirichlet;
  FieldConfig neumann;
};

struct PicardSettings {
  PicardConfig iteration;
  int samples = 8;
  /// Scale the data to this multiple of zeta_est (data sum norm).
  std::optional<double> scale_to_zeta;
};

struct EvaluationConfig {
  std::vector<Vec3> points;  ///< explicit points; otherwise interior_sample_points
  int count = 40;
  double fraction = 0.6;
};

struct RunConfig {
  RunKind kind = RunKind::Dirichlet;
  GeometryConfig geometry;
  std::optional<PatchRule> patches;
  BrinkmanParams params;
  DataConfig data;
  std::optional<FieldConfig> forcing;
  int volume_resolution = 16;
  SolverOptions solver;
  PicardSettings picard;
  EvaluationConfig evaluation;
  std::vector<int> levels;  ///< convergence study only
  std::string output_directory = "bbem_out";
  std::uint64_t seed = 0x6262656d5eedull;
};

std::string to_string(RunKind kind);

/// Throws ConfigError naming the JSON path of the first violation.
RunConfig parse_config(const nlohmann::json& document, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);

SurfaceMesh build_geometry(const GeometryConfig& geometry, int level);
BoundaryField sample_boundary_field(const SurfaceMesh& mesh, const FieldConfig& field);
VolumeField sample_volume_forcing(const VolumeGrid& grid, const FieldConfig& field);

struct RunOutcome {
  /// Reproducible report (no wall-clock values).
  nlohmann::ordered_json report;
  nlohmann::ordered_json timing;
  std::vector<Vec3> points;
  FieldSolution fields;
};

/// Runs one solve. Writes report.json, timing.json and solution.csv (and
/// contraction.json for semilinear runs) to `out` when it is non-empty.
RunOutcome run_config(const RunConfig& config, const std::filesystem::path& out = {});
RunOutcome run_config(const std::filesystem::path& config_path, const std::filesystem::path& out = {});

/// Panel budget of the convergence study.
inline constexpr int kMaxStudyPanels = 5000;

struct ConvergenceRow {
  int level = 0;
  int num_panels = 0;
  /// Interior limit of the representation against the exact trace, on at most 64 panels.
  double trace_l2 = 0.0;
  double interior_l2 = 0.0;
  /// Double-layer jump for double-layer handles, single-layer traction jump otherwise.
  double jump_residual = 0.0;
  std::optional<double> observed_ratio;  ///< previous interior error / this one
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  void write_csv(std::ostream& out) const;
  static ConvergenceTable read_csv(std::istream& in);
};

/// Manufactured-solution study over config.levels (dirichlet, neumann or
/// mixed). Refuses levels whose mesh exceeds kMaxStudyPanels.
ConvergenceTable convergence_study(const RunConfig& config);

}  // namespace bbem
