#include "bbem/config.hpp"

#include "bbem/diagnostics.hpp"
#include "bbem/manufactured.hpp"
#include "bbem/potentials.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace bbem {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string to_string(RunKind kind) {
  switch (kind) {
    case RunKind::Dirichlet: return "dirichlet";
    case RunKind::Neumann: return "neumann";
    case RunKind::Mixed: return "mixed";
    case RunKind::Semilinear: return "semilinear";
  }
  return "unknown";
}

namespace {

// Typed access to a JSON object that reports failures by path.
class Node {
 public:
  Node(const json& value, std::string path) : value_(&value), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(path_ + ": " + what); }

  const std::string& path() const { return path_; }
  const json& raw() const { return *value_; }

  void require_object(std::initializer_list<const char*> allowed) const {
    if (!value_->is_object()) fail("expected an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [k, v] : value_->items())
      if (!keys.count(k)) throw ConfigError(path_ + "." + k + ": unknown key");
  }
  bool has(const char* key) const { return value_->contains(key); }
  Node at(const char* key) const {
    if (!value_->contains(key)) throw ConfigError(path_ + "." + key + ": missing required key '" + key + "'");
    return Node((*value_)[key], path_ + "." + key);
  }
  Node at(std::size_t i) const { return Node((*value_)[i], path_ + "[" + std::to_string(i) + "]"); }

  std::string string() const {
    if (!value_->is_string()) fail("expected a string");
    return value_->get<std::string>();
  }
  double number() const {
    if (!value_->is_number()) fail("expected a number");
    const double v = value_->get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }
  int integer() const {
    if (!value_->is_number_integer()) fail("expected an integer");
    return value_->get<int>();
  }
  bool boolean() const {
    if (!value_->is_boolean()) fail("expected true or false");
    return value_->get<bool>();
  }
  std::size_t size() const {
    if (!value_->is_array()) fail("expected an array");
    return value_->size();
  }
  Vec3 vec3() const {
    if (!value_->is_array() || value_->size() != 3) fail("expected an array of 3 numbers");
    return Vec3(at(std::size_t{0}).number(), at(std::size_t{1}).number(), at(std::size_t{2}).number());
  }

  std::string string_or(const char* key, std::string fallback) const {
    return has(key) ? at(key).string() : fallback;
  }
  double number_or(const char* key, double fallback) const { return has(key) ? at(key).number() : fallback; }
  int integer_or(const char* key, int fallback) const { return has(key) ? at(key).integer() : fallback; }

 private:
  const json* value_;
  std::string path_;
};

RunKind parse_kind(const Node& n) {
  const std::string s = n.string();
  if (s == "dirichlet") return RunKind::Dirichlet;
  if (s == "neumann") return RunKind::Neumann;
  if (s == "mixed") return RunKind::Mixed;
  if (s == "semilinear") return RunKind::Semilinear;
  n.fail("unknown problem kind '" + s + "' (dirichlet, neumann, mixed, semilinear)");
}

GeometryConfig parse_geometry(const Node& n, const fs::path& base) {
  n.require_object({"type", "level", "radius", "side", "path"});
  GeometryConfig g;
  const std::string type = n.at("type").string();
  if (type == "icosphere") {
    g.kind = GeometryConfig::Kind::Icosphere;
    g.size = n.number_or("radius", 1.0);
  } else if (type == "cube") {
    g.kind = GeometryConfig::Kind::Cube;
    g.size = n.number_or("side", 1.0);
  } else if (type == "off") {
    g.kind = GeometryConfig::Kind::OffFile;
    const fs::path p = base / n.at("path").string();
    if (!fs::exists(p)) n.at("path").fail("file not found: " + p.string());
    g.path = p.string();
  } else {
    n.at("type").fail("unknown geometry '" + type + "' (icosphere, cube, off)");
  }
  g.level = n.integer_or("level", 2);
  if (g.level < 0 || g.level > kMaxMeshLevel) n.at("level").fail("level must lie in [0, 6]");
  if (!(g.size > 0.0)) n.fail("size must be positive");
  return g;
}

PatchLabel parse_label(const Node& n) {
  const std::string s = n.string();
  if (s == "dirichlet") return PatchLabel::Dirichlet;
  if (s == "neumann") return PatchLabel::Neumann;
  n.fail("expected \"dirichlet\" or \"neumann\"");
}

PatchRule parse_patches(const Node& n) {
  n.require_object({"type", "neumann_faces", "normal", "offset", "positive_side", "label"});
  const std::string type = n.at("type").string();
  if (type == "cube_faces") {
    CubeFacesRule r;
    const Node faces = n.at("neumann_faces");
    static const std::set<std::string> names{"+x", "-x", "+y", "-y", "+z", "-z"};
    for (std::size_t i = 0; i < faces.size(); ++i) {
      const std::string f = faces.at(i).string();
      if (!names.count(f)) faces.at(i).fail("unknown cube face '" + f + "'");
      r.neumann_faces.insert(f);
    }
    return r;
  }
  if (type == "plane") {
    PlaneRule r;
    r.normal = n.at("normal").vec3();
    if (r.normal.norm() == 0.0) n.at("normal").fail("normal must be nonzero");
    r.normal.normalize();
    r.offset = n.number_or("offset", 0.0);
    if (n.has("positive_side")) r.positive_side = parse_label(n.at("positive_side"));
    return r;
  }
  if (type == "uniform") return UniformRule{parse_label(n.at("label"))};
  n.at("type").fail("unknown patch rule '" + type + "' (cube_faces, plane, uniform)");
}

FieldConfig parse_field(const Node& n, const fs::path& base, bool allow_file) {
  n.require_object({"type", "value", "amplitude", "path"});
  FieldConfig f;
  const std::string type = n.at("type").string();
  if (type == "zero") {
    f.kind = FieldConfig::Kind::Zero;
  } else if (type == "constant" || type == "rotation") {
    f.kind = type == "constant" ? FieldConfig::Kind::Constant : FieldConfig::Kind::Rotation;
    f.value = n.at("value").vec3();
  } else if (type == "trig") {
    f.kind = FieldConfig::Kind::Trig;
    f.amplitude = n.number_or("amplitude", 1.0);
  } else if (type == "file" && allow_file) {
    f.kind = FieldConfig::Kind::File;
    const fs::path p = base / n.at("path").string();
    if (!fs::exists(p)) n.at("path").fail("file not found: " + p.string());
    f.path = p.string();
  } else {
    n.at("type").fail("unknown field '" + type + "'");
  }
  return f;
}

DataConfig parse_data(const Node& n, const fs::path& base) {
  n.require_object({"type", "source_point", "column", "dirichlet", "neumann"});
  DataConfig d;
  const std::string type = n.at("type").string();
  if (type == "manufactured") {
    d.manufactured = true;
    if (n.has("source_point")) d.source_point = n.at("source_point").vec3();
    d.column = n.integer_or("column", 1);
    if (d.column < 1 || d.column > 3) n.at("column").fail("column must be 1, 2 or 3");
  } else if (type == "fields") {
    d.manufactured = false;
    if (n.has("dirichlet")) d.dirichlet = parse_field(n.at("dirichlet"), base, true);
    if (n.has("neumann")) d.neumann = parse_field(n.at("neumann"), base, true);
  } else {
    n.at("type").fail("unknown data source '" + type + "' (manufactured, fields)");
  }
  return d;
}

}  // namespace

RunConfig parse_config(const json& document, const fs::path& base) {
  const Node root(document, "$");
  root.require_object({"kind", "geometry", "patches", "params", "data", "forcing", "quadrature", "volume",
                       "solver", "picard", "evaluation", "levels", "output", "seed"});
  RunConfig c;
  c.kind = parse_kind(root.at("kind"));
  c.geometry = parse_geometry(root.at("geometry"), base);
  if (root.has("patches")) c.patches = parse_patches(root.at("patches"));

  const Node params = root.at("params");
  params.require_object({"alpha", "beta"});
  c.params.alpha = params.at("alpha").number();
  c.params.beta = params.number_or("beta", 0.0);
  if (c.params.alpha < 0.0) params.at("alpha").fail("alpha must be >= 0");
  if (c.params.beta < 0.0) params.at("beta").fail("beta must be >= 0");

  c.data = parse_data(root.at("data"), base);
  if (root.has("forcing")) c.forcing = parse_field(root.at("forcing"), base, false);

  if (root.has("quadrature")) {
    const Node q = root.at("quadrature");
    q.require_object({"order"});
    c.solver.quadrature.order = q.integer_or("order", 6);
    static const std::set<int> orders{1, 3, 6, 12};
    if (!orders.count(c.solver.quadrature.order)) q.at("order").fail("order must be 1, 3, 6 or 12");
  }
  if (root.has("volume")) {
    const Node v = root.at("volume");
    v.require_object({"resolution"});
    c.volume_resolution = v.integer_or("resolution", 16);
    if (c.volume_resolution < 2 || c.volume_resolution > 256) v.at("resolution").fail("resolution must lie in [2, 256]");
  }
  if (root.has("solver")) {
    const Node s = root.at("solver");
    s.require_object({"flux_tol", "svd_cutoff", "condition_numbers"});
    c.solver.flux_tol = s.number_or("flux_tol", c.solver.flux_tol);
    c.solver.svd_cutoff = s.number_or("svd_cutoff", c.solver.svd_cutoff);
    if (s.has("condition_numbers")) c.solver.condition_numbers = s.at("condition_numbers").boolean();
    if (!(c.solver.flux_tol > 0.0)) s.at("flux_tol").fail("flux_tol must be positive");
    if (!(c.solver.svd_cutoff > 0.0 && c.solver.svd_cutoff < 1.0)) s.at("svd_cutoff").fail("svd_cutoff must lie in (0, 1)");
  }
  if (root.has("picard")) {
    const Node p = root.at("picard");
    p.require_object({"tol", "max_iter", "damping", "samples", "scale_to_zeta"});
    c.picard.iteration.tol = p.number_or("tol", c.picard.iteration.tol);
    c.picard.iteration.max_iter = p.integer_or("max_iter", c.picard.iteration.max_iter);
    c.picard.iteration.damping = p.number_or("damping", c.picard.iteration.damping);
    c.picard.samples = p.integer_or("samples", c.picard.samples);
    if (p.has("scale_to_zeta")) c.picard.scale_to_zeta = p.at("scale_to_zeta").number();
    try {
      c.picard.iteration.validate();
    } catch (const ConfigError& e) {
      p.fail(e.what());
    }
    if (c.picard.samples < 8) p.at("samples").fail("samples must be at least 8");
  }
  if (root.has("evaluation")) {
    const Node e = root.at("evaluation");
    e.require_object({"points", "count", "fraction"});
    if (e.has("points")) {
      const Node pts = e.at("points");
      for (std::size_t i = 0; i < pts.size(); ++i) c.evaluation.points.push_back(pts.at(i).vec3());
    }
    c.evaluation.count = e.integer_or("count", c.evaluation.count);
    c.evaluation.fraction = e.number_or("fraction", c.evaluation.fraction);
    if (c.evaluation.count < 1) e.at("count").fail("count must be positive");
    if (!(c.evaluation.fraction > 0.0 && c.evaluation.fraction < 1.0)) e.at("fraction").fail("fraction must lie in (0, 1)");
  }
  if (root.has("levels")) {
    const Node l = root.at("levels");
    for (std::size_t i = 0; i < l.size(); ++i) {
      const int level = l.at(i).integer();
      if (level < 0 || level > kMaxMeshLevel) l.at(i).fail("level must lie in [0, 6]");
      if (!c.levels.empty() && level <= c.levels.back()) l.at(i).fail("levels must increase");
      c.levels.push_back(level);
    }
  }
  if (root.has("output")) {
    const Node o = root.at("output");
    o.require_object({"directory"});
    c.output_directory = o.at("directory").string();
  }
  if (root.has("seed")) {
    const Node s = root.at("seed");
    if (!s.raw().is_number_unsigned()) s.fail("expected a non-negative integer");
    c.seed = s.raw().get<std::uint64_t>();
  }

  const bool needs_patches = c.kind == RunKind::Mixed || c.kind == RunKind::Semilinear;
  if (needs_patches && !c.patches) throw ConfigError("$.patches: missing required key 'patches' for a " +
                                                     to_string(c.kind) + " run");
  if (c.kind == RunKind::Semilinear && !c.forcing)
    throw ConfigError("$.forcing: missing required key 'forcing' for a semilinear run");
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
  return parse_config(document, path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

SurfaceMesh build_geometry(const GeometryConfig& geometry, int level) {
  switch (geometry.kind) {
    case GeometryConfig::Kind::Icosphere: return build_icosphere(level, geometry.size);
    case GeometryConfig::Kind::Cube: return build_cube(level, geometry.size);
    case GeometryConfig::Kind::OffFile: return read_off_file(geometry.path);
  }
  throw ConfigError("unknown geometry");
}

namespace {

Vec3 catalog_value(const FieldConfig& f, const Vec3& x) {
  switch (f.kind) {
    case FieldConfig::Kind::Zero: return Vec3::Zero();
    case FieldConfig::Kind::Constant: return f.value;
    case FieldConfig::Kind::Rotation: return f.value.cross(x);
    case FieldConfig::Kind::Trig:
      return f.amplitude * Vec3(std::sin(kPi * x.y()), std::cos(kPi * x.z()), std::sin(kPi * x.x()) * std::cos(kPi * x.y()));
    case FieldConfig::Kind::File: break;
  }
  throw ConfigError("file fields cannot be sampled pointwise");
}

}  // namespace

BoundaryField sample_boundary_field(const SurfaceMesh& mesh, const FieldConfig& field) {
  if (field.kind != FieldConfig::Kind::File)
    return BoundaryField::sample(mesh, [&](const Vec3& x) { return catalog_value(field, x); });
  std::ifstream in(field.path);
  if (!in) throw ConfigError(field.path + ": cannot open data file");
  BoundaryField f(mesh);
  for (int p = 0; p < mesh.num_panels(); ++p) {
    Vec3 v;
    if (!(in >> v[0] >> v[1] >> v[2]))
      throw ConfigError(field.path + ": expected " + std::to_string(mesh.num_panels()) + " rows of 3 values, row " +
                        std::to_string(p + 1) + " is missing or malformed");
    f.set(p, v);
  }
  double extra;
  if (in >> extra) throw ConfigError(field.path + ": more rows than panels");
  return f;
}

VolumeField sample_volume_forcing(const VolumeGrid& grid, const FieldConfig& field) {
  return sample_volume_field(grid, [&](const Vec3& x) { return catalog_value(field, x); });
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ProblemKind problem_kind(RunKind k) {
  switch (k) {
    case RunKind::Dirichlet: return ProblemKind::Dirichlet;
    case RunKind::Neumann: return ProblemKind::Neumann;
    default: return ProblemKind::Mixed;
  }
}

std::vector<Vec3> evaluation_points(const RunConfig& c, const SurfaceMesh& mesh) {
  if (!c.evaluation.points.empty()) {
    for (const Vec3& x : c.evaluation.points)
      if (!mesh.contains(x)) throw ConfigError("$.evaluation.points: point outside the domain");
    return c.evaluation.points;
  }
  return interior_sample_points(mesh, c.evaluation.count, c.evaluation.fraction);
}

struct BoundaryData {
  BoundaryField dirichlet, neumann;
  std::optional<ManufacturedSolution> exact;
};

BoundaryData boundary_data(const RunConfig& c, const SurfaceMesh& mesh) {
  BoundaryData d;
  if (c.data.manufactured) {
    const Vec3 src = c.data.source_point ? *c.data.source_point : default_source_point(mesh);
    d.exact = manufactured_solution(mesh, src, c.data.column, c.params);
    d.dirichlet = d.exact->trace(mesh);
    d.neumann = d.exact->traction(mesh);
  } else {
    d.dirichlet = sample_boundary_field(mesh, c.data.dirichlet);
    d.neumann = sample_boundary_field(mesh, c.data.neumann);
  }
  return d;
}

ojson parsed(const std::string& text) { return ojson::parse(text); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError(path.string() + ": cannot write");
  out << text << '\n';
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_solution_csv(const fs::path& path, const std::vector<Vec3>& pts, const FieldSolution& f) {
  std::ofstream out(path);
  if (!out) throw ConfigError(path.string() + ": cannot write");
  out << "x,y,z,u,v,w,p\n";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out << format_double(pts[i][0]) << ',' << format_double(pts[i][1]) << ',' << format_double(pts[i][2]);
    for (int k = 0; k < 3; ++k) out << ',' << format_double(f.velocity[i][k]);
    out << ',' << format_double(f.pressure[i]) << '\n';
  }
}

ojson config_summary(const RunConfig& c, const SurfaceMesh& mesh) {
  ojson j;
  j["kind"] = to_string(c.kind);
  j["panels"] = mesh.num_panels();
  j["level"] = c.geometry.level;
  j["alpha"] = c.params.alpha;
  j["beta"] = c.params.beta;
  j["seed"] = c.seed;
  return j;
}

}  // namespace

RunOutcome run_config(const RunConfig& c, const fs::path& out) {
  const auto t0 = Clock::now();
  RunOutcome outcome;
  const SurfaceMesh mesh = build_geometry(c.geometry, c.geometry.level);
  mesh.require_closed();
  outcome.points = evaluation_points(c, mesh);
  BoundaryData data = boundary_data(c, mesh);
  std::optional<PatchLabeling> labeling;
  if (c.patches) labeling = label_patches(mesh, *c.patches);

  outcome.report["config"] = config_summary(c, mesh);
  std::optional<VolumeGrid> grid;
  if (c.forcing) grid = build_volume_grid(MeshDomain{&mesh}, c.volume_resolution);

  if (c.kind == RunKind::Semilinear) {
    const MixedPoissonMap map(mesh, *labeling, *grid, c.params, c.solver);
    const SmallnessConstants k = estimate_constants(map, c.params.beta, c.picard.samples, c.seed);
    VolumeField f = sample_volume_forcing(*grid, *c.forcing);
    if (c.picard.scale_to_zeta) {
      const double norm = volume_norm(*grid, f) + data.dirichlet.norm() + data.neumann.norm();
      if (norm > 0.0 && std::isfinite(k.zeta_est)) {
        const double s = *c.picard.scale_to_zeta * k.zeta_est / norm;
        f *= s;
        data.dirichlet *= s;
        data.neumann *= s;
        outcome.report["data_scale"] = s;
      }
    }
    PicardResult r;
    try {
      r = picard_solve(map, f, data.dirichlet, data.neumann, c.picard.iteration, &k);
    } catch (const SmallnessViolated& e) {
      if (!out.empty()) {
        fs::create_directories(out);
        write_text(out / "contraction.json", e.report.to_json());
      }
      throw;
    } catch (const NotConverged& e) {
      if (!out.empty()) {
        fs::create_directories(out);
        write_text(out / "contraction.json", e.report.to_json());
      }
      throw;
    }
    outcome.report["contraction"] = parsed(r.report.to_json());
    try {
      outcome.report["semilinear_residual"] = semilinear_residual(r.handle, *grid, c.params, f);
    } catch (const UsageError& e) {
      outcome.report["semilinear_residual"] = nullptr;
      outcome.report["warnings"].push_back(e.what());
    }
    outcome.fields = evaluate_solution(r.handle, outcome.points);
    if (!out.empty()) {
      fs::create_directories(out);
      write_text(out / "contraction.json", r.report.to_json());
    }
  } else {
    BVPSpec spec;
    spec.kind = problem_kind(c.kind);
    spec.params = c.params;
    spec.mesh = &mesh;
    spec.labeling = labeling;
    spec.dirichlet_data = data.dirichlet;
    spec.neumann_data = data.neumann;
    spec.options = c.solver;
    if (c.forcing) spec.forcing = VolumeForcing{&*grid, sample_volume_forcing(*grid, *c.forcing)};
    const SolveResult r = solve(spec);
    outcome.report["solve"] = parsed(r.report.to_json(false));
    outcome.report["residual_l2"] = r.report.residual_l2;
    outcome.timing["solve_wall_time_s"] = r.report.wall_time_s;
    outcome.fields = evaluate_solution(r.handle, outcome.points);
    if (data.exact && !c.forcing)
      outcome.report["interior_l2_error"] =
          relative_l2_error(outcome.fields.velocity, data.exact->velocity(outcome.points));
  }
  outcome.report["pressure_constant"] = outcome.fields.pressure_constant;
  outcome.timing["wall_time_s"] = seconds_since(t0);

  if (!out.empty()) {
    fs::create_directories(out);
    write_text(out / "report.json", outcome.report.dump(2));
    write_text(out / "timing.json", outcome.timing.dump(2));
    write_solution_csv(out / "solution.csv", outcome.points, outcome.fields);
  }
  return outcome;
}

RunOutcome run_config(const fs::path& config_path, const fs::path& out) {
  const RunConfig c = load_config(config_path);
  return run_config(c, out.empty() ? fs::path(c.output_directory) : out);
}

// ---------------------------------------------------------------------------

void ConvergenceTable::write_csv(std::ostream& out) const {
  out << "level,n_panels,trace_l2,interior_l2,jump_residual,observed_ratio\n";
  for (const auto& r : rows) {
    out << r.level << ',' << r.num_panels << ',' << format_double(r.trace_l2) << ','
        << format_double(r.interior_l2) << ',' << format_double(r.jump_residual) << ',';
    if (r.observed_ratio) out << format_double(*r.observed_ratio);
    out << '\n';
  }
}

namespace {

template <class T>
T parse_cell(const std::string& cell, int line) {
  T v{};
  const auto r = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (r.ec != std::errc() || r.ptr != cell.data() + cell.size())
    throw UsageError("convergence CSV line " + std::to_string(line) + ": cannot parse '" + cell + "'");
  return v;
}

}  // namespace

ConvergenceTable ConvergenceTable::read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "level,n_panels,trace_l2,interior_l2,jump_residual,observed_ratio")
    throw UsageError("convergence CSV: unexpected header");
  ConvergenceTable t;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream s(line);
    std::string cell;
    while (std::getline(s, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (cells.size() != 6) throw UsageError("convergence CSV line " + std::to_string(number) + ": expected 6 fields");
    ConvergenceRow r;
    r.level = parse_cell<int>(cells[0], number);
    r.num_panels = parse_cell<int>(cells[1], number);
    r.trace_l2 = parse_cell<double>(cells[2], number);
    r.interior_l2 = parse_cell<double>(cells[3], number);
    r.jump_residual = parse_cell<double>(cells[4], number);
    if (!cells[5].empty()) r.observed_ratio = parse_cell<double>(cells[5], number);
    t.rows.push_back(r);
  }
  return t;
}

ConvergenceTable convergence_study(const RunConfig& c) {
  if (c.levels.empty()) throw ConfigError("$.levels: missing required key 'levels' for a convergence study");
  if (c.kind == RunKind::Semilinear) throw ConfigError("$.kind: convergence studies cover linear problems only");
  if (!c.data.manufactured) throw ConfigError("$.data.type: convergence studies need manufactured data");
  if (c.forcing) throw ConfigError("$.forcing: convergence studies use homogeneous problems");
  if (c.geometry.kind == GeometryConfig::Kind::OffFile)
    throw ConfigError("$.geometry.type: convergence studies need a refinable geometry");
  for (int level : c.levels) {
    const int panels = (c.geometry.kind == GeometryConfig::Kind::Icosphere ? 20 : 12) * (1 << (2 * level));
    if (panels > kMaxStudyPanels)
      throw UsageError("level " + std::to_string(level) + " has " + std::to_string(panels) +
                       " panels, beyond the study budget of " + std::to_string(kMaxStudyPanels));
  }

  ConvergenceTable table;
  for (int level : c.levels) {
    const SurfaceMesh mesh = build_geometry(c.geometry, level);
    BoundarySystem system(mesh, c.params, c.solver);
    const BoundaryData data = boundary_data(c, mesh);
    BVPSpec spec;
    spec.kind = problem_kind(c.kind);
    spec.params = c.params;
    spec.mesh = &mesh;
    if (c.patches) spec.labeling = label_patches(mesh, *c.patches);
    spec.dirichlet_data = data.dirichlet;
    spec.neumann_data = data.neumann;
    spec.options = c.solver;
    const SolveResult r = solve_with(system, spec);

    ConvergenceRow row;
    row.level = level;
    row.num_panels = mesh.num_panels();
    const std::vector<Vec3> pts = evaluation_points(c, mesh);
    row.interior_l2 = relative_l2_error(evaluate_solution(r.handle, pts).velocity, data.exact->velocity(pts));

    const bool double_layer = r.handle.layer == Representation::DoubleLayer;
    BoundaryField exact_trace = data.dirichlet;
    if (double_layer) {
      // The solve matches the flux-free part of the data.
      const BoundaryField nu = BoundaryField::normals(mesh);
      exact_trace -= (exact_trace.pairing(nu) / nu.pairing(nu)) * nu;
    }
    std::vector<int> sample;
    const int stride = std::max(1, mesh.num_panels() / 64);
    for (int p = 0; p < mesh.num_panels(); p += stride) sample.push_back(p);
    const JumpErrors jumps = measure_jumps(mesh, r.handle.density, c.params, sample);
    row.jump_residual = double_layer ? jumps.double_layer_jump : jumps.traction_jump;

    const auto limit = one_sided_limit(mesh, r.handle.density, c.params,
                                       double_layer ? LayerQuantity::DoubleLayerVelocity
                                                    : LayerQuantity::SingleLayerVelocity,
                                       false, sample, jumps.offset);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
      const Vec3 e = exact_trace.at(sample[i]);
      num += mesh.area(sample[i]) * (limit[i] - e).squaredNorm();
      den += mesh.area(sample[i]) * e.squaredNorm();
    }
    row.trace_l2 = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    if (!table.rows.empty()) row.observed_ratio = table.rows.back().interior_l2 / row.interior_l2;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace bbem
