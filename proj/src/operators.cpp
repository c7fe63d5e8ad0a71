#include "bbem/operators.hpp"

#include "bbem/kernels.hpp"
#include "bbem/parallel.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

namespace bbem {

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::V: return "V";
    case OperatorKind::K: return "K";
    case OperatorKind::Kstar: return "Kstar";
    case OperatorKind::SMixed: return "S_mixed";
    case OperatorKind::Custom: return "custom";
  }
  return "custom";
}

BoundaryField DenseOperator::apply(const BoundaryField& u) const {
  if (u.values().size() != matrix.cols())
    throw UsageError("operator of size " + std::to_string(matrix.cols()) +
                     " applied to a field with " + std::to_string(u.values().size()) + " values");
  return BoundaryField(u.weights(), matrix * u.values());
}

Mat3 double_layer_kernel(const Vec3& x, const Vec3& y, const Vec3& nu,
                         const BrinkmanParams& params) {
  const Vec3 d = y - x;
  const Tensor3 g = brinkman_velocity_gradient(d, params);
  const Vec3 pi = pressure_vector(d);
  Mat3 t;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double s = -pi[a] * nu[b];
      for (int l = 0; l < 3; ++l) s += (g(l, b, a) + g(b, l, a)) * nu[l];
      t(a, b) = s;
    }
  return t;
}

namespace {

// Stokes double-layer kernel -(3 / 4 pi) d d^T (d . nu) / r^5, d = y - x.
Mat3 stokes_double_layer_kernel(const Vec3& x, const Vec3& y, const Vec3& nu) {
  const Vec3 d = y - x;
  const double r2 = d.squaredNorm();
  const double r5 = r2 * r2 * std::sqrt(r2);
  return (-3.0 * d.dot(nu) / (kFourPi * r5)) * (d * d.transpose());
}

// T^alpha - T^0, bounded as y -> x.
Mat3 double_layer_correction(const Vec3& x, const Vec3& y, const Vec3& nu,
                             const BrinkmanParams& params) {
  const Tensor3 s = stress_tensor_correction(y, x, params);
  Mat3 t;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) t(a, b) = s(b, a, 0) * nu[0] + s(b, a, 1) * nu[1] + s(b, a, 2) * nu[2];
  return t;
}

void require_assemblable(const SurfaceMesh& mesh, const BrinkmanParams& params) {
  params.validate();
  if (mesh.num_panels() == 0) throw MeshError("empty mesh");
  mesh.require_closed();
}

LayerOperators assemble(const SurfaceMesh& mesh, const BrinkmanParams& params,
                        const QuadratureOptions& options, bool want_v, bool want_k) {
  require_assemblable(mesh, params);
  const int n = mesh.num_panels();
  const QuadratureSet regular = panel_quadrature(mesh, options.order);
  const bool brinkman = params.alpha > 0.0;

  LayerOperators ops;
  Eigen::VectorXd weights = Eigen::Map<const Eigen::VectorXd>(mesh.areas().data(), n);
  if (want_v) ops.single_layer = {OperatorKind::V, Eigen::MatrixXd::Zero(3 * n, 3 * n), weights};
  if (want_k) ops.double_layer = {OperatorKind::K, Eigen::MatrixXd::Zero(3 * n, 3 * n), weights};

  parallel_for(n, [&](std::size_t row) {
    const int i = static_cast<int>(row);
    const Vec3& x = mesh.centroid(i);
    std::vector<QuadratureNode> scratch;
    Mat3 stokes_row_sum = Mat3::Zero();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto& nodes = panel_nodes(mesh, regular, j, x, options, scratch);
      const Vec3& nu = mesh.normal(j);
      Mat3 v = Mat3::Zero(), k = Mat3::Zero(), k0 = Mat3::Zero();
      for (const auto& nd : nodes) {
        if (want_v) v += nd.weight * brinkman_velocity_tensor(x - nd.point, params);
        if (want_k) {
          const Mat3 t0 = stokes_double_layer_kernel(x, nd.point, nu);
          k0 += nd.weight * t0;
          k += nd.weight * (brinkman ? double_layer_kernel(x, nd.point, nu, params) : t0);
        }
      }
      if (want_v) ops.single_layer.matrix.block<3, 3>(3 * i, 3 * j) = v;
      if (want_k) {
        ops.double_layer.matrix.block<3, 3>(3 * i, 3 * j) = k;
        stokes_row_sum += k0;
      }
    }

    const Vec3 &a = mesh.vertex(i, 0), &b = mesh.vertex(i, 1), &c = mesh.vertex(i, 2);
    std::vector<QuadratureNode> polar;
    if (brinkman) polar = duffy_singular_rule(a, b, c, x, options.singular_order);
    if (want_v) {
      Mat3 self = stokeslet_panel_integral(a, b, c, x);
      for (const auto& nd : polar) self += nd.weight * velocity_tensor_correction(nd.point - x, params);
      ops.single_layer.matrix.block<3, 3>(3 * i, 3 * i) = self;
    }
    if (want_k) {
      // The Stokes kernel vanishes on the flat self panel; its principal
      // value is replaced by the constant-density identity.
      Mat3 self = -0.5 * Mat3::Identity() - stokes_row_sum;
      const Vec3& nu = mesh.normal(i);
      for (const auto& nd : polar) self += nd.weight * double_layer_correction(x, nd.point, nu, params);
      ops.double_layer.matrix.block<3, 3>(3 * i, 3 * i) = self;
    }
  });
  return ops;
}

}  // namespace

const std::vector<QuadratureNode>& panel_nodes(const SurfaceMesh& mesh, const QuadratureSet& regular,
                                               int panel, const Vec3& x,
                                               const QuadratureOptions& options,
                                               std::vector<QuadratureNode>& scratch) {
  const double dist = (x - mesh.centroid(panel)).norm();
  if (dist >= options.near_factor * mesh.diameter(panel)) return regular.panels[panel];
  scratch.clear();
  adaptive_rule(mesh.vertex(panel, 0), mesh.vertex(panel, 1), mesh.vertex(panel, 2), x,
                triangle_rule(options.near_rule), options.near_factor, options.max_depth, scratch);
  return scratch;
}

DenseOperator assemble_single_layer(const SurfaceMesh& mesh, const BrinkmanParams& params,
                                    const QuadratureOptions& options) {
  return assemble(mesh, params, options, true, false).single_layer;
}

DenseOperator assemble_double_layer(const SurfaceMesh& mesh, const BrinkmanParams& params,
                                    const QuadratureOptions& options) {
  return assemble(mesh, params, options, false, true).double_layer;
}

LayerOperators assemble_layer_operators(const SurfaceMesh& mesh, const BrinkmanParams& params,
                                        const QuadratureOptions& options) {
  return assemble(mesh, params, options, true, true);
}

DenseOperator adjoint_double_layer(const DenseOperator& k) {
  const Eigen::Index m = k.matrix.rows();
  if (k.matrix.cols() != m || m != 3 * k.weights.size())
    throw UsageError("adjoint requires a square operator with one weight per panel");
  Eigen::VectorXd w(m);
  for (int p = 0; p < k.num_panels(); ++p) w.segment<3>(3 * p).setConstant(k.weights[p]);
  DenseOperator out;
  out.kind = k.kind == OperatorKind::K      ? OperatorKind::Kstar
             : k.kind == OperatorKind::Kstar ? OperatorKind::K
                                             : OperatorKind::Custom;
  out.weights = k.weights;
  out.matrix = w.cwiseInverse().asDiagonal() * k.matrix.transpose() * w.asDiagonal();
  return out;
}

namespace {

static_assert(std::endian::native == std::endian::little, "serialization assumes little endian");

constexpr char kMagic[4] = {'B', 'B', 'E', 'M'};
constexpr std::uint32_t kFormatVersion = 1;

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw UsageError("truncated operator file");
  return v;
}

}  // namespace

void write_operator(std::ostream& out, const DenseOperator& op) {
  const Eigen::Index m = op.matrix.rows();
  if (op.matrix.cols() != m || m % 3 != 0) throw UsageError("operator must be 3N x 3N");
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m / 3));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(op.kind));
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = op.matrix;
  out.write(reinterpret_cast<const char*>(rm.data()), static_cast<std::streamsize>(rm.size() * 8));
  if (!out) throw Error("failed to write operator");
}

DenseOperator read_operator(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw UsageError("not a BBEM operator file");
  const auto version = get<std::uint32_t>(in);
  if (version != kFormatVersion)
    throw UsageError("unsupported operator format version " + std::to_string(version));
  const auto n = get<std::uint32_t>(in);
  const auto kind = get<std::uint8_t>(in);
  if (kind > static_cast<std::uint8_t>(OperatorKind::Custom)) throw UsageError("unknown operator kind");
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(3 * n, 3 * n);
  if (!in.read(reinterpret_cast<char*>(rm.data()), static_cast<std::streamsize>(rm.size() * 8)))
    throw UsageError("truncated operator file");
  DenseOperator op;
  op.kind = static_cast<OperatorKind>(kind);
  op.matrix = rm;
  return op;
}

}  // namespace bbem
