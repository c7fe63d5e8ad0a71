#include "bbem/newtonian.hpp"

#include "bbem/kernels.hpp"
#include "bbem/parallel.hpp"

#include <cmath>

namespace bbem {

namespace {

// Cells whose center is within this many cell sizes of the point are
// subdivided.
constexpr double kNearCells = 1.5;
constexpr int kSubdivisions = 2;  // per axis and level
constexpr int kMaxDepth = 3;

int quantity_rows(NewtonianQuantity q) { return q == NewtonianQuantity::Pressure ? 1 : 3; }

// Kernel block (without the leading minus sign or volume) at offset x - y.
Mat3 kernel_block(NewtonianQuantity q, const Vec3& x, const Vec3& y, const Vec3& n,
                  const BrinkmanParams& params) {
  Mat3 m = Mat3::Zero();
  switch (q) {
    case NewtonianQuantity::Velocity:
      return brinkman_velocity_tensor(x - y, params);
    case NewtonianQuantity::Pressure:
      m.row(0) = pressure_vector(x - y).transpose();
      return m;
    case NewtonianQuantity::Traction: {
      const Tensor3 s = brinkman_stress_tensor(x, y, params);
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) m(i, k) = s(i, k, 0) * n[0] + s(i, k, 1) * n[1] + s(i, k, 2) * n[2];
      return m;
    }
  }
  return m;
}

// int over the cube [c - h/2, c + h/2]^3 of the kernel at x, recursively
// subdividing while x is close. The sub-cube that contains x at the depth
// cap contributes its ball value (velocity) or nothing (odd kernels).
Mat3 cube_integral(NewtonianQuantity q, const Vec3& x, const Vec3& c, double h, const Vec3& n,
                   const BrinkmanParams& params, int depth) {
  const Vec3 d = x - c;
  const double dist = d.norm();
  if (dist >= kNearCells * h) return (h * h * h) * kernel_block(q, x, c, n, params);
  if (depth == kMaxDepth) {
    if (d.cwiseAbs().maxCoeff() <= 0.5 * h) {
      if (q != NewtonianQuantity::Velocity) return Mat3::Zero();
      const double r = std::cbrt(3.0 / (4.0 * kPi)) * h;
      return (r * r / 3.0) * Mat3::Identity();
    }
    return (h * h * h) * kernel_block(q, x, c, n, params);
  }
  Mat3 sum = Mat3::Zero();
  const double hs = h / kSubdivisions;
  for (int a = 0; a < kSubdivisions; ++a)
    for (int b = 0; b < kSubdivisions; ++b)
      for (int e = 0; e < kSubdivisions; ++e) {
        const Vec3 cs = c + hs * Vec3(a + 0.5 - 0.5 * kSubdivisions, b + 0.5 - 0.5 * kSubdivisions,
                                      e + 0.5 - 0.5 * kSubdivisions);
        sum += cube_integral(q, x, cs, hs, n, params, depth + 1);
      }
  return sum;
}

// Block for one (point, cell) pair including the leading minus sign.
Mat3 cell_block(NewtonianQuantity q, const VolumeGrid& grid, const Vec3& x, const Vec3& c,
                const Vec3& n, const BrinkmanParams& params) {
  const double h = grid.h;
  const double dist = (x - c).norm();
  if (dist <= 1e-9 * h) {
    if (q != NewtonianQuantity::Velocity) return Mat3::Zero();
    return self_cell_factor(grid) * Mat3::Identity();
  }
  return -cube_integral(q, x, c, h, n, params, 0);
}

}  // namespace

double self_cell_factor(const VolumeGrid& grid) {
  const double r = grid.equivalent_radius();
  return -r * r / 3.0;
}

Eigen::MatrixXd newtonian_matrix(const VolumeGrid& grid, const std::vector<Vec3>& points,
                                 const std::vector<Vec3>& normals, NewtonianQuantity q,
                                 const BrinkmanParams& params) {
  params.validate();
  if (q == NewtonianQuantity::Traction && normals.size() != points.size())
    throw UsageError("traction needs one normal per point");
  const int rows = quantity_rows(q);
  const int m = grid.size();
  Eigen::MatrixXd out(rows * points.size(), 3 * m);
  parallel_for(points.size(), [&](std::size_t p) {
    const Vec3 n = q == NewtonianQuantity::Traction ? normals[p] : Vec3::Zero();
    for (int c = 0; c < m; ++c)
      out.block(rows * p, 3 * c, rows, 3) =
          cell_block(q, grid, points[p], grid.centers[c], n, params).topRows(rows);
  });
  return out;
}

namespace {

void check_field(const VolumeGrid& grid, const VolumeField& f) {
  if (f.size() != 3 * grid.size())
    throw UsageError("volume field has " + std::to_string(f.size()) + " values for " +
                     std::to_string(grid.size()) + " cells");
  if (!f.allFinite()) throw UsageError("volume field contains non-finite values");
}

Eigen::VectorXd apply_direct(const VolumeGrid& grid, const VolumeField& f,
                             const std::vector<Vec3>& points, const std::vector<Vec3>& normals,
                             NewtonianQuantity q, const BrinkmanParams& params) {
  params.validate();
  check_field(grid, f);
  const int rows = quantity_rows(q);
  Eigen::VectorXd out(rows * points.size());
  parallel_for(points.size(), [&](std::size_t p) {
    const Vec3 n = q == NewtonianQuantity::Traction ? normals[p] : Vec3::Zero();
    Vec3 acc = Vec3::Zero();
    for (int c = 0; c < grid.size(); ++c)
      acc += cell_block(q, grid, points[p], grid.centers[c], n, params) * f.segment<3>(3 * c);
    out.segment(rows * p, rows) = acc.head(rows);
  });
  return out;
}

}  // namespace

std::vector<Vec3> newtonian_velocity(const VolumeGrid& grid, const VolumeField& f,
                                     const std::vector<Vec3>& points, const BrinkmanParams& params) {
  const Eigen::VectorXd v = apply_direct(grid, f, points, {}, NewtonianQuantity::Velocity, params);
  std::vector<Vec3> out(points.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v.segment<3>(3 * i);
  return out;
}

std::vector<double> newtonian_pressure(const VolumeGrid& grid, const VolumeField& f,
                                       const std::vector<Vec3>& points) {
  const Eigen::VectorXd v =
      apply_direct(grid, f, points, {}, NewtonianQuantity::Pressure, BrinkmanParams{});
  return {v.data(), v.data() + v.size()};
}

NewtonianGridOperator::NewtonianGridOperator(const VolumeGrid& grid, const BrinkmanParams& params)
    : grid_(&grid) {
  params.validate();
  for (int d = 0; d < 3; ++d) {
    int lo = 0, hi = 0;
    for (const auto& idx : grid.index) {
      lo = std::min(lo, idx[d]);
      hi = std::max(hi, idx[d]);
    }
    extent_[d] = hi - lo;
  }
  const int nx = 2 * extent_[0] + 1, ny = 2 * extent_[1] + 1, nz = 2 * extent_[2] + 1;
  velocity_table_.assign(static_cast<std::size_t>(nx) * ny * nz, Mat3::Zero());
  pressure_table_.assign(velocity_table_.size(), Vec3::Zero());
  parallel_for(nz, [&](std::size_t kk) {
    const int dk = static_cast<int>(kk) - extent_[2];
    for (int dj = -extent_[1]; dj <= extent_[1]; ++dj)
      for (int di = -extent_[0]; di <= extent_[0]; ++di) {
        // Target at the origin cell, source cell at -offset.
        const Vec3 x = Vec3::Zero();
        const Vec3 y = -grid.h * Vec3(di, dj, dk);
        const int o = offset_index(di, dj, dk);
        velocity_table_[o] = cell_block(NewtonianQuantity::Velocity, grid, x, y, Vec3::Zero(), params);
        pressure_table_[o] =
            cell_block(NewtonianQuantity::Pressure, grid, x, y, Vec3::Zero(), params).row(0).transpose();
      }
  });
}

int NewtonianGridOperator::offset_index(int di, int dj, int dk) const {
  const int nx = 2 * extent_[0] + 1, ny = 2 * extent_[1] + 1;
  return ((dk + extent_[2]) * ny + (dj + extent_[1])) * nx + (di + extent_[0]);
}

GridPotential NewtonianGridOperator::apply(const VolumeField& f) const {
  const VolumeGrid& grid = *grid_;
  check_field(grid, f);
  const int m = grid.size();
  GridPotential out{VolumeField::Zero(3 * m), Eigen::VectorXd::Zero(m)};
  parallel_for(m, [&](std::size_t t) {
    const auto& it = grid.index[t];
    Vec3 u = Vec3::Zero();
    double p = 0.0;
    for (int c = 0; c < m; ++c) {
      const auto& ic = grid.index[c];
      const int o = offset_index(it[0] - ic[0], it[1] - ic[1], it[2] - ic[2]);
      const Vec3 fc = f.segment<3>(3 * c);
      u += velocity_table_[o] * fc;
      p += pressure_table_[o].dot(fc);
    }
    out.velocity.segment<3>(3 * t) = u;
    out.pressure[t] = p;
  });
  return out;
}

VolumeField NewtonianGridOperator::apply_velocity_transpose(const VolumeField& u) const {
  const VolumeGrid& grid = *grid_;
  check_field(grid, u);
  const int m = grid.size();
  VolumeField out = VolumeField::Zero(3 * m);
  parallel_for(m, [&](std::size_t c) {
    const auto& ic = grid.index[c];
    Vec3 acc = Vec3::Zero();
    for (int t = 0; t < m; ++t) {
      const auto& it = grid.index[t];
      const int o = offset_index(it[0] - ic[0], it[1] - ic[1], it[2] - ic[2]);
      acc += velocity_table_[o].transpose() * u.segment<3>(3 * t);
    }
    out.segment<3>(3 * c) = acc;
  });
  return out;
}

NewtonianBoundaryMaps newtonian_boundary_maps(const VolumeGrid& grid, const SurfaceMesh& mesh,
                                              const BrinkmanParams& params) {
  return {newtonian_matrix(grid, mesh.centroids(), {}, NewtonianQuantity::Velocity, params),
          newtonian_matrix(grid, mesh.centroids(), mesh.normals(), NewtonianQuantity::Traction, params)};
}

NewtonianBoundaryData NewtonianBoundaryMaps::apply(const SurfaceMesh& mesh, const VolumeField& f) const {
  if (f.size() != trace.cols()) throw UsageError("volume field does not match the boundary maps");
  return {BoundaryField(mesh, trace * f), BoundaryField(mesh, traction * f)};
}

NewtonianBoundaryData newtonian_boundary_data(const VolumeGrid& grid, const VolumeField& f,
                                              const SurfaceMesh& mesh, const BrinkmanParams& params) {
  return {BoundaryField(mesh, apply_direct(grid, f, mesh.centroids(), {}, NewtonianQuantity::Velocity, params)),
          BoundaryField(mesh, apply_direct(grid, f, mesh.centroids(), mesh.normals(),
                                           NewtonianQuantity::Traction, params))};
}

}  // namespace bbem
