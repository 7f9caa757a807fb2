#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "liouville/errors.hpp"

namespace liouville {

// Uniform tensor grid on the truncated strip [-X,X] x [0,lambda].
// x carries homogeneous Dirichlet data for perturbation fields; the y
// direction is closed with mirrored ghost rows (Neumann).
struct StripGrid {
  double lambda = 0.0;  // strip width (y extent)
  double X = 0.0;       // half-width of the x truncation
  int nx = 0;
  int ny = 0;

  StripGrid() = default;
  StripGrid(double lambda_, double X_, int nx_, int ny_);

  double hx() const { return 2.0 * X / (nx - 1); }
  double hy() const { return lambda / (ny - 1); }
  double x(int i) const { return -X + i * hx(); }
  double y(int j) const { return j * hy(); }
  std::size_t size() const { return std::size_t(nx) * ny; }

  bool operator==(const StripGrid& o) const {
    return lambda == o.lambda && X == o.X && nx == o.nx && ny == o.ny;
  }
};

// Sampled field on a StripGrid, row-major in x (values[i*ny + j]).
struct StripField {
  StripGrid grid;
  std::vector<double> values;

  StripField() = default;
  explicit StripField(const StripGrid& g) : grid(g), values(g.size(), 0.0) {}

  double& at(int i, int j) { return values[std::size_t(i) * grid.ny + j]; }
  double at(int i, int j) const { return values[std::size_t(i) * grid.ny + j]; }

  double sup_norm() const;
  // max over grid of |u(-x,y) - u(x,y)|
  double evenness_defect() const;
};

// Graded radial grid 0 = r_0 < r_1 < ... < r_{n-1} = R with
// r_i = R * (i/(n-1))^grading, denser near the origin.
struct RadialGrid {
  std::vector<double> r;

  RadialGrid() = default;
  RadialGrid(double R, int n, double grading = 1.5);
  // grid with externally supplied nodes (e.g. from a file)
  explicit RadialGrid(std::vector<double> nodes);

  double R() const { return r.back(); }
  int n() const { return int(r.size()); }
};

using RadialGridPtr = std::shared_ptr<const RadialGrid>;

// Radial profile u(r_i) tagged with the regularization parameter epsilon
// (epsilon = 0 marks an unregularized/limit profile).
struct RadialProfile {
  RadialGridPtr grid;
  std::vector<double> values;
  double epsilon = 0.0;

  RadialProfile() = default;
  RadialProfile(RadialGridPtr g, double eps)
      : grid(std::move(g)), values(grid->n(), 0.0), epsilon(eps) {}

  int n() const { return int(values.size()); }
  double sup_norm() const;
};

inline void require_same_grid(const RadialProfile& a, const RadialProfile& b) {
  if (a.grid != b.grid && !(a.grid && b.grid && a.grid->r == b.grid->r))
    throw ContractError("radial profiles live on different grids");
}

}  // namespace liouville
