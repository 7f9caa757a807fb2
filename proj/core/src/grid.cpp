#include "liouville/grid.hpp"

#include <algorithm>
#include <cmath>

namespace liouville {

StripGrid::StripGrid(double lambda_, double X_, int nx_, int ny_)
    : lambda(lambda_), X(X_), nx(nx_), ny(ny_) {
  if (lambda <= 0.0) throw DomainError("StripGrid: lambda must be > 0");
  if (X <= 0.0) throw DomainError("StripGrid: X must be > 0");
  if (nx < 3 || ny < 3) throw DomainError("StripGrid: need nx, ny >= 3");
}

double StripField::sup_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double StripField::evenness_defect() const {
  double m = 0.0;
  for (int i = 0; i < grid.nx; ++i) {
    int im = grid.nx - 1 - i;
    for (int j = 0; j < grid.ny; ++j)
      m = std::max(m, std::abs(at(i, j) - at(im, j)));
  }
  return m;
}

RadialGrid::RadialGrid(double R, int n, double grading) {
  if (R <= 0.0 || n < 3) throw DomainError("RadialGrid: need R > 0, n >= 3");
  r.resize(n);
  for (int i = 0; i < n; ++i)
    r[i] = R * std::pow(double(i) / (n - 1), grading);
  r.back() = R;
}

RadialGrid::RadialGrid(std::vector<double> nodes) : r(std::move(nodes)) {
  if (r.size() < 3) throw DomainError("RadialGrid: need at least 3 nodes");
  for (std::size_t i = 1; i < r.size(); ++i)
    if (!(r[i] > r[i - 1])) throw DomainError("RadialGrid: nodes must increase");
  if (r.front() != 0.0) throw DomainError("RadialGrid: first node must be 0");
}

double RadialProfile::sup_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace liouville
