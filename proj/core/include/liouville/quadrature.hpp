#pragma once

#include <vector>

namespace liouville {

// Cumulative quadrature on a fixed nonuniform node set. Each interval
// [x_i, x_{i+1}] integrates the quadratic through three neighboring nodes,
// so smooth integrands are handled to the same order as composite Simpson.
// Weights are precomputed once per node set.
class CumulativeIntegrator {
public:
  explicit CumulativeIntegrator(const std::vector<double>& x);

  // I(x_i) = int_{x_0}^{x_i} f, all i; out.size() == x.size()
  void cumulative(const std::vector<double>& f, std::vector<double>& out) const;
  double total(const std::vector<double>& f) const;

private:
  std::vector<double> w0_, w1_, w2_;
  std::vector<int> base_;
};

// Composite trapezoid on nonuniform nodes.
double trapezoid(const std::vector<double>& x, const std::vector<double>& f);

// Cubic Lagrange interpolation on sorted nodes; clamps to the end values
// outside the node range.
double interp_cubic(const std::vector<double>& x, const std::vector<double>& f,
                    double xq);

// Natural cubic spline. C^2 across segment joins, which matters whenever a
// resampled field is fed back into difference stencils (segmentwise Lagrange
// kinks get amplified by 1/h^2 per application).
class CubicSpline {
public:
  CubicSpline(const std::vector<double>& x, const std::vector<double>& f);
  double operator()(double xq) const;  // clamps outside the node range

private:
  std::vector<double> x_, f_, m_;  // m = second derivatives at nodes
};

}  // namespace liouville
