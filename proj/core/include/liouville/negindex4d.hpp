#pragma once

#include <utility>
#include <vector>

#include "liouville/grid.hpp"
#include "liouville/tridiag.hpp"

namespace liouville {
namespace negindex4d {

// Discrete radial Laplacian (finite-volume, conservative) on a RadialGrid
// with zero-flux closure at the axis and Dirichlet truncation at R.
// Self-adjoint with respect to the r^2-weighted inner product carried in
// `weight` (cell volumes); the matrix acts on nodes 0 .. n-2.
struct RadialOperator {
  Tridiag lap;                 // Delta_rad
  std::vector<double> weight;  // cell volumes (r^2 dr measure)
  RadialGridPtr grid;

  int n() const { return lap.n(); }
  double inner(const std::vector<double>& a, const std::vector<double>& b) const;
  std::vector<double> apply_lap(const std::vector<double>& v) const;
  // solve (Delta - t) x = b
  std::vector<double> solve_shifted(double t, const std::vector<double>& b) const;
};

RadialOperator make_radial_operator(RadialGridPtr grid);

// Smoothed indicator: v = 1 on [0,1], v = 0 on [2,R], monotone between,
// built from the C^infty bump f(r) = e^{-1/(r-1)^2} e^{-1/(r-2)^2}.
RadialProfile bump_test_function(RadialGridPtr grid);

// 4 pi int [ (Delta v)^2 - e^{u_mu} v^2 ] r^2 dr, evaluated with the same
// discrete operator as the eigensolve so Rayleigh bounds hold exactly.
double quadratic_form_x_only(const RadialProfile& v, const RadialProfile& u_mu);

// doubling search for mu with quadratic_form_x_only(bump, u_mu) < 0;
// returns (mu_star, form value). u1 is the unrescaled trivial solution.
std::pair<double, double> find_mu_star(const RadialProfile& u1, double mu_cap = double(1 << 20));

struct Eigenpair {
  double nu0 = 0.0;
  RadialProfile v0;        // normalized in the r^2 measure
  double residual = 0.0;   // ||S v - nu M v||_inf / scale
};

// Lowest eigenpair of w -> Delta^2 w - e^{u_mu} w on the radial grid
// (w'(0) = 0, (Delta w)'(0) = 0 via the flux closure, Dirichlet at R).
Eigenpair v0_eigenpair(const RadialProfile& u_mu, RadialGridPtr grid);

// f(t) = ||v0||^2 - < e^{u_mu} v0, (Delta - t)^{-2} v0 >  (r^2 measure)
double f_of_t(double t, const RadialProfile& v0, const RadialProfile& u_mu);

struct NegativeIndexReport {
  double lambda = 0.0;
  double mu_scaling = 0.0;
  double nu0 = 0.0;
  int count = 0;
  std::vector<std::pair<double, double>> f_samples;  // (t_k, f(t_k))
};

// count of k in {0..kmax} with f((2 pi k / lambda)^2) < 0; requires
// f(t_kmax) > 0, otherwise the truncation is reported as an error.
NegativeIndexReport count_negative(double lambda, int kmax,
                                   const RadialProfile& v0,
                                   const RadialProfile& u_mu, double mu_scaling,
                                   double nu0);

// t with both (Delta - t)^{-2} v0 decayed 100x against t = 0 and f within
// 10% of ||v0||^2 (doubling search); verifies the f -> ||v0||^2 limit.
double find_t_max(const RadialProfile& v0, const RadialProfile& u_mu);

}  // namespace negindex4d
}  // namespace liouville
