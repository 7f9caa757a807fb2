#pragma once

#include <optional>
#include <vector>

#include "liouville/grid.hpp"

namespace liouville {
namespace radial3d {

// One application of the regularized Hammerstein map
//   (T_eps u)(r) = -(1/(6r)) int_0^r s^2 (3r^2+s^2) w(s) ds
//                  -(1/6)    int_r^R s (r^2+3s^2) w(s) ds,
//   w(s) = exp(-eps s^2 + u(s)),
// i.e. the polar form of -(1/8pi) int |x-y| e^{-eps|y|^2+u(y)} dy.
// The integral beyond R is truncated; an analytic Gaussian bound on the
// dropped tail (with e^u <= 1) is available via tail_bound_at.
RadialProfile apply_T_eps(const RadialProfile& u, double epsilon);

// Analytic bound on the dropped [R, inf) part of T_eps at radius r,
// using e^{-eps s^2} decay and e^u <= 1.
double tail_bound_at(const RadialGrid& grid, double epsilon, double r);

struct PicardReport {
  int iterations = 0;
  std::vector<double> residual_history;  // sup |u - T_eps u| per iteration
  double damping_used = 1.0;             // final under-relaxation factor
  bool accelerated = false;              // secant (Anderson) stage engaged
  double final_residual = 0.0;
  double tail_bound = 0.0;               // truncation bound at r = R
};

// Fixed point of T_eps by damped Picard iteration with an Anderson-type
// secant acceleration fallback for the epsilon range where plain
// under-relaxation stalls.
std::pair<RadialProfile, PicardReport> picard_solve(
    double epsilon, RadialGridPtr grid, double tol = 1e-12, int max_iter = 600,
    const std::optional<RadialProfile>& init = std::nullopt);

// Laplacian through the Green representation
//   (Delta u_eps)(r) = -(1/r) int_0^r s^2 w ds - int_r^R s w ds.
RadialProfile laplacian_radial_green(const RadialProfile& u, double epsilon);

// Relative residual of the Pohozaev identity
//   int (u + 6 - 4 eps r^2) w r^2 dr  /  int w r^2 dr.
double pohozaev_residual(const RadialProfile& u, double epsilon);

struct EpsContinuation {
  std::vector<RadialProfile> profiles;   // one per schedule entry
  std::vector<PicardReport> reports;
  RadialProfile limit;                   // Richardson-extrapolated, epsilon = 0
  double measured_order = 0.0;           // fitted order p of u_eps - u ~ C eps^p
};

// Warm-started Picard solves along a decreasing epsilon schedule plus the
// extrapolated epsilon -> 0 limit.
EpsContinuation continue_eps_to_zero(const std::vector<double>& schedule,
                                     RadialGridPtr grid, double tol = 1e-12);

// u_mu(r) = u1(mu r) + 4 log mu resampled onto u1's grid; beyond the source
// coverage u1 is extended by its fitted linear decay.
RadialProfile rescale_solution(const RadialProfile& u1, double mu);

// 4 pi int_0^R r^2 e^u dr plus the linear-decay tail closure.
double volume(const RadialProfile& u);

// sup over r in [0, R/2] of |Delta(Delta u) - e^u| with the radial
// Laplacian w'' + (2/r) w' discretized by centered differences and a
// series (even polynomial) stencil at the axis.
double biharmonic_residual(const RadialProfile& u);

// Radial FD Laplacian used by biharmonic_residual (exposed for tests).
RadialProfile radial_laplacian_fd(const RadialProfile& u);

// sup over r <= r_cap of |u - T_0 u| where T_0 is the unregularized kernel
// closed beyond R with the fitted linear decay of u.
double integral_residual_eps0(const RadialProfile& u, double r_cap);

// least-squares slope m of -u(r) over the outer fifth of the grid
double decay_slope(const RadialProfile& u);

// default geometric schedule 1, 1/2, ..., down to floor (inclusive first
// entry <= floor)
std::vector<double> default_schedule(double floor_eps);

}  // namespace radial3d
}  // namespace liouville
