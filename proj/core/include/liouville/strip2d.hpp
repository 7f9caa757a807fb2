#pragma once

#include <optional>
#include <vector>

#include "liouville/grid.hpp"

namespace liouville {
namespace strip2d {

// trivial solution u0(x) = log(2 sech^2 x)
double trivial_solution_2d(double x);

// F(u) = Delta u + e^{u0}(e^u - 1), second-order centered differences,
// mirrored-ghost Neumann rows in y, evaluated at interior x nodes (the
// returned field is zero on the Dirichlet columns i = 0, nx-1).
StripField residual_2d(const StripGrid& grid, const StripField& u);

struct GroundState {
  double eigenvalue = 0.0;         // lowest eigenvalue of -d^2/dx^2 - 2 sech^2
  double second_eigenvalue = 0.0;  // next one up (no second bound state)
  std::vector<double> x;
  std::vector<double> profile;     // normalized eigenfunction
};

// Dirichlet-truncated Poschl-Teller ground state on [-X, X], spacing h.
GroundState poschl_teller_ground(double X, double h);

struct SpectrumEntry {
  double eigenvalue = 0.0;
  int mode = -1;                  // y-mode j for per-mode entries, -1 for 2D
  bool bound = false;             // x-part is the bound state
  std::vector<double> profile_x;  // per-mode x profile (empty for 2D entries)
  double residual = 0.0;          // eigen-residual, relative
};

struct SpectrumReport {
  std::vector<SpectrumEntry> per_mode;  // kappa - c_j(lambda), nearest 0 first
  std::vector<SpectrumEntry> full_2d;   // 2D discretization, nearest 0 first
  double bound_mode_gap = 0.0;  // max mismatch of bound eigenvalues across methods
};

// n eigenvalues of L = Delta + 2 sech^2 x nearest zero, per y-mode and by
// full 2D discretization (shift-invert; dense fallback for small grids).
SpectrumReport linearized_spectrum(double lambda, const StripGrid& grid, int n);

// Bound-mode eigenvalue kappa of d^2/dx^2 + 2 sech^2 x on the grid's x
// discretization (the +1 eigenvalue up to truncation corrections).
double kappa_bound_mode(const StripGrid& grid);

// lambda values in (lambda_lo, lambda_hi) where a bound-mode eigenvalue
// kappa - (pi j / lambda)^2 changes sign, bisected to 1e-6.
std::vector<double> detect_bifurcations(double lambda_lo, double lambda_hi,
                                        double step, const StripGrid& grid);

struct BifurcationDiagnostics {
  double lambda_star = 0.0;   // the grid's own singular parameter for mode k
  int mode = 0;               // y-mode k of the kernel
  StripField u_star;          // normalized kernel field
  StripField psi;             // cokernel representative (= u_star)
  double lambda1 = 0.0;
  StripField u2;
  double u2_residual = 0.0;   // defining-equation residual in <u*>-complement
  double lambda2 = 0.0;
};

BifurcationDiagnostics bifurcation_diagnostics(double lambda_star,
                                               const StripGrid& grid);

struct NewtonResult {
  StripField field;
  std::vector<double> residual_history;
};

// Newton iteration on the perturbation equation at fixed lambda.
NewtonResult newton_solve(double lambda, const StripGrid& grid,
                          const StripField& init, double tol, int max_iter);

struct BranchPoint {
  double lambda = 0.0;
  double amplitude = 0.0;  // t = <u, u*> / ||u*||^2
  StripField field;
  double newton_residual = 0.0;
};

struct Branch {
  std::vector<BranchPoint> points;
  double lambda_star_fit = 0.0;  // intercept of the lambda = a + b t^2 fit
  double lambda2_fit = 0.0;      // curvature b of the same fit
};

// Pseudo-arclength continuation from (lambda*, 0) with tangent (0, u*).
Branch continue_branch(const BifurcationDiagnostics& diag, int n_steps,
                       double ds);

// u of width (1+eps) pi k -> solution of exact width pi k via
// u((1+eps)x, (1+eps)y) + 2 log(1+eps).
StripField rescale_to_exact_period(const StripField& u, double epsilon);

// Even reflection across y-seams onto [0, copies * lambda].
StripField extend_by_reflection(const StripField& u, int copies);

struct ChenLiReport {
  double order = 0.0;
  double residual_h = 0.0;
  double residual_h2 = 0.0;
};

// Discrete residual of Delta u + e^u for the classified finite-volume
// solution log(32 / (4 + |x|^2)^2) on [-1,1]^2 at spacings h and h/2.
ChenLiReport validate_stencil_chen_li(double h);

// discrete L^2 inner product (trapezoid in y, full weight in x)
double inner(const StripField& a, const StripField& b);

}  // namespace strip2d
}  // namespace liouville
