#include "liouville/negindex4d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "liouville/errors.hpp"
#include "liouville/quadrature.hpp"
#include "liouville/radial3d.hpp"

namespace liouville {
namespace negindex4d {

namespace {
constexpr double kPi = std::numbers::pi;

// Symmetric pentadiagonal matrix (bands b0 = diag, b1, b2) with LDL^T
// factorization and solve; used for S = A^2 - V shifted solves.
struct Penta {
  std::vector<double> b0, b1, b2;
  int n() const { return int(b0.size()); }
};

Penta square_minus(const Tridiag& A, const std::vector<double>& V,
                   double sigma) {
  const int n = A.n();
  Penta S;
  S.b0.assign(n, 0.0);
  S.b1.assign(std::max(n - 1, 0), 0.0);
  S.b2.assign(std::max(n - 2, 0), 0.0);
  for (int i = 0; i < n; ++i) {
    double s = A.diag[i] * A.diag[i];
    if (i > 0) s += A.off[i - 1] * A.off[i - 1];
    if (i + 1 < n) s += A.off[i] * A.off[i];
    S.b0[i] = s - V[i] - sigma;
  }
  for (int i = 0; i + 1 < n; ++i)
    S.b1[i] = A.off[i] * (A.diag[i] + A.diag[i + 1]);
  for (int i = 0; i + 2 < n; ++i) S.b2[i] = A.off[i] * A.off[i + 1];
  return S;
}

struct PentaLDL {
  std::vector<double> d, l1, l2;  // D and the two subdiagonals of L
  explicit PentaLDL(const Penta& S) {
    const int n = S.n();
    d.assign(n, 0.0);
    l1.assign(std::max(n - 1, 0), 0.0);
    l2.assign(std::max(n - 2, 0), 0.0);
    for (int j = 0; j < n; ++j) {
      double dj = S.b0[j];
      if (j >= 1) dj -= l1[j - 1] * l1[j - 1] * d[j - 1];
      if (j >= 2) dj -= l2[j - 2] * l2[j - 2] * d[j - 2];
      if (dj == 0.0) dj = 1e-300;
      d[j] = dj;
      if (j + 1 < n) {
        double s = S.b1[j];
        if (j >= 1) s -= l1[j - 1] * l2[j - 1] * d[j - 1];
        l1[j] = s / dj;
      }
      if (j + 2 < n) l2[j] = S.b2[j] / dj;
    }
  }
  void solve(std::vector<double>& x) const {
    const int n = int(d.size());
    for (int i = 0; i < n; ++i) {
      if (i >= 1) x[i] -= l1[i - 1] * x[i - 1];
      if (i >= 2) x[i] -= l2[i - 2] * x[i - 2];
    }
    for (int i = 0; i < n; ++i) x[i] /= d[i];
    for (int i = n - 1; i >= 0; --i) {
      if (i + 1 < n) x[i] -= l1[i] * x[i + 1];
      if (i + 2 < n) x[i] -= l2[i] * x[i + 2];
    }
  }
};

double bump_f(double s) {
  if (s <= 1.0 || s >= 2.0) return 0.0;
  const double a = s - 1.0, b = s - 2.0;
  return std::exp(-1.0 / (a * a)) * std::exp(-1.0 / (b * b));
}

}  // namespace

double RadialOperator::inner(const std::vector<double>& a,
                             const std::vector<double>& b) const {
  double s = 0.0;
  for (int i = 0; i < n(); ++i) s += a[i] * b[i] * weight[i];
  return 4.0 * kPi * s;
}

std::vector<double> RadialOperator::apply_lap(const std::vector<double>& v) const {
  const int m = n();
  std::vector<double> out(m);
  for (int i = 0; i < m; ++i) {
    double s = lap.diag[i] * v[i];
    if (i > 0) s += lap.off[i - 1] * v[i - 1];
    if (i + 1 < m) s += lap.off[i] * v[i + 1];
    out[i] = s;
  }
  return out;
}

std::vector<double> RadialOperator::solve_shifted(
    double t, const std::vector<double>& b) const {
  return tridiag_solve_shifted(lap, t, b);
}

// Conservative flux discretization of w'' + (2/r) w' on the graded grid,
// written in the coordinates x_i = sqrt(vol_i) v_i in which it is a plain
// symmetric tridiagonal matrix (same spectrum, exact discrete adjointness).
RadialOperator make_radial_operator(RadialGridPtr grid) {
  const std::vector<double>& r = grid->r;
  const int n = int(r.size());
  const int ni = n - 1;  // Dirichlet at R drops the last node
  RadialOperator op;
  op.grid = grid;
  op.lap.diag.assign(ni, 0.0);
  op.lap.off.assign(ni - 1, 0.0);
  op.weight.assign(ni, 0.0);

  std::vector<double> rh(n - 1);
  for (int i = 0; i + 1 < n; ++i) rh[i] = 0.5 * (r[i] + r[i + 1]);
  op.weight[0] = rh[0] * rh[0] * rh[0] / 3.0;
  for (int i = 1; i < ni; ++i)
    op.weight[i] =
        (rh[i] * rh[i] * rh[i] - rh[i - 1] * rh[i - 1] * rh[i - 1]) / 3.0;

  for (int i = 0; i < ni; ++i) {
    if (i > 0) op.lap.diag[i] -= rh[i - 1] * rh[i - 1] / (r[i] - r[i - 1]) / op.weight[i];
    op.lap.diag[i] -= rh[i] * rh[i] / (r[i + 1] - r[i]) / op.weight[i];
  }
  for (int i = 0; i + 1 < ni; ++i) {
    const double c = rh[i] * rh[i] / (r[i + 1] - r[i]);
    op.lap.off[i] = c / std::sqrt(op.weight[i] * op.weight[i + 1]);
  }
  return op;
}

RadialProfile bump_test_function(RadialGridPtr grid) {
  if (grid->R() < 3.0) throw DomainError("bump_test_function: need R >= 3");
  const std::vector<double>& r = grid->r;
  const int n = int(r.size());
  CumulativeIntegrator ci(r);
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) f[i] = bump_f(r[i]);
  std::vector<double> F;
  ci.cumulative(f, F);
  const double A = F.back();
  RadialProfile v(grid, 0.0);
  for (int i = 0; i < n; ++i) {
    double val = (A - F[i]) / A;
    if (r[i] >= 2.0) val = 0.0;
    if (r[i] <= 1.0) val = 1.0;
    v.values[i] = val;
  }
  return v;
}

double quadratic_form_x_only(const RadialProfile& v, const RadialProfile& u_mu) {
  require_same_grid(v, u_mu);
  RadialOperator op = make_radial_operator(v.grid);
  const int ni = op.n();
  std::vector<double> xs(ni);
  for (int i = 0; i < ni; ++i)
    xs[i] = v.values[i] * std::sqrt(op.weight[i]);
  std::vector<double> Ax = op.apply_lap(xs);
  double bend = 0.0, mass = 0.0;
  for (int i = 0; i < ni; ++i) {
    bend += Ax[i] * Ax[i];
    mass += std::exp(u_mu.values[i]) * xs[i] * xs[i];
  }
  return 4.0 * kPi * (bend - mass);
}

std::pair<double, double> find_mu_star(const RadialProfile& u1, double mu_cap) {
  RadialProfile v = bump_test_function(u1.grid);
  double mu = 1.0;
  while (true) {
    RadialProfile umu = radial3d::rescale_solution(u1, mu);
    const double form = quadratic_form_x_only(v, umu);
    if (form < 0.0) return {mu, form};
    if (mu > mu_cap)
      throw SolverError("find_mu_star: no sign change up to cap", form);
    mu *= 2.0;
  }
}

Eigenpair v0_eigenpair(const RadialProfile& u_mu, RadialGridPtr grid) {
  RadialOperator op = make_radial_operator(grid);
  const int ni = op.n();
  std::vector<double> V(ni);
  double vmax = 0.0;
  for (int i = 0; i < ni; ++i) {
    V[i] = std::exp(u_mu.values[i]);
    vmax = std::max(vmax, V[i]);
  }

  auto apply_S = [&](const std::vector<double>& x) {
    std::vector<double> y = op.apply_lap(op.apply_lap(x));
    for (int i = 0; i < ni; ++i) y[i] -= V[i] * x[i];
    return y;
  };

  // inverse iteration from a shift below the semibound -max V, with
  // Rayleigh refinement once the direction settles
  double sigma = -1.05 * vmax - 1.0;
  std::vector<double> x(ni);
  for (int i = 0; i < ni; ++i) x[i] = std::exp(-0.5 * grid->r[i]) + 1e-3;
  double nu = 0.0, resid = 0.0;
  std::vector<double> Sx;
  const double tol = 1e-8;
  for (int it = 0; it < 80; ++it) {
    PentaLDL fac(square_minus(op.lap, V, sigma));
    std::vector<double> y = x;
    fac.solve(y);
    double nrm = 0.0;
    for (double v : y) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0) || !std::isfinite(nrm))
      throw SolverError("v0_eigenpair: inverse iteration broke down", nrm);
    for (int i = 0; i < ni; ++i) x[i] = y[i] / nrm;
    Sx = apply_S(x);
    double ray = 0.0;
    for (int i = 0; i < ni; ++i) ray += x[i] * Sx[i];
    resid = 0.0;
    for (int i = 0; i < ni; ++i)
      resid = std::max(resid, std::abs(Sx[i] - ray * x[i]));
    resid /= std::max(1.0, std::abs(ray));
    nu = ray;
    if (resid < tol) break;
    if (it >= 3) sigma = ray - 1e-6 * std::abs(ray) - 1e-12;  // Rayleigh shift
  }
  if (resid >= tol)
    throw SolverError("v0_eigenpair: eigen-residual did not converge", resid);

  Eigenpair out;
  out.nu0 = nu;
  out.residual = resid;
  out.v0 = RadialProfile(grid, 0.0);
  std::vector<double> vv(ni);
  for (int i = 0; i < ni; ++i) vv[i] = x[i] / std::sqrt(op.weight[i]);
  const double scale = std::sqrt(op.inner(vv, vv));
  for (int i = 0; i < ni; ++i) out.v0.values[i] = vv[i] / scale;
  out.v0.values[ni] = 0.0;
  return out;
}

double f_of_t(double t, const RadialProfile& v0, const RadialProfile& u_mu) {
  if (t < 0.0) throw DomainError("f_of_t: need t >= 0");
  require_same_grid(v0, u_mu);
  RadialOperator op = make_radial_operator(v0.grid);
  const int ni = op.n();
  std::vector<double> x(ni);
  for (int i = 0; i < ni; ++i) x[i] = v0.values[i] * std::sqrt(op.weight[i]);
  std::vector<double> w = op.solve_shifted(t, op.solve_shifted(t, x));
  for (double v : w)
    if (!std::isfinite(v))
      throw SolverError("f_of_t: shifted solve failed at t", t);
  double n2 = 0.0, cross = 0.0;
  for (int i = 0; i < ni; ++i) {
    n2 += x[i] * x[i];
    cross += std::exp(u_mu.values[i]) * x[i] * w[i];
  }
  return 4.0 * kPi * (n2 - cross);
}

NegativeIndexReport count_negative(double lambda, int kmax,
                                   const RadialProfile& v0,
                                   const RadialProfile& u_mu, double mu_scaling,
                                   double nu0) {
  if (!(lambda > 0.0)) throw DomainError("count_negative: need lambda > 0");
  NegativeIndexReport rep;
  rep.lambda = lambda;
  rep.mu_scaling = mu_scaling;
  rep.nu0 = nu0;
  rep.f_samples.resize(kmax + 1);
  for (int k = 0; k <= kmax; ++k) {
    const double t = std::pow(2.0 * kPi * k / lambda, 2);
    rep.f_samples[k] = {t, f_of_t(t, v0, u_mu)};
  }
  if (!(rep.f_samples.back().second > 0.0))
    throw SolverError("count_negative: kmax too small, f still negative at t = " +
                          std::to_string(rep.f_samples.back().first),
                      rep.f_samples.back().second);
  rep.count = 0;
  for (const auto& [t, f] : rep.f_samples)
    if (f < 0.0) ++rep.count;
  return rep;
}

double find_t_max(const RadialProfile& v0, const RadialProfile& u_mu) {
  RadialOperator op = make_radial_operator(v0.grid);
  const int ni = op.n();
  std::vector<double> x(ni);
  for (int i = 0; i < ni; ++i) x[i] = v0.values[i] * std::sqrt(op.weight[i]);
  auto solve_norm = [&](double t) {
    std::vector<double> w = op.solve_shifted(t, op.solve_shifted(t, x));
    double m = 0.0;
    for (double v : w) m = std::max(m, std::abs(v));
    return m;
  };
  const double base = solve_norm(0.0);
  double n2 = 0.0;
  for (int i = 0; i < ni; ++i) n2 += x[i] * x[i];
  n2 *= 4.0 * kPi;
  double t = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double f = f_of_t(t, v0, u_mu);
    if (solve_norm(t) <= base / 100.0 && std::abs(f - n2) <= 0.1 * n2) return t;
    t *= 2.0;
  }
  throw SolverError("find_t_max: no qualifying t found", t);
}

}  // namespace negindex4d
}  // namespace liouville
