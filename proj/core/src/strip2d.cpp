#include "liouville/strip2d.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "liouville/errors.hpp"
#include "liouville/quadrature.hpp"
#include "liouville/tridiag.hpp"

namespace liouville {
namespace strip2d {

namespace {

constexpr double kPi = std::numbers::pi;

using SpMat = Eigen::SparseMatrix<double>;
using Trip = Eigen::Triplet<double>;

double sech(double x) { return 1.0 / std::cosh(x); }

// ---- interior packing: unknowns live on i = 1..nx-2, all j ----------------

int pack_size(const StripGrid& g) { return (g.nx - 2) * g.ny; }

int pidx(const StripGrid& g, int i, int j) { return (i - 1) * g.ny + j; }

Eigen::VectorXd pack(const StripField& u) {
  const StripGrid& g = u.grid;
  Eigen::VectorXd v(pack_size(g));
  for (int i = 1; i + 1 < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) v[pidx(g, i, j)] = u.at(i, j);
  return v;
}

StripField unpack(const StripGrid& g, const Eigen::VectorXd& v) {
  StripField u(g);
  for (int i = 1; i + 1 < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) u.at(i, j) = v[pidx(g, i, j)];
  return u;
}

// trapezoid-in-y weight
double wy(const StripGrid& g, int j) {
  return (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
}

// weighted inner product on packed vectors
double inner_packed(const StripGrid& g, const Eigen::VectorXd& a,
                    const Eigen::VectorXd& b) {
  double s = 0.0;
  for (int i = 1; i + 1 < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const int p = pidx(g, i, j);
      s += wy(g, j) * a[p] * b[p];
    }
  return s * g.hx() * g.hy();
}

// Laplacian + e^{u0} linearization diag(extra), mirrored-ghost Neumann in y,
// Dirichlet x columns eliminated.
SpMat assemble_operator(const StripGrid& g, const std::vector<double>& diag_extra) {
  const int N = pack_size(g);
  const double ax = 1.0 / (g.hx() * g.hx());
  const double ay = 1.0 / (g.hy() * g.hy());
  std::vector<Trip> trips;
  trips.reserve(std::size_t(N) * 5);
  for (int i = 1; i + 1 < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) {
      const int p = pidx(g, i, j);
      trips.emplace_back(p, p, -2.0 * ax - 2.0 * ay + diag_extra[p]);
      if (i > 1) trips.emplace_back(p, pidx(g, i - 1, j), ax);
      if (i + 2 < g.nx) trips.emplace_back(p, pidx(g, i + 1, j), ax);
      if (j == 0)
        trips.emplace_back(p, pidx(g, i, 1), 2.0 * ay);
      else if (j == g.ny - 1)
        trips.emplace_back(p, pidx(g, i, g.ny - 2), 2.0 * ay);
      else {
        trips.emplace_back(p, pidx(g, i, j - 1), ay);
        trips.emplace_back(p, pidx(g, i, j + 1), ay);
      }
    }
  }
  SpMat A(N, N);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

std::vector<double> linearization_diag(const StripGrid& g,
                                       const Eigen::VectorXd& u) {
  std::vector<double> d(pack_size(g));
  for (int i = 1; i + 1 < g.nx; ++i) {
    const double eu0 = 2.0 * sech(g.x(i)) * sech(g.x(i));
    for (int j = 0; j < g.ny; ++j) {
      const int p = pidx(g, i, j);
      d[p] = eu0 * std::exp(u[p]);
    }
  }
  return d;
}

Eigen::VectorXd nonlinear_residual(const StripGrid& g, const Eigen::VectorXd& u) {
  const int N = pack_size(g);
  const double ax = 1.0 / (g.hx() * g.hx());
  const double ay = 1.0 / (g.hy() * g.hy());
  Eigen::VectorXd F(N);
  auto U = [&](int i, int j) -> double {
    if (i == 0 || i == g.nx - 1) return 0.0;
    return u[pidx(g, i, j)];
  };
  for (int i = 1; i + 1 < g.nx; ++i) {
    const double eu0 = 2.0 * sech(g.x(i)) * sech(g.x(i));
    for (int j = 0; j < g.ny; ++j) {
      const double uc = U(i, j);
      const double lapx = (U(i - 1, j) - 2.0 * uc + U(i + 1, j)) * ax;
      const double uym = (j == 0) ? U(i, 1) : U(i, j - 1);
      const double uyp = (j == g.ny - 1) ? U(i, g.ny - 2) : U(i, j + 1);
      const double lapy = (uym - 2.0 * uc + uyp) * ay;
      F[pidx(g, i, j)] = lapx + lapy + eu0 * (std::exp(uc) - 1.0);
    }
  }
  return F;
}

// 1D operator d^2/dx^2 + 2 sech^2(x) on the grid's x nodes (Dirichlet).
Tridiag x_operator(double X, int nx) {
  const double h = 2.0 * X / (nx - 1);
  Tridiag T;
  T.diag.resize(nx - 2);
  T.off.assign(nx - 3, 1.0 / (h * h));
  for (int i = 1; i + 1 < nx; ++i) {
    const double x = -X + i * h;
    T.diag[i - 1] = -2.0 / (h * h) + 2.0 * sech(x) * sech(x);
  }
  return T;
}

// unit-strip y-mode curvature of the mirrored-ghost second difference
double mode_curvature_unit(const StripGrid& g, int j) {
  const double hh = 1.0 / (g.ny - 1);
  return (2.0 - 2.0 * std::cos(kPi * j * hh)) / (hh * hh);
}

struct Kernel1D {
  double kappa = 0.0;
  std::vector<double> phi;  // on interior x nodes, unit 2-norm
};

Kernel1D bound_state(const StripGrid& g) {
  Tridiag T = x_operator(g.X, g.nx);
  const int n = T.n();
  const double kappa = tridiag_eigenvalue(T, n - 1);
  auto [ev, vec] = tridiag_eigenpair(T, kappa);
  Kernel1D k;
  k.kappa = ev;
  k.phi = std::move(vec);
  // fix sign (positive at the center like sech) and enforce evenness exactly
  if (k.phi[n / 2] < 0.0)
    for (double& v : k.phi) v = -v;
  for (int i = 0; i < n / 2; ++i) {
    const double avg = 0.5 * (k.phi[i] + k.phi[n - 1 - i]);
    k.phi[i] = k.phi[n - 1 - i] = avg;
  }
  return k;
}

struct Bordered {
  // [ L   c ] [x ]   [ b ]
  // [ c^T 0 ] [mu] = [ g ]
  Eigen::SparseLU<SpMat> lu;
  bool ok = false;
  void factor(const SpMat& L, const Eigen::VectorXd& c) {
    const int N = int(L.rows());
    std::vector<Trip> trips;
    trips.reserve(L.nonZeros() + 2 * N + 1);
    for (int k = 0; k < L.outerSize(); ++k)
      for (SpMat::InnerIterator it(L, k); it; ++it)
        trips.emplace_back(int(it.row()), int(it.col()), it.value());
    for (int i = 0; i < N; ++i) {
      if (c[i] != 0.0) {
        trips.emplace_back(i, N, c[i]);
        trips.emplace_back(N, i, c[i]);
      }
    }
    SpMat B(N + 1, N + 1);
    B.setFromTriplets(trips.begin(), trips.end());
    B.makeCompressed();
    lu.compute(B);
    ok = (lu.info() == Eigen::Success);
  }
  Eigen::VectorXd solve(const Eigen::VectorXd& b, double g) {
    Eigen::VectorXd rhs(b.size() + 1);
    rhs.head(b.size()) = b;
    rhs[b.size()] = g;
    return lu.solve(rhs);
  }
};

}  // namespace

double trivial_solution_2d(double x) {
  const double s = sech(x);
  return std::log(2.0 * s * s);
}

StripField residual_2d(const StripGrid& grid, const StripField& u) {
  if (!(u.grid == grid)) throw ContractError("residual_2d: field/grid mismatch");
  Eigen::VectorXd F = nonlinear_residual(grid, pack(u));
  return unpack(grid, F);
}

GroundState poschl_teller_ground(double X, double h) {
  if (!(X >= 10.0)) throw DomainError("poschl_teller_ground: need X >= 10");
  if (!(h <= 0.05 && h > 0.0)) throw DomainError("poschl_teller_ground: need h <= 0.05");
  const int nx = int(std::lround(2.0 * X / h)) + 1;
  // operator -d^2/dx^2 - 2 sech^2: negate the x_operator
  Tridiag T = x_operator(X, nx);
  for (double& v : T.diag) v = -v;
  for (double& v : T.off) v = -v;
  GroundState gs;
  const double e0 = tridiag_eigenvalue(T, 0);
  const double e1 = tridiag_eigenvalue(T, 1);
  auto [ev, vec] = tridiag_eigenpair(T, e0);
  gs.eigenvalue = ev;
  gs.second_eigenvalue = e1;
  gs.x.resize(nx - 2);
  for (int i = 1; i + 1 < nx; ++i) gs.x[i - 1] = -X + i * h;
  gs.profile = std::move(vec);
  if (gs.profile[(nx - 2) / 2] < 0.0)
    for (double& v : gs.profile) v = -v;
  return gs;
}

double kappa_bound_mode(const StripGrid& grid) {
  Tridiag T = x_operator(grid.X, grid.nx);
  return tridiag_eigenvalue(T, T.n() - 1);
}

SpectrumReport linearized_spectrum(double lambda, const StripGrid& grid, int n) {
  if (n < 1) throw DomainError("linearized_spectrum: need n >= 1");
  StripGrid g(lambda, grid.X, grid.nx, grid.ny);
  Tridiag T = x_operator(g.X, g.nx);
  const int nx_i = T.n();

  SpectrumReport rep;

  // ---- per-mode route: eigenvalues kappa_i - c_j / lambda^2 ----
  const int kappa_index = nx_i - 1;
  const double kappa = tridiag_eigenvalue(T, kappa_index);
  for (int j = 0; j < g.ny; ++j) {
    const double tau = mode_curvature_unit(g, j) / (lambda * lambda);
    // bound entry
    {
      SpectrumEntry e;
      e.mode = j;
      e.bound = true;
      e.eigenvalue = kappa - tau;
      rep.per_mode.push_back(std::move(e));
    }
    // nearest continuum entries bracketing tau
    const int below = sturm_count(T, tau);
    for (int idx : {below - 1, below}) {
      if (idx < 0 || idx >= nx_i || idx == kappa_index) continue;
      SpectrumEntry e;
      e.mode = j;
      e.bound = false;
      e.eigenvalue = tridiag_eigenvalue(T, idx) - tau;
      rep.per_mode.push_back(std::move(e));
    }
  }
  std::sort(rep.per_mode.begin(), rep.per_mode.end(),
            [](const SpectrumEntry& a, const SpectrumEntry& b) {
              return std::abs(a.eigenvalue) < std::abs(b.eigenvalue);
            });
  if (int(rep.per_mode.size()) > n) rep.per_mode.resize(n);
  // attach x profiles
  for (SpectrumEntry& e : rep.per_mode) {
    const double tau = mode_curvature_unit(g, e.mode) / (lambda * lambda);
    auto [ev, vec] = tridiag_eigenpair(T, e.eigenvalue + tau);
    e.profile_x = std::move(vec);
    double resid = 0.0;
    for (int i = 0; i < nx_i; ++i) {
      double tv = T.diag[i] * e.profile_x[i];
      if (i > 0) tv += T.off[i - 1] * e.profile_x[i - 1];
      if (i + 1 < nx_i) tv += T.off[i] * e.profile_x[i + 1];
      resid = std::max(resid, std::abs(tv - (e.eigenvalue + tau) * e.profile_x[i]));
    }
    e.residual = resid;
  }

  // ---- full 2D route ----
  const int N = pack_size(g);
  std::vector<double> eu0(N);
  for (int i = 1; i + 1 < g.nx; ++i) {
    const double v = 2.0 * sech(g.x(i)) * sech(g.x(i));
    for (int j = 0; j < g.ny; ++j) eu0[pidx(g, i, j)] = v;
  }
  SpMat L = assemble_operator(g, eu0);

  if (N <= 2048) {
    // dense symmetrized fallback
    Eigen::VectorXd w(N);
    for (int i = 1; i + 1 < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) w[pidx(g, i, j)] = wy(g, j);
    Eigen::MatrixXd D = Eigen::MatrixXd(L);
    for (int r = 0; r < N; ++r)
      for (int c = 0; c < N; ++c)
        D(r, c) *= std::sqrt(w[r] / w[c]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D);
    std::vector<int> order(N);
    for (int i = 0; i < N; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(es.eigenvalues()[a]) < std::abs(es.eigenvalues()[b]);
    });
    for (int m = 0; m < std::min(n, N); ++m) {
      SpectrumEntry e;
      e.eigenvalue = es.eigenvalues()[order[m]];
      e.mode = -1;
      rep.full_2d.push_back(std::move(e));
    }
  } else {
    Eigen::SparseLU<SpMat> lu;
    lu.compute(L);
    if (lu.info() != Eigen::Success)
      throw SolverError("linearized_spectrum: factorization failed", 0.0);
    std::vector<Eigen::VectorXd> found;
    for (int m = 0; m < n; ++m) {
      Eigen::VectorXd v = Eigen::VectorXd::Ones(N);
      for (int i = 0; i < N; ++i) v[i] += 1e-3 * ((i * 2654435761u >> 16) % 97);
      double nu = 0.0;
      for (int it = 0; it < 200; ++it) {
        // deflate in the weighted inner product
        for (const auto& q : found) {
          const double c = inner_packed(g, q, v) / inner_packed(g, q, q);
          v -= c * q;
        }
        Eigen::VectorXd y = lu.solve(v);
        const double nrm = std::sqrt(inner_packed(g, y, y));
        if (!(nrm > 0.0) || !std::isfinite(nrm))
          throw SolverError("linearized_spectrum: inverse iteration broke down", nrm);
        y /= nrm;
        Eigen::VectorXd Ly = L * y;
        const double ray = inner_packed(g, y, Ly) / inner_packed(g, y, y);
        const bool settled =
            std::abs(ray - nu) <= 1e-13 * std::max(1.0, std::abs(ray)) && it > 2;
        nu = ray;
        v = y;
        if (settled) break;
      }
      Eigen::VectorXd Lv = L * v;
      double resid = (Lv - nu * v).norm() / v.norm();
      SpectrumEntry e;
      e.eigenvalue = nu;
      e.mode = -1;
      e.residual = resid;
      rep.full_2d.push_back(std::move(e));
      found.push_back(v);
    }
    std::sort(rep.full_2d.begin(), rep.full_2d.end(),
              [](const SpectrumEntry& a, const SpectrumEntry& b) {
                return std::abs(a.eigenvalue) < std::abs(b.eigenvalue);
              });
  }

  // cross-method gap on bound-mode eigenvalues, restricted to the window
  // the full-2D route actually resolved (it reports the n nearest zero, so
  // bound modes beyond its last entry have no counterpart to compare)
  double gap = 0.0;
  double window = 0.0;
  for (const SpectrumEntry& fd : rep.full_2d)
    window = std::max(window, std::abs(fd.eigenvalue));
  for (const SpectrumEntry& pm : rep.per_mode) {
    if (!pm.bound || std::abs(pm.eigenvalue) > window) continue;
    double best = std::numeric_limits<double>::infinity();
    for (const SpectrumEntry& fd : rep.full_2d)
      best = std::min(best, std::abs(fd.eigenvalue - pm.eigenvalue));
    if (std::isfinite(best)) gap = std::max(gap, best);
  }
  rep.bound_mode_gap = gap;
  return rep;
}

std::vector<double> detect_bifurcations(double lambda_lo, double lambda_hi,
                                        double step, const StripGrid& grid) {
  if (!(0.0 < lambda_lo && lambda_lo < lambda_hi))
    throw DomainError("detect_bifurcations: need 0 < lo < hi");
  if (!(step > 0.0)) throw DomainError("detect_bifurcations: need step > 0");
  const double kappa = kappa_bound_mode(grid);
  std::vector<double> out;
  const int jmax = int(std::ceil(lambda_hi * std::sqrt(std::max(kappa, 1e-12)) / kPi)) + 1;
  for (int j = 1; j <= jmax; ++j) {
    auto nu = [&](double lam) { return kappa - (kPi * j / lam) * (kPi * j / lam); };
    // scan for the sign change of this mode's bound eigenvalue
    double prev_l = lambda_lo, prev_v = nu(lambda_lo);
    bool found = false;
    double lo = 0, hi = 0;
    for (double lam = lambda_lo + step; lam <= lambda_hi + 1e-12; lam += step) {
      const double v = nu(lam);
      if (prev_v < 0.0 && v >= 0.0) {
        lo = prev_l;
        hi = lam;
        found = true;
        break;
      }
      prev_l = lam;
      prev_v = v;
    }
    if (!found) continue;
    for (int it = 0; it < 80 && hi - lo > 1e-7; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (nu(mid) < 0.0)
        lo = mid;
      else
        hi = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  std::sort(out.begin(), out.end());
  return out;
}

BifurcationDiagnostics bifurcation_diagnostics(double lambda_star,
                                               const StripGrid& grid) {
  Kernel1D ker = bound_state(grid);
  const double kappa = ker.kappa;

  // identify the kernel mode: grid's own singular lambda for mode j is
  // sqrt(cbar_j / kappa) with cbar_j the discrete unit-strip curvature
  StripGrid g0(std::max(lambda_star, 1e-6), grid.X, grid.nx, grid.ny);
  int mode = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 1; j < g0.ny; ++j) {
    const double lam_j = std::sqrt(mode_curvature_unit(g0, j) / kappa);
    if (std::abs(lam_j - lambda_star) < best) {
      best = std::abs(lam_j - lambda_star);
      mode = j;
    }
  }
  if (mode < 1 || best > 1e-2)
    throw DomainError("bifurcation_diagnostics: lambda_star is not near a "
                      "detected bifurcation point");
  const double lam_disc = std::sqrt(mode_curvature_unit(g0, mode) / kappa);

  // degeneracy check at the snapped parameter
  int near_zero = 0;
  for (int j = 0; j < g0.ny; ++j) {
    const double nu = kappa - mode_curvature_unit(g0, j) / (lam_disc * lam_disc);
    if (std::abs(nu) < 1e-4) ++near_zero;
  }
  if (near_zero != 1)
    throw DegeneracyError("bifurcation_diagnostics: kernel is not numerically "
                          "one-dimensional");

  StripGrid g(lam_disc, grid.X, grid.nx, grid.ny);
  BifurcationDiagnostics diag;
  diag.lambda_star = lam_disc;
  diag.mode = mode;

  // kernel field u* = phi(x) cos(pi k y / lambda), L^2-normalized
  diag.u_star = StripField(g);
  const double hh = 1.0 / (g.ny - 1);
  for (int i = 1; i + 1 < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      diag.u_star.at(i, j) = ker.phi[i - 1] * std::cos(kPi * mode * j * hh);
  const double nrm = std::sqrt(inner(diag.u_star, diag.u_star));
  for (double& v : diag.u_star.values) v /= nrm;
  diag.psi = diag.u_star;

  Eigen::VectorXd us = pack(diag.u_star);
  const int N = pack_size(g);

  // F_{lambda u}[u*] = -(2/lambda^3) * d^2/dy^2 (unit strip) = -(2/lambda) Dyy_phys
  Eigen::VectorXd Mu(N);
  {
    const double ay = 1.0 / (g.hy() * g.hy());
    for (int i = 1; i + 1 < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        const double uc = us[pidx(g, i, j)];
        const double uym = (j == 0) ? us[pidx(g, i, 1)] : us[pidx(g, i, j - 1)];
        const double uyp = (j == g.ny - 1) ? us[pidx(g, i, g.ny - 2)]
                                           : us[pidx(g, i, j + 1)];
        Mu[pidx(g, i, j)] = -(2.0 / g.lambda) * (uym - 2.0 * uc + uyp) * ay;
      }
  }

  // F_uu[u*,u*] = e^{u0} (u*)^2 ; F_uuu[u*,u*,u*] = e^{u0} (u*)^3
  Eigen::VectorXd Fuu(N), Fuuu(N);
  for (int i = 1; i + 1 < g.nx; ++i) {
    const double eu0 = 2.0 * sech(g.x(i)) * sech(g.x(i));
    for (int j = 0; j < g.ny; ++j) {
      const int p = pidx(g, i, j);
      Fuu[p] = eu0 * us[p] * us[p];
      Fuuu[p] = Fuu[p] * us[p];
    }
  }

  const double den = inner_packed(g, us, Mu);
  diag.lambda1 = -0.5 * inner_packed(g, us, Fuu) / den;

  // u2 from the projected system  L u2 = -1/2 F_uu[u*,u*],  <u2, u*> = 0
  std::vector<double> eu0d(N);
  for (int i = 1; i + 1 < g.nx; ++i) {
    const double v = 2.0 * sech(g.x(i)) * sech(g.x(i));
    for (int j = 0; j < g.ny; ++j) eu0d[pidx(g, i, j)] = v;
  }
  SpMat L = assemble_operator(g, eu0d);
  Eigen::VectorXd c(N);
  for (int i = 1; i + 1 < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const int p = pidx(g, i, j);
      c[p] = wy(g, j) * g.hx() * g.hy() * us[p];
    }
  Bordered bs;
  bs.factor(L, c);
  if (!bs.ok) throw SolverError("bifurcation_diagnostics: bordered solve failed", 0.0);
  Eigen::VectorXd sol = bs.solve(-0.5 * Fuu, 0.0);
  Eigen::VectorXd u2 = sol.head(N);

  // residual of the defining equation in the complement of <u*>
  {
    Eigen::VectorXd r = L * u2 + 0.5 * Fuu;
    const double proj = inner_packed(g, r, us) / inner_packed(g, us, us);
    Eigen::VectorXd rp = r - proj * us;
    diag.u2_residual = rp.cwiseAbs().maxCoeff();
  }

  Eigen::VectorXd Fuu_u2(N);
  for (int i = 1; i + 1 < g.nx; ++i) {
    const double eu0 = 2.0 * sech(g.x(i)) * sech(g.x(i));
    for (int j = 0; j < g.ny; ++j) {
      const int p = pidx(g, i, j);
      Fuu_u2[p] = eu0 * us[p] * u2[p];
    }
  }
  diag.lambda2 =
      -(inner_packed(g, us, Fuu_u2) + inner_packed(g, us, Fuuu) / 6.0) / den;

  diag.u2 = unpack(g, u2);
  return diag;
}

NewtonResult newton_solve(double lambda, const StripGrid& grid,
                          const StripField& init, double tol, int max_iter) {
  if (!(tol > 0.0)) throw DomainError("newton_solve: need tol > 0");
  StripGrid g(lambda, grid.X, grid.nx, grid.ny);
  if (!(init.grid.nx == g.nx && init.grid.ny == g.ny))
    throw ContractError("newton_solve: init field shape mismatch");
  Eigen::VectorXd u = pack(init);
  NewtonResult out;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd F = nonlinear_residual(g, u);
    const double res = F.cwiseAbs().maxCoeff();
    out.residual_history.push_back(res);
    if (!std::isfinite(res))
      throw SolverError("newton_solve: residual is not finite", res);
    if (res <= tol) {
      out.field = unpack(g, u);
      return out;
    }
    SpMat J = assemble_operator(g, linearization_diag(g, u));
    Eigen::SparseLU<SpMat> lu;
    lu.compute(J);
    if (lu.info() != Eigen::Success)
      throw SolverError("newton_solve: Jacobian factorization failed", res);
    u -= lu.solve(F);
  }
  throw SolverError("newton_solve: max_iter exceeded",
                    out.residual_history.back());
}

Branch continue_branch(const BifurcationDiagnostics& diag, int n_steps,
                       double ds) {
  if (!(ds > 0.0)) throw DomainError("continue_branch: need ds > 0");
  const StripGrid& g0 = diag.u_star.grid;

  Eigen::VectorXd ustar = pack(diag.u_star);
  const double ustar_n2 = inner_packed(g0, ustar, ustar);

  // state: (u, lambda); tangent (du, dlam) normalized in the product metric
  Eigen::VectorXd u_prev = Eigen::VectorXd::Zero(pack_size(g0));
  double lam_prev = diag.lambda_star;
  Eigen::VectorXd du_prev = ustar / std::sqrt(ustar_n2);
  double dlam_prev = 0.0;

  Branch branch;
  double step = ds;
  int halvings_left = 5;

  auto grid_at = [&](double lam) {
    return StripGrid(lam, g0.X, g0.nx, g0.ny);
  };

  auto dF_dlambda = [&](const StripGrid& g, const Eigen::VectorXd& u) {
    // dF/dlambda = -(2/lambda) Dyy_phys u  (unit-strip chain rule)
    Eigen::VectorXd Fl(pack_size(g));
    const double ay = 1.0 / (g.hy() * g.hy());
    for (int i = 1; i + 1 < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        const double uc = u[pidx(g, i, j)];
        const double uym = (j == 0) ? u[pidx(g, i, 1)] : u[pidx(g, i, j - 1)];
        const double uyp = (j == g.ny - 1) ? u[pidx(g, i, g.ny - 2)]
                                           : u[pidx(g, i, j + 1)];
        Fl[pidx(g, i, j)] = -(2.0 / g.lambda) * (uym - 2.0 * uc + uyp) * ay;
      }
    return Fl;
  };

  while (int(branch.points.size()) < n_steps) {
    Eigen::VectorXd u = u_prev + step * du_prev;
    double lam = lam_prev + step * dlam_prev;
    bool converged = false;
    double res = 0.0, res_prev = std::numeric_limits<double>::infinity();
    // chord corrector: one factorization per step, refreshed only on stall
    Eigen::SparseLU<SpMat> lu;
    bool have_factor = false;
    for (int it = 0; it < 40; ++it) {
      StripGrid g = grid_at(lam);
      Eigen::VectorXd F = nonlinear_residual(g, u);
      const double gcon = inner_packed(g0, du_prev, u - u_prev) +
                          dlam_prev * (lam - lam_prev) - step;
      res = std::max(F.cwiseAbs().maxCoeff(), std::abs(gcon));
      if (!std::isfinite(res)) break;
      if (res <= 1e-11) {
        converged = true;
        break;
      }
      if (!have_factor || res > 0.5 * res_prev) {
        SpMat J = assemble_operator(g, linearization_diag(g, u));
        lu.compute(J);
        if (lu.info() != Eigen::Success) break;
        have_factor = true;
      }
      res_prev = res;
      Eigen::VectorXd Fl = dF_dlambda(g, u);
      Eigen::VectorXd z1 = lu.solve(F);
      Eigen::VectorXd z2 = lu.solve(Fl);
      const double cz1 = inner_packed(g0, du_prev, z1);
      const double cz2 = inner_packed(g0, du_prev, z2);
      const double dl = (cz1 - gcon) / (dlam_prev - cz2);
      u -= z1 + dl * z2;
      lam += dl;
    }
    if (!converged) {
      if (--halvings_left < 0)
        throw SolverError("continue_branch: step failure after 5 halvings", res);
      step *= 0.5;
      continue;
    }
    StripGrid g = grid_at(lam);
    BranchPoint pt;
    pt.lambda = lam;
    pt.amplitude = inner_packed(g0, u, ustar) / ustar_n2;
    pt.newton_residual = nonlinear_residual(g, u).cwiseAbs().maxCoeff();
    pt.field = unpack(g, u);
    branch.points.push_back(std::move(pt));

    Eigen::VectorXd du_sec = u - u_prev;
    const double dl_sec = lam - lam_prev;
    const double tn = std::sqrt(inner_packed(g0, du_sec, du_sec) + dl_sec * dl_sec);
    du_prev = du_sec / tn;
    dlam_prev = dl_sec / tn;
    u_prev = u;
    lam_prev = lam;
  }

  // quadratic fit lambda = a + b t^2 over the small-amplitude points
  std::vector<std::pair<double, double>> fitpts;
  for (const BranchPoint& p : branch.points)
    if (std::abs(p.amplitude) <= 0.2) fitpts.emplace_back(p.amplitude, p.lambda);
  if (fitpts.size() < 3) {
    fitpts.clear();
    for (std::size_t i = 0; i < std::min<std::size_t>(3, branch.points.size()); ++i)
      fitpts.emplace_back(branch.points[i].amplitude, branch.points[i].lambda);
  }
  double s0 = 0, s1 = 0, s2 = 0, b0 = 0, b1 = 0;
  for (auto [t, l] : fitpts) {
    const double q = t * t;
    s0 += 1.0;
    s1 += q;
    s2 += q * q;
    b0 += l;
    b1 += l * q;
  }
  const double det = s0 * s2 - s1 * s1;
  branch.lambda_star_fit = (b0 * s2 - b1 * s1) / det;
  branch.lambda2_fit = (s0 * b1 - s1 * b0) / det;
  return branch;
}

StripField rescale_to_exact_period(const StripField& u, double epsilon) {
  if (epsilon <= -1.0) throw DomainError("rescale_to_exact_period: need eps > -1");
  const StripGrid& g = u.grid;
  const double s = 1.0 + epsilon;
  StripGrid gn(g.lambda / s, g.X, g.nx, g.ny);
  StripField out(gn);
  std::vector<double> xn(g.nx), col(g.nx);
  for (int i = 0; i < g.nx; ++i) xn[i] = g.x(i);
  const double shift = 2.0 * std::log(s);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) col[i] = u.at(i, j);
    for (int i = 0; i < g.nx; ++i) {
      const double xs = s * gn.x(i);
      // (1+eps) y_new(j) lands exactly on the source node y_old(j)
      double pert = (std::abs(xs) >= g.X) ? 0.0 : interp_cubic(xn, col, xs);
      out.at(i, j) = pert + trivial_solution_2d(xs) - trivial_solution_2d(gn.x(i)) + shift;
    }
  }
  return out;
}

StripField extend_by_reflection(const StripField& u, int copies) {
  if (copies < 1) throw DomainError("extend_by_reflection: need copies >= 1");
  const StripGrid& g = u.grid;
  // second-order one-sided Neumann check at both y walls
  double viol = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    const double d0 = (-3.0 * u.at(i, 0) + 4.0 * u.at(i, 1) - u.at(i, 2)) /
                      (2.0 * g.hy());
    const double d1 = (3.0 * u.at(i, g.ny - 1) - 4.0 * u.at(i, g.ny - 2) +
                       u.at(i, g.ny - 3)) /
                      (2.0 * g.hy());
    viol = std::max({viol, std::abs(d0), std::abs(d1)});
  }
  if (viol > 1e-6 * std::max(1.0, u.sup_norm()))
    throw ContractError("extend_by_reflection: Neumann violation " +
                        std::to_string(viol));
  StripGrid ge(g.lambda * copies, g.X, g.nx, copies * (g.ny - 1) + 1);
  StripField out(ge);
  for (int c = 0; c < copies; ++c) {
    for (int j = 0; j < g.ny; ++j) {
      const int jg = c * (g.ny - 1) + j;
      const int js = (c % 2 == 0) ? j : g.ny - 1 - j;
      for (int i = 0; i < g.nx; ++i) out.at(i, jg) = u.at(i, js);
    }
  }
  return out;
}

ChenLiReport validate_stencil_chen_li(double h) {
  if (!(h > 0.0)) throw DomainError("validate_stencil_chen_li: need h > 0");
  auto residual = [](double hh) {
    const int n = int(std::lround(2.0 / hh)) + 1;
    auto u = [](double x, double y) {
      const double r2 = x * x + y * y;
      return std::log(32.0 / ((4.0 + r2) * (4.0 + r2)));
    };
    double worst = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
      const double x = -1.0 + i * hh;
      for (int j = 1; j + 1 < n; ++j) {
        const double y = -1.0 + j * hh;
        const double lap = (u(x - hh, y) + u(x + hh, y) + u(x, y - hh) +
                            u(x, y + hh) - 4.0 * u(x, y)) /
                           (hh * hh);
        const double r2 = x * x + y * y;
        worst = std::max(worst, std::abs(lap + 32.0 / ((4.0 + r2) * (4.0 + r2))));
      }
    }
    return worst;
  };
  ChenLiReport rep;
  rep.residual_h = residual(h);
  rep.residual_h2 = residual(h / 2.0);
  rep.order = std::log2(rep.residual_h / rep.residual_h2);
  return rep;
}

double inner(const StripField& a, const StripField& b) {
  if (!(a.grid == b.grid)) throw ContractError("inner: grid mismatch");
  const StripGrid& g = a.grid;
  double s = 0.0;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) s += wy(g, j) * a.at(i, j) * b.at(i, j);
  return s * g.hx() * g.hy();
}

}  // namespace strip2d
}  // namespace liouville
