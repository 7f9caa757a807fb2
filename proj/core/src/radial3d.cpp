#include "liouville/radial3d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "liouville/errors.hpp"
#include "liouville/quadrature.hpp"

namespace liouville {
namespace radial3d {

namespace {

constexpr double kPi = std::numbers::pi;

struct Kernels {
  std::vector<double> I1, I2, K1, K3;  // cumulative pieces of the polar kernel
};

// I1 = int_0^r s^2 w, I2 = int_0^r s^4 w, K1 = int_r^R s w, K3 = int_r^R s^3 w
void kernel_integrals(const std::vector<double>& r,
                      const CumulativeIntegrator& ci,
                      const std::vector<double>& w, Kernels& k) {
  const int n = int(r.size());
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) f[i] = r[i] * r[i] * w[i];
  ci.cumulative(f, k.I1);
  for (int i = 0; i < n; ++i) f[i] *= r[i] * r[i];
  ci.cumulative(f, k.I2);
  for (int i = 0; i < n; ++i) f[i] = r[i] * w[i];
  ci.cumulative(f, k.K1);
  for (int i = 0; i < n; ++i) f[i] *= r[i] * r[i];
  ci.cumulative(f, k.K3);
  const double K1tot = k.K1.back(), K3tot = k.K3.back();
  for (int i = 0; i < n; ++i) {
    k.K1[i] = K1tot - k.K1[i];
    k.K3[i] = K3tot - k.K3[i];
  }
}

void apply_T(const std::vector<double>& r, const CumulativeIntegrator& ci,
             const std::vector<double>& u, double eps,
             std::vector<double>& out) {
  const int n = int(r.size());
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = std::exp(-eps * r[i] * r[i] + u[i]);
  Kernels k;
  kernel_integrals(r, ci, w, k);
  out.resize(n);
  out[0] = -0.5 * k.K3[0];
  for (int i = 1; i < n; ++i) {
    const double ri = r[i];
    out[i] = -(3.0 * ri * ri * k.I1[i] + k.I2[i]) / (6.0 * ri) -
             (ri * ri * k.K1[i] + 3.0 * k.K3[i]) / 6.0;
  }
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// tail of int_r^infty s (r^2 + 3 s^2) e^{c - m(s-R)} ds for linear decay
double linear_tail(double r, double R, double c, double m) {
  const double E1 = 1.0 / m, E2 = 1.0 / (m * m);
  const double E3 = 2.0 / (m * m * m), E4 = 6.0 / (m * m * m * m);
  const double lin = E2 + R * E1;
  const double cub = E4 + 3.0 * R * E3 + 3.0 * R * R * E2 + R * R * R * E1;
  return std::exp(c) * (r * r * lin + 3.0 * cub);
}

}  // namespace

RadialProfile apply_T_eps(const RadialProfile& u, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("apply_T_eps: need epsilon > 0");
  CumulativeIntegrator ci(u.grid->r);
  RadialProfile out(u.grid, epsilon);
  apply_T(u.grid->r, ci, u.values, epsilon, out.values);
  return out;
}

double tail_bound_at(const RadialGrid& grid, double epsilon, double r) {
  const double R = grid.R();
  const double g = std::exp(-epsilon * R * R);
  // int_R^inf s e^{-eps s^2} = g/(2 eps);  int_R^inf s^3 e^{-eps s^2} =
  // (R^2/(2 eps) + 1/(2 eps^2)) g;  e^u <= 1.
  const double i1 = g / (2.0 * epsilon);
  const double i3 = (R * R / (2.0 * epsilon) + 1.0 / (2.0 * epsilon * epsilon)) * g;
  return (r * r * i1 + 3.0 * i3) / 6.0;
}

std::pair<RadialProfile, PicardReport> picard_solve(
    double epsilon, RadialGridPtr grid, double tol, int max_iter,
    const std::optional<RadialProfile>& init) {
  if (!(epsilon > 0.0)) throw DomainError("picard_solve: need epsilon > 0");
  if (!(tol > 0.0)) throw DomainError("picard_solve: need tol > 0");

  const std::vector<double>& r = grid->r;
  CumulativeIntegrator ci(r);
  const int n = int(r.size());

  std::vector<double> u(n, 0.0);
  if (init) {
    require_same_grid(*init, RadialProfile(grid, epsilon));
    u = init->values;
  }

  PicardReport rep;
  std::vector<double> Tu;
  double omega = 1.0;
  double res_prev = std::numeric_limits<double>::infinity();

  // phase 1: damped Picard (omega starts at 1, halves on residual increase)
  const int picard_iters = std::min(max_iter, 60);
  for (int it = 0; it < picard_iters; ++it) {
    apply_T(r, ci, u, epsilon, Tu);
    const double res = sup_diff(u, Tu);
    rep.residual_history.push_back(res);
    if (!std::isfinite(res))
      throw SolverError("picard_solve: iteration produced non-finite values", res);
    if (res < tol) {
      rep.iterations = it + 1;
      rep.damping_used = omega;
      rep.final_residual = res;
      rep.tail_bound = tail_bound_at(*grid, epsilon, grid->R());
      RadialProfile out(grid, epsilon);
      out.values = std::move(Tu);
      return {std::move(out), std::move(rep)};
    }
    if (res > res_prev) omega = std::max(omega / 2.0, 1.0 / 16.0);
    for (int i = 0; i < n; ++i) u[i] = (1.0 - omega) * u[i] + omega * Tu[i];
    res_prev = res;
  }

  // phase 2: Anderson-type secant acceleration on the residual history.
  // The linearized map has spectrum on both sides of zero (|x-y| is only
  // conditionally definite), so pure under-relaxation can stall near an
  // eigenvalue +1 crossing; the secant update handles that.
  rep.accelerated = true;
  constexpr int kDepth = 5;
  std::vector<std::vector<double>> hist_u, hist_f;
  for (int it = picard_iters; it < max_iter; ++it) {
    apply_T(r, ci, u, epsilon, Tu);
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) f[i] = Tu[i] - u[i];
    double res = 0.0;
    for (double v : f) res = std::max(res, std::abs(v));
    rep.residual_history.push_back(res);
    if (!std::isfinite(res))
      throw SolverError("picard_solve: iteration produced non-finite values", res);
    if (res < tol) {
      rep.iterations = it + 1;
      rep.damping_used = omega;
      rep.final_residual = res;
      rep.tail_bound = tail_bound_at(*grid, epsilon, grid->R());
      RadialProfile out(grid, epsilon);
      out.values = std::move(Tu);
      return {std::move(out), std::move(rep)};
    }
    hist_u.push_back(u);
    hist_f.push_back(f);
    if (int(hist_u.size()) > kDepth) {
      hist_u.erase(hist_u.begin());
      hist_f.erase(hist_f.begin());
    }
    const int m = int(hist_u.size()) - 1;
    std::vector<double> unew;
    if (m == 0) {
      unew = u;
      for (int i = 0; i < n; ++i) unew[i] += 0.5 * f[i];
    } else {
      // least squares min || f - dF gamma ||_2 over the secant differences
      std::vector<std::vector<double>> dU(m), dF(m);
      for (int c = 0; c < m; ++c) {
        dU[c].resize(n);
        dF[c].resize(n);
        for (int i = 0; i < n; ++i) {
          dU[c][i] = hist_u[c + 1][i] - hist_u[c][i];
          dF[c][i] = hist_f[c + 1][i] - hist_f[c][i];
        }
      }
      // normal equations (m <= 4, well within double precision here)
      std::vector<double> G(m * m, 0.0), rhs(m, 0.0), gam(m, 0.0);
      for (int a = 0; a < m; ++a) {
        for (int b = a; b < m; ++b) {
          double s = 0.0;
          for (int i = 0; i < n; ++i) s += dF[a][i] * dF[b][i];
          G[a * m + b] = G[b * m + a] = s;
        }
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += dF[a][i] * f[i];
        rhs[a] = s;
      }
      for (int a = 0; a < m; ++a) G[a * m + a] *= 1.0 + 1e-12;
      // Cholesky
      bool ok = true;
      std::vector<double> L(m * m, 0.0);
      for (int a = 0; a < m && ok; ++a) {
        double s = G[a * m + a];
        for (int k2 = 0; k2 < a; ++k2) s -= L[a * m + k2] * L[a * m + k2];
        if (s <= 0.0) { ok = false; break; }
        L[a * m + a] = std::sqrt(s);
        for (int b2 = a + 1; b2 < m; ++b2) {
          double t = G[b2 * m + a];
          for (int k2 = 0; k2 < a; ++k2) t -= L[b2 * m + k2] * L[a * m + k2];
          L[b2 * m + a] = t / L[a * m + a];
        }
      }
      if (ok) {
        for (int a = 0; a < m; ++a) {
          double s = rhs[a];
          for (int k2 = 0; k2 < a; ++k2) s -= L[a * m + k2] * gam[k2];
          gam[a] = s / L[a * m + a];
        }
        for (int a = m - 1; a >= 0; --a) {
          double s = gam[a];
          for (int k2 = a + 1; k2 < m; ++k2) s -= L[k2 * m + a] * gam[k2];
          gam[a] = s / L[a * m + a];
        }
      } else {
        std::fill(gam.begin(), gam.end(), 0.0);
      }
      unew.assign(n, 0.0);
      for (int i = 0; i < n; ++i) {
        double corr = 0.0;
        for (int c = 0; c < m; ++c) corr += (dU[c][i] + dF[c][i]) * gam[c];
        unew[i] = u[i] + f[i] - corr;
      }
    }
    // safeguard: restart history on a wild step
    double step = sup_diff(unew, u);
    if (!std::isfinite(step) || step > 50.0) {
      hist_u.clear();
      hist_f.clear();
      unew = u;
      for (int i = 0; i < n; ++i) unew[i] += 0.25 * f[i];
    }
    u = std::move(unew);
  }
  throw SolverError("picard_solve: max_iter exceeded at epsilon = " +
                        std::to_string(epsilon),
                    rep.residual_history.back());
}

RadialProfile laplacian_radial_green(const RadialProfile& u, double epsilon) {
  if (epsilon < 0.0) throw DomainError("laplacian_radial_green: epsilon >= 0");
  const std::vector<double>& r = u.grid->r;
  const int n = int(r.size());
  CumulativeIntegrator ci(r);
  std::vector<double> w(n), f(n), I1, K1;
  for (int i = 0; i < n; ++i) w[i] = std::exp(-epsilon * r[i] * r[i] + u.values[i]);
  for (int i = 0; i < n; ++i) f[i] = r[i] * r[i] * w[i];
  ci.cumulative(f, I1);
  for (int i = 0; i < n; ++i) f[i] = r[i] * w[i];
  ci.cumulative(f, K1);
  const double K1tot = K1.back();
  RadialProfile out(u.grid, epsilon);
  double tail = 0.0;
  if (epsilon == 0.0) {
    const double m = decay_slope(u);
    const double R = u.grid->R();
    tail = std::exp(u.values.back()) * (R / m + 1.0 / (m * m));
  }
  for (int i = 1; i < n; ++i)
    out.values[i] = -I1[i] / r[i] - (K1tot - K1[i]) - tail;
  out.values[0] = -(K1tot - K1[0]) - tail;
  return out;
}

double pohozaev_residual(const RadialProfile& u, double epsilon) {
  const std::vector<double>& r = u.grid->r;
  const int n = int(r.size());
  CumulativeIntegrator ci(r);
  std::vector<double> num(n), den(n);
  for (int i = 0; i < n; ++i) {
    const double w = std::exp(-epsilon * r[i] * r[i] + u.values[i]);
    den[i] = w * r[i] * r[i];
    num[i] = (u.values[i] + 6.0 - 4.0 * epsilon * r[i] * r[i]) * den[i];
  }
  return ci.total(num) / ci.total(den);
}

EpsContinuation continue_eps_to_zero(const std::vector<double>& schedule,
                                     RadialGridPtr grid, double tol) {
  if (schedule.empty()) throw DomainError("continue_eps_to_zero: empty schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (!(schedule[i] < schedule[i - 1]))
      throw DomainError("continue_eps_to_zero: schedule must decrease");
  if (!(schedule.back() <= 1e-3))
    throw DomainError("continue_eps_to_zero: last entry must be <= 1e-3");

  EpsContinuation out;
  std::optional<RadialProfile> warm;
  for (std::size_t s = 0; s < schedule.size(); ++s) {
    try {
      auto [prof, rep] = picard_solve(schedule[s], grid, tol, 600, warm);
      warm = prof;
      out.profiles.push_back(std::move(prof));
      out.reports.push_back(std::move(rep));
    } catch (const SolverError& e) {
      throw SolverError("continue_eps_to_zero: stage " + std::to_string(s) +
                            " (epsilon = " + std::to_string(schedule[s]) +
                            ") failed: " + e.what(),
                        e.last_residual());
    }
  }

  // Richardson extrapolation with the measured order (the deep-schedule
  // behavior is first order once eps << 1/R^2; the order is reported, not
  // assumed).
  const int m = int(out.profiles.size());
  out.limit = RadialProfile(grid, 0.0);
  if (m >= 3) {
    const auto& u1 = out.profiles[m - 3].values;
    const auto& u2 = out.profiles[m - 2].values;
    const auto& u3 = out.profiles[m - 1].values;
    std::vector<double> ratios;
    for (std::size_t i = 0; i < u1.size(); ++i) {
      const double a = u2[i] - u1[i], b = u3[i] - u2[i];
      if (std::abs(b) > 1e-14) ratios.push_back(std::abs(a / b));
    }
    std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2,
                     ratios.end());
    const double med = ratios[ratios.size() / 2];
    out.measured_order = std::log2(std::max(med, 1.0 + 1e-6));
    const double fac = std::pow(2.0, out.measured_order);
    for (std::size_t i = 0; i < u3.size(); ++i)
      out.limit.values[i] = u3[i] + (u3[i] - u2[i]) / (fac - 1.0);
  } else {
    out.limit.values = out.profiles.back().values;
  }
  return out;
}

double decay_slope(const RadialProfile& u) {
  const std::vector<double>& r = u.grid->r;
  const int n = int(r.size());
  const int i0 = int(0.8 * n);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int cnt = n - i0;
  for (int i = i0; i < n; ++i) {
    sx += r[i];
    sy += u.values[i];
    sxx += r[i] * r[i];
    sxy += r[i] * u.values[i];
  }
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return -slope;
}

RadialProfile rescale_solution(const RadialProfile& u1, double mu) {
  if (!(mu > 0.0)) throw DomainError("rescale_solution: need mu > 0");
  const std::vector<double>& r = u1.grid->r;
  const double R = u1.grid->R();
  const double m = decay_slope(u1);
  const double uR = u1.values.back();
  RadialProfile out(u1.grid, u1.epsilon);
  for (int i = 0; i < int(r.size()); ++i) {
    const double x = mu * r[i];
    double v;
    if (x <= R)
      v = interp_cubic(r, u1.values, x);
    else
      v = uR - m * (x - R);
    out.values[i] = v + 4.0 * std::log(mu);
  }
  return out;
}

double volume(const RadialProfile& u) {
  const std::vector<double>& r = u.grid->r;
  const int n = int(r.size());
  CumulativeIntegrator ci(r);
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) f[i] = r[i] * r[i] * std::exp(u.values[i]);
  const double core = ci.total(f);
  // tail: int_R^inf r^2 e^{u(R) - m (r-R)} dr
  const double m = decay_slope(u);
  const double R = u.grid->R();
  double tail = 0.0;
  if (m > 1e-8)
    tail = std::exp(u.values.back()) *
           (2.0 / (m * m * m) + 2.0 * R / (m * m) + R * R / m);
  return 4.0 * kPi * (core + tail);
}

RadialProfile radial_laplacian_fd(const RadialProfile& u) {
  const std::vector<double>& r = u.grid->r;
  const int n = int(r.size());
  RadialProfile out(u.grid, u.epsilon);

  // even-polynomial series fit u ~ c0 + c1 r^2 + c2 r^4 + c3 r^6 near the
  // axis (u'(0) = 0); used where composed difference stencils lose accuracy
  const double fit_window = std::max(0.35, 6.0 * (r[2] - r[1]));
  const double series_window = fit_window * 0.3;
  int nfit = 0;
  while (nfit < n && r[nfit] <= fit_window) ++nfit;
  double c[4] = {0, 0, 0, 0};
  if (nfit >= 8) {
    // normal equations for basis {1, r^2, r^4, r^6}
    double A[4][4] = {};
    double b[4] = {};
    for (int i = 0; i < nfit; ++i) {
      const double p2 = r[i] * r[i];
      const double basis[4] = {1.0, p2, p2 * p2, p2 * p2 * p2};
      for (int a = 0; a < 4; ++a) {
        b[a] += basis[a] * u.values[i];
        for (int q = 0; q < 4; ++q) A[a][q] += basis[a] * basis[q];
      }
    }
    // Gaussian elimination with partial pivoting (4x4)
    int piv[4] = {0, 1, 2, 3};
    for (int col = 0; col < 4; ++col) {
      int best = col;
      for (int row = col + 1; row < 4; ++row)
        if (std::abs(A[row][col]) > std::abs(A[best][col])) best = row;
      std::swap(A[col], A[best]);
      std::swap(b[col], b[best]);
      (void)piv;
      for (int row = col + 1; row < 4; ++row) {
        const double f = A[row][col] / A[col][col];
        for (int q = col; q < 4; ++q) A[row][q] -= f * A[col][q];
        b[row] -= f * b[col];
      }
    }
    for (int row = 3; row >= 0; --row) {
      double s = b[row];
      for (int q = row + 1; q < 4; ++q) s -= A[row][q] * c[q];
      c[row] = s / A[row][row];
    }
  }

  for (int i = 0; i < n; ++i) {
    if (r[i] < series_window && nfit >= 8) {
      const double p2 = r[i] * r[i];
      // Delta(r^{2k}) = 2k(2k+1) r^{2k-2}
      out.values[i] = 6.0 * c[1] + 20.0 * c[2] * p2 + 42.0 * c[3] * p2 * p2;
    } else if (i == 0) {
      out.values[0] = 6.0 * (u.values[1] - u.values[0]) / (r[1] * r[1]);
    } else if (i == n - 1) {
      out.values[i] = 0.0;  // filled below by copy
    } else {
      const double hm = r[i] - r[i - 1], hp = r[i + 1] - r[i];
      const double upp = 2.0 *
                         (u.values[i - 1] * hp - u.values[i] * (hm + hp) +
                          u.values[i + 1] * hm) /
                         (hm * hp * (hm + hp));
      const double up = (-u.values[i - 1] * hp / hm +
                         u.values[i] * (hp / hm - hm / hp) +
                         u.values[i + 1] * hm / hp) /
                        (hm + hp);
      out.values[i] = upp + 2.0 * up / r[i];
    }
  }
  out.values[n - 1] = out.values[n - 2];
  return out;
}

namespace {

// pure centered-difference radial Laplacian (no axis treatment beyond the
// mirrored parabola at r = 0); feeding its own output back in keeps the
// composed stencil consistent away from the axis
void fd_lap_raw(const std::vector<double>& r, const std::vector<double>& u,
                std::vector<double>& out) {
  const int n = int(r.size());
  out.resize(n);
  out[0] = 6.0 * (u[1] - u[0]) / (r[1] * r[1]);
  for (int i = 1; i + 1 < n; ++i) {
    const double hm = r[i] - r[i - 1], hp = r[i + 1] - r[i];
    const double upp =
        2.0 * (u[i - 1] * hp - u[i] * (hm + hp) + u[i + 1] * hm) /
        (hm * hp * (hm + hp));
    const double up = (-u[i - 1] * hp / hm + u[i] * (hp / hm - hm / hp) +
                       u[i + 1] * hm / hp) /
                      (hm + hp);
    out[i] = upp + 2.0 * up / r[i];
  }
  out[n - 1] = out[n - 2];
}

struct EvenSeries {
  double c[4] = {0, 0, 0, 0};
  bool ok = false;
  // least-squares even polynomial c0 + c1 r^2 + c2 r^4 + c3 r^6 on r <= win
  EvenSeries(const std::vector<double>& r, const std::vector<double>& u,
             double win) {
    int nfit = 0;
    while (nfit < int(r.size()) && r[nfit] <= win) ++nfit;
    if (nfit < 8) return;
    double A[4][4] = {};
    double b[4] = {};
    for (int i = 0; i < nfit; ++i) {
      const double p2 = r[i] * r[i];
      const double basis[4] = {1.0, p2, p2 * p2, p2 * p2 * p2};
      for (int a = 0; a < 4; ++a) {
        b[a] += basis[a] * u[i];
        for (int q = 0; q < 4; ++q) A[a][q] += basis[a] * basis[q];
      }
    }
    for (int col = 0; col < 4; ++col) {
      int best = col;
      for (int row = col + 1; row < 4; ++row)
        if (std::abs(A[row][col]) > std::abs(A[best][col])) best = row;
      std::swap(A[col], A[best]);
      std::swap(b[col], b[best]);
      for (int row = col + 1; row < 4; ++row) {
        const double f = A[row][col] / A[col][col];
        for (int q = col; q < 4; ++q) A[row][q] -= f * A[col][q];
        b[row] -= f * b[col];
      }
    }
    for (int row = 3; row >= 0; --row) {
      double s = b[row];
      for (int q = row + 1; q < 4; ++q) s -= A[row][q] * c[q];
      c[row] = s / A[row][row];
    }
    ok = true;
  }
  // Delta(r^{2k}) = 2k(2k+1) r^{2k-2}
  double lap(double rr) const {
    const double p2 = rr * rr;
    return 6.0 * c[1] + 20.0 * c[2] * p2 + 42.0 * c[3] * p2 * p2;
  }
};

}  // namespace

double biharmonic_residual(const RadialProfile& u) {
  const std::vector<double>& r = u.grid->r;
  const int n = int(r.size());
  const double fit_window = std::max(0.7, 12.0 * (r[2] - r[1]));
  const double series_window = 0.43 * fit_window;

  // two independent routes, never mixed across the seam: the composed
  // difference stencil amplifies any value jump by 1/h^2
  std::vector<double> L1, L2;
  fd_lap_raw(r, u.values, L1);
  fd_lap_raw(r, L1, L2);
  EvenSeries s1(r, u.values, fit_window);
  std::vector<double> L1s(n, 0.0);
  if (s1.ok)
    for (int i = 0; i < n; ++i) L1s[i] = s1.lap(r[i]);
  EvenSeries s2(r, L1s, fit_window);

  const double cap = u.grid->R() / 2.0;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    if (r[i] > cap) break;
    const double lap2 =
        (s1.ok && r[i] < series_window) ? s2.lap(r[i]) : L2[i];
    worst = std::max(worst, std::abs(lap2 - std::exp(u.values[i])));
  }
  return worst;
}

double integral_residual_eps0(const RadialProfile& u, double r_cap) {
  const std::vector<double>& r = u.grid->r;
  const int n = int(r.size());
  const double R = u.grid->R();
  CumulativeIntegrator ci(r);
  std::vector<double> Tu;
  apply_T(r, ci, u.values, 0.0, Tu);
  const double m = decay_slope(u);
  const double uR = u.values.back();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    if (r[i] > r_cap) break;
    const double tail = linear_tail(r[i], R, uR, m) / 6.0;
    worst = std::max(worst, std::abs(u.values[i] - (Tu[i] - tail)));
  }
  return worst;
}

std::vector<double> default_schedule(double floor_eps) {
  std::vector<double> s{1.0};
  while (s.back() > floor_eps) s.push_back(s.back() / 2.0);
  return s;
}

}  // namespace radial3d
}  // namespace liouville
