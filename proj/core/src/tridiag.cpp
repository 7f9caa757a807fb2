#include "liouville/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "liouville/errors.hpp"

namespace liouville {

std::vector<double> tridiag_solve_shifted(const Tridiag& T, double sigma,
                                          const std::vector<double>& b) {
  // band LU with partial pivoting; pivoting widens the upper band to 2.
  const int n = T.n();
  std::vector<double> d(n), e(n, 0.0), f(n, 0.0), x = b;
  double cd = T.diag[0] - sigma;
  double ce = (n > 1) ? T.off[0] : 0.0;
  double cf = 0.0;
  constexpr double tiny = std::numeric_limits<double>::min();

  for (int i = 0; i + 1 < n; ++i) {
    const double a = T.off[i];               // row i+1, col i
    const double bd = T.diag[i + 1] - sigma; // row i+1, col i+1
    const double be = (i + 2 < n) ? T.off[i + 1] : 0.0;
    if (std::abs(cd) >= std::abs(a)) {
      if (cd == 0.0) cd = tiny;
      const double m = a / cd;
      d[i] = cd; e[i] = ce; f[i] = cf;
      x[i + 1] -= m * x[i];
      cd = bd - m * ce;
      ce = be - m * cf;
    } else {
      const double m = cd / a;
      d[i] = a; e[i] = bd; f[i] = be;
      std::swap(x[i], x[i + 1]);
      x[i + 1] -= m * x[i];
      cd = ce - m * bd;
      ce = cf - m * be;
    }
    cf = 0.0;
  }
  d[n - 1] = (cd == 0.0) ? tiny : cd;

  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    if (i + 1 < n) s -= e[i] * x[i + 1];
    if (i + 2 < n) s -= f[i] * x[i + 2];
    x[i] = s / d[i];
  }
  return x;
}

int sturm_count(const Tridiag& T, double sigma) {
  const int n = T.n();
  int count = 0;
  double q = T.diag[0] - sigma;
  if (q < 0.0) ++count;
  for (int i = 1; i < n; ++i) {
    double denom = q;
    if (denom == 0.0) denom = 1e-300;
    q = (T.diag[i] - sigma) - T.off[i - 1] * T.off[i - 1] / denom;
    if (q < 0.0) ++count;
  }
  return count;
}

double tridiag_eigenvalue(const Tridiag& T, int k, double tol) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const int n = T.n();
  for (int i = 0; i < n; ++i) {  // Gershgorin bracket
    double r = 0.0;
    if (i > 0) r += std::abs(T.off[i - 1]);
    if (i + 1 < n) r += std::abs(T.off[i]);
    lo = std::min(lo, T.diag[i] - r);
    hi = std::max(hi, T.diag[i] + r);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(T, mid) <= k)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < tol * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

std::pair<double, std::vector<double>> tridiag_eigenpair(const Tridiag& T,
                                                         double approx) {
  const int n = T.n();
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.001 * (i % 7);
  double ev = approx;
  for (int it = 0; it < 8; ++it) {
    std::vector<double> w = tridiag_solve_shifted(T, approx, v);
    double nrm = 0.0;
    for (double z : w) nrm += z * z;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0) || !std::isfinite(nrm))
      throw SolverError("inverse iteration broke down", nrm);
    for (double& z : w) z /= nrm;
    double ray = 0.0;
    for (int i = 0; i < n; ++i) {
      double tv = T.diag[i] * w[i];
      if (i > 0) tv += T.off[i - 1] * w[i - 1];
      if (i + 1 < n) tv += T.off[i] * w[i + 1];
      ray += w[i] * tv;
    }
    const bool settled = std::abs(ray - ev) <=
                         1e-14 * std::max(1.0, std::abs(ray));
    ev = ray;
    v = std::move(w);
    if (settled && it >= 1) break;
  }
  return {ev, v};
}

}  // namespace liouville
