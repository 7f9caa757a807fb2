#include "liouville/quadrature.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "liouville/errors.hpp"

namespace liouville {

namespace {
// integral over [a,b] of the Lagrange basis ((x-xb)(x-xc))/((xa-xb)(xa-xc))
double basis_integral(double xa, double xb, double xc, double a, double b) {
  auto F = [&](double x) {
    return x * x * x / 3.0 - (xb + xc) * x * x / 2.0 + xb * xc * x;
  };
  return (F(b) - F(a)) / ((xa - xb) * (xa - xc));
}
}  // namespace

CumulativeIntegrator::CumulativeIntegrator(const std::vector<double>& x) {
  const int n = int(x.size());
  if (n < 3) throw DomainError("CumulativeIntegrator: need >= 3 nodes");
  w0_.resize(n - 1);
  w1_.resize(n - 1);
  w2_.resize(n - 1);
  base_.resize(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    const int j = (i == 0) ? 0 : i - 1;
    base_[i] = j;
    const double a = x[i], b = x[i + 1];
    w0_[i] = basis_integral(x[j], x[j + 1], x[j + 2], a, b);
    w1_[i] = basis_integral(x[j + 1], x[j], x[j + 2], a, b);
    w2_[i] = basis_integral(x[j + 2], x[j], x[j + 1], a, b);
  }
}

void CumulativeIntegrator::cumulative(const std::vector<double>& f,
                                      std::vector<double>& out) const {
  const int n = int(base_.size()) + 1;
  assert(int(f.size()) == n);
  out.resize(n);
  out[0] = 0.0;
  double acc = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    const int j = base_[i];
    acc += w0_[i] * f[j] + w1_[i] * f[j + 1] + w2_[i] * f[j + 2];
    out[i + 1] = acc;
  }
}

double CumulativeIntegrator::total(const std::vector<double>& f) const {
  const int n = int(base_.size()) + 1;
  assert(int(f.size()) == n);
  double acc = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    const int j = base_[i];
    acc += w0_[i] * f[j] + w1_[i] * f[j + 1] + w2_[i] * f[j + 2];
  }
  return acc;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    acc += 0.5 * (x[i + 1] - x[i]) * (f[i] + f[i + 1]);
  return acc;
}

CubicSpline::CubicSpline(const std::vector<double>& x,
                         const std::vector<double>& f)
    : x_(x), f_(f), m_(x.size(), 0.0) {
  const int n = int(x.size());
  if (n < 3) throw DomainError("CubicSpline: need >= 3 nodes");
  // tridiagonal system for interior second derivatives (natural ends)
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
  for (int i = 1; i + 1 < n; ++i) {
    const double hm = x[i] - x[i - 1], hp = x[i + 1] - x[i];
    a[i] = hm / 6.0;
    b[i] = (hm + hp) / 3.0;
    c[i] = hp / 6.0;
    d[i] = (f[i + 1] - f[i]) / hp - (f[i] - f[i - 1]) / hm;
  }
  // Thomas on rows 1..n-2 (m_0 = m_{n-1} = 0)
  for (int i = 2; i + 1 < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  if (n > 2) m_[n - 2] = d[n - 2] / b[n - 2];
  for (int i = n - 3; i >= 1; --i) m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
}

double CubicSpline::operator()(double xq) const {
  const int n = int(x_.size());
  if (xq <= x_.front()) return f_.front();
  if (xq >= x_.back()) return f_.back();
  int hi = int(std::upper_bound(x_.begin(), x_.end(), xq) - x_.begin());
  const int i = std::clamp(hi - 1, 0, n - 2);
  const double h = x_[i + 1] - x_[i];
  const double A = (x_[i + 1] - xq) / h, B = (xq - x_[i]) / h;
  return A * f_[i] + B * f_[i + 1] +
         ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
}

double interp_cubic(const std::vector<double>& x, const std::vector<double>& f,
                    double xq) {
  const int n = int(x.size());
  if (xq <= x.front()) return f.front();
  if (xq >= x.back()) return f.back();
  int hi = int(std::upper_bound(x.begin(), x.end(), xq) - x.begin());
  int i = std::clamp(hi - 2, 0, n - 4);  // 4-point stencil x[i..i+3]
  double out = 0.0;
  for (int a = 0; a < 4; ++a) {
    double term = f[i + a];
    for (int b = 0; b < 4; ++b) {
      if (a == b) continue;
      term *= (xq - x[i + b]) / (x[i + a] - x[i + b]);
    }
    out += term;
  }
  return out;
}

}  // namespace liouville
