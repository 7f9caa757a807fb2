#include "liouville/normdiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "liouville/errors.hpp"

namespace liouville {
namespace normdiag {

namespace {

double xweight(double x, double p) { return std::pow(std::sqrt(1.0 + x * x), p); }

struct LinFit {
  double a = 0.0, b = 0.0, rms = 0.0;
};

LinFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = int(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinFit f;
  const double det = n * sxx - sx * sx;
  f.b = (n * sxy - sx * sy) / det;
  f.a = (sy - f.b * sx) / n;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = y[i] - (f.a + f.b * x[i]);
    ss += e * e;
  }
  f.rms = std::sqrt(ss / n);
  return f;
}

}  // namespace

double weighted_sup_norm(const StripField& u, double p) {
  double m = 0.0;
  for (int i = 0; i < u.grid.nx; ++i) {
    const double w = xweight(u.grid.x(i), p);
    for (int j = 0; j < u.grid.ny; ++j)
      m = std::max(m, w * std::abs(u.at(i, j)));
  }
  return m;
}

double weighted_sup_norm(const std::vector<double>& x,
                         const std::vector<double>& u, double p) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    m = std::max(m, xweight(x[i], p) * std::abs(u[i]));
  return m;
}

double weighted_holder_seminorm(const std::vector<double>& x,
                                const std::vector<double>& u,
                                const WeightSpec& spec, int window) {
  if (x.size() < 2) throw DomainError("weighted_holder_seminorm: need >= 2 nodes");
  if (!(spec.holder_alpha > 0.0 && spec.holder_alpha < 1.0))
    throw DomainError("weighted_holder_seminorm: alpha must be in (0,1)");
  const int n = int(x.size());
  const double lo = x.front(), hi = x.back();
  const double p = spec.boundary_power + spec.holder_alpha;
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    const double di = std::min(x[i] - lo, hi - x[i]);
    for (int j = i + 1; j < std::min(n, i + window + 1); ++j) {
      const double dj = std::min(x[j] - lo, hi - x[j]);
      const double d = std::min(di, dj);
      if (d <= 0.0) continue;
      const double val = std::pow(d, p) * std::abs(u[i] - u[j]) /
                         std::pow(x[j] - x[i], spec.holder_alpha);
      m = std::max(m, val);
    }
  }
  return m;
}

double weighted_holder_seminorm(const StripField& u, const WeightSpec& spec,
                                int window) {
  if (!(spec.holder_alpha > 0.0 && spec.holder_alpha < 1.0))
    throw DomainError("weighted_holder_seminorm: alpha must be in (0,1)");
  const StripGrid& g = u.grid;
  const double p = spec.boundary_power + spec.holder_alpha;
  auto dist = [&](int i, int j) {
    return std::min({g.X - std::abs(g.x(i)), g.y(j), g.lambda - g.y(j)});
  };
  double m = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) {
      const double dij = dist(i, j);
      if (dij <= 0.0) continue;
      for (int i2 = i; i2 < std::min(g.nx, i + window + 1); ++i2) {
        const int j2lo = (i2 == i) ? j + 1 : std::max(0, j - window);
        for (int j2 = j2lo; j2 < std::min(g.ny, j + window + 1); ++j2) {
          const double d = std::min(dij, dist(i2, j2));
          if (d <= 0.0) continue;
          const double dx = g.x(i2) - g.x(i), dy = g.y(j2) - g.y(j);
          const double sep = std::sqrt(dx * dx + dy * dy);
          const double val = std::pow(d, p) * std::abs(u.at(i, j) - u.at(i2, j2)) /
                             std::pow(sep, spec.holder_alpha);
          m = std::max(m, val);
        }
      }
    }
  }
  return m;
}

DecayFit decay_fit(const std::vector<double>& r, const std::vector<double>& u) {
  std::vector<double> rs, us;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] >= 2.0) {
      rs.push_back(r[i]);
      us.push_back(u[i]);
    }
  if (rs.size() < 8)
    throw ContractError("decay_fit: fewer than 8 usable nodes with r >= 2");

  // linear: u = a + b r
  const LinFit lin = least_squares(rs, us);

  // log models need |u| bounded away from zero
  std::vector<double> rl, ll, rr2;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (std::abs(us[i]) > 1e-12) {
      rl.push_back(rs[i]);
      ll.push_back(std::log(std::abs(us[i])));
      rr2.push_back(std::log(rs[i]));
    }
  }
  double exp_rms = std::numeric_limits<double>::infinity();
  double pow_rms = std::numeric_limits<double>::infinity();
  LinFit ef, pf;
  const double sgn = (us.back() < 0.0) ? -1.0 : 1.0;
  if (rl.size() >= 8) {
    ef = least_squares(rl, ll);  // log|u| = a + b r
    pf = least_squares(rr2, ll); // log|u| = a + b log r
    double se = 0.0, sp = 0.0;
    for (std::size_t i = 0; i < rl.size(); ++i) {
      const double em = sgn * std::exp(ef.a + ef.b * rl[i]);
      const double pm = sgn * std::exp(pf.a + pf.b * std::log(rl[i]));
      const double uv = sgn * std::exp(ll[i]);
      se += (em - uv) * (em - uv);
      sp += (pm - uv) * (pm - uv);
    }
    exp_rms = std::sqrt(se / rl.size());
    pow_rms = std::sqrt(sp / rl.size());
  }

  DecayFit out;
  if (lin.rms <= exp_rms && lin.rms <= pow_rms) {
    out.kind = DecayKind::Linear;
    out.rate = lin.b;
    out.residual = lin.rms;
  } else if (exp_rms <= pow_rms) {
    out.kind = DecayKind::Exponential;
    out.rate = ef.b;
    out.residual = exp_rms;
  } else {
    out.kind = DecayKind::Power;
    out.rate = pf.b;
    out.residual = pow_rms;
  }
  return out;
}

OperatorCoefficients transform_weighted_operator(const OperatorCoefficients& L,
                                                 const WeightData& w) {
  const std::size_t n = w.w.size();
  for (double v : w.w)
    if (!(v > 0.0))
      throw DomainError("transform_weighted_operator: weight must be positive");
  OperatorCoefficients out;
  out.a11 = L.a11;
  out.a12 = L.a12;
  out.a22 = L.a22;
  out.b1.resize(n);
  out.b2.resize(n);
  out.c.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double l1 = w.w1[i] / w.w[i];  // d_1 log w
    const double l2 = w.w2[i] / w.w[i];
    out.b1[i] = L.b1[i] - 2.0 * (L.a11[i] * l1 + L.a12[i] * l2);
    out.b2[i] = L.b2[i] - 2.0 * (L.a12[i] * l1 + L.a22[i] * l2);
    const double quad =
        2.0 * (L.a11[i] * l1 * l1 + 2.0 * L.a12[i] * l1 * l2 + L.a22[i] * l2 * l2);
    const double hess = (L.a11[i] * w.w11[i] + 2.0 * L.a12[i] * w.w12[i] +
                         L.a22[i] * w.w22[i]) /
                        w.w[i];
    out.c[i] = quad - hess - (L.b1[i] * l1 + L.b2[i] * l2) + L.c[i];
  }
  return out;
}

MembershipReport membership_check(
    const std::function<double(double, double)>& field, double X, double lambda,
    int nx, int ny, const SpaceDescriptor& space) {
  auto proxies = [&](double Xc) {
    const double hx = 2.0 * Xc / (nx - 1);
    const double hy = lambda / (ny - 1);
    double sup_field = 0.0, sup_lap = 0.0;
    for (int i = 1; i + 1 < nx; ++i) {
      const double x = -Xc + i * hx;
      for (int j = 1; j + 1 < ny; ++j) {
        const double y = j * hy;
        const double uc = field(x, y);
        const double lap = (field(x - hx, y) - 2.0 * uc + field(x + hx, y)) /
                               (hx * hx) +
                           (field(x, y - hy) - 2.0 * uc + field(x, y + hy)) /
                               (hy * hy);
        sup_field = std::max(sup_field, xweight(x, space.field_exponent) *
                                            std::abs(uc));
        sup_lap = std::max(sup_lap, xweight(x, space.lap_exponent) *
                                        std::abs(lap));
      }
    }
    return std::make_pair(sup_field, sup_lap);
  };
  const auto [f0, l0] = proxies(X);
  const auto [f1, l1] = proxies(1.25 * X);

  MembershipReport rep;
  auto add = [&](const std::string& name, double v, double vg) {
    MembershipComponent c;
    c.name = name;
    c.value = v;
    c.value_grown = vg;
    // "stable under truncation growth": the proxy may not grow by more
    // than 5% when the truncation widens
    c.stable = vg <= v * 1.05 + 1e-12;
    rep.components.push_back(c);
  };
  add("weighted_sup(field)", f0, f1);
  if (space.kind == SpaceKind::X2d || space.kind == SpaceKind::X4dRadial)
    add("weighted_sup(laplacian)", l0, l1);
  rep.passes = true;
  for (const auto& c : rep.components) rep.passes = rep.passes && c.stable;
  return rep;
}

namespace {

// scalar field with analytic derivatives through second order
struct Analytic {
  double v, dx, dy, dxx, dxy, dyy;
};

// c0 + c1 sin(ax + p) cos(by + q)
struct TrigField {
  double c0, c1, a, b, p, q;
  Analytic eval(double x, double y) const {
    const double s = std::sin(a * x + p), c = std::cos(a * x + p);
    const double S = std::cos(b * y + q), T = -std::sin(b * y + q);
    Analytic f;
    f.v = c0 + c1 * s * S;
    f.dx = c1 * a * c * S;
    f.dy = c1 * s * b * T;
    f.dxx = -c1 * a * a * s * S;
    f.dxy = c1 * a * c * b * T;
    f.dyy = -c1 * s * b * b * S;
    return f;
  }
};

}  // namespace

double transform_identity_check(unsigned long long seed, int n_samples) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  auto rnd_field = [&](double base, double amp) {
    TrigField f;
    f.c0 = base;
    f.c1 = amp * unif(rng);
    f.a = 1.0 + 0.7 * unif(rng);
    f.b = 1.0 + 0.7 * unif(rng);
    f.p = 3.0 * unif(rng);
    f.q = 3.0 * unif(rng);
    return f;
  };
  double worst = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    const TrigField A11 = rnd_field(1.5, 0.4), A22 = rnd_field(1.5, 0.4);
    const TrigField A12 = rnd_field(0.0, 0.3);
    const TrigField B1 = rnd_field(0.0, 1.0), B2 = rnd_field(0.0, 1.0);
    const TrigField C = rnd_field(0.0, 1.0);
    const TrigField LW = rnd_field(0.0, 0.5);  // w = exp(LW)
    const TrigField U = rnd_field(0.0, 1.0);
    for (int pt = 0; pt < 5; ++pt) {
      const double x = 2.0 * unif(rng), y = 2.0 * unif(rng);
      const Analytic lw = LW.eval(x, y), uu = U.eval(x, y);
      // w = exp(lw) and its derivatives
      const double w = std::exp(lw.v);
      const double w1 = w * lw.dx, w2 = w * lw.dy;
      const double w11 = w * (lw.dxx + lw.dx * lw.dx);
      const double w12 = w * (lw.dxy + lw.dx * lw.dy);
      const double w22 = w * (lw.dyy + lw.dy * lw.dy);
      // v = w u by the product rule
      const double v = w * uu.v;
      const double v1 = w1 * uu.v + w * uu.dx;
      const double v2 = w2 * uu.v + w * uu.dy;
      const double v11 = w11 * uu.v + 2.0 * w1 * uu.dx + w * uu.dxx;
      const double v12 = w12 * uu.v + w1 * uu.dy + w2 * uu.dx + w * uu.dxy;
      const double v22 = w22 * uu.v + 2.0 * w2 * uu.dy + w * uu.dyy;

      OperatorCoefficients L;
      const Analytic a11 = A11.eval(x, y), a12 = A12.eval(x, y),
                     a22 = A22.eval(x, y), b1 = B1.eval(x, y),
                     b2 = B2.eval(x, y), cc = C.eval(x, y);
      L.a11 = {a11.v};
      L.a12 = {a12.v};
      L.a22 = {a22.v};
      L.b1 = {b1.v};
      L.b2 = {b2.v};
      L.c = {cc.v};
      WeightData W;
      W.w = {w};
      W.w1 = {w1};
      W.w2 = {w2};
      W.w11 = {w11};
      W.w12 = {w12};
      W.w22 = {w22};
      const OperatorCoefficients Lt = transform_weighted_operator(L, W);

      const double Lu = a11.v * uu.dxx + 2.0 * a12.v * uu.dxy + a22.v * uu.dyy +
                        b1.v * uu.dx + b2.v * uu.dy + cc.v * uu.v;
      const double Ltv = Lt.a11[0] * v11 + 2.0 * Lt.a12[0] * v12 +
                         Lt.a22[0] * v22 + Lt.b1[0] * v1 + Lt.b2[0] * v2 +
                         Lt.c[0] * v;
      worst = std::max(worst, std::abs(Ltv - w * Lu));
    }
  }
  return worst;
}

}  // namespace normdiag
}  // namespace liouville
