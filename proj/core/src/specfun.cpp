#include "liouville/specfun.hpp"

#include <cmath>
#include <numbers>

#include "liouville/errors.hpp"

namespace liouville {
namespace specfun {

namespace {

constexpr double kPi = std::numbers::pi;

bool near_integer(double x, double radius) {
  return std::abs(x - std::round(x)) < radius;
}

// sin(pi x) and cos(pi x) with exact values at half-integer multiples;
// plain std::sin(pi * x) leaves ~1e-16 residue at the zeros, which the
// exponentially growing Legendre branches amplify into visible error
double sinpi(double x) {
  double m = std::fmod(x, 2.0);
  if (m < 0.0) m += 2.0;
  const double q = m * 2.0;  // quarter-period count
  if (q == std::floor(q)) {
    switch (long(q) % 4) {
      case 0: return 0.0;
      case 1: return 1.0;
      case 2: return 0.0;
      default: return -1.0;
    }
  }
  return std::sin(kPi * m);
}

double cospi(double x) { return sinpi(x + 0.5); }

// Lanczos approximation, g = 7, 9 terms; accurate to ~1e-14 relative
// on the right half line.
double gamma_lanczos_positive(double x) {
  static const double c[9] = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  const double z = x - 1.0;
  double acc = c[0];
  for (int i = 1; i < 9; ++i) acc += c[i] / (z + i);
  const double t = z + 7.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

}  // namespace

double gamma(double x) {
  if (x <= 0.0 && x == std::floor(x))
    throw DomainError("gamma: pole at nonpositive integer " + std::to_string(x));
  if (x < 0.5) {
    // reflection: Gamma(x) = pi / (sin(pi x) Gamma(1-x))
    return kPi / (sinpi(x) * gamma_lanczos_positive(1.0 - x));
  }
  return gamma_lanczos_positive(x);
}

// Degree-1 closed form: the hypergeometric series for P_1^mu terminates,
//   P_1^mu(y) = ((1+y)/(1-y))^{mu/2} (y - mu) / Gamma(2 - mu).
double legendre_p1(double mu, double y) {
  if (mu < 0.0) throw DomainError("legendre_p1: order must be >= 0");
  if (!(std::abs(y) < 1.0)) throw DomainError("legendre_p1: need |y| < 1");
  const bool integer_order = (mu == std::floor(mu));
  if (integer_order && mu > 1.0) return 0.0;  // P_l^mu vanishes for integer mu > l
  return std::pow((1.0 + y) / (1.0 - y), 0.5 * mu) * (y - mu) / gamma(2.0 - mu);
}

double legendre_q1(double mu, double y) {
  if (mu < 0.0) throw DomainError("legendre_q1: order must be >= 0");
  if (!(std::abs(y) < 1.0)) throw DomainError("legendre_q1: need |y| < 1");
  if (mu == 0.0) {
    return 0.5 * y * std::log((1.0 + y) / (1.0 - y)) - 1.0;
  }
  if (near_integer(mu, 1e-9))
    throw DomainError("legendre_q1: connection formula singular at integer order");
  // Q_1^mu = pi/(2 sin(mu pi)) [cos(mu pi) P_1^mu - (Gamma(2+mu)/Gamma(2-mu)) P_1^{-mu}]
  // with P_1^{-mu}(y) = ((1-y)/(1+y))^{mu/2} (y + mu) / Gamma(2 + mu).
  const double p_plus = std::pow((1.0 + y) / (1.0 - y), 0.5 * mu) * (y - mu) /
                        gamma(2.0 - mu);
  const double p_minus_scaled =
      std::pow((1.0 - y) / (1.0 + y), 0.5 * mu) * (y + mu) / gamma(2.0 - mu);
  return 0.5 * kPi / sinpi(mu) * (cospi(mu) * p_plus - p_minus_scaled);
}

double appendix_b_lhs(double mu) {
  if (mu <= 0.0) throw DomainError("appendix_b_lhs: need mu > 0");
  if (near_integer(mu, kPoleExclusionRadius))
    throw DomainError("appendix_b_lhs: within exclusion radius of pole at mu = " +
                      std::to_string(std::round(mu)));
  const double g_mu = gamma(mu);
  const double g_1mmu = gamma(1.0 - mu);
  const double s = sinpi(mu);
  const double c = cospi(mu);
  const double bracket = g_mu * g_1mmu * sinpi(1.0 + mu) + 2.0 * kPi;
  return -g_1mmu * g_mu * c * (c / s) * bracket;
}

double appendix_b_closed_form(double mu) {
  const double c = cospi(mu) / sinpi(mu);
  return -kPi * kPi * c * c;
}

ScanReport scan_no_root(double mu_lo, double mu_hi, double step) {
  if (!(mu_lo > 0.0) || !(mu_hi > mu_lo))
    throw DomainError("scan_no_root: need 0 < mu_lo < mu_hi");
  if (!(step > 0.0)) throw DomainError("scan_no_root: need step > 0");

  ScanReport rep;
  rep.mu_lo = mu_lo;
  rep.mu_hi = mu_hi;
  rep.step = step;
  for (int k = 0; k <= int(std::ceil(mu_hi)); ++k) {
    const double c = double(k);
    if (c + kPoleExclusionRadius >= mu_lo && c - kPoleExclusionRadius <= mu_hi)
      rep.excluded.emplace_back(c, kPoleExclusionRadius);
  }

  const double pi2 = kPi * kPi;
  double min_gap = std::numeric_limits<double>::infinity();
  const long nsteps = long((mu_hi - mu_lo) / step + 1e-9);
  rep.samples.reserve(nsteps + 1);
  for (long k = 0; k <= nsteps; ++k) {
    const double mu = mu_lo + double(k) * step;
    if (mu > mu_hi) break;
    if (near_integer(mu, kPoleExclusionRadius)) continue;
    const double g = appendix_b_lhs(mu);
    rep.samples.emplace_back(mu, g);
    min_gap = std::min(min_gap, std::abs(g - pi2));
  }
  rep.min_gap = min_gap;
  return rep;
}

}  // namespace specfun
}  // namespace liouville
