#pragma once

#include <utility>
#include <vector>

namespace liouville {
namespace specfun {

// Gamma function for real x away from the poles 0, -1, -2, ...
double gamma(double x);

// Ferrers (real-argument) associated Legendre functions of degree 1,
// real order mu >= 0, argument y in (-1, 1).
double legendre_p1(double mu, double y);
double legendre_q1(double mu, double y);

// Left-hand side of the degree-1 matching equation,
//   -G(1-mu) G(mu) cos(pi mu) cot(pi mu) [G(mu) G(1-mu) sin((1+mu)pi) + 2 pi],
// which a root would have to bring to pi^2.
double appendix_b_lhs(double mu);

// sanity target: the same expression collapses to -pi^2 cot^2(pi mu)
double appendix_b_closed_form(double mu);

struct ScanReport {
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  double step = 0.0;
  std::vector<std::pair<double, double>> excluded;  // (center, radius)
  double min_gap = 0.0;  // min over samples of |g(mu) - pi^2|
  std::vector<std::pair<double, double>> samples;   // (mu, g(mu))
};

// Sample appendix_b_lhs over [mu_lo, mu_hi] with the given step, skipping
// pole-exclusion intervals around nonnegative integers.
ScanReport scan_no_root(double mu_lo, double mu_hi, double step);

// exclusion radius around integer orders used by the scan
inline constexpr double kPoleExclusionRadius = 1e-2;

}  // namespace specfun
}  // namespace liouville
