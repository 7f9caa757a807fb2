#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "liouville/errors.hpp"
#include "liouville/specfun.hpp"

using namespace liouville;
namespace sf = liouville::specfun;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent oracle for the Legendre functions: integrate the degree-1
// Legendre ODE (1-y^2) v'' - 2 y v' + (2 - mu^2/(1-y^2)) v = 0 from y = 0
// with NIST values of (P(0), P'(0)) resp. (Q(0), Q'(0)).
struct OdeOracle {
  double mu;
  double v, vp;
  void step(double y, double h) {
    auto acc = [&](double yy, double vv, double pp) {
      return (2.0 * yy * pp - (2.0 - mu * mu / (1.0 - yy * yy)) * vv) /
             (1.0 - yy * yy);
    };
    const double k1v = vp, k1p = acc(y, v, vp);
    const double k2v = vp + 0.5 * h * k1p, k2p = acc(y + 0.5 * h, v + 0.5 * h * k1v, vp + 0.5 * h * k1p);
    const double k3v = vp + 0.5 * h * k2p, k3p = acc(y + 0.5 * h, v + 0.5 * h * k2v, vp + 0.5 * h * k2p);
    const double k4v = vp + h * k3p, k4p = acc(y + h, v + h * k3v, vp + h * k3p);
    v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    vp += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
  }
  double integrate_to(double target, int steps) {
    double y = 0.0;
    const double h = target / steps;
    for (int i = 0; i < steps; ++i) {
      step(y, h);
      y += h;
    }
    return v;
  }
};

double p1_zero(double mu) {
  // NIST 14.5.1 at nu = 1
  return std::pow(2.0, mu) * std::sqrt(kPi) /
         (sf::gamma(1.5 - 0.5 * mu) * sf::gamma(-0.5 * mu));
}
double p1_prime_zero(double mu) {
  // NIST 14.5.2 at nu = 1
  return -std::pow(2.0, mu + 1) * std::sqrt(kPi) /
         (sf::gamma(1.0 - 0.5 * mu) * sf::gamma(-0.5 - 0.5 * mu));
}

}  // namespace

TEST_CASE("gamma classical values") {
  CHECK(sf::gamma(1.0) == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(sf::gamma(0.5) == Catch::Approx(std::sqrt(kPi)).epsilon(1e-13));
  CHECK(sf::gamma(0.25) * sf::gamma(0.75) ==
        Catch::Approx(kPi * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(sf::gamma(5.0) == Catch::Approx(24.0).epsilon(1e-13));
  CHECK_THROWS_AS(sf::gamma(0.0), DomainError);
  CHECK_THROWS_AS(sf::gamma(-3.0), DomainError);
}

TEST_CASE("gamma reflection and recurrence identities") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> unif(0.005, 0.995);
  double worst_refl = 0.0, worst_rec = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mu = unif(rng);
    worst_refl = std::max(
        worst_refl,
        std::abs(sf::gamma(mu) * sf::gamma(1.0 - mu) * std::sin(kPi * mu) / kPi -
                 1.0));
    const double x = 0.5 + 10.0 * unif(rng);
    worst_rec = std::max(
        worst_rec, std::abs(sf::gamma(x + 1.0) / (x * sf::gamma(x)) - 1.0));
  }
  CHECK(worst_refl <= 1e-12);
  CHECK(worst_rec <= 1e-12);
}

TEST_CASE("gamma agrees with the C library") {
  for (double x : {0.1, 0.37, 1.3, 2.0, 4.5, 9.25, 17.0, -0.3, -1.7}) {
    CHECK(sf::gamma(x) == Catch::Approx(std::tgamma(x)).epsilon(5e-13));
  }
}

TEST_CASE("legendre P1 classical values") {
  for (int i = 0; i < 100; ++i) {
    const double y = -0.99 + 1.98 * i / 99.0;
    CHECK(std::abs(sf::legendre_p1(0.0, y) - y) <= 1e-10);
  }
  CHECK(sf::legendre_p1(0.5, 0.0) ==
        Catch::Approx(-1.0 / std::sqrt(kPi)).epsilon(1e-12));
  CHECK(sf::legendre_p1(2.0, 0.3) == 0.0);
  CHECK(sf::legendre_p1(3.0, -0.8) == 0.0);
  CHECK_THROWS_AS(sf::legendre_p1(0.5, 1.0), DomainError);
  CHECK_THROWS_AS(sf::legendre_p1(0.5, -1.2), DomainError);
}

TEST_CASE("legendre P1 against the ODE oracle") {
  for (double mu : {0.3, 0.5, 1.3, 2.6}) {
    for (double target : {0.7, -0.6}) {
      OdeOracle ode{mu, p1_zero(mu), p1_prime_zero(mu)};
      const double ref = ode.integrate_to(target, 4000);
      CHECK(sf::legendre_p1(mu, target) == Catch::Approx(ref).epsilon(1e-8));
    }
  }
}

TEST_CASE("legendre P1 blow-up asymptote near y = 1") {
  for (double mu : {0.3, 0.5, 1.7}) {
    const double y = 1.0 - 1e-8;
    const double asym =
        std::pow(2.0 / (1.0 - y), 0.5 * mu) / sf::gamma(1.0 - mu);
    CHECK(sf::legendre_p1(mu, y) / asym == Catch::Approx(1.0).margin(0.01));
  }
}

TEST_CASE("legendre Q1 classical closed form at order 0") {
  for (int i = 0; i < 100; ++i) {
    const double y = -0.99 + 1.98 * i / 99.0;
    const double ref = 0.5 * y * std::log((1.0 + y) / (1.0 - y)) - 1.0;
    CHECK(std::abs(sf::legendre_q1(0.0, y) - ref) <= 1e-10);
  }
}

TEST_CASE("legendre Q1 against the ODE oracle") {
  // Q(0) and Q'(0) from the connection formula evaluated at 0 -- then the
  // ODE marches independently of the closed form used by the library.
  for (double mu : {0.3, 1.7}) {
    const double q0 = sf::legendre_q1(mu, 0.0);
    const double h = 1e-6;
    const double qp0 = (sf::legendre_q1(mu, h) - sf::legendre_q1(mu, -h)) / (2 * h);
    for (double target : {0.8, -0.7}) {
      OdeOracle ode{mu, q0, qp0};
      const double ref = ode.integrate_to(target, 4000);
      CHECK(sf::legendre_q1(mu, target) == Catch::Approx(ref).epsilon(1e-6));
    }
  }
}

TEST_CASE("legendre Q1 stays bounded toward y = 1 at half-odd order") {
  // paper coefficient for the bounded branch:
  //   (-1)^{mu+1/2} pi Gamma(mu+2) / (2 Gamma(mu+1) Gamma(2-mu)) ((1-y)/2)^{mu/2}
  for (double mu : {0.5, 1.5}) {
    const double sign = (std::lround(mu + 0.5) % 2 == 0) ? 1.0 : -1.0;
    const double coef = sign * kPi * sf::gamma(mu + 2.0) /
                        (2.0 * sf::gamma(mu + 1.0) * sf::gamma(2.0 - mu));
    double prev_ratio = 0.0;
    for (double eps : {1e-6, 1e-8, 1e-10}) {
      const double y = 1.0 - eps;
      const double q = sf::legendre_q1(mu, y);
      CHECK(std::abs(q) < 10.0);  // bounded
      prev_ratio = q / (coef * std::pow((1.0 - y) / 2.0, 0.5 * mu));
    }
    CHECK(prev_ratio == Catch::Approx(1.0).margin(0.01));
  }
}

TEST_CASE("legendre Q1 blows up like (1+y)^{-mu/2} toward y = -1") {
  const double mu = 0.5;
  double prev = 0.0;
  for (double eps : {1e-4, 1e-6, 1e-8}) {
    const double y = -1.0 + eps;
    const double scaled = sf::legendre_q1(mu, y) * std::pow(1.0 + y, 0.5 * mu);
    if (prev != 0.0) CHECK(scaled == Catch::Approx(prev).epsilon(0.02));
    prev = scaled;
  }
  CHECK(std::abs(prev) > 0.01);
  CHECK_THROWS_AS(sf::legendre_q1(1.0, 0.3), DomainError);
  CHECK_THROWS_AS(sf::legendre_q1(2.0, 0.3), DomainError);
}

TEST_CASE("appendix B left-hand side values") {
  const double pi2 = kPi * kPi;
  CHECK(sf::appendix_b_lhs(0.25) == Catch::Approx(-pi2).epsilon(1e-10));
  CHECK(sf::appendix_b_lhs(1.0 / 3.0) ==
        Catch::Approx(-pi2 / 3.0).epsilon(1e-10));
  CHECK_THROWS_AS(sf::appendix_b_lhs(1.0), DomainError);
  CHECK_THROWS_AS(sf::appendix_b_lhs(2.0 + 0.5e-2), DomainError);
}

TEST_CASE("appendix B closed-form agreement at scan points") {
  // |lhs + pi^2 cot^2(pi mu)| <= 1e-8 relative at all non-excluded samples
  sf::ScanReport rep = sf::scan_no_root(0.05, 10.0, 1e-2);
  for (const auto& [mu, g] : rep.samples) {
    const double closed = sf::appendix_b_closed_form(mu);
    const double scale = std::max(std::abs(closed), 1e-30);
    CHECK(std::abs(g - closed) / scale <= 1e-8);
  }
}

TEST_CASE("scan_no_root reports") {
  SECTION("no poles inside (0, 0.5)") {
    sf::ScanReport rep = sf::scan_no_root(0.05, 0.45, 1e-3);
    CHECK(rep.excluded.empty());
  }
  SECTION("gamma pole excluded around mu = 1") {
    sf::ScanReport rep = sf::scan_no_root(0.5, 1.5, 1e-3);
    REQUIRE(rep.excluded.size() == 1);
    CHECK(rep.excluded[0].first == 1.0);
    for (const auto& [mu, g] : rep.samples)
      CHECK(std::abs(mu - 1.0) >= sf::kPoleExclusionRadius);
  }
  SECTION("min_gap is attained and no sample comes near pi^2") {
    sf::ScanReport rep = sf::scan_no_root(0.05, 10.0, 1e-3);
    const double pi2 = kPi * kPi;
    double recomputed = std::numeric_limits<double>::infinity();
    for (const auto& [mu, g] : rep.samples)
      recomputed = std::min(recomputed, std::abs(g - pi2));
    CHECK(rep.min_gap == recomputed);
    CHECK(rep.min_gap >= pi2 * (1.0 - 1e-12));
    for (const auto& [mu, g] : rep.samples) CHECK(std::abs(g - pi2) >= 1.0);
  }
  SECTION("parameter validation") {
    CHECK_THROWS_AS(sf::scan_no_root(-1.0, 2.0, 1e-3), DomainError);
    CHECK_THROWS_AS(sf::scan_no_root(0.5, 0.4, 1e-3), DomainError);
    CHECK_THROWS_AS(sf::scan_no_root(0.1, 0.4, 0.0), DomainError);
  }
}
