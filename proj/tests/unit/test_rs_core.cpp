#include <doctest.h>

#include <cmath>
#include <numbers>
#include <cstring>
#include <random>
#include <utility>
#include <stdexcept>

#include "oracles.hpp"
#include "zladder/errors.hpp"
#include "zladder/quad.hpp"
#include "zladder/rs_core.hpp"

using namespace zladder;
using namespace zladder::testing;

using Pt = std::pair<double, double>;

TEST_SUITE("rs-core") {

TEST_CASE("theta matches the log-gamma reference within its bound") {
  for (const auto& [t, ref] : std::initializer_list<Pt>{{100.0, kTheta100}, {1000.0, kTheta1000}, {1e4, kTheta1e4}}) {
    const double bound = theta_error_bound(t) + 4e-16 * ref;
    CHECK(std::fabs(theta(t) - ref) <= bound);
    CHECK(std::fabs(static_cast<double>(theta_extended(t)) - ref) <= bound);
  }
  CHECK(theta(100.0, {1}) == doctest::Approx(87.97216523).epsilon(1e-9));
  CHECK(std::fabs(theta(100.0, {0}) - kTheta100) <= 1.0 / (24.0 * 100.0));
}

TEST_CASE("theta error bound does not grow with the order") {
  for (double t : {7.0, 10.0, 100.0, 1e4, 1e7}) {
    for (int k = 1; k <= ThetaExpansion::kMaxOrder; ++k) {
      CHECK(theta_error_bound(t, {k}) <= theta_error_bound(t, {k - 1}));
    }
  }
}

TEST_CASE("theta vanishes at the first Gram point") {
  CHECK(std::fabs(theta(kGram0)) <= 1e-6);
  CHECK(std::fabs(theta(kGram1) - std::numbers::pi) <= 1e-6);
}

TEST_CASE("theta rejects t <= 2 pi") {
  CHECK_THROWS_AS(theta(kTwoPi), DomainError);
  CHECK_THROWS_AS(theta(1.0), DomainError);
  CHECK_THROWS_AS(theta_deriv(6.0), DomainError);
}

TEST_CASE("theta_deriv values") {
  CHECK(theta_deriv(kTwoPi * std::numbers::e, {0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(theta_deriv(1e6) == doctest::Approx(kThetaDeriv1e6).epsilon(1e-12));
}

TEST_CASE("theta_deriv matches central differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> logt(std::log(1e3), std::log(1e8));
  for (int i = 0; i < 200; ++i) {
    const double t = std::exp(logt(rng));
    const double h = 1e-4 * std::sqrt(t);
    const double fd = static_cast<double>((theta_extended(t + h) - theta_extended(t - h)) / (2.0L * h));
    CHECK(std::fabs(theta_deriv(t) - fd) <= 1e-6 * theta_deriv(t));
  }
}

TEST_CASE("theta is increasing on the working range") {
  const int n = 20000;
  double prev = theta(kFastPathMin);
  for (int i = 1; i <= n; ++i) {
    const double t = kFastPathMin * std::pow(kValidatedMax / kFastPathMin, static_cast<double>(i) / n);
    REQUIRE(theta_deriv(t) > 0.0);
    const double th = theta(t);
    REQUIRE(th > prev);
    prev = th;
  }
}

TEST_CASE("hardy_z against reference values") {
  const RSConfig full{RSConfig::kMaxCorrectionTerms};
  for (const auto& [t, ref] : std::initializer_list<Pt>{{1000.0, kZ1000}, {5000.5, kZ5000_5}, {1e4, kZ1e4},
                                                      {12345.678, kZ12345_678}, {1e5, kZ1e5}}) {
    CAPTURE(t);
    CHECK(std::fabs(hardy_z(t, full) - ref) <= 1e-9);
    CHECK(std::fabs(hardy_z(t) - ref) <= 1e-4);
  }
}

TEST_CASE("|hardy_z| equals |zeta| from Euler-Maclaurin at t = 1e4") {
  const HiPrecOracle o;
  const double z = hardy_z(1e4, {RSConfig::kMaxCorrectionTerms});
  const double zeta = std::abs(o.zeta_critical(1e4));
  CHECK(std::fabs(std::fabs(z) - zeta) <= 1e-8 * zeta);
}

TEST_CASE("correction terms reduce the error") {
  const HiPrecOracle o;
  for (double t : {1e3, 1e4}) {
    const double ref = o.hardy_z(t).value();
    double prev = std::fabs(hardy_z(t, {0}) - ref);
    for (int k = 1; k <= RSConfig::kMaxCorrectionTerms; ++k) {
      const double err = std::fabs(hardy_z(t, {k}) - ref);
      CAPTURE(t);
      CAPTURE(k);
      CHECK(err < prev);
      prev = err;
    }
  }
}

TEST_CASE("hardy_z domain and determinism") {
  CHECK_THROWS_AS(hardy_z(99.0), DomainError);
  CHECK_THROWS_AS(z_tilde_sq(50.0), DomainError);
  for (double t : {1234.5, 98765.4321, 3.3e7}) {
    const double a = hardy_z(t);
    const double b = hardy_z(t);
    CHECK(std::memcmp(&a, &b, sizeof a) == 0);
  }
  const RSConfig plain{2, SummationMode::plain};
  CHECK(hardy_z(2e6, plain) == doctest::Approx(hardy_z(2e6)).epsilon(1e-10));
}

TEST_CASE("sign of Z is constant between consecutive zeros") {
  // Bracket zeros by a fine scan, then check a denser scan in between.
  const double a = 5e4;
  const double step = mean_zero_gap(a) / 16.0;
  double prev = hardy_z(a);
  double last_change = a;
  int checked = 0;
  for (double t = a + step; t < a + 20.0; t += step) {
    const double v = hardy_z(t);
    if ((v > 0) != (prev > 0)) {
      const double z = bisect_root([](double s) { return hardy_z(s); }, t - step, t);
      for (int k = 1; k < 8 && last_change > a; ++k) {
        const double s = last_change + (z - last_change) * k / 8.0;
        CHECK((hardy_z(s) > 0) == (prev > 0));
        ++checked;
      }
      last_change = z;
    }
    prev = v;
  }
  CHECK(checked > 0);
}

TEST_CASE("z_tilde_sq is non-negative and vanishes at zeros") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(100.0, 1e7);
  for (int i = 0; i < 500; ++i) CHECK(z_tilde_sq(u(rng)) >= 0.0);
  const double lo = 1e4;
  const double hi = lo + mean_zero_gap(lo) * 3.0;
  double a = lo;
  const double fa = hardy_z(a);
  double b = lo;
  while ((hardy_z(b) > 0) == (fa > 0) && b < hi) b += 0.01;
  REQUIRE(b < hi);
  const double zero = bisect_root([](double s) { return hardy_z(s); }, b - 0.01, b);
  CHECK(z_tilde_sq(zero) <= 1e-20);
  CHECK(z_tilde_sq(1e4, ZTildeMode::loglog) < z_tilde_sq(1e4, ZTildeMode::plain));
}

TEST_CASE("window mean of z_tilde_sq follows the classical second moment") {
  // d/dT (T ln(T / 2 pi) + (2 gamma - 1) T) = ln(T / 2 pi) + 2 gamma, divided by ln t.
  const double T = 1e6;
  const double U = 1e4;
  QuadSpec q = with_grid_breakpoints({});
  q.rule = QuadRule::fixed_panel;
  q.fixed_panels = 1;
  const auto r = integrate_interval([](double t) { return z_tilde_sq(t); }, T, T + U, q);
  const double mean = r.value / U;
  const double mid = T + 0.5 * U;
  const double classical = (std::log(mid / kTwoPi) + 2.0 * kEulerGamma) / std::log(mid);
  CHECK(mean == doctest::Approx(classical).epsilon(0.05));
}

TEST_CASE("remainder coefficient C0 is Psi") {
  for (double p : {0.1, 0.3, 0.6, 0.9}) {
    const double psi = std::cos(kTwoPi * (p * p - p - 1.0 / 16.0)) / std::cos(kTwoPi * p);
    CHECK(detail::rs_remainder_coefficient(0, p) == doctest::Approx(psi).epsilon(1e-13));
    CHECK(detail::rs_psi_derivative(0, p) == doctest::Approx(psi).epsilon(1e-13));
  }
  // Removable singularities of Psi at p = 1/4 and 3/4.
  for (double p : {0.25, 0.75}) {
    for (int k = 0; k < RSConfig::kMaxCorrectionTerms; ++k) {
      CHECK(std::isfinite(detail::rs_remainder_coefficient(k, p)));
      CHECK(detail::rs_remainder_coefficient(k, p) ==
            doctest::Approx(detail::rs_remainder_coefficient(k, p + 1e-7)).epsilon(1e-4));
    }
  }
}

TEST_CASE("mean_zero_gap") {
  CHECK(mean_zero_gap(1e6) == doctest::Approx(kTwoPi / std::log(1e6 / kTwoPi)).epsilon(1e-15));
}

}  // TEST_SUITE
