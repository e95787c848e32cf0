#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "zladder/errors.hpp"
#include "zladder/grid.hpp"
#include "zladder/gsets.hpp"
#include "zladder/rs_core.hpp"

using namespace zladder;
using namespace zladder::testing;

namespace {
constexpr double kPi = std::numbers::pi;
const WindowSpec kWindow{1e6, 0.05, 1e3};
}  // namespace

TEST_SUITE("grid") {

TEST_CASE("classical Gram points") {
  CHECK(solve_grid_point(0, 0.0).t == doctest::Approx(kGram0).epsilon(1e-10));
  CHECK(solve_grid_point(1, 0.0).t == doctest::Approx(kGram1).epsilon(1e-10));
  CHECK(solve_grid_point(100, 0.0).t == doctest::Approx(kGram100).epsilon(1e-10));
  // First admissible point against bisection on the reference theta.
  const HiPrecOracle o;
  const double ref = oracle_theta_inverse(o, -kPi, 8.0, 17.0);
  CHECK(solve_grid_point(0, -kPi).t == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("a half-turn step lands on the next Gram point") {
  for (long nu : {0L, 7L, 1000L, 123456L, 2000000L}) {
    CHECK(solve_grid_point(nu, kPi).t == solve_grid_point(nu + 1, 0.0).t);
    CHECK(solve_grid_point(nu, kPi / 2).t == solve_grid_point(nu + 1, -kPi / 2).t);
  }
}

TEST_CASE("residuals stay under the tolerance") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<long> nus(0, 30'000'000);
  std::uniform_real_distribution<double> taus(-kPi, kPi);
  for (int i = 0; i < 500; ++i) {
    const GramLikePoint p = solve_grid_point(nus(rng), taus(rng));
    CHECK(std::fabs(grid_residual(p)) <= 1e-10 * p.t);
    const GramLikePoint q = solve_grid_point(p.nu, p.tau, 1e-6);
    CHECK(std::fabs(grid_residual(q)) <= 1e-6);
  }
}

TEST_CASE("ordinates increase in nu and in tau") {
  // Over the full tau range [-pi, pi] neighbouring nu overlap, so the order
  // is by target pi nu + tau: increasing in each argument separately, and
  // lexicographic once tau is restricted to a half-turn.
  for (long nu = 5000; nu < 5010; ++nu) {
    double prev = 0.0;
    for (int k = -8; k <= 8; ++k) {
      const double t = solve_grid_point(nu, k * kPi / 8).t;
      CHECK(t > prev);
      CHECK(solve_grid_point(nu + 1, k * kPi / 8).t > t);
      prev = t;
    }
  }
  double prev = 0.0;
  for (long nu = 5000; nu < 5010; ++nu) {
    for (int k = -4; k < 4; ++k) {
      const double t = solve_grid_point(nu, k * kPi / 8).t;
      CHECK(t > prev);
      prev = t;
    }
  }
}

TEST_CASE("inadmissible targets") {
  CHECK_THROWS_AS(solve_grid_point(-1, 0.0), DomainError);
  CHECK_THROWS_AS(solve_grid_point(3, 3.5), DomainError);
}

TEST_CASE("window length") {
  const WindowSpec w{1e6, 0.05};
  CHECK(w.H() == doctest::Approx(std::pow(1e6, 1.0 / 6.0 + 0.1)));
  CHECK(kWindow.H() == 1e3);
  CHECK(kWindow.default_H() == doctest::Approx(w.H()));
  CHECK_THROWS_AS((WindowSpec{500.0}.validate()), DomainError);
  CHECK_THROWS_AS((WindowSpec{1e6, 0.1}.validate()), DomainError);
  CHECK_THROWS_AS((WindowSpec{1e6, 0.05, -1.0}.validate()), DomainError);
  CHECK_THROWS_AS((WindowSpec{1e8 - 10.0, 0.05, 100.0}.validate()), DomainError);
}

TEST_CASE("grid_range against brute-force enumeration") {
  const auto pts = grid_range(kWindow);
  // Brute force: every nu whose Gram point lands in the window.
  const long first = static_cast<long>(std::floor(theta(kWindow.T) / kPi)) - 3;
  const long last = static_cast<long>(std::ceil(theta(kWindow.T + kWindow.H()) / kPi)) + 3;
  std::vector<long> brute;
  for (long nu = first; nu <= last; ++nu) {
    const double t = solve_grid_point(nu, 0.0).t;
    if (t >= kWindow.T && t <= kWindow.T + kWindow.H()) brute.push_back(nu);
  }
  REQUIRE(pts.size() == brute.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(pts[i].nu == brute[i]);
    CHECK(pts[i].tau == 0.0);
    CHECK(pts[i].t >= kWindow.T);
    CHECK(pts[i].t <= kWindow.T + kWindow.H());
  }
  const double expected = kWindow.H() * theta_deriv(kWindow.T + kWindow.H() / 2) / kPi;
  CHECK(std::fabs(static_cast<double>(pts.size()) - expected) <= 2.0);
}

TEST_CASE("tiny window may be empty") {
  CHECK(grid_range(WindowSpec{1e6, 0.05, 1e-3}).size() <= 1);
}

TEST_CASE("breakpoints are interior Gram points") {
  const auto bp = grid_breakpoints(1e5, 1e5 + 10.0);
  REQUIRE(bp.size() > 5);
  for (std::size_t i = 0; i < bp.size(); ++i) {
    CHECK(bp[i] > 1e5);
    CHECK(bp[i] < 1e5 + 10.0);
    if (i > 0) CHECK(bp[i] > bp[i - 1]);
    const double turns = theta(bp[i]) / kPi;
    CHECK(std::fabs(turns - std::round(turns)) <= 1e-8);
  }
}

}  // TEST_SUITE

TEST_SUITE("gsets") {

TEST_CASE("measure law") {
  for (double x : {kPi / 2, kPi / 4, kPi / 8}) {
    const IntervalCollection g1 = build_g1(kWindow, x);
    const IntervalCollection g2 = build_g2(kWindow, x);
    CAPTURE(x);
    CHECK(std::fabs(g1.measure() * kPi / (x * kWindow.H()) - 1.0) <= 0.02);
    CHECK(std::fabs(g2.measure() * kPi / (x * kWindow.H()) - 1.0) <= 0.02);
  }
  CHECK(build_g1(kWindow, kPi / 2).measure() / kWindow.H() == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("vanishing half-width gives vanishing measure") {
  CHECK(build_g1(kWindow, 1e-6).measure() < 1e-3);
}

TEST_CASE("endpoints solve the grid equation with the right parity") {
  const double x = 1.1;
  const IntervalCollection g1 = build_g1(kWindow, x);
  const IntervalCollection g2 = build_g2(kWindow, x);
  CHECK(g1.label() == IntervalLabel::g1);
  CHECK(g2.label() == IntervalLabel::g2);
  for (const auto* c : {&g1, &g2}) {
    for (const Interval& iv : c->intervals()) {
      const double a = static_cast<double>(theta_extended(iv.lo) + x) / kPi;
      const double b = static_cast<double>(theta_extended(iv.hi) - x) / kPi;
      CHECK(std::fabs(a - std::round(a)) <= 1e-7);
      CHECK(std::round(a) == std::round(b));
      CHECK(static_cast<long>(std::round(a)) % 2 == (c == &g1 ? 0 : 1));
    }
  }
}

TEST_CASE("G1 and G2 interleave and are disjoint") {
  for (double x : {kPi / 2, 0.7}) {
    const IntervalCollection g1 = build_g1(kWindow, x);
    const IntervalCollection g2 = build_g2(kWindow, x);
    const IntervalCollection all = merge_collections(g1, g2);  // throws on overlap
    CHECK(all.size() == g1.size() + g2.size());
    for (std::size_t i = 1; i < all.size(); ++i) {
      CHECK(g1.contains(0.5 * (all[i].lo + all[i].hi)) != g1.contains(0.5 * (all[i - 1].lo + all[i - 1].hi)));
    }
  }
}

TEST_CASE("for x = y = pi/2 the closure of the union has no interior gaps") {
  const IntervalCollection all =
      merge_collections(build_g1(kWindow, kPi / 2), build_g2(kWindow, kPi / 2));
  for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i].lo == all[i - 1].hi);
  const Interval w = gsets_window(kWindow);
  CHECK(all[0].lo >= w.lo);
  CHECK(all[all.size() - 1].hi <= w.hi);
}

TEST_CASE("half-width must lie in (0, pi/2]") {
  CHECK_THROWS_AS(build_g1(kWindow, 0.0), DomainError);
  CHECK_THROWS_AS(build_g2(kWindow, 1.6), DomainError);
}

}  // TEST_SUITE

TEST_SUITE("sign-partition") {

TEST_CASE("constant sign keeps the whole collection") {
  const IntervalCollection c(IntervalLabel::other, {0, 10}, {{1, 2}, {3, 5}});
  const SignPartition p = sign_partition(c, [](double t) { return t; }, 1e-8);
  CHECK(p.pos == c.relabeled(IntervalLabel::pos_part));
  CHECK(p.neg.empty());
  CHECK(p.gaps.empty());
}

TEST_CASE("sine: pieces, gaps and budget") {
  const IntervalCollection c(IntervalLabel::other, {0, 20}, {{0.5, 9.0}, {10.0, 19.5}});
  const double root_tol = 1e-9;
  const SignPartition p = sign_partition(c, [](double t) { return std::sin(t); }, root_tol);
  CHECK(p.pos.label() == IntervalLabel::pos_part);
  CHECK(p.neg.label() == IntervalLabel::neg_part);
  // Roots k pi inside the two intervals: pi, 2 pi, 4 pi, 5 pi, 6 pi.
  REQUIRE(p.gaps.size() == 5);
  for (const Interval& g : p.gaps) {
    const double k = std::round(g.lo / kPi);
    CHECK(g.lo <= k * kPi);
    CHECK(g.hi >= k * kPi);
  }
  double gap = 0.0;
  for (const Interval& g : p.gaps) gap += g.length();
  CHECK(gap <= root_tol * c.measure());
  CHECK(p.pos.measure() + p.neg.measure() + gap == doctest::Approx(c.measure()).epsilon(1e-14));
  for (const Interval& iv : p.pos.intervals()) CHECK(std::sin(0.5 * (iv.lo + iv.hi)) > 0);
  for (const Interval& iv : p.neg.intervals()) CHECK(std::sin(0.5 * (iv.lo + iv.hi)) < 0);
}

TEST_CASE("a root pair between scan nodes is found") {
  const IntervalCollection c(IntervalLabel::other, {0, 11}, {{0.1, 10.1}});
  const auto f = [](double t) { return (t - 5.0) * (t - 5.0) - 1e-8; };
  SignPartitionOptions opts;
  opts.scan_step = 0.5;
  const SignPartition p = sign_partition(c, f, 1e-10, opts);
  REQUIRE(p.neg.size() == 1);
  CHECK(p.neg[0].lo == doctest::Approx(5.0 - 1e-4).epsilon(1e-9));
  CHECK(p.neg[0].hi == doctest::Approx(5.0 + 1e-4).epsilon(1e-9));
  CHECK(p.pos.size() == 2);
}

TEST_CASE("random audit of Z on a window") {
  const WindowSpec w{1e5, 0.05, 50.0};
  const IntervalCollection c = merge_collections(build_g1(w, kPi / 2), build_g2(w, kPi / 2));
  const auto z = [](double t) { return hardy_z(t); };
  const SignPartition p = sign_partition(c, z, 1e-8);
  CHECK(p.suspects.empty());
  std::mt19937_64 rng(17);
  for (const auto* part : {&p.pos, &p.neg}) {
    std::uniform_int_distribution<std::size_t> pick(0, part->size() - 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
      const Interval& iv = (*part)[pick(rng)];
      const double t = iv.lo + u(rng) * iv.length();
      if (!iv.contains(t)) continue;
      CHECK((part == &p.pos ? z(t) > 0 : z(t) < 0));
    }
  }
  // Roughly one sign change per zero gap.
  const double expected = c.measure() / mean_zero_gap(1e5);
  CHECK(static_cast<double>(p.gaps.size()) == doctest::Approx(expected).epsilon(0.25));
}

TEST_CASE("root_tol must be positive") {
  const IntervalCollection c(IntervalLabel::other, {0, 2}, {{0.5, 1.5}});
  CHECK_THROWS(sign_partition(c, [](double t) { return t; }, 0.0));
}

}  // TEST_SUITE
