#include "zladder/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/lambert_w.hpp>

#include "zladder/errors.hpp"
#include "zladder/rs_core.hpp"

namespace zladder {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr long double kPiL = 3.141592653589793238462643383279502884L;
constexpr int kMaxIterations = 100;

// Inverse of the leading terms t/2 ln(t / 2 pi e) - pi/8.
double initial_guess(double target) {
  const double w = (target + kPi / 8.0) / (kPi * std::numbers::e);
  const double w_clamped = std::max(w, -1.0 / std::numbers::e);
  const double t0 = kTwoPi * std::exp(1.0 + boost::math::lambert_w0(w_clamped));
  return std::max(t0, kGridMinT);
}

// pi nu + tau, with tau that are multiples of pi/2 up to rounding snapped to
// exact quarter turns. Then (nu, pi/2) and (nu + 1, -pi/2) give the same
// target bit for bit, and so the same t.
long double grid_target(long nu, double tau) {
  const double quarters = std::nearbyint(tau / (0.5 * kPi));
  const double snapped = quarters * (0.5 * kPi);
  if (std::fabs(tau - snapped) <= 4.0 * std::numeric_limits<double>::epsilon()) {
    const long half_turns = 2 * nu + static_cast<long>(quarters);
    return 0.5L * kPiL * static_cast<long double>(half_turns);
  }
  return kPiL * static_cast<long double>(nu) + tau;
}

}  // namespace

double WindowSpec::default_H() const { return std::pow(T, 1.0 / 6.0 + 2.0 * epsilon); }

double WindowSpec::H() const { return H_override ? *H_override : default_H(); }

void WindowSpec::validate() const {
  if (!(T >= 1.0e3)) throw DomainError("window: T must be >= 1e3");
  if (!(epsilon > 0.0 && epsilon < 1.0 / 12.0)) {
    throw DomainError("window: epsilon must be in (0, 1/12)");
  }
  if (H_override && !(*H_override > 0.0)) throw DomainError("window: H must be > 0");
  if (!(T + H() < kValidatedMax)) throw DomainError("window: T + H must stay below 1e8");
}

double grid_residual(const GramLikePoint& p) {
  const long double target = grid_target(p.nu, p.tau);
  return static_cast<double>(theta_extended(p.t) - target);
}

GramLikePoint solve_grid_point(long nu, double tau, double tol) {
  if (nu < 0) throw DomainError("solve_grid_point: nu must be >= 0");
  if (!(tau >= -kPi && tau <= kPi)) throw DomainError("solve_grid_point: tau must be in [-pi, pi]");
  const long double target = grid_target(nu, tau);
  if (target < theta_extended(kGridMinT)) {
    throw DomainError("solve_grid_point: target below theta(t_min)");
  }

  double t = initial_guess(static_cast<double>(target));
  if (!(tol > 0.0)) tol = 1.0e-10 * t;

  auto residual = [&](double s) { return theta_extended(s) - target; };

  // Bracket [lo, hi] with residual(lo) <= 0 <= residual(hi).
  double lo = kGridMinT;
  double hi = std::max(2.0 * t, 2.0 * kGridMinT);
  while (residual(hi) < 0) {
    lo = hi;
    hi *= 2.0;
  }

  long double r = residual(t);
  for (int it = 0; it < kMaxIterations; ++it) {
    if (r == 0) break;
    if (r < 0) {
      lo = std::max(lo, t);
    } else {
      hi = std::min(hi, t);
    }
    double next = t - static_cast<double>(r) / theta_deriv(t);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::fabs(next - t);
    t = next;
    r = residual(t);
    if (step <= 2.0 * std::numeric_limits<double>::epsilon() * t || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * t) {
      break;
    }
  }
  // Settle on the best neighbouring double.
  for (double cand : {std::nextafter(t, 0.0), std::nextafter(t, 1e300)}) {
    const long double rc = residual(cand);
    if (std::fabs(rc) < std::fabs(r)) {
      t = cand;
      r = rc;
    }
  }
  if (!(std::fabs(static_cast<double>(r)) <= tol)) {
    throw ConvergenceError("solve_grid_point: residual " + std::to_string(static_cast<double>(r)) +
                               " above tolerance",
                           lo, hi);
  }
  return {nu, tau, t};
}

std::vector<GramLikePoint> grid_range(const WindowSpec& w) {
  w.validate();
  const double T = w.T;
  const double T_end = w.T + w.H();
  // One index of slack on each side; the ordinate filter decides.
  const long nu_lo = std::max(0L, static_cast<long>(std::ceil(theta_extended(T) / kPiL)) - 1);
  const long nu_hi = static_cast<long>(std::floor(theta_extended(T_end) / kPiL)) + 1;
  std::vector<GramLikePoint> out;
  out.reserve(static_cast<std::size_t>(std::max(0L, nu_hi - nu_lo + 1)));
  for (long nu = nu_lo; nu <= nu_hi; ++nu) {
    const GramLikePoint p = solve_grid_point(nu, 0.0);
    if (p.t >= T && p.t <= T_end) out.push_back(p);
  }
  return out;
}

std::vector<double> grid_breakpoints(double lo, double hi) {
  std::vector<double> out;
  if (!(hi > lo) || hi <= kGridMinT) return out;
  lo = std::max(lo, kGridMinT);
  const long nu_lo = std::max(0L, static_cast<long>(std::floor(theta_extended(lo) / kPiL)));
  const long nu_hi = static_cast<long>(std::ceil(theta_extended(hi) / kPiL));
  for (long nu = nu_lo; nu <= nu_hi; ++nu) {
    const double t = solve_grid_point(nu, 0.0).t;
    if (t > lo && t < hi) out.push_back(t);
  }
  return out;
}

}  // namespace zladder
