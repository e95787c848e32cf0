#pragma once

// Generalised Gram grid: solutions t_nu(tau) of theta(t) = pi nu + tau, and
// the observation window [T, T + H].

#include <optional>
#include <vector>

#include "zladder/intervals.hpp"

namespace zladder {

struct GramLikePoint {
  long nu = 0;
  double tau = 0.0;
  double t = 0.0;
};

/// Smallest t the grid solver works with. The truncated theta series has
/// a positive derivative from here on (it dips just above 2 pi).
inline constexpr double kGridMinT = 7.0;

/// Observation window. H = T^{1/6 + 2 eps} unless overridden.
struct WindowSpec {
  double T = 1.0e6;
  double epsilon = 0.05;
  std::optional<double> H_override;

  double H() const;
  /// The window length the mean-value formulas are stated for, ignoring the override.
  double default_H() const;
  /// Throws DomainError unless T >= 1e3, 0 < eps < 1/12, H > 0 and T + H < 1e8.
  void validate() const;
};

/// Solve theta(t) = pi nu + tau by Newton's method inside a monotone bracket,
/// falling back to bisection when a step leaves the bracket.
/// `tol` bounds |theta(t) - pi nu - tau|; tol <= 0 selects 1e-10 * t.
/// Requires nu >= 0 and -pi <= tau <= pi (so the target sits above theta(kGridMinT)).
/// Throws DomainError for inadmissible targets and ConvergenceError (with the
/// final bracket) if the residual cannot be brought under tol.
GramLikePoint solve_grid_point(long nu, double tau, double tol = 0.0);

/// Residual theta(t) - pi nu - tau in extended precision.
double grid_residual(const GramLikePoint& p);

/// All Gram points t_nu (tau = 0) with T <= t_nu <= T + H, nu consecutive.
std::vector<GramLikePoint> grid_range(const WindowSpec& w);

/// Gram points t_nu strictly inside (lo, hi), for splitting quadrature panels
/// so that each one covers at most one half-turn of theta.
std::vector<double> grid_breakpoints(double lo, double hi);

}  // namespace zladder
