#pragma once

// Globally adaptive Gauss-Kronrod (G10/K21) quadrature over intervals and
// interval collections, and the change-of-variables residual for a ladder.

#include <functional>
#include <optional>
#include <vector>

#include "zladder/intervals.hpp"
#include "zladder/ladder.hpp"

namespace zladder {

using RealFunction = std::function<double(double)>;

enum class QuadRule { adaptive_nested, fixed_panel };

struct QuadSpec {
  static constexpr int kMaxDepthLimit = 60;

  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  /// Bisection depth limit for any panel (adaptive rule).
  int max_depth = 40;
  QuadRule rule = QuadRule::adaptive_nested;
  /// Panels per piece for the fixed_panel rule.
  int fixed_panels = 64;
  /// Optional pre-split: interior breakpoints for a range (lo, hi). Used to
  /// align panels with the Gram grid so each sees about one sign change of Z.
  std::function<std::vector<double>(double, double)> breakpoints;

  /// Throws std::invalid_argument on non-positive tolerances or max_depth
  /// outside [1, 60].
  void validate() const;
};

/// QuadSpec whose breakpoints are the Gram points (grid_breakpoints).
QuadSpec with_grid_breakpoints(QuadSpec q);

struct QuadratureOutcome {
  double value = 0.0;
  double error_estimate = 0.0;
  /// The accuracy that was asked for: max(abs_tol, rel_tol |value|) for one
  /// interval, the sum of those for a collection.
  double tolerance = 0.0;
  long evaluations = 0;
  long subdivisions = 0;
  bool converged = true;
  /// For collections: index of the first interval that did not converge.
  std::optional<std::size_t> failed_interval;
};

/// Integral of f over (lo, hi). Deterministic for fixed inputs: panel order,
/// refinement order and the final reduction depend only on (f, lo, hi, q).
/// If the depth limit stops refinement, returns the best estimate with
/// converged = false. Requires lo < hi.
QuadratureOutcome integrate_interval(const RealFunction& f, double lo, double hi, const QuadSpec& q);

/// Same, with explicit interior breakpoints (ascending, inside (lo, hi))
/// replacing q.breakpoints.
QuadratureOutcome integrate_pieces(const RealFunction& f, double lo, double hi,
                                   const std::vector<double>& breakpoints, const QuadSpec& q);

/// Sum of per-interval outcomes in interval order; errors, tolerances and
/// counts add. Throws std::invalid_argument for an empty collection.
QuadratureOutcome integrate_collection(const RealFunction& f, const IntervalCollection& c,
                                       const QuadSpec& q);

struct TransformResidual {
  double residual = 0.0;   // |lhs - rhs|
  double lhs = 0.0;        // int_{mirror(T)}^{mirror(T+U)} f(m(t)) m'(t) dt
  double rhs = 0.0;        // int_T^{T+U} f(u) du
  double tolerance = 0.0;  // lhs.tolerance + rhs.tolerance
  double mirror_lo = 0.0;
  double mirror_hi = 0.0;
  QuadratureOutcome lhs_outcome;
  QuadratureOutcome rhs_outcome;
};

/// Change-of-variables check for a ladder model. Requires 0 < U <= T / ln T
/// and both mirrored endpoints inside m.range(). When q has breakpoints, the
/// left-hand side is split at their mirror images.
TransformResidual transform_residual(const LadderModel& m, const RealFunction& f, double T,
                                     double U, const QuadSpec& q);

}  // namespace zladder
