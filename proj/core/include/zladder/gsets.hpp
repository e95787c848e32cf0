#pragma once

// The set systems G1(x; T, H), G2(y; T, H) and sign partitions of a function
// over an interval collection.

#include <functional>
#include <vector>

#include "zladder/grid.hpp"
#include "zladder/intervals.hpp"

namespace zladder {

/// Window declared by both set builders: from t_first(-pi/2) to t_last(pi/2)
/// over the Gram points in [T, T + H]. G1 and G2 for any x, y <= pi/2 fit inside.
Interval gsets_window(const WindowSpec& w);

/// One interval (t_nu(-x), t_nu(x)) per even nu with T <= t_nu <= T + H.
/// Requires 0 < x <= pi/2.
IntervalCollection build_g1(const WindowSpec& w, double x);

/// As build_g1 over odd nu.
IntervalCollection build_g2(const WindowSpec& w, double y);

struct SignPartitionOptions {
  /// Uniform pre-scan step; <= 0 selects mean_zero_gap(window midpoint) / 8.
  double scan_step = 0.0;
  /// Iteration cap for the hidden-root search around local minima of |f|.
  int refine_iterations = 60;
};

struct SignPartition {
  IntervalCollection pos;
  IntervalCollection neg;
  /// Excluded root brackets, ascending. Their total length is at most
  /// root_tol * measure(c) unless ulp limits force a wider bracket.
  std::vector<Interval> gaps;
  /// Places where |f| has a local minimum the refinement could neither
  /// resolve into a sign change nor rule out (suspected root cluster).
  std::vector<Interval> suspects;
  long evaluations = 0;
};

/// Split `c` into open pieces where f > 0 and f < 0. Roots are located by a
/// uniform sign scan followed by bisection down to the gap budget; local
/// minima of |f| between same-sign nodes are searched for hidden root pairs.
/// Requires root_tol > 0.
SignPartition sign_partition(const IntervalCollection& c, const std::function<double(double)>& f,
                             double root_tol, const SignPartitionOptions& opts = {});

}  // namespace zladder
