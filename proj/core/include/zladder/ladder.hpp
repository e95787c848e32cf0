#pragma once

// Computable models of the ladder phi_1: an increasing map with
// phi_1' = Z^2 / ln t and t - phi_1(t) ~ (1 - gamma) pi(t).
//
// `asymptotic`  t - (1 - gamma) li(t); carries the global geometry.
// `ode`         anchored integral of z_tilde_sq, built panel by panel from
//               Chebyshev interpolants; deriv is z_tilde_sq itself, so the
//               change of variables u = phi_1(t) is exact up to quadrature.
// `tabulated`   monotone cubic Hermite through a checkpoint table.
// `custom`      caller-supplied functions (identity maps in tests, etc.).
//
// Models are immutable values backed by shared state; copies are cheap and
// evaluation is safe from any number of threads.

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zladder/grid.hpp"
#include "zladder/intervals.hpp"
#include "zladder/primes.hpp"
#include "zladder/rs_core.hpp"

namespace zladder {

enum class LadderKind { asymptotic, ode, tabulated, custom };

std::string_view to_string(LadderKind kind);
/// Throws FormatError on an unknown name.
LadderKind parse_ladder_kind(std::string_view name);

struct LadderAnchor {
  double t = 0.0;
  double value = 0.0;
};

struct Checkpoint {
  double t = 0.0;
  double value = 0.0;
  double deriv = 0.0;
};

class LadderModel {
 public:
  struct Impl;

  LadderKind kind() const;
  /// Closed range [lo, hi] on which eval/deriv are defined.
  Interval range() const;
  /// Throws DomainError outside range().
  double eval(double t) const;
  double deriv(double t) const;
  std::optional<LadderAnchor> anchor() const;
  /// Estimated absolute error of eval against the exact model definition.
  double tolerance() const;
  /// Panel boundaries for `ode`, table nodes for `tabulated`; empty otherwise.
  std::span<const Checkpoint> checkpoints() const;
  /// Panels whose interpolant never met its tolerance (ode only).
  long unresolved_panels() const;

  static LadderModel custom(Interval range, std::function<double(double)> eval,
                            std::function<double(double)> deriv);

  explicit LadderModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<const Impl> impl_;
};

/// eval(t) = t - (1 - gamma) li(t), deriv(t) = 1 - (1 - gamma) / ln t.
/// Requires 10 <= range.lo < range.hi.
LadderModel ladder_asymptotic(Interval range);

struct OdeLadderOptions {
  RSConfig rs{};
  ZTildeMode mode = ZTildeMode::plain;
  /// Chebyshev-Lobatto nodes per panel minus one.
  int degree = 24;
  /// Panel accepted once its trailing Chebyshev coefficients fall below
  /// rel_tol times the largest one plus the evaluation noise of Z^2.
  double rel_tol = 1e-12;
  int max_split_depth = 6;
};

/// Integrate z_tilde_sq forward from anchor_t over `span`, starting from
/// seed.eval(anchor_t). Requires anchor_t >= kFastPathMin, span > 0 and
/// anchor_t + span <= kValidatedMax.
LadderModel ladder_ode(double anchor_t, double span, const LadderModel& seed,
                       const OdeLadderOptions& opts = {});

/// Model through a checkpoint table with monotone cubic Hermite interpolation.
/// Requires at least two nodes, strictly increasing t and non-decreasing values.
LadderModel ladder_tabulated(std::vector<Checkpoint> table, std::optional<LadderAnchor> anchor,
                             double tolerance);

/// The t with m.eval(t) = T: bracketed Newton using m.deriv, bisection where
/// the derivative vanishes or a step leaves the bracket.
/// Throws DomainError if T is outside [eval(lo), eval(hi)].
double mirror_point(const LadderModel& m, double T);

/// Map every endpoint (and the window) through mirror_point. Labels G1/G2
/// become mirrored-G1/mirrored-G2; others are kept.
IntervalCollection mirror_collection(const LadderModel& m, const IntervalCollection& c);

struct Separation {
  double rho = 0.0;        // mirror(T) - (T + H)
  double predicted = 0.0;  // (1 - gamma) pi(T)
  double mirror_T = 0.0;
  double mirror_T_plus_H = 0.0;
  bool violation = false;  // rho <= 0
};

Separation separation_rho(const WindowSpec& w, const LadderModel& m, const PrimeCounter& pc);

/// Checkpoint CSV: a `# kind=... anchor_t=... anchor_value=... tolerance=...`
/// line, a `t,phi,dphi` header, then rows. `per_panel` extra equally spaced
/// samples are written inside each panel of an ode model.
void write_checkpoints(std::ostream& out, const LadderModel& m, int per_panel = 8);
/// Reads the table back as a `tabulated` model. Throws FormatError.
LadderModel read_checkpoints(std::istream& in);

}  // namespace zladder
