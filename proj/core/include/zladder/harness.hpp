#pragma once

// Experiment runner: assembles grid, sets, ladder and quadrature into the
// verification program and renders machine-readable reports.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zladder/grid.hpp"
#include "zladder/ladder.hpp"
#include "zladder/quad.hpp"
#include "zladder/rs_core.hpp"

namespace zladder {

/// Error-budget constant in kappa * T^{1/6 + eps}, fitted by
/// tools/calibrate_kappa on windows disjoint from the default experiments.
inline constexpr double kCalibratedKappa = 0.55;

inline constexpr int kReportSchemaVersion = 1;

struct ExperimentConfig {
  double T = 1.0e6;
  double epsilon = 0.05;
  std::optional<double> H_override;
  double x = 1.5707963267948966;
  double y = 1.5707963267948966;
  LadderKind ladder_kind = LadderKind::ode;
  QuadSpec quad = default_quad();
  RSConfig rs{};
  std::uint64_t seed = 1;
  std::string output_dir = "zladder-out";
  double kappa = kCalibratedKappa;
  /// Gap budget for sign partitions, relative to the partitioned measure.
  double root_tol = 1e-8;
  /// Allowed |A+/|A-| - 1| in the area-equality check.
  double area_tol = 0.15;
  /// Allowed |A pi / (2H) - 1| for the fitted shape amplitude.
  double shape_tol = 0.10;

  static QuadSpec default_quad() {
    QuadSpec q;
    q.rel_tol = 1e-10;
    q.abs_tol = 1e-6;
    return q;
  }

  WindowSpec window() const { return {T, epsilon, H_override}; }
  /// Throws DomainError / std::invalid_argument on an invalid combination.
  void validate() const;
};

/// Set one option by its flag name (without dashes): T, eps, H, x, y, ladder,
/// rel-tol, abs-tol, max-depth, correction-terms, seed, out, kappa, root-tol,
/// area-tol, shape-tol. Throws FormatError for unknown keys or bad values.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Flat `key = value` text; `#` starts a comment. Throws FormatError.
void apply_config_text(ExperimentConfig& cfg, std::string_view text);

/// Every setting in apply_setting form; feeding it back reproduces cfg.
std::vector<std::pair<std::string, std::string>> config_settings(const ExperimentConfig& cfg);

enum class Verdict { pass, fail, informative };
std::string_view to_string(Verdict v);

/// Relation tags. Each report cites exactly one.
namespace relation {
inline constexpr std::string_view kTheorem = "theorem";                  // mirrored-set integrals
inline constexpr std::string_view kLadderAsymptotic = "ladder-asymptotic";  // t - phi(t) ~ (1-c) pi(t)
inline constexpr std::string_view kSeparation = "separation";            // gap between the segments
inline constexpr std::string_view kUnion = "union-corollary";
inline constexpr std::string_view kDifference = "difference-corollary";  // incl. the x = y = pi/2 case
inline constexpr std::string_view kAreaEquality = "area-equality";
inline constexpr std::string_view kZTildeTransform = "z-tilde-transform";  // phi' = Z~^2
inline constexpr std::string_view kSubstitution = "substitution-lemma";
inline constexpr std::string_view kMirroredSubstitution = "mirrored-substitution";
inline constexpr std::string_view kMeanValue = "mean-value";  // int over G1/G2 of Z
}  // namespace relation

/// All tags, in a fixed order.
std::vector<std::string_view> relation_tags();

struct VerificationReport {
  std::string experiment_id;
  std::string relation;
  double measured = 0.0;
  double predicted = 0.0;
  double error_estimate = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::informative;
  /// Deterministic numeric metadata (node counts, sizes, ...).
  std::vector<std::pair<std::string, double>> details;
  std::string note;
  /// Wall time; written only to the report's timing block.
  double runtime_seconds = 0.0;

  bool hard() const { return verdict != Verdict::informative; }
};

/// pass iff |measured - predicted| <= tolerance; informative when !hard.
VerificationReport make_report(std::string id, std::string_view relation, double measured,
                               double predicted, double error_estimate, double tolerance,
                               bool hard);

/// True when the window is longer than the one the mean-value inputs are
/// stated for; rows budgeted by kappa T^{1/6+eps} are then informative.
bool beyond_default_window(const ExperimentConfig& cfg);

/// kappa * T^{1/6 + eps}.
double error_budget(const ExperimentConfig& cfg);

/// Direct and mirrored integrals of Z over G1(x), G2(y) with the
/// substitution residuals between them, plus the change-of-variables check
/// on [T, T + U].
std::vector<VerificationReport> verify_theorem(const ExperimentConfig& cfg);

/// Union and difference integrals; for x = y = pi/2 also the covering of
/// the mirrored window by the two mirrored sets.
std::vector<VerificationReport> verify_corollaries(const ExperimentConfig& cfg);

/// Requires cfg.x == cfg.y. Sign-partitions Z over G1(x) u G2(x), carries the
/// pieces through the ladder inverse and compares the positive and negative
/// areas of Z[phi_1] Z~^2. The first report is the area ratio.
std::vector<VerificationReport> verify_sign_area(const ExperimentConfig& cfg);

/// Three-point trend of |A+/|A-| - 1| and of the relative deviation of
/// int_{G1(pi/2)} Z over window lengths Hs; informative rows. Non-increasing
/// on average means the least-squares slope against log H is <= 0.
std::vector<VerificationReport> verify_h_trend(const ExperimentConfig& cfg,
                                               const std::vector<double>& Hs);

struct ShapeRow {
  double x = 0.0;
  double measured = 0.0;
  double predicted = 0.0;
};

struct ShapeScan {
  std::vector<ShapeRow> rows;
  double amplitude = 0.0;      // least-squares A in A sin x
  double residual_norm = 0.0;  // ||I - A sin x||_2
  std::vector<VerificationReport> reports;
};

/// Requires at least 8 points in (0, pi/2].
ShapeScan scan_shape(const ExperimentConfig& cfg, const std::vector<double>& x_grid);
/// x = k pi / 16, k = 1..8.
std::vector<double> default_shape_grid();

/// Direct integrals of Z over G1(x), G2(y).
std::vector<VerificationReport> verify_mean_value(const ExperimentConfig& cfg);

/// Separation and ladder-asymptotic rows for the asymptotic model with exact
/// prime counts, plus an informative ODE-vs-asymptotic increment comparison.
std::vector<VerificationReport> verify_ladder(const ExperimentConfig& cfg);

/// Command-line entry point. Exit codes: 0 every hard verdict passed,
/// 1 a verification failed, 2 usage or configuration error.
int run_cli(int argc, const char* const* argv);

}  // namespace zladder
