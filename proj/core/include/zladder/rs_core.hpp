#pragma once

// Fast working-precision evaluation of the Riemann-Siegel theta function,
// the Hardy signal Z(t) and the normalised square Z(t)^2 / ln t.
//
// Everything here is a pure function of its arguments. The only shared state
// is a read-only table of ln n and n^{-1/2}, built once on first use.

#include <numbers>

namespace zladder {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Lower end of the validated range of hardy_z / z_tilde_sq.
inline constexpr double kFastPathMin = 100.0;

/// Upper end of the range the project validates against the reference
/// evaluator. Larger t still evaluate, with slowly growing phase error.
inline constexpr double kValidatedMax = 1.0e8;

/// Number of asymptotic correction terms used beyond the three main terms
///   t/2 ln(t/2pi) - t/2 - pi/8
/// of theta(t). The corrections are 1/(48t), 7/(5760t^3), 31/(80640t^5).
struct ThetaExpansion {
  static constexpr int kMaxOrder = 3;
  int order = kMaxOrder;
};

enum class SummationMode { plain, compensated };

/// Riemann-Siegel evaluation settings.
///
/// `correction_terms` counts remainder terms C_0, C_1, ... added to the main
/// oscillator sum: 0 keeps only the main sum (error O(t^{-1/4})), k >= 1 adds
/// C_0..C_{k-1} (error O(t^{-(2k+1)/4})).
struct RSConfig {
  static constexpr int kMaxCorrectionTerms = 5;
  int correction_terms = 2;
  SummationMode summation = SummationMode::compensated;
};

/// How the slowly varying factor in Z^2 / ((1 + o(1)) ln t) is treated.
/// `plain` drops it, `loglog` uses 1 + ln ln t / ln t as a sensitivity probe.
enum class ZTildeMode { plain, loglog };

/// theta(t) from its asymptotic series. Requires t > 2 pi.
/// Absolute error is at most theta_error_bound(t, exp); for order 0 that is
/// 1/(24 t).
double theta(double t, ThetaExpansion exp = {});

/// Same series evaluated in extended precision; used where theta must be
/// resolved far below one ulp of a double at large t (phases, grid residuals).
long double theta_extended(double t, ThetaExpansion exp = {});

/// Documented bound on |theta(t) - exact theta(t)| for the given order:
/// twice the first omitted series term. Non-increasing in `order` for t > 2 pi.
double theta_error_bound(double t, ThetaExpansion exp = {});

/// d theta / dt for the same truncation. Requires t > 2 pi. The correction
/// terms pull it slightly negative on (2 pi, 6.29); it is positive above that.
double theta_deriv(double t, ThetaExpansion exp = {});

/// Z(t) = e^{i theta(t)} zeta(1/2 + it) by the Riemann-Siegel formula.
/// Requires t >= kFastPathMin.
double hardy_z(double t, const RSConfig& cfg = {});

/// Z(t)^2 / ln t (mode plain); non-negative. Requires t >= kFastPathMin.
double z_tilde_sq(double t, ZTildeMode mode = ZTildeMode::plain,
                  const RSConfig& cfg = {});

/// Mean spacing of the zeros of Z near height t, 2 pi / ln(t / 2 pi).
double mean_zero_gap(double t);

namespace detail {
/// Riemann-Siegel remainder coefficient C_k(p), 0 <= k < kMaxCorrectionTerms,
/// at fractional part p of sqrt(t / 2 pi). Exposed for tests.
double rs_remainder_coefficient(int k, double p);
/// Psi^{(m)}(p) with Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p).
double rs_psi_derivative(int m, double p);
}  // namespace detail

}  // namespace zladder
