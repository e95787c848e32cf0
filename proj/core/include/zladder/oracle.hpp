#pragma once

// Slow, independent high-precision reference for theta, zeta(1/2 + it) and
// Z(t). It shares no code path with the Riemann-Siegel evaluator:
//   - zeta(1/2 + it) by Euler-Maclaurin summation, main sum in double-double
//     arithmetic with n^{-s} built multiplicatively from prime powers;
//   - theta(t) = Im log Gamma(1/4 + it/2) - (t/2) ln pi by a shifted Stirling
//     series in MPFR.
// Intended for tests and validation runs, not for production loops.

#include <complex>

namespace zladder {

/// A value carried as an unevaluated sum hi + lo (about 32 significant digits).
struct SplitReal {
  double hi = 0.0;
  double lo = 0.0;
  double value() const { return hi + lo; }
};

class HiPrecOracle {
 public:
  static constexpr int kMinDigits = 30;
  static constexpr int kMaxDigits = 32;

  /// Throws std::invalid_argument unless kMinDigits <= working_digits <= kMaxDigits.
  explicit HiPrecOracle(int working_digits = kMinDigits);

  int working_digits() const { return digits_; }

  /// Exact-theta reference via log Gamma. Requires t > 0.
  SplitReal theta(double t) const;

  /// zeta(1/2 + it). Requires t > 0.
  std::complex<double> zeta_critical(double t) const;

  /// Z(t) = e^{i theta} zeta(1/2 + it). Requires t > 0.
  /// Throws PrecisionError if the Euler-Maclaurin tail fails to converge.
  SplitReal hardy_z(double t) const;

  /// Estimated absolute error of hardy_z at height t: 10^{-(digits-5)} for
  /// t <= 1e5, growing in proportion to t beyond (phases t ln n are carried
  /// in double-double).
  double error_bound(double t) const;

 private:
  struct ZetaParts;
  ZetaParts zeta_parts(double t) const;

  int digits_;
};

}  // namespace zladder
