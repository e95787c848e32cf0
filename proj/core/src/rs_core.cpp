#include "zladder/rs_core.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "zladder/errors.hpp"
#include "zladder/summation.hpp"

namespace zladder {
namespace {

#include "rs_coefficients.inc"

constexpr long double kTwoPiL = 6.283185307179586476925286766559005768L;
constexpr long double kInvTwoPiL = 0.1591549430918953357688837633725143620L;
constexpr long double kLnTwoPiL = 1.837877066409345483560659472811235280L;
constexpr long double kPiOver8L = 0.3926990816987241548078304229099378605L;

// theta corrections c_k / t^{2k-1}, k = 1..4 (the fourth is only used for the
// error bound of order 3).
constexpr std::array<long double, 4> kThetaSeries = {
    1.0L / 48.0L, 7.0L / 5760.0L, 31.0L / 80640.0L, 127.0L / 430080.0L};

void check_theta_args(double t, ThetaExpansion exp) {
  if (!(t > kTwoPi)) {
    throw DomainError("theta: requires t > 2*pi, got " + std::to_string(t));
  }
  if (exp.order < 0 || exp.order > ThetaExpansion::kMaxOrder) {
    throw std::invalid_argument("theta: expansion order must be in [0, 3]");
  }
}

void check_fast_path(double t, const char* who) {
  if (!(t >= kFastPathMin) || !std::isfinite(t)) {
    throw DomainError(std::string(who) + ": requires t >= 100, got " +
                      std::to_string(t));
  }
}

// ln n in extended precision and n^{-1/2}, for the main oscillator sum.
struct OscillatorTable {
  static constexpr int kSize = 4100;  // covers t up to 2 pi * 4099^2 > 1e8
  std::vector<long double> log_n;
  std::vector<double> inv_sqrt_n;

  OscillatorTable() : log_n(kSize), inv_sqrt_n(kSize) {
    for (int n = 1; n < kSize; ++n) {
      log_n[n] = std::log(static_cast<long double>(n));
      inv_sqrt_n[n] = static_cast<double>(1.0L / std::sqrt(static_cast<long double>(n)));
    }
  }
};

const OscillatorTable& oscillators() {
  static const OscillatorTable table;
  return table;
}

// Coefficients of Psi^{(m)} written as u^{m mod 2} * sum_j a_j v^j, v = u^2.
struct PsiDerivativeTable {
  static constexpr int kMaxDerivative = 12;
  std::array<std::vector<double>, kMaxDerivative + 1> coeffs;

  PsiDerivativeTable() {
    for (int m = 0; m <= kMaxDerivative; ++m) {
      // d^m/du^m u^{2k} = (2k)!/(2k-m)! u^{2k-m}
      auto& out = coeffs[m];
      for (int k = 0; k < kPsiTerms; ++k) {
        const int power = 2 * k - m;
        if (power < 0) continue;
        double falling = 1.0;
        for (int i = 0; i < m; ++i) falling *= static_cast<double>(2 * k - i);
        out.push_back(kPsiSeries[k] * falling);
      }
    }
  }

  double eval(int m, double u) const {
    const auto& c = coeffs[m];
    const double v = u * u;
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * v + *it;
    return (m % 2 == 1) ? acc * u : acc;
  }
};

const PsiDerivativeTable& psi_table() {
  static const PsiDerivativeTable table;
  return table;
}

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;
constexpr double kPi4 = kPi2 * kPi2;
constexpr double kPi6 = kPi4 * kPi2;
constexpr double kPi8 = kPi4 * kPi4;

double remainder_coefficient(int k, double p) {
  const auto& psi = psi_table();
  const double u = p - 0.5;
  switch (k) {
    case 0:
      return psi.eval(0, u);
    case 1:
      return -psi.eval(3, u) / (96.0 * kPi2);
    case 2:
      return psi.eval(2, u) / (64.0 * kPi2) + psi.eval(6, u) / (18432.0 * kPi4);
    case 3:
      return -psi.eval(1, u) / (64.0 * kPi2) - psi.eval(5, u) / (3840.0 * kPi4) -
             psi.eval(9, u) / (5308416.0 * kPi6);
    case 4:
      return psi.eval(0, u) / (128.0 * kPi2) +
             19.0 * psi.eval(4, u) / (24576.0 * kPi4) +
             11.0 * psi.eval(8, u) / (5898240.0 * kPi6) +
             psi.eval(12, u) / (2038431744.0 * kPi8);
    default:
      throw std::invalid_argument("rs_remainder_coefficient: k out of range");
  }
}

}  // namespace

long double theta_extended(double t, ThetaExpansion exp) {
  check_theta_args(t, exp);
  const long double tl = t;
  long double value =
      0.5L * tl * (std::log(tl) - kLnTwoPiL) - 0.5L * tl - kPiOver8L;
  const long double inv = 1.0L / tl;
  const long double inv2 = inv * inv;
  long double power = inv;
  for (int k = 0; k < exp.order; ++k) {
    value += kThetaSeries[k] * power;
    power *= inv2;
  }
  return value;
}

double theta(double t, ThetaExpansion exp) {
  return static_cast<double>(theta_extended(t, exp));
}

double theta_error_bound(double t, ThetaExpansion exp) {
  check_theta_args(t, exp);
  const double next = static_cast<double>(kThetaSeries[exp.order]);
  return 2.0 * next / std::pow(t, 2 * exp.order + 1);
}

double theta_deriv(double t, ThetaExpansion exp) {
  check_theta_args(t, exp);
  const long double tl = t;
  long double value = 0.5L * (std::log(tl) - kLnTwoPiL);
  const long double inv2 = 1.0L / (tl * tl);
  long double power = inv2;
  for (int k = 0; k < exp.order; ++k) {
    value -= static_cast<long double>(2 * k + 1) * kThetaSeries[k] * power;
    power *= inv2;
  }
  return static_cast<double>(value);
}

double hardy_z(double t, const RSConfig& cfg) {
  check_fast_path(t, "hardy_z");
  if (cfg.correction_terms < 0 ||
      cfg.correction_terms > RSConfig::kMaxCorrectionTerms) {
    throw std::invalid_argument("hardy_z: correction_terms must be in [0, 5]");
  }

  const double a = std::sqrt(t / kTwoPi);
  const long n_terms = static_cast<long>(std::floor(a));
  const long double th = theta_extended(t);
  const long double tl = t;
  const auto& tab = oscillators();

  auto term = [&](long n) {
    long double log_n;
    double weight;
    if (n < OscillatorTable::kSize) {
      log_n = tab.log_n[n];
      weight = tab.inv_sqrt_n[n];
    } else {
      log_n = std::log(static_cast<long double>(n));
      weight = 1.0 / std::sqrt(static_cast<double>(n));
    }
    const long double phase = th - tl * log_n;
    const double turns = std::nearbyint(static_cast<double>(phase * kInvTwoPiL));
    const long double reduced = phase - static_cast<long double>(turns) * kTwoPiL;
    return weight * std::cos(static_cast<double>(reduced));
  };

  double main_sum;
  if (cfg.summation == SummationMode::compensated) {
    CompensatedSum acc;
    for (long n = 1; n <= n_terms; ++n) acc.add(term(n));
    main_sum = acc.value();
  } else {
    double acc = 0.0;
    for (long n = 1; n <= n_terms; ++n) acc += term(n);
    main_sum = acc;
  }

  double remainder = 0.0;
  if (cfg.correction_terms > 0) {
    const double p = a - static_cast<double>(n_terms);
    const double inv_a = 1.0 / a;
    double series = 0.0;
    double scale = 1.0;
    for (int k = 0; k < cfg.correction_terms; ++k) {
      series += remainder_coefficient(k, p) * scale;
      scale *= inv_a;
    }
    const double sign = (n_terms % 2 == 1) ? 1.0 : -1.0;  // (-1)^{N-1}
    remainder = sign * series / std::sqrt(a);
  }
  return 2.0 * main_sum + remainder;
}

double z_tilde_sq(double t, ZTildeMode mode, const RSConfig& cfg) {
  check_fast_path(t, "z_tilde_sq");
  const double z = hardy_z(t, cfg);
  const double log_t = std::log(t);
  double denom = log_t;
  if (mode == ZTildeMode::loglog) denom *= 1.0 + std::log(log_t) / log_t;
  return z * z / denom;
}

double mean_zero_gap(double t) {
  if (!(t > kTwoPi)) throw DomainError("mean_zero_gap: requires t > 2*pi");
  return kTwoPi / std::log(t / kTwoPi);
}

namespace detail {

double rs_remainder_coefficient(int k, double p) { return remainder_coefficient(k, p); }

double rs_psi_derivative(int m, double p) {
  if (m < 0 || m > PsiDerivativeTable::kMaxDerivative) {
    throw std::invalid_argument("rs_psi_derivative: order out of range");
  }
  return psi_table().eval(m, p - 0.5);
}

}  // namespace detail
}  // namespace zladder
