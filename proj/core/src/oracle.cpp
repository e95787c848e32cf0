#include "zladder/oracle.hpp"

#include <mpfr.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "double_double.hpp"
#include "zladder/errors.hpp"

namespace zladder {

using dd::Complex;
using dd::DD;

namespace {

// RAII holder for one MPFR variable.
class Mp {
 public:
  explicit Mp(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  Mp(mpfr_prec_t prec, double x) : Mp(prec) { mpfr_set_d(v_, x, MPFR_RNDN); }
  ~Mp() { mpfr_clear(v_); }
  Mp(const Mp&) = delete;
  Mp& operator=(const Mp&) = delete;

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

DD to_dd(const Mp& x, mpfr_prec_t prec) {
  Mp rest(prec);
  const double hi = mpfr_get_d(x.get(), MPFR_RNDN);
  mpfr_sub_d(rest.get(), x.get(), hi, MPFR_RNDN);
  return {hi, mpfr_get_d(rest.get(), MPFR_RNDN)};
}

constexpr int kMaxTailTerms = 400;
constexpr int kSinTerms = 11;

// Constants for the double-double kernels, generated once with MPFR.
struct Constants {
  std::array<double, 3> two_pi{};  // 2 pi as an unevaluated triple
  DD two_pi_dd;
  DD half_pi;
  DD pi_16;
  double inv_two_pi = 0.0;
  std::array<DD, 5> sin_k{};  // sin(k pi / 16), k = 0..4
  std::array<DD, 5> cos_k{};
  std::array<DD, kSinTerms> sin_coef{};  // (-1)^i / (2i+1)!
  std::array<DD, kSinTerms> cos_coef{};  // (-1)^i / (2i)!
  std::vector<DD> zeta_even;             // zeta(2k), k = 0..kMaxTailTerms

  Constants() {
    constexpr mpfr_prec_t prec = 320;
    Mp pi(prec), x(prec), y(prec);
    mpfr_const_pi(pi.get(), MPFR_RNDN);

    mpfr_mul_ui(x.get(), pi.get(), 2, MPFR_RNDN);
    two_pi_dd = to_dd(x, prec);
    inv_two_pi = 1.0 / x.to_double();
    for (double& part : two_pi) {
      part = x.to_double();
      mpfr_sub_d(x.get(), x.get(), part, MPFR_RNDN);
    }

    mpfr_div_ui(x.get(), pi.get(), 2, MPFR_RNDN);
    half_pi = to_dd(x, prec);
    mpfr_div_ui(x.get(), pi.get(), 16, MPFR_RNDN);
    pi_16 = to_dd(x, prec);
    for (int k = 0; k <= 4; ++k) {
      mpfr_mul_ui(y.get(), x.get(), k, MPFR_RNDN);
      Mp s(prec), c(prec);
      mpfr_sin_cos(s.get(), c.get(), y.get(), MPFR_RNDN);
      sin_k[k] = to_dd(s, prec);
      cos_k[k] = to_dd(c, prec);
    }

    for (int i = 0; i < kSinTerms; ++i) {
      mpfr_fac_ui(y.get(), 2 * i + 1, MPFR_RNDN);
      mpfr_ui_div(y.get(), 1, y.get(), MPFR_RNDN);
      if (i % 2 == 1) mpfr_neg(y.get(), y.get(), MPFR_RNDN);
      sin_coef[i] = to_dd(y, prec);
      mpfr_fac_ui(y.get(), 2 * i, MPFR_RNDN);
      mpfr_ui_div(y.get(), 1, y.get(), MPFR_RNDN);
      if (i % 2 == 1) mpfr_neg(y.get(), y.get(), MPFR_RNDN);
      cos_coef[i] = to_dd(y, prec);
    }

    zeta_even.resize(kMaxTailTerms + 1);
    for (int k = 1; k <= kMaxTailTerms; ++k) {
      mpfr_zeta_ui(y.get(), 2 * k, MPFR_RNDN);
      zeta_even[k] = to_dd(y, prec);
    }
  }
};

const Constants& constants() {
  static const Constants c;
  return c;
}

struct SinCos {
  DD s;
  DD c;
};

// phi - 2 pi k with k = round(phi / 2 pi); |phi| up to ~1e9.
DD reduce_two_pi(const DD& phi) {
  const auto& k = constants();
  const double turns = std::nearbyint(phi.hi * k.inv_two_pi);
  if (turns == 0.0) return phi;
  const DD p0 = dd::two_prod(turns, k.two_pi[0]);
  DD r = dd::two_sum(phi.hi, -p0.hi);
  r = r + DD(phi.lo) - DD(p0.lo);
  r = r - dd::two_prod(turns, k.two_pi[1]);
  r = r - DD(turns * k.two_pi[2]);
  return r;
}

// sin and cos of |r| <~ pi, to double-double accuracy.
SinCos sincos_reduced(const DD& r) {
  const auto& k = constants();
  const int quadrant = static_cast<int>(std::nearbyint(r.hi / k.half_pi.hi));
  const DD r1 = r - k.half_pi * static_cast<double>(quadrant);
  const int j = static_cast<int>(std::nearbyint(r1.hi / k.pi_16.hi));
  const DD x = r1 - k.pi_16 * static_cast<double>(j);
  const DD x2 = x * x;

  DD s = k.sin_coef[kSinTerms - 1];
  DD c = k.cos_coef[kSinTerms - 1];
  for (int i = kSinTerms - 2; i >= 0; --i) {
    s = s * x2 + k.sin_coef[i];
    c = c * x2 + k.cos_coef[i];
  }
  s = s * x;

  const int aj = std::abs(j);
  const DD sj = (j < 0) ? -k.sin_k[aj] : k.sin_k[aj];
  const DD cj = k.cos_k[aj];
  const DD s1 = sj * c + cj * s;
  const DD c1 = cj * c - sj * s;

  switch ((quadrant % 4 + 4) % 4) {
    case 0:
      return {s1, c1};
    case 1:
      return {c1, -s1};
    case 2:
      return {-s1, -c1};
    default:
      return {-c1, s1};
  }
}

// ln(p / (p - 1)) = 2 atanh(1 / (2p - 1)).
DD log_ratio_to_predecessor(std::uint32_t p) {
  const DD u = DD(1.0) / DD(2.0 * static_cast<double>(p) - 1.0);
  const DD u2 = u * u;
  DD power = u;
  DD sum = u;
  for (int i = 1; i < 200; ++i) {
    power = power * u2;
    const DD term = power / static_cast<double>(2 * i + 1);
    sum += term;
    if (std::fabs(term.hi) < 1e-36 * std::fabs(sum.hi)) break;
  }
  return sum * 2.0;
}

Complex complex_div(const Complex& a, const Complex& b) {
  const DD denom = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / denom, (a.im * b.re - a.re * b.im) / denom};
}

std::vector<std::uint32_t> smallest_prime_factors(std::uint32_t limit) {
  std::vector<std::uint32_t> spf(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::uint32_t i = 2; i <= limit; ++i) {
    if (spf[i] == 0) {
      spf[i] = i;
      primes.push_back(i);
    }
    for (std::uint32_t p : primes) {
      const std::uint64_t m = static_cast<std::uint64_t>(p) * i;
      if (p > spf[i] || m > limit) break;
      spf[m] = p;
    }
  }
  return spf;
}

mpfr_prec_t theta_precision(int digits, double t) {
  const double decimal = digits + 10 + std::ceil(std::log10(t + 10.0));
  return static_cast<mpfr_prec_t>(decimal * 3.33 + 32);
}

// Im log Gamma(1/4 + i t/2) - (t/2) ln pi, written into `out`.
void theta_mpfr(Mp& out, double t, int digits) {
  const mpfr_prec_t prec = theta_precision(digits, t);
  Mp y(prec, 0.5 * t), x(prec, 0.25), acc(prec), tmp(prec), tmp2(prec);
  mpfr_set_zero(acc.get(), 1);

  // Shift the argument until Stirling's series converges fast.
  const double modulus = std::hypot(0.25, 0.5 * t);
  const int shift = modulus >= 40.0 ? 0 : static_cast<int>(std::ceil(40.0 - modulus));
  for (int k = 0; k < shift; ++k) {
    mpfr_atan2(tmp.get(), y.get(), x.get(), MPFR_RNDN);
    mpfr_sub(acc.get(), acc.get(), tmp.get(), MPFR_RNDN);
    mpfr_add_ui(x.get(), x.get(), 1, MPFR_RNDN);
  }

  Mp log_mod(prec), arg(prec), inv_mod(prec);
  mpfr_hypot(tmp.get(), x.get(), y.get(), MPFR_RNDN);
  mpfr_log(log_mod.get(), tmp.get(), MPFR_RNDN);
  mpfr_ui_div(inv_mod.get(), 1, tmp.get(), MPFR_RNDN);
  mpfr_atan2(arg.get(), y.get(), x.get(), MPFR_RNDN);

  // y ln|w| + (x - 1/2) arg w - y
  mpfr_mul(tmp.get(), y.get(), log_mod.get(), MPFR_RNDN);
  mpfr_add(acc.get(), acc.get(), tmp.get(), MPFR_RNDN);
  mpfr_sub_d(tmp.get(), x.get(), 0.5, MPFR_RNDN);
  mpfr_mul(tmp.get(), tmp.get(), arg.get(), MPFR_RNDN);
  mpfr_add(acc.get(), acc.get(), tmp.get(), MPFR_RNDN);
  mpfr_sub(acc.get(), acc.get(), y.get(), MPFR_RNDN);

  // + sum_j B_2j / (2j (2j-1)) Im w^{1-2j},  Im w^{-n} = -|w|^{-n} sin(n arg w)
  Mp pi(prec), bern(prec), power(prec), sine(prec);
  mpfr_const_pi(pi.get(), MPFR_RNDN);
  mpfr_set(power.get(), inv_mod.get(), MPFR_RNDN);
  Mp inv_mod2(prec);
  mpfr_sqr(inv_mod2.get(), inv_mod.get(), MPFR_RNDN);
  const double target = std::pow(10.0, -(digits + 8));
  bool converged = false;
  for (int j = 1; j <= 120; ++j) {
    // B_2j = (-1)^{j+1} 2 (2j)! zeta(2j) / (2 pi)^{2j}
    mpfr_zeta_ui(bern.get(), 2 * j, MPFR_RNDN);
    mpfr_fac_ui(tmp.get(), 2 * j, MPFR_RNDN);
    mpfr_mul(bern.get(), bern.get(), tmp.get(), MPFR_RNDN);
    mpfr_mul_ui(bern.get(), bern.get(), 2, MPFR_RNDN);
    mpfr_mul_ui(tmp.get(), pi.get(), 2, MPFR_RNDN);
    mpfr_pow_ui(tmp.get(), tmp.get(), 2 * j, MPFR_RNDN);
    mpfr_div(bern.get(), bern.get(), tmp.get(), MPFR_RNDN);
    if (j % 2 == 0) mpfr_neg(bern.get(), bern.get(), MPFR_RNDN);
    mpfr_div_ui(bern.get(), bern.get(), 2 * j * (2 * j - 1), MPFR_RNDN);

    mpfr_mul_ui(tmp2.get(), arg.get(), 2 * j - 1, MPFR_RNDN);
    mpfr_sin(sine.get(), tmp2.get(), MPFR_RNDN);
    mpfr_mul(tmp.get(), bern.get(), power.get(), MPFR_RNDN);
    const double magnitude = std::fabs(tmp.to_double());
    mpfr_mul(tmp.get(), tmp.get(), sine.get(), MPFR_RNDN);
    mpfr_sub(acc.get(), acc.get(), tmp.get(), MPFR_RNDN);
    if (magnitude < target) {
      converged = true;
      break;
    }
    mpfr_mul(power.get(), power.get(), inv_mod2.get(), MPFR_RNDN);
  }
  if (!converged) throw PrecisionError("theta oracle: Stirling series did not converge");

  // - (t/2) ln pi
  mpfr_log(tmp.get(), pi.get(), MPFR_RNDN);
  mpfr_mul(tmp.get(), tmp.get(), y.get(), MPFR_RNDN);
  mpfr_sub(acc.get(), acc.get(), tmp.get(), MPFR_RNDN);

  mpfr_set_prec(out.get(), prec);
  mpfr_set(out.get(), acc.get(), MPFR_RNDN);
}

SplitReal split(const Mp& x) {
  const DD v = to_dd(x, mpfr_get_prec(x.get()));
  return {v.hi, v.lo};
}

}  // namespace

struct HiPrecOracle::ZetaParts {
  Complex zeta;
};

HiPrecOracle::HiPrecOracle(int working_digits) : digits_(working_digits) {
  if (working_digits < kMinDigits || working_digits > kMaxDigits) {
    throw std::invalid_argument("HiPrecOracle: working_digits must be in [30, 32]");
  }
}

double HiPrecOracle::error_bound(double t) const {
  return std::pow(10.0, -(digits_ - 5)) * std::max(1.0, t / 1.0e5);
}

SplitReal HiPrecOracle::theta(double t) const {
  if (!(t > 0.0)) throw DomainError("theta oracle: requires t > 0");
  Mp out(64);
  theta_mpfr(out, t, digits_);
  return split(out);
}

HiPrecOracle::ZetaParts HiPrecOracle::zeta_parts(double t) const {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("zeta oracle: requires t > 0");
  const auto& k = constants();

  const auto n_cut = static_cast<std::uint32_t>(std::ceil(1.3 * t / (2.0 * std::numbers::pi)) + 16.0);
  const std::uint32_t stored = n_cut / 2 + 1;
  const auto spf = smallest_prime_factors(n_cut);

  std::vector<DD> log_n(n_cut + 1);
  std::vector<Complex> value(stored + 1);
  value[1] = {DD(1.0), DD(0.0)};

  Complex sum = value[1];
  Complex value_cut{};
  for (std::uint32_t n = 2; n <= n_cut; ++n) {
    Complex v;
    if (spf[n] == n) {
      log_n[n] = log_n[n - 1] + log_ratio_to_predecessor(n);
      const DD phase = reduce_two_pi(log_n[n] * t);
      const SinCos sc = sincos_reduced(phase);
      const DD magnitude = DD(1.0) / dd::sqrt(DD(static_cast<double>(n)));
      v = {magnitude * sc.c, -(magnitude * sc.s)};
    } else {
      const std::uint32_t q = spf[n];
      const std::uint32_t m = n / q;
      log_n[n] = log_n[q] + log_n[m];
      v = value[q] * value[m];
    }
    if (n <= stored) value[n] = v;
    if (n < n_cut) {
      sum += v;
    } else {
      value_cut = v;
    }
  }

  // Euler-Maclaurin boundary terms at N = n_cut.
  const Complex s{DD(0.5), DD(t)};
  const double big_n = static_cast<double>(n_cut);
  const Complex s_minus_one{DD(-0.5), DD(t)};
  sum += complex_div(value_cut * DD(big_n), s_minus_one);
  sum += value_cut * DD(0.5);

  // Tail sum_k B_2k/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}, written as
  // (-1)^{k+1} 2 zeta(2k) N N^{-s} R_k with R_k = s(s+1)...(s+2k-2) / (2 pi N)^{2k}.
  const DD scale = k.two_pi_dd * big_n;
  const DD scale2 = scale * scale;
  Complex ratio{s.re / scale2, s.im / scale2};
  const Complex lead = value_cut * DD(2.0 * big_n);
  const double target = std::pow(10.0, -(digits_ + 2));
  double previous = INFINITY;
  bool converged = false;
  for (int j = 1; j <= kMaxTailTerms; ++j) {
    Complex term = lead * ratio * k.zeta_even[j];
    if (j % 2 == 0) term = {-term.re, -term.im};
    sum += term;
    const double magnitude = dd::abs_approx(term);
    const double growth = std::hypot(0.5 + 2 * j + 1, t) / (2.0 * j + 1.5);
    if (magnitude * growth < target) {
      converged = true;
      break;
    }
    if (j > 8 && magnitude > previous) break;
    previous = magnitude;
    const Complex a{s.re + DD(2.0 * j - 1), s.im};
    const Complex b{s.re + DD(2.0 * j), s.im};
    const Complex step = a * b;
    ratio = ratio * Complex{step.re / scale2, step.im / scale2};
  }
  if (!converged) {
    throw PrecisionError("zeta oracle: Euler-Maclaurin tail did not reach " +
                         std::to_string(digits_) + " digits at t = " + std::to_string(t));
  }
  return {sum};
}

std::complex<double> HiPrecOracle::zeta_critical(double t) const {
  const auto parts = zeta_parts(t);
  return {parts.zeta.re.to_double(), parts.zeta.im.to_double()};
}

SplitReal HiPrecOracle::hardy_z(double t) const {
  const auto parts = zeta_parts(t);
  Mp th(64);
  theta_mpfr(th, t, digits_);
  const mpfr_prec_t prec = mpfr_get_prec(th.get());
  Mp c(prec), s(prec), re(prec), im(prec), out(prec);
  mpfr_sin_cos(s.get(), c.get(), th.get(), MPFR_RNDN);
  mpfr_set_d(re.get(), parts.zeta.re.hi, MPFR_RNDN);
  mpfr_add_d(re.get(), re.get(), parts.zeta.re.lo, MPFR_RNDN);
  mpfr_set_d(im.get(), parts.zeta.im.hi, MPFR_RNDN);
  mpfr_add_d(im.get(), im.get(), parts.zeta.im.lo, MPFR_RNDN);
  mpfr_mul(out.get(), c.get(), re.get(), MPFR_RNDN);
  mpfr_mul(im.get(), s.get(), im.get(), MPFR_RNDN);
  mpfr_sub(out.get(), out.get(), im.get(), MPFR_RNDN);
  return split(out);
}

}  // namespace zladder
