#pragma once

// Prime counting for the separation law, the logarithmic integral used by the
// smooth ladder, and Euler's constant.

#include <cstdint>
#include <vector>

namespace zladder {

enum class PrimeCountMethod { sieve, li_approx };

/// pi(t) either exactly from a sieve built once up to `limit`, or as the
/// nearest integer to li(t). For li_approx the error is below
/// sqrt(t) ln t / (8 pi) for t >= 2657 (Schoenfeld, conditional on RH);
/// li_approx_error_bound returns that figure.
class PrimeCounter {
 public:
  /// Sieve mode allocates about limit/16 bytes plus prefix counts. limit <= 4e9.
  explicit PrimeCounter(std::uint64_t limit, PrimeCountMethod method = PrimeCountMethod::sieve);

  std::uint64_t limit() const { return limit_; }
  PrimeCountMethod method() const { return method_; }

  /// Number of primes <= t. Throws DomainError if sieve mode and t > limit.
  std::uint64_t count(double t) const;

  static double li_approx_error_bound(double t);

 private:
  std::uint64_t limit_;
  PrimeCountMethod method_;
  // Odd-only bitmap (bit i <-> 2i + 1) and cumulative popcounts per word.
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint32_t> prefix_;
};

std::uint64_t pi_count(double t, const PrimeCounter& pc);

/// Euler's constant gamma.
double euler_constant();

/// Principal-value logarithmic integral li(x) = PV int_0^x du / ln u for x > 0,
/// x != 1 (li(1) = -inf). Series gamma + ln|ln x| + sum (ln x)^k / (k k!).
double log_integral(double x);

}  // namespace zladder
