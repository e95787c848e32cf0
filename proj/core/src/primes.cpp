#include "zladder/primes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "zladder/errors.hpp"
#include "zladder/summation.hpp"

namespace zladder {
namespace {

constexpr std::uint64_t kMaxLimit = 4'000'000'000ULL;
constexpr std::uint64_t kSegmentBits = 1ULL << 18;  // 32 KiB of bitmap per segment

std::vector<std::uint32_t> small_odd_primes(std::uint32_t bound) {
  std::vector<char> composite(bound + 1, 0);
  std::vector<std::uint32_t> out;
  for (std::uint32_t p = 3; p <= bound; p += 2) {
    if (composite[p]) continue;
    out.push_back(p);
    for (std::uint64_t q = static_cast<std::uint64_t>(p) * p; q <= bound; q += 2 * p) composite[q] = 1;
  }
  return out;
}

}  // namespace

PrimeCounter::PrimeCounter(std::uint64_t limit, PrimeCountMethod method)
    : limit_(limit), method_(method) {
  if (method_ != PrimeCountMethod::sieve) return;
  if (limit_ > kMaxLimit) throw DomainError("PrimeCounter: sieve limit above 4e9");

  // Bit i stands for the odd number 2i + 1; start with everything marked prime.
  const std::uint64_t n_bits = (limit_ + 1) / 2;
  const std::uint64_t n_words = (n_bits + 63) / 64;
  bits_.assign(n_words, ~0ULL);
  if (n_bits % 64 != 0) bits_.back() = (1ULL << (n_bits % 64)) - 1;
  if (n_bits > 0) bits_[0] &= ~1ULL;  // 1 is not prime

  const auto root = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(limit_))) + 1;
  const auto base = small_odd_primes(root);
  std::vector<std::uint64_t> next(base.size());
  for (std::size_t k = 0; k < base.size(); ++k) {
    next[k] = (static_cast<std::uint64_t>(base[k]) * base[k]) / 2;  // bit index of p^2
  }

  for (std::uint64_t seg = 0; seg < n_bits; seg += kSegmentBits) {
    const std::uint64_t seg_end = std::min(seg + kSegmentBits, n_bits);
    for (std::size_t k = 0; k < base.size(); ++k) {
      const std::uint64_t p = base[k];
      std::uint64_t i = next[k];
      for (; i < seg_end; i += p) bits_[i >> 6] &= ~(1ULL << (i & 63));
      next[k] = i;
    }
  }

  prefix_.resize(n_words + 1);
  prefix_[0] = 0;
  for (std::uint64_t w = 0; w < n_words; ++w) {
    prefix_[w + 1] = prefix_[w] + static_cast<std::uint32_t>(std::popcount(bits_[w]));
  }
}

std::uint64_t PrimeCounter::count(double t) const {
  if (!(t >= 2.0)) return 0;
  if (method_ == PrimeCountMethod::li_approx) {
    return static_cast<std::uint64_t>(std::max(0.0, std::nearbyint(log_integral(t))));
  }
  if (t > static_cast<double>(limit_)) {
    throw DomainError("pi_count: t = " + std::to_string(t) + " above sieve limit " +
                      std::to_string(limit_));
  }
  const auto n = static_cast<std::uint64_t>(std::floor(t));
  const std::uint64_t idx = (n - 1) / 2;  // last odd number <= n is 2 idx + 1
  const std::uint64_t word = idx >> 6;
  const std::uint64_t bit = idx & 63;
  const std::uint64_t mask = (bit == 63) ? ~0ULL : ((1ULL << (bit + 1)) - 1);
  return 1 + prefix_[word] + static_cast<std::uint64_t>(std::popcount(bits_[word] & mask));
}

double PrimeCounter::li_approx_error_bound(double t) {
  return std::sqrt(t) * std::log(t) / (8.0 * std::numbers::pi) + 0.5;
}

std::uint64_t pi_count(double t, const PrimeCounter& pc) { return pc.count(t); }

double euler_constant() { return std::numbers::egamma; }

double log_integral(double x) {
  if (!(x > 0.0)) throw DomainError("log_integral: requires x > 0");
  if (x == 1.0) return -std::numeric_limits<double>::infinity();
  const double L = std::log(x);
  CompensatedSum s(std::numbers::egamma);
  s.add(std::log(std::fabs(L)));
  double power = 1.0;  // L^k / k!
  for (int k = 1; k < 500; ++k) {
    power *= L / k;
    const double term = power / k;
    s.add(term);
    if (k > std::fabs(L) && std::fabs(term) < 1e-17 * std::fabs(s.value())) break;
  }
  return s.value();
}

}  // namespace zladder
