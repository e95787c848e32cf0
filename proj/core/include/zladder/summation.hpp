#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace zladder {

/// Kahan-Babuska (Neumaier) running sum. Addition order is the caller's
/// order, so a fixed loop order gives bit-identical results.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double init) : sum_(init) {}

  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Pairwise reduction with compensated leaves; the split points depend only
/// on the length, so the reduction tree is fixed.
inline double pairwise_sum(std::span<const double> xs) {
  constexpr std::size_t kLeaf = 32;
  if (xs.size() <= kLeaf) {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
  }
  const std::size_t half = xs.size() / 2;
  CompensatedSum s;
  s.add(pairwise_sum(xs.first(half)));
  s.add(pairwise_sum(xs.subspan(half)));
  return s.value();
}

}  // namespace zladder
