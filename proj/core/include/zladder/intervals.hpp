#pragma once

// Finite unions of open intervals inside a declared window. This is the
// common currency between the set builders, the ladder mirror and the
// quadrature layer.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace zladder {

enum class IntervalLabel { g1, g2, mirrored_g1, mirrored_g2, pos_part, neg_part, other };

std::string_view to_string(IntervalLabel label);
/// Inverse of to_string; throws FormatError on an unknown name.
IntervalLabel parse_interval_label(std::string_view name);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double t) const { return lo < t && t < hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Sorted, pairwise-disjoint open intervals, all inside `window`.
/// Neighbours may share an endpoint (the endpoint belongs to neither).
/// Immutable once constructed.
class IntervalCollection {
 public:
  /// Throws std::invalid_argument if an interval is empty or inverted, the
  /// list is unsorted or overlapping, or an interval leaves the window.
  IntervalCollection(IntervalLabel label, Interval window, std::vector<Interval> intervals);

  IntervalLabel label() const { return label_; }
  const Interval& window() const { return window_; }
  std::span<const Interval> intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }
  const Interval& operator[](std::size_t i) const { return intervals_[i]; }

  /// Sum of lengths, compensated in index order.
  double measure() const;
  bool contains(double t) const;

  IntervalCollection relabeled(IntervalLabel label) const;

  friend bool operator==(const IntervalCollection&, const IntervalCollection&) = default;

 private:
  IntervalLabel label_;
  Interval window_;
  std::vector<Interval> intervals_;
};

/// Merge two collections with disjoint members into one (label `other`
/// unless given), window = hull of both windows.
IntervalCollection merge_collections(const IntervalCollection& a, const IntervalCollection& b,
                                     IntervalLabel label = IntervalLabel::other);

// Serialization. Numbers are written in shortest round-trip form so that
// reading back gives bit-identical doubles.
//
// CSV: a `# window,<lo>,<hi>` line, a `lo,hi,label` header, one row per interval.
std::string to_csv(const IntervalCollection& c);
IntervalCollection collection_from_csv(std::string_view text);

// JSON: {"label": ..., "window": [lo, hi], "intervals": [[lo, hi], ...]}
std::string to_json(const IntervalCollection& c);
IntervalCollection collection_from_json(std::string_view text);

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);
/// Strict parse of a full string as a double; throws FormatError.
double parse_double(std::string_view text);

}  // namespace zladder
