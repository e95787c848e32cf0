#include "zladder/gsets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "zladder/errors.hpp"
#include "zladder/rs_core.hpp"

namespace zladder {
namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

IntervalCollection build_parity(const WindowSpec& w, double half_width, long parity,
                                IntervalLabel label) {
  if (!(half_width > 0.0 && half_width <= kHalfPi)) {
    throw DomainError("build_g1/build_g2: half-width must be in (0, pi/2]");
  }
  const Interval window = gsets_window(w);
  std::vector<Interval> out;
  for (const GramLikePoint& p : grid_range(w)) {
    if (p.nu % 2 != parity) continue;
    out.push_back({solve_grid_point(p.nu, -half_width).t, solve_grid_point(p.nu, half_width).t});
  }
  return IntervalCollection(label, window, std::move(out));
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

double ulp_floor(double t) {
  return 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(t));
}

// Bisect a sign change of f on (a, b) until the bracket is at most `width`.
Interval bisect(const std::function<double(double)>& f, double a, double fa, double b,
                double width, long& evals) {
  const int sa = sign_of(fa);
  while (b - a > width && b - a > ulp_floor(b)) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    ++evals;
    if (fm == 0.0) {
      const double half = 0.5 * std::max(width, ulp_floor(m));
      return {std::max(a, m - half), std::min(b, m + half)};
    }
    if (sign_of(fm) == sa) {
      a = m;
    } else {
      b = m;
    }
  }
  return {a, b};
}

struct Scan {
  std::vector<double> x;
  std::vector<double> fx;
};

// Golden-section minimisation of s * f on (a, b), stopping early once s * f
// goes non-positive. Returns the best abscissa and its value.
std::pair<double, double> minimise_signed(const std::function<double(double)>& f, int s,
                                          double a, double b, double width, int max_iter,
                                          long& evals) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = s * f(c);
  double fd = s * f(d);
  evals += 2;
  for (int it = 0; it < max_iter && b - a > width; ++it) {
    if (fc <= 0.0 || fd <= 0.0) break;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = s * f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = s * f(d);
    }
    ++evals;
  }
  return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace

Interval gsets_window(const WindowSpec& w) {
  const auto pts = grid_range(w);
  if (pts.empty()) return {w.T, w.T + w.H()};
  const double lo = solve_grid_point(pts.front().nu, -kHalfPi).t;
  const double hi = solve_grid_point(pts.back().nu, kHalfPi).t;
  return {std::min(lo, w.T), std::max(hi, w.T + w.H())};
}

IntervalCollection build_g1(const WindowSpec& w, double x) {
  return build_parity(w, x, 0, IntervalLabel::g1);
}

IntervalCollection build_g2(const WindowSpec& w, double y) {
  return build_parity(w, y, 1, IntervalLabel::g2);
}

SignPartition sign_partition(const IntervalCollection& c, const std::function<double(double)>& f,
                             double root_tol, const SignPartitionOptions& opts) {
  if (!(root_tol > 0.0)) throw std::invalid_argument("sign_partition: root_tol must be > 0");

  double step = opts.scan_step;
  if (!(step > 0.0)) {
    const double mid = 0.5 * (c.window().lo + c.window().hi);
    step = mean_zero_gap(std::max(mid, kGridMinT)) / 8.0;
  }

  long evals = 0;
  std::vector<Scan> scans;
  scans.reserve(c.size());
  for (const Interval& iv : c.intervals()) {
    const auto n = static_cast<long>(std::max(1.0, std::ceil(iv.length() / step)));
    Scan s;
    s.x.resize(n + 1);
    s.fx.resize(n + 1);
    for (long i = 0; i <= n; ++i) {
      s.x[i] = (i == n) ? iv.hi : iv.lo + iv.length() * static_cast<double>(i) / static_cast<double>(n);
      s.fx[i] = f(s.x[i]);
    }
    evals += n + 1;
    scans.push_back(std::move(s));
  }

  // Root brackets per interval, before narrowing: (a, b) with a sign change,
  // or a zero node.
  struct Bracket {
    double a, fa, b;
    bool zero_node;
  };
  std::vector<std::vector<Bracket>> brackets(c.size());
  std::vector<Interval> suspects;
  std::size_t root_count = 0;

  for (std::size_t k = 0; k < c.size(); ++k) {
    const Scan& s = scans[k];
    const std::size_t n = s.x.size() - 1;
    for (std::size_t i = 0; i < n; ++i) {
      const int si = sign_of(s.fx[i]);
      const int sj = sign_of(s.fx[i + 1]);
      if (i > 0 && si == 0) {
        brackets[k].push_back({s.x[i], 0.0, s.x[i], true});
      } else if (si != 0 && sj != 0 && si != sj) {
        brackets[k].push_back({s.x[i], s.fx[i], s.x[i + 1], false});
      }
      // Same-sign local minimum of |f| at node i+1: look for a hidden pair.
      if (i + 1 < n && si != 0 && si == sj && sj == sign_of(s.fx[i + 2]) &&
          std::fabs(s.fx[i + 1]) < std::fabs(s.fx[i]) &&
          std::fabs(s.fx[i + 1]) < std::fabs(s.fx[i + 2])) {
        const double a = s.x[i];
        const double b = s.x[i + 2];
        const double width = root_tol * (b - a);
        auto [xm, fm] = minimise_signed(f, sj, a, b, width, opts.refine_iterations, evals);
        if (fm < 0.0) {
          // Two crossings: (a, xm) and (xm, b).
          brackets[k].push_back({a, s.fx[i], xm, false});
          brackets[k].push_back({xm, sj * fm, b, false});
        } else if (fm == 0.0) {
          brackets[k].push_back({xm, 0.0, xm, true});
        } else if (fm <= 1e-12 * std::max(std::fabs(s.fx[i]), std::fabs(s.fx[i + 2]))) {
          suspects.push_back({a, b});
        }
      }
    }
    std::sort(brackets[k].begin(), brackets[k].end(),
              [](const Bracket& l, const Bracket& r) { return l.a < r.a; });
    root_count += brackets[k].size();
  }

  const double total = c.measure();
  const double width = root_count ? root_tol * total / static_cast<double>(root_count) : 0.0;

  std::vector<Interval> pos, neg, gaps;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const Interval& iv = c[k];
    const Scan& s = scans[k];
    std::vector<Interval> local_gaps;
    for (const Bracket& br : brackets[k]) {
      Interval g;
      if (br.zero_node) {
        const double half = 0.5 * std::max(width, ulp_floor(br.a));
        g = {std::max(iv.lo, br.a - half), std::min(iv.hi, br.a + half)};
      } else {
        g = bisect(f, br.a, br.fa, br.b, width, evals);
      }
      if (!local_gaps.empty() && g.lo <= local_gaps.back().hi) {
        local_gaps.back().hi = std::max(local_gaps.back().hi, g.hi);
      } else {
        local_gaps.push_back(g);
      }
    }

    // Pieces between gaps; the sign comes from a scan node inside the piece,
    // or from the piece midpoint when no node falls inside.
    double start = iv.lo;
    auto emit = [&](double a, double b) {
      if (!(b > a)) return;
      int sg = 0;
      auto it = std::upper_bound(s.x.begin(), s.x.end(), a);
      for (; it != s.x.end() && *it < b; ++it) {
        sg = sign_of(s.fx[it - s.x.begin()]);
        if (sg != 0) break;
      }
      if (sg == 0) {
        sg = sign_of(f(0.5 * (a + b)));
        ++evals;
      }
      if (sg > 0) pos.push_back({a, b});
      if (sg < 0) neg.push_back({a, b});
    };
    for (const Interval& g : local_gaps) {
      emit(start, g.lo);
      start = g.hi;
    }
    emit(start, iv.hi);
    gaps.insert(gaps.end(), local_gaps.begin(), local_gaps.end());
  }

  SignPartition out{IntervalCollection(IntervalLabel::pos_part, c.window(), std::move(pos)),
                    IntervalCollection(IntervalLabel::neg_part, c.window(), std::move(neg)),
                    std::move(gaps), std::move(suspects), evals};
  return out;
}

}  // namespace zladder
