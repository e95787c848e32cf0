#include "zladder/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "zladder/errors.hpp"
#include "zladder/grid.hpp"
#include "zladder/summation.hpp"

namespace zladder {
namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525634122, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
  double error = 0.0;
  int depth = 0;
};

Panel gk21(const RealFunction& f, double lo, double hi, int depth) {
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  constexpr double kTiny = std::numeric_limits<double>::min();
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::array<double, 10> f1{}, f2{};
  const double fc = f(center);
  double resg = 0.0;
  double resk = fc * kWgk[10];
  double resabs = std::fabs(resk);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double sum = f1[j] + f2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::fabs(f1[j]) + std::fabs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::fabs(fc - reskh);
  for (int j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::fabs(f1[j] - reskh) + std::fabs(f2[j] - reskh));
  }
  const double result = resk * half;
  resabs *= std::fabs(half);
  resasc *= std::fabs(half);
  double err = std::fabs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > kTiny / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
  return {lo, hi, result, err, depth};
}

constexpr long kEvalsPerPanel = 21;
constexpr long kMaxPanels = 2'000'000;

struct ByError {
  bool operator()(const Panel& a, const Panel& b) const {
    if (a.error != b.error) return a.error < b.error;
    return a.lo > b.lo;  // tie: leftmost first, for a fixed refinement order
  }
};

double target_for(const QuadSpec& q, double value) {
  return std::max(q.abs_tol, q.rel_tol * std::fabs(value));
}

QuadratureOutcome finish(std::vector<Panel> panels, const QuadSpec& q, long evaluations,
                         long subdivisions, bool converged) {
  std::sort(panels.begin(), panels.end(), [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
  CompensatedSum v, e;
  for (const Panel& p : panels) {
    v.add(p.value);
    e.add(p.error);
  }
  QuadratureOutcome out;
  out.value = v.value();
  out.error_estimate = e.value();
  out.tolerance = target_for(q, out.value);
  out.evaluations = evaluations;
  out.subdivisions = subdivisions;
  out.converged = converged && out.error_estimate <= out.tolerance;
  return out;
}

QuadratureOutcome adaptive(const RealFunction& f, const std::vector<double>& edges, const QuadSpec& q) {
  std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
  CompensatedSum total_value, total_error;
  long evaluations = 0;
  long subdivisions = 0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Panel p = gk21(f, edges[i], edges[i + 1], 0);
    evaluations += kEvalsPerPanel;
    total_value.add(p.value);
    total_error.add(p.error);
    heap.push(p);
  }
  bool converged = true;
  std::vector<Panel> done;
  while (!heap.empty()) {
    if (total_error.value() <= target_for(q, total_value.value())) break;
    Panel worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (worst.depth >= q.max_depth || !(mid > worst.lo && mid < worst.hi) ||
        static_cast<long>(heap.size() + done.size()) >= kMaxPanels) {
      converged = false;
      break;
    }
    heap.pop();
    const Panel left = gk21(f, worst.lo, mid, worst.depth + 1);
    const Panel right = gk21(f, mid, worst.hi, worst.depth + 1);
    evaluations += 2 * kEvalsPerPanel;
    ++subdivisions;
    total_value.add(left.value + right.value - worst.value);
    total_error.add(left.error + right.error - worst.error);
    heap.push(left);
    heap.push(right);
  }
  while (!heap.empty()) {
    done.push_back(heap.top());
    heap.pop();
  }
  return finish(std::move(done), q, evaluations, subdivisions, converged);
}

QuadratureOutcome fixed(const RealFunction& f, const std::vector<double>& edges, const QuadSpec& q) {
  std::vector<Panel> panels;
  const int n = std::max(1, q.fixed_panels);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i];
    const double b = edges[i + 1];
    for (int k = 0; k < n; ++k) {
      const double lo = (k == 0) ? a : a + (b - a) * k / n;
      const double hi = (k == n - 1) ? b : a + (b - a) * (k + 1) / n;
      panels.push_back(gk21(f, lo, hi, 0));
    }
  }
  const long evals = static_cast<long>(panels.size()) * kEvalsPerPanel;
  return finish(std::move(panels), q, evals, 0, true);
}

std::vector<double> make_edges(double lo, double hi, const std::vector<double>& breakpoints) {
  std::vector<double> edges{lo};
  for (double b : breakpoints) {
    if (b > edges.back() && b < hi) edges.push_back(b);
  }
  edges.push_back(hi);
  return edges;
}

}  // namespace

void QuadSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw std::invalid_argument("QuadSpec: tolerances must be > 0");
  if (max_depth < 1 || max_depth > kMaxDepthLimit) {
    throw std::invalid_argument("QuadSpec: max_depth must be in [1, 60]");
  }
  if (rule == QuadRule::fixed_panel && fixed_panels < 1) {
    throw std::invalid_argument("QuadSpec: fixed_panels must be >= 1");
  }
}

QuadSpec with_grid_breakpoints(QuadSpec q) {
  q.breakpoints = [](double lo, double hi) { return grid_breakpoints(lo, hi); };
  return q;
}

QuadratureOutcome integrate_pieces(const RealFunction& f, double lo, double hi,
                                   const std::vector<double>& breakpoints, const QuadSpec& q) {
  q.validate();
  if (!(lo < hi)) throw std::invalid_argument("integrate_interval: requires lo < hi");
  const auto edges = make_edges(lo, hi, breakpoints);
  return q.rule == QuadRule::fixed_panel ? fixed(f, edges, q) : adaptive(f, edges, q);
}

QuadratureOutcome integrate_interval(const RealFunction& f, double lo, double hi, const QuadSpec& q) {
  std::vector<double> bp;
  if (q.breakpoints && lo < hi) bp = q.breakpoints(lo, hi);
  return integrate_pieces(f, lo, hi, bp, q);
}

QuadratureOutcome integrate_collection(const RealFunction& f, const IntervalCollection& c,
                                       const QuadSpec& q) {
  if (c.empty()) throw std::invalid_argument("integrate_collection: empty collection");
  QuadratureOutcome out;
  CompensatedSum value, error, tol;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const QuadratureOutcome r = integrate_interval(f, c[i].lo, c[i].hi, q);
    value.add(r.value);
    error.add(r.error_estimate);
    tol.add(r.tolerance);
    out.evaluations += r.evaluations;
    out.subdivisions += r.subdivisions;
    if (!r.converged && !out.failed_interval) out.failed_interval = i;
  }
  out.value = value.value();
  out.error_estimate = error.value();
  out.tolerance = tol.value();
  out.converged = !out.failed_interval.has_value();
  return out;
}

TransformResidual transform_residual(const LadderModel& m, const RealFunction& f, double T,
                                     double U, const QuadSpec& q) {
  if (!(T > 1.0) || !(U > 0.0) || !(U <= T / std::log(T))) {
    throw DomainError("transform_residual: requires 0 < U <= T / ln T");
  }
  TransformResidual r;
  r.mirror_lo = mirror_point(m, T);
  r.mirror_hi = mirror_point(m, T + U);

  std::vector<double> bp;
  std::vector<double> mirrored_bp;
  if (q.breakpoints) {
    bp = q.breakpoints(T, T + U);
    mirrored_bp.reserve(bp.size());
    for (double b : bp) mirrored_bp.push_back(mirror_point(m, b));
  }
  const RealFunction pulled_back = [&](double t) { return f(m.eval(t)) * m.deriv(t); };
  r.lhs_outcome = integrate_pieces(pulled_back, r.mirror_lo, r.mirror_hi, mirrored_bp, q);
  r.rhs_outcome = integrate_pieces(f, T, T + U, bp, q);
  r.lhs = r.lhs_outcome.value;
  r.rhs = r.rhs_outcome.value;
  r.residual = std::fabs(r.lhs - r.rhs);
  r.tolerance = r.lhs_outcome.tolerance + r.rhs_outcome.tolerance;
  return r;
}

}  // namespace zladder
