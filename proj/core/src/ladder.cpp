#include "zladder/ladder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "zladder/errors.hpp"
#include "zladder/summation.hpp"

namespace zladder {

struct LadderModel::Impl {
  LadderKind kind = LadderKind::custom;
  Interval range;
  std::optional<LadderAnchor> anchor;
  double tolerance = 0.0;
  std::vector<Checkpoint> checkpoints;
  long unresolved = 0;

  virtual ~Impl() = default;
  virtual double eval(double t) const = 0;
  virtual double deriv(double t) const = 0;

  void check(double t) const {
    if (!(t >= range.lo && t <= range.hi)) {
      throw DomainError("ladder: t = " + std::to_string(t) + " outside model range [" +
                        std::to_string(range.lo) + ", " + std::to_string(range.hi) + "]");
    }
  }
};

namespace {

constexpr double kOneMinusGamma = 1.0 - std::numbers::egamma;

double ulp_of(double t) {
  return std::nextafter(std::fabs(t), std::numeric_limits<double>::infinity()) - std::fabs(t);
}

struct AsymptoticImpl final : LadderModel::Impl {
  double eval(double t) const override {
    check(t);
    return t - kOneMinusGamma * log_integral(t);
  }
  double deriv(double t) const override {
    check(t);
    return 1.0 - kOneMinusGamma / std::log(t);
  }
};

struct CustomImpl final : LadderModel::Impl {
  std::function<double(double)> f;
  std::function<double(double)> df;
  double eval(double t) const override {
    check(t);
    return f(t);
  }
  double deriv(double t) const override {
    check(t);
    return df(t);
  }
};

// Chebyshev series on one panel; `integral` holds the antiderivative
// coefficients, scaled to t and vanishing at the panel start.
struct Panel {
  double a = 0.0;
  double b = 0.0;
  double start_value = 0.0;
  double f_start = 0.0;
  std::vector<double> integral;
};

double clenshaw(const std::vector<double>& c, double x) {
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) {
    const double b0 = 2.0 * x * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + c[0];
}

struct OdeImpl final : LadderModel::Impl {
  std::vector<Panel> panels;
  RSConfig rs;
  ZTildeMode mode = ZTildeMode::plain;

  std::size_t locate(double t) const {
    auto it = std::upper_bound(panels.begin(), panels.end(), t,
                               [](double v, const Panel& p) { return v < p.a; });
    return it == panels.begin() ? 0 : static_cast<std::size_t>(it - panels.begin()) - 1;
  }

  double eval(double t) const override {
    check(t);
    const Panel& p = panels[locate(t)];
    const double x = std::clamp((2.0 * t - p.a - p.b) / (p.b - p.a), -1.0, 1.0);
    return p.start_value + clenshaw(p.integral, x);
  }

  double deriv(double t) const override {
    check(t);
    return z_tilde_sq(t, mode, rs);
  }
};

class OdeBuilder {
 public:
  OdeBuilder(const OdeLadderOptions& opts) : opts_(opts), n_(opts.degree) {
    nodes_.resize(n_ + 1);
    for (int j = 0; j <= n_; ++j) nodes_[j] = std::cos(std::numbers::pi * j / n_);
  }

  // Appends accepted panels covering [a, b] to `out`.
  void build(double a, double b, int depth, std::vector<Panel>& out, double& value,
             double& tail_total, long& unresolved) {
    std::vector<double> fx(n_ + 1);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int j = 0; j <= n_; ++j) {
      const double t = (j == 0) ? b : (j == n_) ? a : mid + half * nodes_[j];
      fx[j] = z_tilde_sq(t, opts_.mode, opts_.rs);
    }
    // Coefficients of f = sum_k c_k T_k on [-1, 1] (DCT-I).
    std::vector<double> c(n_ + 1);
    double cmax = 0.0;
    for (int k = 0; k <= n_; ++k) {
      CompensatedSum s;
      for (int j = 0; j <= n_; ++j) {
        const double w = (j == 0 || j == n_) ? 0.5 : 1.0;
        s.add(w * fx[j] * std::cos(std::numbers::pi * j * k / n_));
      }
      c[k] = 2.0 * s.value() / n_;
      if (k == 0 || k == n_) c[k] *= 0.5;
      cmax = std::max(cmax, std::fabs(c[k]));
    }
    const double tail = std::max(std::fabs(c[n_]), std::fabs(c[n_ - 1]));
    // Below this the coefficients only resolve rounding in Z itself, whose
    // phase error grows like t * 1e-17.
    const double noise = 1e-16 * b * (1.0 + std::sqrt(cmax));
    const bool ok = tail <= opts_.rel_tol * cmax + noise;
    if (!ok && depth < opts_.max_split_depth) {
      build(a, mid, depth + 1, out, value, tail_total, unresolved);
      build(mid, b, depth + 1, out, value, tail_total, unresolved);
      return;
    }
    if (!ok) ++unresolved;

    // Antiderivative: C_k = (c_{k-1} - c_{k+1}) / (2k), with c_0 doubled.
    std::vector<double> C(n_ + 2, 0.0);
    auto coef = [&](int k) { return k > n_ ? 0.0 : (k == 0 ? 2.0 * c[0] : c[k]); };
    for (int k = 1; k <= n_ + 1; ++k) C[k] = half * (coef(k - 1) - coef(k + 1)) / (2.0 * k);
    double at_minus_one = 0.0;
    for (int k = 1; k <= n_ + 1; ++k) at_minus_one += (k % 2 ? -C[k] : C[k]);
    C[0] = -at_minus_one;

    Panel p{a, b, value, fx[n_], std::move(C)};
    const double increment = clenshaw(p.integral, 1.0);
    out.push_back(std::move(p));
    value += increment;
    tail_total += tail * (b - a);
  }

 private:
  const OdeLadderOptions& opts_;
  int n_;
  std::vector<double> nodes_;
};

struct TabulatedImpl final : LadderModel::Impl {
  std::vector<double> slope;  // limited Hermite slopes at the nodes

  std::size_t locate(double t) const {
    auto it = std::upper_bound(checkpoints.begin(), checkpoints.end(), t,
                               [](double v, const Checkpoint& c) { return v < c.t; });
    const auto i = static_cast<std::size_t>(it - checkpoints.begin());
    return std::clamp<std::size_t>(i, 1, checkpoints.size() - 1) - 1;
  }

  double eval(double t) const override {
    check(t);
    const std::size_t i = locate(t);
    const Checkpoint& p = checkpoints[i];
    const Checkpoint& q = checkpoints[i + 1];
    const double h = q.t - p.t;
    const double s = (t - p.t) / h;
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    // Written relative to p.value so a flat segment stays exactly flat.
    return p.value + h01 * (q.value - p.value) + h * (h10 * slope[i] + h11 * slope[i + 1]);
  }

  double deriv(double t) const override {
    check(t);
    const std::size_t i = locate(t);
    const Checkpoint& p = checkpoints[i];
    const Checkpoint& q = checkpoints[i + 1];
    const double h = q.t - p.t;
    const double s = (t - p.t) / h;
    const double d00 = 6 * s * (s - 1) / h;
    const double d10 = (1 - s) * (1 - 3 * s);
    const double d01 = -d00;
    const double d11 = s * (3 * s - 2);
    return d00 * p.value + d10 * slope[i] + d01 * q.value + d11 * slope[i + 1];
  }
};

}  // namespace

std::string_view to_string(LadderKind kind) {
  switch (kind) {
    case LadderKind::asymptotic: return "asymptotic";
    case LadderKind::ode: return "ode";
    case LadderKind::tabulated: return "tabulated";
    case LadderKind::custom: return "custom";
  }
  return "custom";
}

LadderKind parse_ladder_kind(std::string_view name) {
  for (LadderKind k : {LadderKind::asymptotic, LadderKind::ode, LadderKind::tabulated,
                       LadderKind::custom}) {
    if (to_string(k) == name) return k;
  }
  throw FormatError("unknown ladder kind '" + std::string(name) + "'");
}

LadderKind LadderModel::kind() const { return impl_->kind; }
Interval LadderModel::range() const { return impl_->range; }
double LadderModel::eval(double t) const { return impl_->eval(t); }
double LadderModel::deriv(double t) const { return impl_->deriv(t); }
std::optional<LadderAnchor> LadderModel::anchor() const { return impl_->anchor; }
double LadderModel::tolerance() const { return impl_->tolerance; }
std::span<const Checkpoint> LadderModel::checkpoints() const { return impl_->checkpoints; }
long LadderModel::unresolved_panels() const { return impl_->unresolved; }

LadderModel LadderModel::custom(Interval range, std::function<double(double)> eval,
                                std::function<double(double)> deriv) {
  if (!(range.lo < range.hi)) throw std::invalid_argument("ladder: empty range");
  auto impl = std::make_shared<CustomImpl>();
  impl->kind = LadderKind::custom;
  impl->range = range;
  impl->f = std::move(eval);
  impl->df = std::move(deriv);
  return LadderModel(std::move(impl));
}

LadderModel ladder_asymptotic(Interval range) {
  if (!(range.lo >= 10.0 && range.lo < range.hi)) {
    throw DomainError("ladder_asymptotic: range must satisfy 10 <= lo < hi");
  }
  auto impl = std::make_shared<AsymptoticImpl>();
  impl->kind = LadderKind::asymptotic;
  impl->range = range;
  impl->tolerance = 8.0 * ulp_of(range.hi);
  return LadderModel(std::move(impl));
}

LadderModel ladder_ode(double anchor_t, double span, const LadderModel& seed,
                       const OdeLadderOptions& opts) {
  if (!(anchor_t >= kFastPathMin) || !(span > 0.0) || !(anchor_t + span <= kValidatedMax)) {
    throw DomainError("ladder_ode: [anchor, anchor + span] must lie in [100, 1e8]");
  }
  if (opts.degree < 4 || opts.degree > 128) throw std::invalid_argument("ladder_ode: degree in [4, 128]");

  auto impl = std::make_shared<OdeImpl>();
  impl->kind = LadderKind::ode;
  impl->rs = opts.rs;
  impl->mode = opts.mode;
  const double end = anchor_t + span;
  impl->range = {anchor_t, end};
  const double start_value = seed.eval(anchor_t);
  impl->anchor = LadderAnchor{anchor_t, start_value};

  OdeBuilder builder(opts);
  double value = start_value;
  double tail_total = 0.0;
  long unresolved = 0;
  double t = anchor_t;
  while (t < end) {
    // One half-turn of theta per panel, about one zero of Z.
    double w = std::numbers::pi / theta_deriv(t);
    if (end - (t + w) < 0.25 * w) w = end - t;
    const double b = (w == end - t) ? end : t + w;
    builder.build(t, b, 0, impl->panels, value, tail_total, unresolved);
    t = b;
  }
  impl->unresolved = unresolved;
  impl->tolerance = tail_total + 16.0 * ulp_of(value) * static_cast<double>(impl->panels.size());

  impl->checkpoints.reserve(impl->panels.size() + 1);
  for (const Panel& p : impl->panels) impl->checkpoints.push_back({p.a, p.start_value, p.f_start});
  impl->checkpoints.push_back({end, value, z_tilde_sq(end, opts.mode, opts.rs)});
  return LadderModel(std::move(impl));
}

LadderModel ladder_tabulated(std::vector<Checkpoint> table, std::optional<LadderAnchor> anchor,
                             double tolerance) {
  if (table.size() < 2) throw std::invalid_argument("ladder_tabulated: need at least two nodes");
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (!(table[i].t > table[i - 1].t) || table[i].value < table[i - 1].value) {
      throw std::invalid_argument("ladder_tabulated: nodes must increase in t and not decrease in value");
    }
  }
  auto impl = std::make_shared<TabulatedImpl>();
  impl->kind = LadderKind::tabulated;
  impl->range = {table.front().t, table.back().t};
  impl->anchor = anchor;
  impl->tolerance = tolerance;

  // Fritsch-Carlson limiter on the supplied derivatives keeps each cubic monotone.
  const std::size_t n = table.size();
  impl->slope.resize(n);
  for (std::size_t i = 0; i < n; ++i) impl->slope[i] = std::max(0.0, table[i].deriv);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double delta = (table[i + 1].value - table[i].value) / (table[i + 1].t - table[i].t);
    if (delta == 0.0) {
      impl->slope[i] = 0.0;
      impl->slope[i + 1] = 0.0;
      continue;
    }
    const double a = impl->slope[i] / delta;
    const double b = impl->slope[i + 1] / delta;
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double tau = 3.0 / std::sqrt(r);
      impl->slope[i] = tau * a * delta;
      impl->slope[i + 1] = tau * b * delta;
    }
  }
  impl->checkpoints = std::move(table);
  return LadderModel(std::move(impl));
}

double mirror_point(const LadderModel& m, double T) {
  const Interval range = m.range();
  const double v_lo = m.eval(range.lo);
  const double v_hi = m.eval(range.hi);
  if (!(T >= v_lo && T <= v_hi)) {
    throw DomainError("mirror_point: T = " + std::to_string(T) + " outside model image [" +
                      std::to_string(v_lo) + ", " + std::to_string(v_hi) + "]");
  }
  if (T == v_lo) return range.lo;
  if (T == v_hi) return range.hi;

  // Checkpoint values are non-decreasing, so a search on them narrows the bracket.
  double lo = range.lo;
  double hi = range.hi;
  {
    const auto cps = m.checkpoints();
    auto it = std::upper_bound(cps.begin(), cps.end(), T,
                               [](double v, const Checkpoint& c) { return v < c.value; });
    if (it != cps.begin()) lo = std::max(lo, (it - 1)->t);
    if (it != cps.end()) hi = std::min(hi, it->t);
  }
  double f_lo = m.eval(lo) - T;
  double f_hi = m.eval(hi) - T;
  if (f_lo > 0.0 || f_hi < 0.0) {
    lo = range.lo;
    hi = range.hi;
    f_lo = v_lo - T;
    f_hi = v_hi - T;
  }

  double t = (f_hi > f_lo) ? lo + (hi - lo) * (-f_lo) / (f_hi - f_lo) : 0.5 * (lo + hi);
  t = std::clamp(t, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double r = m.eval(t) - T;
    if (r == 0.0) return t;
    if (r < 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    if (hi - lo <= 2.0 * ulp_of(hi)) break;
    const double d = m.deriv(t);
    double next = (d > 0.0) ? t - r / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - t) <= ulp_of(t)) {
      t = next;
      break;
    }
    t = next;
  }
  // Pick whichever of t and the bracket ends lands closest to T.
  double best = t;
  double best_r = std::fabs(m.eval(t) - T);
  for (double c : {lo, hi}) {
    const double rc = std::fabs(m.eval(c) - T);
    if (rc < best_r) {
      best = c;
      best_r = rc;
    }
  }
  return best;
}

IntervalCollection mirror_collection(const LadderModel& m, const IntervalCollection& c) {
  IntervalLabel label = c.label();
  if (label == IntervalLabel::g1) label = IntervalLabel::mirrored_g1;
  if (label == IntervalLabel::g2) label = IntervalLabel::mirrored_g2;

  std::vector<Interval> out;
  out.reserve(c.size());
  for (const Interval& iv : c.intervals()) {
    const double lo = mirror_point(m, iv.lo);
    const double hi = mirror_point(m, iv.hi);
    if (hi > lo) out.push_back({lo, hi});
  }
  const Interval range = m.range();
  const double img_lo = m.eval(range.lo);
  const double img_hi = m.eval(range.hi);
  Interval window{mirror_point(m, std::clamp(c.window().lo, img_lo, img_hi)),
                  mirror_point(m, std::clamp(c.window().hi, img_lo, img_hi))};
  if (!out.empty()) {
    window.lo = std::min(window.lo, out.front().lo);
    window.hi = std::max(window.hi, out.back().hi);
  }
  return IntervalCollection(label, window, std::move(out));
}

Separation separation_rho(const WindowSpec& w, const LadderModel& m, const PrimeCounter& pc) {
  w.validate();
  Separation s;
  s.mirror_T = mirror_point(m, w.T);
  s.mirror_T_plus_H = mirror_point(m, w.T + w.H());
  s.rho = s.mirror_T - (w.T + w.H());
  s.predicted = kOneMinusGamma * static_cast<double>(pi_count(w.T, pc));
  s.violation = !(s.rho > 0.0);
  return s;
}

void write_checkpoints(std::ostream& out, const LadderModel& m, int per_panel) {
  std::vector<double> ts;
  const auto cps = m.checkpoints();
  if (!cps.empty()) {
    const int k = (m.kind() == LadderKind::ode) ? std::max(1, per_panel) : 1;
    for (std::size_t i = 0; i + 1 < cps.size(); ++i) {
      for (int j = 0; j < k; ++j) {
        ts.push_back(cps[i].t + (cps[i + 1].t - cps[i].t) * j / k);
      }
    }
    ts.push_back(cps.back().t);
  } else {
    const Interval r = m.range();
    constexpr int kSamples = 1000;
    for (int j = 0; j <= kSamples; ++j) ts.push_back(j == kSamples ? r.hi : r.lo + r.length() * j / kSamples);
  }

  out << "# kind=" << to_string(m.kind());
  if (auto a = m.anchor()) {
    out << " anchor_t=" << format_double(a->t) << " anchor_value=" << format_double(a->value);
  }
  out << " tolerance=" << format_double(m.tolerance()) << '\n';
  out << "t,phi,dphi\n";
  for (double t : ts) {
    out << format_double(t) << ',' << format_double(m.eval(t)) << ',' << format_double(m.deriv(t))
        << '\n';
  }
}

LadderModel read_checkpoints(std::istream& in) {
  std::string line;
  std::optional<LadderAnchor> anchor;
  std::optional<double> anchor_t, anchor_value;
  double tolerance = 0.0;
  bool header = false;
  std::vector<Checkpoint> table;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream fields(line.substr(1));
      std::string kv;
      while (fields >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        if (key == "kind") parse_ladder_kind(val);  // validates the source kind
        if (key == "anchor_t") anchor_t = parse_double(val);
        if (key == "anchor_value") anchor_value = parse_double(val);
        if (key == "tolerance") tolerance = parse_double(val);
      }
      continue;
    }
    if (!header) {
      if (line != "t,phi,dphi") throw FormatError("checkpoint CSV: bad header '" + line + "'");
      header = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw FormatError("checkpoint CSV: expected 3 fields");
    }
    table.push_back({parse_double(std::string_view(line).substr(0, c1)),
                     parse_double(std::string_view(line).substr(c1 + 1, c2 - c1 - 1)),
                     parse_double(std::string_view(line).substr(c2 + 1))});
  }
  if (!header) throw FormatError("checkpoint CSV: missing header");
  if (anchor_t && anchor_value) anchor = LadderAnchor{*anchor_t, *anchor_value};
  try {
    return ladder_tabulated(std::move(table), anchor, tolerance);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("checkpoint CSV: ") + e.what());
  }
}

}  // namespace zladder
