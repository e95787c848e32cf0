#include "zladder/intervals.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>
#include <optional>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "zladder/errors.hpp"
#include "zladder/summation.hpp"

namespace zladder {
namespace {

constexpr std::array<std::pair<IntervalLabel, std::string_view>, 7> kLabelNames = {{
    {IntervalLabel::g1, "G1"},
    {IntervalLabel::g2, "G2"},
    {IntervalLabel::mirrored_g1, "mirrored-G1"},
    {IntervalLabel::mirrored_g2, "mirrored-G2"},
    {IntervalLabel::pos_part, "pos-part"},
    {IntervalLabel::neg_part, "neg-part"},
    {IntervalLabel::other, "other"},
}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(s.substr(start)));
      return out;
    }
    out.push_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
}

}  // namespace

std::string_view to_string(IntervalLabel label) {
  for (const auto& [l, name] : kLabelNames) {
    if (l == label) return name;
  }
  return "other";
}

IntervalLabel parse_interval_label(std::string_view name) {
  for (const auto& [l, n] : kLabelNames) {
    if (n == name) return l;
  }
  throw FormatError("unknown interval label '" + std::string(name) + "'");
}

std::string format_double(double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
    throw FormatError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

IntervalCollection::IntervalCollection(IntervalLabel label, Interval window,
                                       std::vector<Interval> intervals)
    : label_(label), window_(window), intervals_(std::move(intervals)) {
  if (!(window_.lo <= window_.hi)) {
    throw std::invalid_argument("IntervalCollection: inverted window");
  }
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const Interval& iv = intervals_[i];
    if (!(iv.lo < iv.hi)) {
      throw std::invalid_argument("IntervalCollection: empty or inverted interval");
    }
    if (iv.lo < window_.lo || iv.hi > window_.hi) {
      throw std::invalid_argument("IntervalCollection: interval outside window");
    }
    if (i > 0 && iv.lo < intervals_[i - 1].hi) {
      throw std::invalid_argument("IntervalCollection: intervals unsorted or overlapping");
    }
  }
}

double IntervalCollection::measure() const {
  CompensatedSum s;
  for (const Interval& iv : intervals_) s.add(iv.length());
  return s.value();
}

bool IntervalCollection::contains(double t) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                             [](double v, const Interval& iv) { return v < iv.hi; });
  return it != intervals_.end() && it->contains(t);
}

IntervalCollection IntervalCollection::relabeled(IntervalLabel label) const {
  IntervalCollection copy = *this;
  copy.label_ = label;
  return copy;
}

IntervalCollection merge_collections(const IntervalCollection& a, const IntervalCollection& b,
                                     IntervalLabel label) {
  std::vector<Interval> all(a.intervals().begin(), a.intervals().end());
  all.insert(all.end(), b.intervals().begin(), b.intervals().end());
  std::sort(all.begin(), all.end(),
            [](const Interval& l, const Interval& r) { return l.lo < r.lo; });
  const Interval window{std::min(a.window().lo, b.window().lo),
                        std::max(a.window().hi, b.window().hi)};
  return IntervalCollection(label, window, std::move(all));
}

std::string to_csv(const IntervalCollection& c) {
  std::ostringstream out;
  out << "# window," << format_double(c.window().lo) << ',' << format_double(c.window().hi)
      << '\n';
  out << "lo,hi,label\n";
  const std::string_view label = to_string(c.label());
  for (const Interval& iv : c.intervals()) {
    out << format_double(iv.lo) << ',' << format_double(iv.hi) << ',' << label << '\n';
  }
  return out.str();
}

IntervalCollection collection_from_csv(std::string_view text) {
  std::optional<Interval> window;
  std::optional<IntervalLabel> label;
  std::vector<Interval> intervals;
  bool header_seen = false;

  for (std::string_view line : split(text, '\n')) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto fields = split(line.substr(1), ',');
      if (fields.size() == 3 && fields[0] == "window") {
        window = Interval{parse_double(fields[1]), parse_double(fields[2])};
      }
      continue;
    }
    if (!header_seen) {
      if (line != "lo,hi,label") throw FormatError("interval CSV: bad header '" + std::string(line) + "'");
      header_seen = true;
      continue;
    }
    auto fields = split(line, ',');
    if (fields.size() != 3) throw FormatError("interval CSV: expected 3 fields");
    const IntervalLabel row_label = parse_interval_label(fields[2]);
    if (label && *label != row_label) throw FormatError("interval CSV: mixed labels");
    label = row_label;
    intervals.push_back({parse_double(fields[0]), parse_double(fields[1])});
  }
  if (!header_seen) throw FormatError("interval CSV: missing header");
  if (!window) {
    window = intervals.empty() ? Interval{} : Interval{intervals.front().lo, intervals.back().hi};
  }
  try {
    return IntervalCollection(label.value_or(IntervalLabel::other), *window, std::move(intervals));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("interval CSV: ") + e.what());
  }
}

std::string to_json(const IntervalCollection& c) {
  nlohmann::json j;
  j["label"] = std::string(to_string(c.label()));
  j["window"] = {c.window().lo, c.window().hi};
  auto& arr = j["intervals"] = nlohmann::json::array();
  for (const Interval& iv : c.intervals()) arr.push_back({iv.lo, iv.hi});
  return j.dump();
}

IntervalCollection collection_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& w = j.at("window");
    std::vector<Interval> intervals;
    for (const auto& iv : j.at("intervals")) {
      intervals.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
    }
    return IntervalCollection(parse_interval_label(j.at("label").get<std::string>()),
                              {w.at(0).get<double>(), w.at(1).get<double>()},
                              std::move(intervals));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("interval JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("interval JSON: ") + e.what());
  }
}

}  // namespace zladder
