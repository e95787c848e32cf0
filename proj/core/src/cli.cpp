#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

#include "zladder/errors.hpp"
#include "zladder/gsets.hpp"
#include "zladder/harness.hpp"
#include "zladder/intervals.hpp"

namespace zladder {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw FormatError("config: bad integer for " + std::string(key) + ": '" + std::string(v) + "'");
  }
  return out;
}

double parse_real(std::string_view key, std::string_view v) {
  try {
    return parse_double(v);
  } catch (const FormatError&) {
    throw FormatError("config: bad number for " + std::string(key) + ": '" + std::string(v) + "'");
  }
}

ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json report_json(const VerificationReport& r) {
  ordered_json j;
  j["experiment_id"] = r.experiment_id;
  j["relation"] = r.relation;
  j["measured"] = number(r.measured);
  j["predicted"] = number(r.predicted);
  j["error_estimate"] = number(r.error_estimate);
  j["tolerance"] = number(r.tolerance);
  j["verdict"] = std::string(to_string(r.verdict));
  ordered_json d = ordered_json::object();
  for (const auto& [k, v] : r.details) d[k] = number(v);
  j["details"] = std::move(d);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

double abscissa(const VerificationReport& r, double fallback) {
  for (const auto& [k, v] : r.details) {
    if (k == "H") return v;
  }
  return fallback;
}

struct Output {
  std::vector<VerificationReport> reports;
  // Extra plot rows (x, measured, predicted, id) beyond one per report.
  std::vector<std::tuple<double, double, double, std::string>> plot;
};

int emit(const std::string& command, const ExperimentConfig& cfg, const Output& o,
         double total_seconds) {
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);

  ordered_json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["command"] = command;
  ordered_json conf = ordered_json::object();
  for (const auto& [k, v] : config_settings(cfg)) conf[k] = v;
  doc["config"] = std::move(conf);
  const WindowSpec w = cfg.window();
  doc["window"] = {{"T", cfg.T}, {"H", w.H()}, {"default_H", w.default_H()},
                   {"beyond_default_window", beyond_default_window(cfg)},
                   {"error_budget", error_budget(cfg)}};
  ordered_json reps = ordered_json::array();
  int passed = 0, failed = 0, informative = 0;
  for (const auto& r : o.reports) {
    reps.push_back(report_json(r));
    (r.verdict == Verdict::pass ? passed : r.verdict == Verdict::fail ? failed : informative)++;
  }
  doc["reports"] = std::move(reps);
  doc["summary"] = {{"pass", passed}, {"fail", failed}, {"informative", informative},
                    {"all_hard_passed", failed == 0}};
  ordered_json per = ordered_json::object();
  for (const auto& r : o.reports) per[r.experiment_id] = r.runtime_seconds;
  doc["timing"] = {{"timestamp", utc_timestamp()}, {"total_seconds", total_seconds},
                   {"per_report_seconds", std::move(per)}};
  write_text(dir / (command + ".json"), doc.dump(2) + "\n");

  std::ostringstream csv;
  csv << "x,measured,predicted,experiment_id\n";
  for (const auto& r : o.reports) {
    csv << format_double(abscissa(r, cfg.x)) << ',' << format_double(r.measured) << ','
        << format_double(r.predicted) << ',' << r.experiment_id << '\n';
  }
  for (const auto& [x, m, p, id] : o.plot) {
    csv << format_double(x) << ',' << format_double(m) << ',' << format_double(p) << ',' << id << '\n';
  }
  write_text(dir / (command + ".csv"), csv.str());

  for (const auto& r : o.reports) {
    std::cout << std::left << std::setw(12) << to_string(r.verdict) << std::setw(28)
              << r.experiment_id << " measured=" << format_double(r.measured)
              << " predicted=" << format_double(r.predicted)
              << " tol=" << format_double(r.tolerance) << '\n';
    if (!r.note.empty()) std::cout << "            " << r.note << '\n';
  }
  std::cout << command << ": " << passed << " pass, " << failed << " fail, " << informative
            << " informative -> " << (dir / (command + ".json")).string() << '\n';
  return failed == 0 ? 0 : 1;
}

Output run_grid(const ExperimentConfig& cfg) {
  Output o;
  const auto pts = grid_range(cfg.window());
  std::ostringstream csv;
  csv << "nu,tau,t,residual\n";
  double worst = 0.0;
  for (const auto& p : pts) {
    const double res = grid_residual(p);
    worst = std::max(worst, std::fabs(res) / p.t);
    csv << p.nu << ',' << format_double(p.tau) << ',' << format_double(p.t) << ','
        << format_double(res) << '\n';
  }
  fs::create_directories(cfg.output_dir);
  write_text(fs::path(cfg.output_dir) / "grid-points.csv", csv.str());
  VerificationReport r = make_report("grid-residual", relation::kMeanValue, worst, 0.0, 0.0, 1e-10, true);
  r.details.emplace_back("points", static_cast<double>(pts.size()));
  o.reports.push_back(std::move(r));
  return o;
}

Output run_gsets(const ExperimentConfig& cfg) {
  Output o;
  const WindowSpec w = cfg.window();
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  for (int which : {1, 2}) {
    const double x = which == 1 ? cfg.x : cfg.y;
    const IntervalCollection c = which == 1 ? build_g1(w, x) : build_g2(w, x);
    const std::string name = which == 1 ? "G1" : "G2";
    write_text(dir / (name + ".csv"), to_csv(c));
    write_text(dir / (name + ".json"), to_json(c));
    // Each interval has length about 2x / theta' and there are about
    // H theta' / 2 pi of them, so the measure is about x H / pi. Edge effects
    // are O(1 / count); the 2% law is only claimed from T = 1e6 on.
    const double expected = x * w.H() / std::numbers::pi;
    VerificationReport r = make_report(name + "-measure", relation::kMeanValue, c.measure() / expected,
                                       1.0, 0.0, 0.02, cfg.T >= 1e6);
    r.details.emplace_back("intervals", static_cast<double>(c.size()));
    r.details.emplace_back("measure", c.measure());
    o.reports.push_back(std::move(r));
  }
  return o;
}

Output run_ladder(const ExperimentConfig& cfg) {
  Output o;
  o.reports = verify_ladder(cfg);
  if (cfg.ladder_kind == LadderKind::ode) {
    // Checkpoint table for the ladder used by the mirrored experiments.
    const Interval gw = gsets_window(cfg.window());
    const LadderModel asym = ladder_asymptotic({10.0, kValidatedMax});
    const double margin = 4.0 * std::numbers::pi / theta_deriv(gw.lo);
    OdeLadderOptions opts;
    opts.rs = cfg.rs;
    const LadderModel ode = ladder_ode(mirror_point(asym, gw.lo - margin),
                                       1.5 * (gw.length() + 2.0 * margin) + 20.0, asym, opts);
    fs::create_directories(cfg.output_dir);
    std::ofstream out(fs::path(cfg.output_dir) / "ladder-checkpoints.csv", std::ios::binary);
    write_checkpoints(out, ode);
  }
  return o;
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    if (!item.empty()) out.push_back(parse_real(key, item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

struct ReportRow {
  double T, H, x, y;
  std::string command, id, relation, verdict;
  double measured, predicted, tolerance;
};

int run_report(const ExperimentConfig& cfg, const std::string& input_dir) {
  const fs::path dir = input_dir.empty() ? fs::path(cfg.output_dir) : fs::path(input_dir);
  if (!fs::is_directory(dir)) throw FormatError("report: no such directory " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<ReportRow> rows;
  auto as_double = [](const nlohmann::json& v) {
    return v.is_number() ? v.get<double>() : std::nan("");
  };
  for (const auto& f : files) {
    std::ifstream in(f);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception&) {
      continue;
    }
    if (!doc.is_object() || !doc.contains("schema_version") || !doc.contains("reports")) continue;
    const auto& conf = doc["config"];
    const double T = parse_double(conf.at("T").get<std::string>());
    const double H = as_double(doc["window"]["H"]);
    const double x = parse_double(conf.at("x").get<std::string>());
    const double y = parse_double(conf.at("y").get<std::string>());
    for (const auto& r : doc["reports"]) {
      rows.push_back({T, H, x, y, doc["command"].get<std::string>(),
                      r.at("experiment_id").get<std::string>(), r.at("relation").get<std::string>(),
                      r.at("verdict").get<std::string>(), as_double(r["measured"]),
                      as_double(r["predicted"]), as_double(r["tolerance"])});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.T, a.H, a.x, a.y, a.command, a.id) < std::tie(b.T, b.H, b.x, b.y, b.command, b.id);
  });
  std::ostringstream csv;
  csv << "T,H,x,y,command,experiment_id,relation,measured,predicted,tolerance,verdict\n";
  int failed = 0;
  for (const auto& r : rows) {
    csv << format_double(r.T) << ',' << format_double(r.H) << ',' << format_double(r.x) << ','
        << format_double(r.y) << ',' << r.command << ',' << r.id << ',' << r.relation << ','
        << format_double(r.measured) << ',' << format_double(r.predicted) << ','
        << format_double(r.tolerance) << ',' << r.verdict << '\n';
    if (r.verdict == "fail") ++failed;
  }
  fs::create_directories(cfg.output_dir);
  const fs::path target = fs::path(cfg.output_dir) / "summary.csv";
  write_text(target, csv.str());
  std::cout << "report: " << rows.size() << " rows from " << files.size() << " files, " << failed
            << " failed -> " << target.string() << '\n';
  return failed == 0 ? 0 : 1;
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  const std::string v = trim(value);
  if (key == "T") cfg.T = parse_real(key, v);
  else if (key == "eps") cfg.epsilon = parse_real(key, v);
  else if (key == "H") cfg.H_override = parse_real(key, v);
  else if (key == "x") cfg.x = parse_real(key, v);
  else if (key == "y") cfg.y = parse_real(key, v);
  else if (key == "ladder") {
    const LadderKind k = parse_ladder_kind(v);
    if (k != LadderKind::asymptotic && k != LadderKind::ode) {
      throw FormatError("config: ladder must be asymptotic or ode");
    }
    cfg.ladder_kind = k;
  }
  else if (key == "rel-tol") cfg.quad.rel_tol = parse_real(key, v);
  else if (key == "abs-tol") cfg.quad.abs_tol = parse_real(key, v);
  else if (key == "max-depth") cfg.quad.max_depth = parse_int<int>(key, v);
  else if (key == "correction-terms") cfg.rs.correction_terms = parse_int<int>(key, v);
  else if (key == "seed") cfg.seed = parse_int<std::uint64_t>(key, v);
  else if (key == "out") cfg.output_dir = v;
  else if (key == "kappa") cfg.kappa = parse_real(key, v);
  else if (key == "root-tol") cfg.root_tol = parse_real(key, v);
  else if (key == "area-tol") cfg.area_tol = parse_real(key, v);
  else if (key == "shape-tol") cfg.shape_tol = parse_real(key, v);
  else throw FormatError("config: unknown key '" + std::string(key) + "'");
}

void apply_config_text(ExperimentConfig& cfg, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw FormatError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    apply_setting(cfg, trim(std::string_view(body).substr(0, eq)),
                  std::string_view(body).substr(eq + 1));
  }
}

std::vector<std::pair<std::string, std::string>> config_settings(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> s = {
      {"T", format_double(cfg.T)},
      {"eps", format_double(cfg.epsilon)},
  };
  if (cfg.H_override) s.emplace_back("H", format_double(*cfg.H_override));
  s.emplace_back("x", format_double(cfg.x));
  s.emplace_back("y", format_double(cfg.y));
  s.emplace_back("ladder", std::string(to_string(cfg.ladder_kind)));
  s.emplace_back("rel-tol", format_double(cfg.quad.rel_tol));
  s.emplace_back("abs-tol", format_double(cfg.quad.abs_tol));
  s.emplace_back("max-depth", std::to_string(cfg.quad.max_depth));
  s.emplace_back("correction-terms", std::to_string(cfg.rs.correction_terms));
  s.emplace_back("seed", std::to_string(cfg.seed));
  s.emplace_back("out", cfg.output_dir);
  s.emplace_back("kappa", format_double(cfg.kappa));
  s.emplace_back("root-tol", format_double(cfg.root_tol));
  s.emplace_back("area-tol", format_double(cfg.area_tol));
  s.emplace_back("shape-tol", format_double(cfg.shape_tol));
  return s;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Mean values of Hardy's Z over generalised Gram sets and their ladder images"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file;
  app.add_option("--config", config_file, "flat key = value file; flags override it");
  static constexpr std::array<std::pair<const char*, const char*>, 16> kFlags = {{
      {"T", "window start"},
      {"eps", "epsilon in H = T^(1/6 + 2 eps)"},
      {"H", "window length override"},
      {"x", "G1 half-width in (0, pi/2]"},
      {"y", "G2 half-width in (0, pi/2]"},
      {"ladder", "asymptotic | ode"},
      {"rel-tol", "quadrature relative tolerance"},
      {"abs-tol", "quadrature absolute tolerance"},
      {"max-depth", "quadrature bisection depth limit"},
      {"correction-terms", "Riemann-Siegel correction terms, 0..5"},
      {"seed", "seed for randomized audits"},
      {"out", "output directory"},
      {"kappa", "error-budget constant"},
      {"root-tol", "sign-partition gap budget (relative)"},
      {"area-tol", "area-ratio tolerance"},
      {"shape-tol", "shape-amplitude tolerance"},
  }};
  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_opts;
  for (const auto& [name, help] : kFlags) {
    flag_opts[name] = app.add_option(std::string("--") + name, flag_values[name], help);
  }

  const std::array<std::pair<const char*, const char*>, 9> kCommands = {{
      {"grid", "Gram points of the window with residuals"},
      {"gsets", "build G1(x), G2(y) and check their measure"},
      {"ladder", "separation and ladder asymptotics; writes ODE checkpoints"},
      {"integrate", "direct integrals of Z over G1(x), G2(y)"},
      {"verify-theorem", "direct, mirrored and substitution rows"},
      {"verify-corollaries", "union, difference and coverage rows"},
      {"sign-area", "positive vs negative area on the mirrored sets"},
      {"scan-shape", "integral over G1(x) across x with an A sin x fit"},
      {"report", "merge the JSON reports of a directory into summary.csv"},
  }};
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : kCommands) subs[name] = app.add_subcommand(name, help);
  bool trend = false;
  subs["sign-area"]->add_flag("--trend", trend, "add the H in {1e2, 1e3, 1e4} trend rows");
  std::string x_grid;
  subs["scan-shape"]->add_option("--x-grid", x_grid, "comma-separated x values (default k pi/16, k=1..8)");
  std::string input_dir;
  subs["report"]->add_option("--in", input_dir, "directory with JSON reports (default: --out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  ExperimentConfig cfg;
  std::string command;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) command = name;
  }
  std::vector<double> xs;
  try {
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw FormatError("cannot read config file " + config_file);
      std::ostringstream ss;
      ss << in.rdbuf();
      apply_config_text(cfg, ss.str());
    }
    for (const auto& [name, opt] : flag_opts) {
      if (opt->count() > 0) apply_setting(cfg, name, flag_values[name]);
    }
    cfg.validate();
    if (command == "scan-shape") {
      xs = x_grid.empty() ? default_shape_grid() : parse_list("x-grid", x_grid);
      if (xs.size() < 8) throw FormatError("scan-shape: need at least 8 x values");
    }
    if (command == "sign-area" && cfg.x != cfg.y) throw FormatError("sign-area: requires x == y");
  } catch (const std::exception& e) {
    std::cerr << "zladder: " << e.what() << '\n';
    return 2;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    if (command == "report") return run_report(cfg, input_dir);
    Output o;
    if (command == "grid") o = run_grid(cfg);
    else if (command == "gsets") o = run_gsets(cfg);
    else if (command == "ladder") o = run_ladder(cfg);
    else if (command == "integrate") o.reports = verify_mean_value(cfg);
    else if (command == "verify-theorem") o.reports = verify_theorem(cfg);
    else if (command == "verify-corollaries") o.reports = verify_corollaries(cfg);
    else if (command == "sign-area") {
      o.reports = verify_sign_area(cfg);
      if (trend) {
        auto rows = verify_h_trend(cfg, {1e2, 1e3, 1e4});
        o.reports.insert(o.reports.end(), rows.begin(), rows.end());
      }
    } else if (command == "scan-shape") {
      ShapeScan s = scan_shape(cfg, xs);
      o.reports = std::move(s.reports);
      for (const auto& r : s.rows) o.plot.emplace_back(r.x, r.measured, r.predicted, "shape-point");
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return emit(command, cfg, o, elapsed);
  } catch (const DomainError& e) {
    std::cerr << "zladder: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "zladder: " << command << " failed: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace zladder
