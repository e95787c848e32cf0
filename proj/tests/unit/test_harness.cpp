#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "zladder/errors.hpp"
#include "zladder/harness.hpp"

using namespace zladder;
namespace fs = std::filesystem;

namespace {

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "zladder");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("zladder-test-" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.T = 2e4;
  cfg.H_override = 40.0;
  return cfg;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config text and flag settings") {
  ExperimentConfig cfg;
  apply_config_text(cfg, "# comment\nT = 1e5\n  H=250 # trailing\nladder = asymptotic\nseed=9\n\n");
  CHECK(cfg.T == 1e5);
  CHECK(cfg.H_override == 250.0);
  CHECK(cfg.ladder_kind == LadderKind::asymptotic);
  CHECK(cfg.seed == 9);
  apply_setting(cfg, "correction-terms", "4");
  apply_setting(cfg, "rel-tol", "1e-9");
  CHECK(cfg.rs.correction_terms == 4);
  CHECK(cfg.quad.rel_tol == 1e-9);
  CHECK_THROWS_AS(apply_setting(cfg, "bogus", "1"), FormatError);
  CHECK_THROWS_AS(apply_setting(cfg, "T", "abc"), FormatError);
  CHECK_THROWS_AS(apply_setting(cfg, "ladder", "tabulated"), FormatError);
  CHECK_THROWS_AS(apply_config_text(cfg, "T 1e5\n"), FormatError);
}

TEST_CASE("config settings reproduce the config") {
  ExperimentConfig cfg = small_config();
  cfg.x = 0.3;
  cfg.kappa = 1.75;
  cfg.quad.abs_tol = 3e-7;
  ExperimentConfig back;
  for (const auto& [k, v] : config_settings(cfg)) apply_setting(back, k, v);
  CHECK(config_settings(back) == config_settings(cfg));
  CHECK(back.x == cfg.x);
  CHECK(back.H_override == cfg.H_override);
}

TEST_CASE("validation") {
  ExperimentConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.x = 0.0;
  CHECK_THROWS(cfg.validate());
  cfg.x = 1.0;
  cfg.y = 2.0;
  CHECK_THROWS(cfg.validate());
  cfg.y = 1.0;
  cfg.rs.correction_terms = 6;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("verdicts follow the declared tolerance") {
  CHECK(make_report("a", relation::kTheorem, 1.0, 1.05, 0, 0.1, true).verdict == Verdict::pass);
  CHECK(make_report("a", relation::kTheorem, 1.0, 1.2, 0, 0.1, true).verdict == Verdict::fail);
  CHECK(make_report("a", relation::kTheorem, 1.0, 1.2, 0, 0.1, false).verdict == Verdict::informative);
  CHECK(to_string(Verdict::informative) == "informative");
}

TEST_CASE("relation tags form a closed vocabulary") {
  const auto tags = relation_tags();
  CHECK(tags.size() == 10);
  CHECK(std::set<std::string_view>(tags.begin(), tags.end()).size() == 10);
}

TEST_CASE("error budget and window regime") {
  ExperimentConfig cfg;
  CHECK(error_budget(cfg) == doctest::Approx(kCalibratedKappa * std::pow(1e6, 1.0 / 6.0 + 0.05)));
  CHECK_FALSE(beyond_default_window(cfg));
  cfg.H_override = 1e3;
  CHECK(beyond_default_window(cfg));
}

TEST_CASE("theorem rows on a small window") {
  const auto rows = verify_theorem(small_config());
  const auto tags = relation_tags();
  REQUIRE(rows.size() == 8);
  for (const auto& r : rows) {
    CAPTURE(r.experiment_id);
    CHECK(std::find(tags.begin(), tags.end(), r.relation) != tags.end());
    CHECK(r.note.find("error") == std::string::npos);
    if (r.relation == relation::kSubstitution || r.relation == relation::kMirroredSubstitution) {
      CHECK(r.verdict == Verdict::pass);
    }
  }
  CHECK(rows[0].measured > 0.0);  // G1 direct
}

TEST_CASE("argument checks of the experiment functions") {
  ExperimentConfig cfg = small_config();
  cfg.y = 1.0;
  CHECK_THROWS(verify_sign_area(cfg));
  CHECK_THROWS(scan_shape(small_config(), {0.1, 0.2, 0.3}));
  CHECK(default_shape_grid().size() == 8);
  CHECK(default_shape_grid().back() == std::numbers::pi / 2);
}

TEST_CASE("CLI exit codes") {
  const fs::path out = scratch_dir("codes");
  CHECK(cli({}) == 2);
  CHECK(cli({"no-such-command"}) == 2);
  CHECK(cli({"integrate", "--x", "3"}) == 2);
  CHECK(cli({"integrate", "--T", "nope"}) == 2);
  CHECK(cli({"integrate", "--config", "/nonexistent/file.cfg"}) == 2);
  CHECK(cli({"gsets", "--T", "1e6", "--H", "1000", "--out", out.string()}) == 0);
  CHECK(fs::exists(out / "G1.csv"));
  CHECK(fs::exists(out / "gsets.json"));
  // kappa-budgeted rows are informative beyond the default window length.
  CHECK(cli({"verify-corollaries", "--T", "2e4", "--H", "40", "--kappa", "1e-9", "--eps", "0.05",
             "--out", out.string(), "--x", "1.5707963267948966"}) == 0);
  CHECK(cli({"sign-area", "--T", "2e4", "--H", "40", "--out", out.string()}) == 0);
  CHECK(cli({"sign-area", "--T", "2e4", "--H", "40", "--area-tol", "1e-12", "--out", out.string()}) == 1);
}

TEST_CASE("reports are reproducible apart from timing and merge into a summary") {
  const fs::path out = scratch_dir("rerun");
  const std::vector<std::string> args = {"verify-theorem", "--T", "2e4", "--H", "40", "--seed", "5",
                                         "--out", out.string()};
  REQUIRE(cli(args) == 0);
  std::ifstream first_in(out / "verify-theorem.json");
  const std::string first((std::istreambuf_iterator<char>(first_in)), {});
  auto a = read_json(out / "verify-theorem.json");
  REQUIRE(cli(args) == 0);
  auto b = read_json(out / "verify-theorem.json");
  CHECK(a["schema_version"] == kReportSchemaVersion);
  CHECK(a["config"]["seed"] == "5");
  CHECK(a.contains("timing"));
  a.erase("timing");
  b.erase("timing");
  CHECK(a.dump() == b.dump());
  for (const auto& r : a["reports"]) {
    CHECK(r.contains("measured"));
    CHECK(r.contains("predicted"));
    CHECK(r.contains("verdict"));
    CHECK_FALSE(r.contains("runtime_seconds"));
  }
  CHECK(fs::exists(out / "verify-theorem.csv"));

  REQUIRE(cli({"scan-shape", "--T", "2e4", "--H", "40", "--out", out.string()}) >= 0);
  REQUIRE(cli({"report", "--out", out.string()}) >= 0);
  std::ifstream sum(out / "summary.csv");
  std::string header;
  std::getline(sum, header);
  CHECK(header == "T,H,x,y,command,experiment_id,relation,measured,predicted,tolerance,verdict");
  int rows = 0;
  for (std::string line; std::getline(sum, line);) ++rows;
  CHECK(rows == static_cast<int>(a["reports"].size()) + 2);
}

}  // TEST_SUITE
