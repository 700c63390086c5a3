#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tap/cli.hpp"
#include "tap/constituents.hpp"
#include "tap/engine.hpp"
#include "tap/errors.hpp"
#include "tap/io.hpp"
#include "tap/signal.hpp"
#include "tap/subprocess.hpp"

using namespace tap;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::vector<std::string>& args, const std::string& stdin_text = "") {
  std::vector<const char*> argv;
  argv.push_back("tap");
  for (const auto& a : args) argv.push_back(a.c_str());

  std::istringstream in(stdin_text);
  std::ostringstream out;
  auto* old_in = std::cin.rdbuf(in.rdbuf());
  auto* old_out = std::cout.rdbuf(out.rdbuf());
  CliResult result;
  result.exit_code = cli::dispatch(static_cast<int>(argv.size()), argv.data());
  std::cin.rdbuf(old_in);
  std::cout.rdbuf(old_out);
  result.out = out.str();
  return result;
}

fs::path temp_dir() {
  static int counter = 0;
  const fs::path dir =
      fs::temp_directory_path() / ("tap_cli_test_" + std::to_string(::getpid()) + "_" +
                                   std::to_string(counter++));
  fs::create_directories(dir);
  return dir;
}

/// Path to the built `tap` binary: $TAP_BIN, or the sibling tools/ dir of
/// this test binary.
std::string tap_binary() {
  if (const char* env = std::getenv("TAP_BIN")) return env;
  char buffer[4096];
  const ssize_t n = ::readlink("/proc/self/exe", buffer, sizeof(buffer) - 1);
  if (n <= 0) return "tap";
  buffer[n] = '\0';
  return (fs::path(buffer).parent_path().parent_path() / "tools" / "tap").string();
}

}  // namespace

TEST_CASE("cli gen/analyze/predict pipeline") {
  const fs::path dir = temp_dir();

  SyntheticSpec spec;
  spec.constituents.push_back(SyntheticComponent{constituent_frequency("M2"), 1.2, 40.0});
  spec.intercept = 0.3;
  spec.count = 336;
  {
    std::ofstream out(dir / "spec.json");
    out << io::spec_to_json(spec).dump(2) << "\n";
  }

  const CliResult gen = run_cli(
      {"gen", "--spec", (dir / "spec.json").string(), "--seed", "5", "--out",
       (dir / "series.csv").string()});
  REQUIRE(gen.exit_code == 0);
  const TimeSeries series = io::read_timeseries_csv_file((dir / "series.csv").string());
  const TimeSeries direct = generate(spec, Seed{5});
  REQUIRE(series.size() == direct.size());
  for (std::size_t j = 0; j < series.size(); ++j) {
    CHECK(series.elevations[j] == direct.elevations[j]);
  }

  const CliResult analyzed = run_cli(
      {"analyze", "--in", (dir / "series.csv").string(), "--constituents", "M2", "--out",
       (dir / "solution.json").string()});
  REQUIRE(analyzed.exit_code == 0);
  std::ifstream sol_in(dir / "solution.json");
  const auto doc = io::json::parse(sol_in);
  const TidalSolution solution = io::solution_from_json(doc);
  CHECK(std::fabs(solution.components[0].amplitude - 1.2) < 1e-6);
  CHECK(circular_delta_deg(solution.components[0].phase_deg, 40.0) < 1e-4);
  CHECK(std::fabs(solution.a0 - 0.3) < 1e-6);

  const CliResult predicted = run_cli(
      {"predict", "--solution", (dir / "solution.json").string(), "--start", "0", "--step",
       "1", "--count", "24", "--out", (dir / "predicted.csv").string()});
  REQUIRE(predicted.exit_code == 0);
  const TimeSeries forecast = io::read_timeseries_csv_file((dir / "predicted.csv").string());
  REQUIRE(forecast.size() == 24);
  for (std::size_t j = 0; j < forecast.size(); ++j) {
    CHECK(std::fabs(forecast.elevations[j] - direct.elevations[j]) < 1e-6);
  }

  fs::remove_all(dir);
}

TEST_CASE("cli usage and input errors exit with 2") {
  CHECK(run_cli({"no-such-command"}).exit_code == 2);
  CHECK(run_cli({"gen", "--bogus-flag"}).exit_code == 2);
  CHECK(run_cli({"analyze", "--in", "/nonexistent/file.csv"}).exit_code == 2);
  CHECK(run_cli({"mt-run", "--mrs", "MR9"}).exit_code == 2);
  CHECK(run_cli({"report", "--in", "/nonexistent/report.json"}).exit_code == 2);

  const fs::path dir = temp_dir();
  {
    std::ofstream out(dir / "bad.csv");
    out << "time_hours,elevation_m\n0,1\n-5,2\n";  // non-monotonic
  }
  CHECK(run_cli({"analyze", "--in", (dir / "bad.csv").string()}).exit_code == 2);
  fs::remove_all(dir);
}

TEST_CASE("cli mt-run writes artifacts and exits 0 on a clean engine") {
  const fs::path dir = temp_dir();
  const CliResult result = run_cli({"mt-run", "--seed", "11", "--cases", "6", "--workers", "2",
                                    "--out", (dir / "reports").string()});
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("0 violation(s)") != std::string::npos);

  std::ifstream in(dir / "reports" / "report.json");
  REQUIRE(in.good());
  const auto doc = io::json::parse(in);
  const mt::CampaignReport report = io::campaign_report_from_json(doc);
  CHECK(report.n_cases == 6);
  CHECK(report.violations_total() == 0);

  const CliResult rendered =
      run_cli({"report", "--in", (dir / "reports" / "report.json").string()});
  CHECK(rendered.exit_code == 0);
  CHECK(rendered.out.find("MR7") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("cli mutants list renders both formats") {
  const CliResult table = run_cli({"mutants", "list"});
  CHECK(table.exit_code == 0);
  CHECK(table.out.find("phase_ref_defect") != std::string::npos);
  const CliResult as_json = run_cli({"mutants", "list", "--format", "json"});
  CHECK(as_json.exit_code == 0);
  CHECK(as_json.out.find("\"category\"") != std::string::npos);
}

TEST_CASE("engine-serve answers protocol requests on stdin") {
  SyntheticSpec spec = random_campaign_spec(Seed{41});
  spec.count = 24;
  const TimeSeries series = generate(spec, Seed{42});
  const auto set = ConstituentSet::of({spec.constituents[0].constituent});
  const std::string request = io::encode_analyze_request(series, set, true);

  const CliResult served = run_cli({"engine-serve"}, request + "\n");
  REQUIRE(served.exit_code == 0);
  std::istringstream lines(served.out);
  std::string first;
  REQUIRE(std::getline(lines, first));
  const TidalSolution remote = io::parse_analyze_response(first, set);

  const ReferenceEngine engine;
  const TidalSolution local = engine.analyze(series, set, FitConfig{true});
  CHECK(remote.a0 == local.a0);
  CHECK(remote.components[0].amplitude == local.components[0].amplitude);

  SUBCASE("bad requests produce error lines, not crashes") {
    const CliResult error_reply = run_cli({"engine-serve"}, "this is not json\n");
    REQUIRE(error_reply.exit_code == 0);
    CHECK(error_reply.out.find("\"error\"") != std::string::npos);
  }
}

TEST_CASE("external engine adapter") {
  const std::string binary = tap_binary();
  REQUIRE(fs::exists(binary));

  SyntheticSpec spec = random_campaign_spec(Seed{51});
  spec.count = 48;
  const TimeSeries series = generate(spec, Seed{52});
  const auto set = ConstituentSet::of({spec.constituents[0].constituent});

  SUBCASE("self-adapter matches in-process analysis exactly") {
    EngineHandle handle;
    handle.kind = EngineHandle::Kind::external;
    handle.command = binary + " engine-serve";
    handle.timeout_s = 20.0;
    const ExternalEngine remote(handle);
    const ReferenceEngine local;

    const TidalSolution via_process = remote.analyze(series, set, FitConfig{true});
    const TidalSolution direct = local.analyze(series, set, FitConfig{true});
    CHECK(std::fabs(via_process.a0 - direct.a0) <= 1e-12);
    CHECK(std::fabs(via_process.a1 - direct.a1) <= 1e-12);
    CHECK(std::fabs(via_process.components[0].amplitude - direct.components[0].amplitude) <=
          1e-12);
    CHECK(std::fabs(via_process.components[0].phase_deg - direct.components[0].phase_deg) <=
          1e-12);

    const TimeSeries predicted = remote.predict(direct, {0.0, 1.0, 2.0});
    const TimeSeries expected = local.predict(direct, {0.0, 1.0, 2.0});
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(std::fabs(predicted.elevations[j] - expected.elevations[j]) <= 1e-12);
    }
  }

  SUBCASE("persistent mode matches one-shot mode") {
    EngineHandle handle;
    handle.kind = EngineHandle::Kind::external;
    handle.command = binary + " engine-serve";
    handle.timeout_s = 20.0;
    handle.persistent = true;
    const ExternalEngine remote(handle);
    const ReferenceEngine local;
    for (int round = 0; round < 3; ++round) {
      const TidalSolution via_process = remote.analyze(series, set, FitConfig{round % 2 == 0});
      const TidalSolution direct = local.analyze(series, set, FitConfig{round % 2 == 0});
      CHECK(via_process.components[0].amplitude == direct.components[0].amplitude);
    }
  }

  SUBCASE("invalid JSON replies raise protocol errors") {
    EngineHandle handle;
    handle.kind = EngineHandle::Kind::external;
    handle.command = "echo this-is-not-json";
    const ExternalEngine remote(handle);
    CHECK_THROWS_AS((void)remote.analyze(series, set, FitConfig{}), ProtocolError);
  }

  SUBCASE("silent engines time out") {
    EngineHandle handle;
    handle.kind = EngineHandle::Kind::external;
    handle.command = "sleep 30";
    handle.timeout_s = 0.3;
    const ExternalEngine remote(handle);
    CHECK_THROWS_AS((void)remote.analyze(series, set, FitConfig{}), EngineTimeoutError);
  }

  SUBCASE("engines that exit without replying are failures") {
    EngineHandle handle;
    handle.kind = EngineHandle::Kind::external;
    handle.command = "true";
    const ExternalEngine remote(handle);
    CHECK_THROWS_AS((void)remote.analyze(series, set, FitConfig{}), EngineFailureError);
  }

  SUBCASE("engine-reported errors are failures") {
    EngineHandle handle;
    handle.kind = EngineHandle::Kind::external;
    handle.command = "echo '{\"error\":\"no can do\"}'";
    const ExternalEngine remote(handle);
    CHECK_THROWS_AS((void)remote.analyze(series, set, FitConfig{}), EngineFailureError);
  }

  SUBCASE("empty external commands are invalid") {
    EngineHandle handle;
    handle.kind = EngineHandle::Kind::external;
    CHECK_THROWS_AS(ExternalEngine{handle}, InvalidInputError);
  }
}

TEST_CASE("mt-run against an external mutant engine reports MR1 violations") {
  const std::string binary = tap_binary();
  REQUIRE(fs::exists(binary));
  const fs::path dir = temp_dir();

  const CliResult result = run_cli(
      {"mt-run", "--seed", "2", "--cases", "3", "--mrs", "MR1,MR3", "--engine-cmd",
       binary + " engine-serve --mutant phase_ref_defect", "--timeout-s", "20", "--out",
       (dir / "reports").string()});
  CHECK(result.exit_code == 1);

  std::ifstream in(dir / "reports" / "report.json");
  REQUIRE(in.good());
  const mt::CampaignReport report = io::campaign_report_from_json(io::json::parse(in));
  CHECK(report.totals.at(mt::MRId::MR1).violated == 3);
  CHECK(report.totals.at(mt::MRId::MR3).violated == 0);
  fs::remove_all(dir);
}
