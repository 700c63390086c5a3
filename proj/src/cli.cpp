#include "tap/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tap/constituents.hpp"
#include "tap/engine.hpp"
#include "tap/errors.hpp"
#include "tap/harmonic.hpp"
#include "tap/io.hpp"
#include "tap/metamorphic.hpp"
#include "tap/mutation.hpp"
#include "tap/signal.hpp"
#include "tap/subprocess.hpp"

namespace tap::cli {

namespace {

namespace fs = std::filesystem;

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot open " + path + " for writing");
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open " + path + " for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct GenOptions {
  std::string spec_path;
  std::uint64_t seed = 0;
  std::string out = "-";
};

int run_gen(const GenOptions& options) {
  const auto doc = io::json::parse(read_text_file(options.spec_path));
  const SyntheticSpec spec = io::spec_from_json(doc);
  const TimeSeries series = generate(spec, Seed{options.seed});
  if (options.out == "-") {
    io::write_timeseries_csv(series, std::cout);
    std::cerr << "gen: wrote " << series.size() << " samples to stdout\n";
  } else {
    io::write_timeseries_csv_file(series, options.out);
    std::cout << "gen: wrote " << series.size() << " samples to " << options.out << "\n";
  }
  return 0;
}

struct AnalyzeOptions {
  std::string in_path;
  std::vector<std::string> constituents{"M2"};
  bool trend = true;
  double min_conditioning = FitConfig{}.min_conditioning;
  bool rayleigh = true;
  std::string out = "-";
};

int run_analyze(const AnalyzeOptions& options) {
  const TimeSeries series = io::read_timeseries_csv_file(options.in_path);
  std::vector<Constituent> members;
  for (const auto& name : options.constituents) members.push_back(constituent_frequency(name));
  const ConstituentSet set = ConstituentSet::of(std::move(members));
  const FitConfig config{options.trend, options.min_conditioning, options.rayleigh};
  const TidalSolution solution = analyze(series, set, config);
  for (const auto& warning : solution.warnings) std::cerr << "warning: " << warning << "\n";
  const std::string text = io::solution_to_json(solution).dump(2) + "\n";
  if (options.out == "-") {
    std::cout << text;
    std::cerr << "analyze: solution written to stdout\n";
  } else {
    write_text_file(options.out, text);
    std::cout << "analyze: solution written to " << options.out << "\n";
  }
  return 0;
}

struct PredictOptions {
  std::string solution_path;
  double start = 0.0;
  double step = 1.0;
  long count = 24;
  std::string out = "-";
};

int run_predict(const PredictOptions& options) {
  if (options.count < 1) throw InvalidInputError("predict: --count must be >= 1");
  if (!(options.step > 0.0)) throw InvalidInputError("predict: --step must be > 0");
  const auto doc = io::json::parse(read_text_file(options.solution_path));
  const TidalSolution solution = io::solution_from_json(doc);
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(options.count));
  for (long j = 0; j < options.count; ++j) {
    times.push_back(options.start + static_cast<double>(j) * options.step);
  }
  const TimeSeries series = predict(solution, times);
  if (options.out == "-") {
    io::write_timeseries_csv(series, std::cout);
    std::cerr << "predict: wrote " << series.size() << " samples to stdout\n";
  } else {
    io::write_timeseries_csv_file(series, options.out);
    std::cout << "predict: wrote " << series.size() << " samples to " << options.out << "\n";
  }
  return 0;
}

struct EngineOptions {
  std::string engine_cmd;
  double timeout_s = 10.0;
  bool persistent = false;
};

std::unique_ptr<Engine> make_engine(const EngineOptions& options) {
  if (options.engine_cmd.empty()) return std::make_unique<ReferenceEngine>();
  EngineHandle handle;
  handle.kind = EngineHandle::Kind::external;
  handle.command = options.engine_cmd;
  handle.timeout_s = options.timeout_s;
  handle.persistent = options.persistent;
  return std::make_unique<ExternalEngine>(handle);
}

struct MtRunOptions {
  std::uint64_t seed = 0;
  long cases = 100;
  std::vector<std::string> mrs;
  double tolerance = 0.01;
  int workers = 1;
  bool mr2_strict = false;
  std::string mr1_offset = "step";
  EngineOptions engine;
  std::string out_dir;
  std::string format = "table";
};

mt::CampaignConfig campaign_config_from(const MtRunOptions& options) {
  mt::CampaignConfig config;
  config.master_seed = Seed{options.seed};
  config.n_cases = options.cases;
  config.workers = options.workers;
  config.tolerance.metres = options.tolerance;
  config.tolerance.metres_per_hour = options.tolerance;
  config.tolerance.degrees = options.tolerance;
  config.relation_options.mr2_strict_phase = options.mr2_strict;
  if (!options.mrs.empty()) {
    config.mrs.clear();
    for (const auto& name : options.mrs) config.mrs.push_back(mt::parse_mr(name));
  }
  if (options.mr1_offset == "step") {
    config.mr1_offset = mt::Mr1Offset::next_step;
  } else if (options.mr1_offset == "inside") {
    config.mr1_offset = mt::Mr1Offset::random_inside;
  } else {
    config.mr1_offset = mt::Mr1Offset::random_outside;
  }
  return config;
}

int run_mt(const MtRunOptions& options) {
  const auto engine = make_engine(options.engine);
  const mt::CampaignConfig config = campaign_config_from(options);
  const mt::CampaignReport report = mt::run_campaign(*engine, config);

  if (!options.out_dir.empty()) {
    fs::create_directories(options.out_dir);
    write_text_file(options.out_dir + "/report.json",
                    io::campaign_report_to_json(report).dump(2) + "\n");
    write_text_file(options.out_dir + "/report.txt", io::campaign_report_table(report));
  }
  if (options.format == "json") {
    std::cout << io::campaign_report_to_json(report).dump(2) << "\n";
  } else {
    std::cout << io::campaign_report_table(report);
  }

  const long violations = report.violations_total();
  std::cout << "mt-run: " << violations << " violation(s) across " << report.n_cases
            << " case(s)\n";
  return violations > 0 ? 1 : 0;
}

struct MutantsRunOptions {
  MtRunOptions campaign;
  int probes = 20;
  bool crash_kills = false;
};

int run_mutants_list(const std::string& format) {
  const auto& catalog = mut::list_mutants();
  if (format == "json") {
    std::cout << io::mutant_catalog_to_json(catalog).dump(2) << "\n";
  } else {
    std::cout << io::mutant_catalog_table(catalog);
  }
  std::cout << "mutants list: " << catalog.size() << " catalog entries\n";
  return 0;
}

int run_mutants_run(const MutantsRunOptions& options) {
  mut::MutationConfig config;
  config.campaign = campaign_config_from(options.campaign);
  config.n_probes = options.probes;
  config.crash_counts_as_kill = options.crash_kills;
  const mut::MutationReport report = mut::mutation_campaign(mut::list_mutants(), config);

  if (!options.campaign.out_dir.empty()) {
    fs::create_directories(options.campaign.out_dir);
    write_text_file(options.campaign.out_dir + "/mutation.json",
                    io::mutation_report_to_json(report).dump(2) + "\n");
    write_text_file(options.campaign.out_dir + "/mutation.txt",
                    io::mutation_report_table(report));
  }
  if (options.campaign.format == "json") {
    std::cout << io::mutation_report_to_json(report).dump(2) << "\n";
  } else {
    std::cout << io::mutation_report_table(report);
  }

  long killed = 0;
  for (const auto& row : report.matrix.rows) killed += row.killed ? 1 : 0;
  std::cout << "mutants run: " << killed << " of " << report.scores.non_equivalent
            << " non-equivalent mutant(s) killed\n";
  return 0;
}

struct ReportOptions {
  std::string in_path;
  std::string format = "table";
};

int run_report(const ReportOptions& options) {
  const auto doc = io::json::parse(read_text_file(options.in_path));
  const std::string kind = doc.value("kind", "");
  if (kind == "mt-campaign") {
    const mt::CampaignReport report = io::campaign_report_from_json(doc);
    if (options.format == "json") {
      std::cout << io::campaign_report_to_json(report).dump(2) << "\n";
    } else {
      std::cout << io::campaign_report_table(report);
    }
  } else if (kind == "mutation-campaign") {
    const mut::MutationReport report = io::mutation_report_from_json(doc);
    if (options.format == "json") {
      std::cout << io::mutation_report_to_json(report).dump(2) << "\n";
    } else {
      std::cout << io::mutation_report_table(report);
    }
  } else {
    throw InvalidInputError("report: unrecognized document kind \"" + kind + "\"");
  }
  std::cout << "report: rendered " << options.in_path << "\n";
  return 0;
}

int run_engine_serve(const std::string& mutant_id) {
  const std::unique_ptr<Engine> engine =
      mutant_id.empty() ? std::make_unique<ReferenceEngine>() : mut::with_mutant(mutant_id);
  std::string line;
  long requests = 0;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    std::string response;
    try {
      const io::ProtocolRequest request = io::parse_request(line);
      if (request.mode == io::ProtocolRequest::Mode::analyze) {
        FitConfig config;
        config.include_trend = request.trend;
        response = io::encode_analyze_response(
            engine->analyze(request.series, request.constituents, config));
      } else {
        response = io::encode_predict_response(engine->predict(request.solution, request.times));
      }
    } catch (const Error& e) {
      response = io::encode_error_response(e.what());
    }
    std::cout << response << "\n" << std::flush;
    ++requests;
  }
  std::cerr << "engine-serve: handled " << requests << " request(s)\n";
  return 0;
}

void add_engine_options(CLI::App* cmd, EngineOptions& options) {
  cmd->add_option("--engine-cmd", options.engine_cmd,
                  "external engine command line (line-protocol on stdin/stdout)");
  cmd->add_option("--timeout-s", options.timeout_s, "per-request I/O deadline in seconds");
  cmd->add_flag("--persistent-engine", options.persistent,
                "keep one external process alive across requests");
}

void add_campaign_options(CLI::App* cmd, MtRunOptions& options) {
  cmd->add_option("--seed", options.seed, "campaign master seed");
  cmd->add_option("--cases", options.cases, "number of source test cases");
  cmd->add_option("--mrs", options.mrs, "metamorphic relations, e.g. MR1,MR4")
      ->delimiter(',');
  cmd->add_option("--tolerance", options.tolerance,
                  "round-off tolerance per quantity in its native unit");
  cmd->add_option("--workers", options.workers, "worker threads for case execution");
  cmd->add_flag("--mr2-strict", options.mr2_strict,
                "also check the implied MR2 phase shift of 180 degrees");
  cmd->add_option("--mr1-offset", options.mr1_offset,
                  "appended-point time for MR1: next regular step, or a random time "
                  "inside/outside the record")
      ->check(CLI::IsMember({"step", "inside", "outside"}));
  cmd->add_option("--out", options.out_dir, "directory for report artifacts");
  cmd->add_option("--format", options.format, "stdout rendering")
      ->check(CLI::IsMember({"json", "table"}));
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"tidal analysis and prediction with a metamorphic-testing harness"};
  app.require_subcommand(1);

  GenOptions gen_options;
  auto* gen = app.add_subcommand("gen", "generate a synthetic timeseries CSV from a spec JSON");
  gen->add_option("--spec", gen_options.spec_path, "synthetic spec JSON")->required();
  gen->add_option("--seed", gen_options.seed, "noise seed");
  gen->add_option("--out", gen_options.out, "output CSV path, or - for stdout");

  AnalyzeOptions analyze_options;
  auto* analyze_cmd = app.add_subcommand("analyze", "fit constituents to a timeseries CSV");
  analyze_cmd->add_option("--in", analyze_options.in_path, "input CSV")->required();
  analyze_cmd->add_option("--constituents", analyze_options.constituents,
                          "constituent names, e.g. M2,S2")
      ->delimiter(',');
  analyze_cmd->add_flag("--trend,!--no-trend", analyze_options.trend, "include a linear trend");
  analyze_cmd->add_option("--min-conditioning", analyze_options.min_conditioning,
                          "reciprocal condition number floor");
  analyze_cmd->add_flag("!--no-rayleigh-check", analyze_options.rayleigh,
                        "disable the Rayleigh proximity warning");
  analyze_cmd->add_option("--out", analyze_options.out, "solution JSON path, or - for stdout");

  PredictOptions predict_options;
  auto* predict_cmd = app.add_subcommand("predict", "evaluate a solution JSON on a time grid");
  predict_cmd->add_option("--solution", predict_options.solution_path, "solution JSON")
      ->required();
  predict_cmd->add_option("--start", predict_options.start, "first time in hours");
  predict_cmd->add_option("--step", predict_options.step, "grid step in hours");
  predict_cmd->add_option("--count", predict_options.count, "number of samples");
  predict_cmd->add_option("--out", predict_options.out, "output CSV path, or - for stdout");

  MtRunOptions mt_options;
  auto* mt_run = app.add_subcommand("mt-run", "run the metamorphic-relation campaign");
  add_campaign_options(mt_run, mt_options);
  add_engine_options(mt_run, mt_options.engine);

  auto* mutants = app.add_subcommand("mutants", "mutation lab");
  mutants->require_subcommand(1);
  std::string mutants_list_format = "table";
  auto* mutants_list = mutants->add_subcommand("list", "print the mutant catalog");
  mutants_list->add_option("--format", mutants_list_format, "stdout rendering")
      ->check(CLI::IsMember({"json", "table"}));
  MutantsRunOptions mutants_options;
  auto* mutants_run =
      mutants->add_subcommand("run", "equivalence-filter the catalog and score each MR");
  add_campaign_options(mutants_run, mutants_options.campaign);
  mutants_run->add_option("--probes", mutants_options.probes,
                          "random probes for the equivalence filter");
  mutants_run->add_flag("--crash-kills", mutants_options.crash_kills,
                        "count engine crashes as kills");

  ReportOptions report_options;
  auto* report_cmd = app.add_subcommand("report", "render a report JSON");
  report_cmd->add_option("--in", report_options.in_path, "report JSON path")->required();
  report_cmd->add_option("--format", report_options.format, "rendering")
      ->check(CLI::IsMember({"json", "table"}));

  std::string serve_mutant;
  auto* serve = app.add_subcommand(
      "engine-serve", "answer line-protocol analyze/predict requests on stdin/stdout");
  serve->add_option("--mutant", serve_mutant, "activate a catalog mutant in the served engine");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) return run_gen(gen_options);
    if (*analyze_cmd) return run_analyze(analyze_options);
    if (*predict_cmd) return run_predict(predict_options);
    if (*mt_run) return run_mt(mt_options);
    if (*mutants_list) return run_mutants_list(mutants_list_format);
    if (*mutants_run) return run_mutants_run(mutants_options);
    if (*report_cmd) return run_report(report_options);
    if (*serve) return run_engine_serve(serve_mutant);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const io::json::exception& e) {
    std::cerr << "error: malformed JSON input: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace tap::cli
