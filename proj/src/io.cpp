#include "tap/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "tap/errors.hpp"

namespace tap::io {

namespace {

constexpr const char* kCsvHeader = "time_hours,elevation_m";

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

double parse_double_field(const std::string& field, long line, const char* what) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || end != begin + field.size()) {
    throw ParseError(line, std::string(what) + ": cannot parse \"" + field + "\" as a number");
  }
  return value;
}

}  // namespace

TimeSeries read_timeseries_csv(std::istream& in) {
  TimeSeries series;
  std::string line;
  long line_no = 0;

  if (!std::getline(in, line)) {
    throw ParseError(1, "empty input, expected header \"" + std::string(kCsvHeader) + "\"");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) {
    throw ParseError(line_no, "expected header \"" + std::string(kCsvHeader) + "\", got \"" +
                                  line + "\"");
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError(line_no, "expected \"time,elevation\", got \"" + line + "\"");
    }
    const double t = parse_double_field(line.substr(0, comma), line_no, "time");
    const double y = parse_double_field(line.substr(comma + 1), line_no, "elevation");
    if (!std::isfinite(t) || !std::isfinite(y)) {
      throw ParseError(line_no, "non-finite sample");
    }
    if (!series.times.empty() && t < series.times.back()) {
      throw ParseError(line_no, "non-monotonic time " + format_double(t) + " after " +
                                    format_double(series.times.back()));
    }
    series.times.push_back(t);
    series.elevations.push_back(y);
  }
  if (series.times.empty()) {
    throw ParseError(line_no, "no samples: at least one data line is required");
  }
  return series;
}

TimeSeries read_timeseries_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path + " for reading");
  return read_timeseries_csv(in);
}

void write_timeseries_csv(const TimeSeries& series, std::ostream& out) {
  series.validate();
  out << kCsvHeader << '\n';
  for (std::size_t j = 0; j < series.size(); ++j) {
    out << format_double(series.times[j]) << ',' << format_double(series.elevations[j]) << '\n';
  }
}

void write_timeseries_csv_file(const TimeSeries& series, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot open " + path + " for writing");
  write_timeseries_csv(series, out);
}

// --- synthetic spec JSON ---

json spec_to_json(const SyntheticSpec& spec) {
  json constituents = json::array();
  for (const auto& c : spec.constituents) {
    constituents.push_back({{"name", c.constituent.name},
                            {"frequency", c.constituent.frequency},
                            {"amplitude", c.amplitude},
                            {"phase", c.phase_deg}});
  }
  return json{{"constituents", std::move(constituents)},
              {"intercept", spec.intercept},
              {"trend", spec.trend},
              {"noise_std", spec.noise_std},
              {"start", spec.start},
              {"step", spec.step},
              {"count", spec.count}};
}

SyntheticSpec spec_from_json(const json& doc) {
  try {
    SyntheticSpec spec;
    for (const auto& c : doc.at("constituents")) {
      SyntheticComponent component;
      component.constituent.name = c.at("name").get<std::string>();
      component.constituent.frequency = c.at("frequency").get<double>();
      component.amplitude = c.at("amplitude").get<double>();
      component.phase_deg = c.at("phase").get<double>();
      spec.constituents.push_back(std::move(component));
    }
    spec.intercept = doc.at("intercept").get<double>();
    spec.trend = doc.at("trend").get<double>();
    spec.noise_std = doc.at("noise_std").get<double>();
    spec.start = doc.at("start").get<double>();
    spec.step = doc.at("step").get<double>();
    spec.count = doc.at("count").get<long>();
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("synthetic spec JSON: ") + e.what());
  }
}

// --- solution JSON ---

json solution_to_json(const TidalSolution& solution) {
  json constituents = json::array();
  for (const auto& c : solution.components) {
    constituents.push_back({{"name", c.constituent.name},
                            {"frequency", c.constituent.frequency},
                            {"amplitude", c.amplitude},
                            {"phase_deg", c.phase_deg}});
  }
  return json{{"a0", solution.a0},
              {"a1", solution.a1},
              {"constituents", std::move(constituents)},
              {"warnings", solution.warnings},
              {"ne_residual_rel", solution.ne_residual_rel},
              {"rcond", solution.rcond}};
}

TidalSolution solution_from_json(const json& doc) {
  try {
    TidalSolution solution;
    solution.a0 = doc.at("a0").get<double>();
    solution.a1 = doc.at("a1").get<double>();
    for (const auto& c : doc.at("constituents")) {
      TidalComponent component;
      component.constituent.name = c.at("name").get<std::string>();
      component.constituent.frequency = c.at("frequency").get<double>();
      component.amplitude = c.at("amplitude").get<double>();
      component.phase_deg = c.at("phase_deg").get<double>();
      solution.components.push_back(std::move(component));
    }
    if (doc.contains("warnings")) {
      solution.warnings = doc.at("warnings").get<std::vector<std::string>>();
    }
    if (doc.contains("ne_residual_rel")) {
      solution.ne_residual_rel = doc.at("ne_residual_rel").get<double>();
    }
    if (doc.contains("rcond")) solution.rcond = doc.at("rcond").get<double>();
    return solution;
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("solution JSON: ") + e.what());
  }
}

// --- campaign report JSON ---

namespace {

json tolerance_to_json(const mt::Tolerance& tol) {
  return json{{"metres", tol.metres},
              {"metres_per_hour", tol.metres_per_hour},
              {"degrees", tol.degrees}};
}

mt::Tolerance tolerance_from_json(const json& doc) {
  mt::Tolerance tol;
  tol.metres = doc.at("metres").get<double>();
  tol.metres_per_hour = doc.at("metres_per_hour").get<double>();
  tol.degrees = doc.at("degrees").get<double>();
  return tol;
}

json verdict_to_json(const mt::MRVerdict& verdict) {
  json deltas = json::array();
  for (const auto& d : verdict.deltas) {
    deltas.push_back({{"quantity", d.quantity},
                      {"expected", d.expected},
                      {"actual", d.actual},
                      {"delta", d.delta},
                      {"tolerance", d.tolerance},
                      {"pass", d.pass}});
  }
  return json{{"status", mt::to_string(verdict.status)},
              {"stage", mt::to_string(verdict.stage)},
              {"note", verdict.note},
              {"deltas", std::move(deltas)}};
}

mt::VerdictStatus status_from_string(const std::string& text) {
  if (text == "satisfied") return mt::VerdictStatus::satisfied;
  if (text == "violated") return mt::VerdictStatus::violated;
  if (text == "inconclusive") return mt::VerdictStatus::inconclusive;
  throw InvalidInputError("unknown verdict status \"" + text + "\"");
}

mt::VerdictStage stage_from_string(const std::string& text) {
  if (text == "none") return mt::VerdictStage::none;
  if (text == "constituent-set") return mt::VerdictStage::constituent_set;
  if (text == "relation") return mt::VerdictStage::relation;
  throw InvalidInputError("unknown verdict stage \"" + text + "\"");
}

mt::MRVerdict verdict_from_json(const json& doc) {
  mt::MRVerdict verdict;
  verdict.status = status_from_string(doc.at("status").get<std::string>());
  verdict.stage = stage_from_string(doc.at("stage").get<std::string>());
  verdict.note = doc.at("note").get<std::string>();
  for (const auto& d : doc.at("deltas")) {
    mt::QuantityDelta delta;
    delta.quantity = d.at("quantity").get<std::string>();
    delta.expected = d.at("expected").get<double>();
    delta.actual = d.at("actual").get<double>();
    delta.delta = d.at("delta").get<double>();
    delta.tolerance = d.at("tolerance").get<double>();
    delta.pass = d.at("pass").get<bool>();
    verdict.deltas.push_back(std::move(delta));
  }
  return verdict;
}

}  // namespace

json campaign_report_to_json(const mt::CampaignReport& report) {
  json mrs = json::array();
  for (const auto mr : report.mrs) mrs.push_back(mt::to_string(mr));

  json totals = json::object();
  for (const auto& [mr, tally] : report.totals) {
    totals[mt::to_string(mr)] = {{"satisfied", tally.satisfied},
                                 {"violated", tally.violated},
                                 {"inconclusive", tally.inconclusive},
                                 {"skipped", tally.skipped},
                                 {"crashes", tally.crashes}};
  }

  json cases = json::array();
  for (const auto& outcome : report.cases) {
    json verdicts = json::object();
    for (const auto& [mr, verdict] : outcome.verdicts) {
      verdicts[mt::to_string(mr)] = verdict_to_json(verdict);
    }
    json skipped = json::object();
    for (const auto& [mr, reason] : outcome.skipped) {
      skipped[mt::to_string(mr)] = reason;
    }
    cases.push_back({{"case", outcome.index},
                     {"spec", spec_to_json(outcome.spec)},
                     {"verdicts", std::move(verdicts)},
                     {"skipped", std::move(skipped)},
                     {"max_ne_residual_rel", outcome.max_ne_residual_rel}});
  }

  return json{{"kind", "mt-campaign"},
              {"master_seed", report.master_seed.value},
              {"n_cases", report.n_cases},
              {"tolerance", tolerance_to_json(report.tolerance)},
              {"mrs", std::move(mrs)},
              {"engine", report.engine_name},
              {"totals", std::move(totals)},
              {"max_ne_residual_rel", report.max_ne_residual_rel},
              {"source_failures", report.source_failures},
              {"cases", std::move(cases)}};
}

mt::CampaignReport campaign_report_from_json(const json& doc) {
  try {
    mt::CampaignReport report;
    report.master_seed.value = doc.at("master_seed").get<std::uint64_t>();
    report.n_cases = doc.at("n_cases").get<long>();
    report.tolerance = tolerance_from_json(doc.at("tolerance"));
    for (const auto& mr : doc.at("mrs")) report.mrs.push_back(mt::parse_mr(mr.get<std::string>()));
    report.engine_name = doc.at("engine").get<std::string>();
    for (const auto& [key, value] : doc.at("totals").items()) {
      mt::MrTally tally;
      tally.satisfied = value.at("satisfied").get<long>();
      tally.violated = value.at("violated").get<long>();
      tally.inconclusive = value.at("inconclusive").get<long>();
      tally.skipped = value.at("skipped").get<long>();
      tally.crashes = value.at("crashes").get<long>();
      report.totals[mt::parse_mr(key)] = tally;
    }
    report.max_ne_residual_rel = doc.at("max_ne_residual_rel").get<double>();
    report.source_failures = doc.at("source_failures").get<long>();
    for (const auto& c : doc.at("cases")) {
      mt::CaseOutcome outcome;
      outcome.index = c.at("case").get<long>();
      outcome.spec = spec_from_json(c.at("spec"));
      for (const auto& [key, value] : c.at("verdicts").items()) {
        outcome.verdicts[mt::parse_mr(key)] = verdict_from_json(value);
      }
      for (const auto& [key, value] : c.at("skipped").items()) {
        outcome.skipped[mt::parse_mr(key)] = value.get<std::string>();
      }
      outcome.max_ne_residual_rel = c.at("max_ne_residual_rel").get<double>();
      report.cases.push_back(std::move(outcome));
    }
    return report;
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("campaign report JSON: ") + e.what());
  }
}

std::string campaign_report_table(const mt::CampaignReport& report) {
  std::ostringstream out;
  out << "campaign: engine=" << report.engine_name << " seed=" << report.master_seed.value
      << " cases=" << report.n_cases << " tolerance=" << report.tolerance.metres << "\n";
  out << std::left << std::setw(6) << "MR" << std::right << std::setw(11) << "satisfied"
      << std::setw(10) << "violated" << std::setw(14) << "inconclusive" << std::setw(9)
      << "skipped" << std::setw(9) << "crashes" << "\n";
  for (const auto& [mr, tally] : report.totals) {
    out << std::left << std::setw(6) << mt::to_string(mr) << std::right << std::setw(11)
        << tally.satisfied << std::setw(10) << tally.violated << std::setw(14)
        << tally.inconclusive << std::setw(9) << tally.skipped << std::setw(9) << tally.crashes
        << "\n";
  }
  out << "violations total: " << report.violations_total()
      << "  source failures: " << report.source_failures << "\n";
  return out.str();
}

// --- mutation report JSON ---

namespace {

json mutant_record_to_json(const mut::MutantRecord& record) {
  return json{{"id", record.id},
              {"category", mut::to_string(record.category)},
              {"location", record.location},
              {"description", record.description}};
}

mut::MutationCategory category_from_string(const std::string& text) {
  for (const auto category : mut::all_categories()) {
    if (mut::to_string(category) == text) return category;
  }
  throw InvalidInputError("unknown mutation category \"" + text + "\"");
}

mut::MutantRecord mutant_record_from_json(const json& doc) {
  mut::MutantRecord record;
  record.id = doc.at("id").get<std::string>();
  record.category = category_from_string(doc.at("category").get<std::string>());
  record.location = doc.at("location").get<std::string>();
  record.description = doc.at("description").get<std::string>();
  // The runtime fault site is recoverable from the catalog when present.
  for (const auto& known : mut::list_mutants()) {
    if (known.id == record.id) record.site = known.site;
  }
  return record;
}

}  // namespace

json mutation_report_to_json(const mut::MutationReport& report) {
  json mrs = json::array();
  for (const auto mr : report.config.campaign.mrs) mrs.push_back(mt::to_string(mr));

  json equivalents = json::array();
  for (const auto& record : report.filter.equivalents) {
    equivalents.push_back(mutant_record_to_json(record));
  }

  json mutants = json::array();
  for (const auto& row : report.matrix.rows) {
    json kills = json::object();
    for (const auto& [mr, count] : row.kills) kills[mt::to_string(mr)] = count;
    json entry = mutant_record_to_json(row.mutant);
    entry["kills"] = std::move(kills);
    entry["crash_cases"] = row.crash_cases;
    entry["killed"] = row.killed;
    entry["max_ne_residual_rel"] = row.max_ne_residual_rel;
    mutants.push_back(std::move(entry));
  }

  json scores = json::object();
  for (const auto& [mr, percent] : report.scores.score_percent) {
    scores[mt::to_string(mr)] = {{"killed_mutants", report.scores.killed_mutants.at(mr)},
                                 {"score_percent", percent}};
  }

  return json{{"kind", "mutation-campaign"},
              {"master_seed", report.config.campaign.master_seed.value},
              {"n_cases", report.config.campaign.n_cases},
              {"n_probes", report.config.n_probes},
              {"crash_counts_as_kill", report.config.crash_counts_as_kill},
              {"tolerance", tolerance_to_json(report.config.campaign.tolerance)},
              {"mrs", std::move(mrs)},
              {"non_equivalent", report.scores.non_equivalent},
              {"equivalents", std::move(equivalents)},
              {"mutants", std::move(mutants)},
              {"scores", std::move(scores)}};
}

mut::MutationReport mutation_report_from_json(const json& doc) {
  try {
    mut::MutationReport report;
    report.config.campaign.master_seed.value = doc.at("master_seed").get<std::uint64_t>();
    report.config.campaign.n_cases = doc.at("n_cases").get<long>();
    report.config.n_probes = doc.at("n_probes").get<int>();
    report.config.crash_counts_as_kill = doc.at("crash_counts_as_kill").get<bool>();
    report.config.campaign.tolerance = tolerance_from_json(doc.at("tolerance"));
    report.config.campaign.mrs.clear();
    for (const auto& mr : doc.at("mrs")) {
      report.config.campaign.mrs.push_back(mt::parse_mr(mr.get<std::string>()));
    }
    report.scores.non_equivalent = doc.at("non_equivalent").get<long>();
    for (const auto& record : doc.at("equivalents")) {
      report.filter.equivalents.push_back(mutant_record_from_json(record));
    }
    report.matrix.n_cases = report.config.campaign.n_cases;
    for (const auto& entry : doc.at("mutants")) {
      mut::KillMatrix::Row row;
      row.mutant = mutant_record_from_json(entry);
      for (const auto& [key, value] : entry.at("kills").items()) {
        row.kills[mt::parse_mr(key)] = value.get<long>();
      }
      row.crash_cases = entry.at("crash_cases").get<long>();
      row.killed = entry.at("killed").get<bool>();
      row.max_ne_residual_rel = entry.at("max_ne_residual_rel").get<double>();
      report.filter.survivors.push_back(row.mutant);
      report.matrix.rows.push_back(std::move(row));
    }
    for (const auto& [key, value] : doc.at("scores").items()) {
      const mt::MRId mr = mt::parse_mr(key);
      report.scores.killed_mutants[mr] = value.at("killed_mutants").get<long>();
      report.scores.score_percent[mr] = value.at("score_percent").get<double>();
    }
    return report;
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("mutation report JSON: ") + e.what());
  }
}

std::string mutation_report_table(const mut::MutationReport& report) {
  std::ostringstream out;
  out << "mutation lab: seed=" << report.config.campaign.master_seed.value
      << " cases=" << report.config.campaign.n_cases << " probes=" << report.config.n_probes
      << " non-equivalent=" << report.scores.non_equivalent << "\n";

  out << std::left << std::setw(26) << "mutant" << std::setw(18) << "category";
  for (const auto mr : report.config.campaign.mrs) {
    out << std::right << std::setw(6) << mt::to_string(mr);
  }
  out << std::right << std::setw(9) << "crashes" << "\n";

  for (const auto& row : report.matrix.rows) {
    out << std::left << std::setw(26) << row.mutant.id << std::setw(18)
        << mut::to_string(row.mutant.category);
    for (const auto mr : report.config.campaign.mrs) {
      const auto it = row.kills.find(mr);
      out << std::right << std::setw(6) << (it == row.kills.end() ? 0 : it->second);
    }
    out << std::right << std::setw(9) << row.crash_cases << "\n";
  }

  out << std::left << std::setw(44) << "mutation score MS (%)";
  for (const auto mr : report.config.campaign.mrs) {
    std::ostringstream cell;
    cell << std::fixed << std::setprecision(0)
         << report.scores.score_percent.at(mr);
    out << std::right << std::setw(6) << cell.str();
  }
  out << "\n";
  if (!report.filter.equivalents.empty()) {
    out << "filtered as equivalent:";
    for (const auto& record : report.filter.equivalents) out << " " << record.id;
    out << "\n";
  }
  return out.str();
}

json mutant_catalog_to_json(const std::vector<mut::MutantRecord>& mutants) {
  json out = json::array();
  for (const auto& record : mutants) out.push_back(mutant_record_to_json(record));
  return out;
}

std::string mutant_catalog_table(const std::vector<mut::MutantRecord>& mutants) {
  std::ostringstream out;
  out << std::left << std::setw(26) << "id" << std::setw(18) << "category" << std::setw(36)
      << "location" << "description" << "\n";
  for (const auto& record : mutants) {
    out << std::left << std::setw(26) << record.id << std::setw(18)
        << mut::to_string(record.category) << std::setw(36) << record.location
        << record.description << "\n";
  }
  return out.str();
}

// --- engine line protocol ---

std::string encode_analyze_request(const TimeSeries& series, const ConstituentSet& constituents,
                                   bool trend) {
  json members = json::array();
  for (const auto& c : constituents.members) {
    members.push_back({{"name", c.name}, {"frequency", c.frequency}});
  }
  const json doc{{"mode", "analyze"},
                 {"times", series.times},
                 {"elevations", series.elevations},
                 {"constituents", std::move(members)},
                 {"trend", trend}};
  return doc.dump();
}

std::string encode_predict_request(const TidalSolution& solution,
                                   const std::vector<double>& times) {
  json members = json::array();
  for (const auto& c : solution.components) {
    members.push_back({{"name", c.constituent.name},
                       {"frequency", c.constituent.frequency},
                       {"amplitude", c.amplitude},
                       {"phase_deg", c.phase_deg}});
  }
  const json doc{{"mode", "predict"},
                 {"times", times},
                 {"a0", solution.a0},
                 {"a1", solution.a1},
                 {"constituents", std::move(members)}};
  return doc.dump();
}

ProtocolRequest parse_request(const std::string& line) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed request line: ") + e.what());
  }
  try {
    ProtocolRequest request;
    const auto mode = doc.at("mode").get<std::string>();
    if (mode == "analyze") {
      request.mode = ProtocolRequest::Mode::analyze;
      request.series.times = doc.at("times").get<std::vector<double>>();
      request.series.elevations = doc.at("elevations").get<std::vector<double>>();
      std::vector<Constituent> members;
      for (const auto& c : doc.at("constituents")) {
        members.push_back(
            Constituent{c.at("name").get<std::string>(), c.at("frequency").get<double>()});
      }
      request.constituents = ConstituentSet::of(std::move(members));
      request.trend = doc.at("trend").get<bool>();
    } else if (mode == "predict") {
      request.mode = ProtocolRequest::Mode::predict;
      request.times = doc.at("times").get<std::vector<double>>();
      request.solution.a0 = doc.at("a0").get<double>();
      request.solution.a1 = doc.at("a1").get<double>();
      for (const auto& c : doc.at("constituents")) {
        TidalComponent component;
        component.constituent.name = c.at("name").get<std::string>();
        component.constituent.frequency = c.at("frequency").get<double>();
        component.amplitude = c.at("amplitude").get<double>();
        component.phase_deg = c.at("phase_deg").get<double>();
        request.solution.components.push_back(std::move(component));
      }
    } else {
      throw ProtocolError("unknown request mode \"" + mode + "\"");
    }
    return request;
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed request fields: ") + e.what());
  }
}

std::string encode_analyze_response(const TidalSolution& solution) {
  json members = json::array();
  for (const auto& c : solution.components) {
    members.push_back({{"name", c.constituent.name},
                       {"amplitude", c.amplitude},
                       {"phase_deg", c.phase_deg}});
  }
  const json doc{{"a0", solution.a0}, {"a1", solution.a1}, {"constituents", std::move(members)}};
  return doc.dump();
}

std::string encode_predict_response(const TimeSeries& series) {
  const json doc{{"elevations", series.elevations}};
  return doc.dump();
}

std::string encode_error_response(const std::string& message) {
  const json doc{{"error", message}};
  return doc.dump();
}

TidalSolution parse_analyze_response(const std::string& line,
                                     const ConstituentSet& constituents) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::exception& e) {
    throw ProtocolError("engine response is not valid JSON (line 1): " + std::string(e.what()) +
                        "; offending line: " + line);
  }
  if (doc.contains("error")) {
    throw EngineFailureError("engine reported: " + doc.at("error").get<std::string>());
  }
  try {
    TidalSolution solution;
    solution.a0 = doc.at("a0").get<double>();
    solution.a1 = doc.at("a1").get<double>();
    for (const auto& c : doc.at("constituents")) {
      TidalComponent component;
      const auto name = c.at("name").get<std::string>();
      const auto it = std::find_if(constituents.members.begin(), constituents.members.end(),
                                   [&](const Constituent& m) { return m.name == name; });
      component.constituent =
          it != constituents.members.end() ? *it : Constituent{name, 0.0};
      component.amplitude = c.at("amplitude").get<double>();
      component.phase_deg = c.at("phase_deg").get<double>();
      solution.components.push_back(std::move(component));
    }
    return solution;
  } catch (const json::exception& e) {
    throw ProtocolError("malformed analyze response: " + std::string(e.what()) +
                        "; offending line: " + line);
  }
}

TimeSeries parse_predict_response(const std::string& line, const std::vector<double>& times) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::exception& e) {
    throw ProtocolError("engine response is not valid JSON (line 1): " + std::string(e.what()) +
                        "; offending line: " + line);
  }
  if (doc.contains("error")) {
    throw EngineFailureError("engine reported: " + doc.at("error").get<std::string>());
  }
  try {
    TimeSeries series;
    series.times = times;
    series.elevations = doc.at("elevations").get<std::vector<double>>();
    if (series.elevations.size() != times.size()) {
      throw ProtocolError("predict response length " + std::to_string(series.elevations.size()) +
                          " does not match requested " + std::to_string(times.size()));
    }
    return series;
  } catch (const json::exception& e) {
    throw ProtocolError("malformed predict response: " + std::string(e.what()) +
                        "; offending line: " + line);
  }
}

}  // namespace tap::io
