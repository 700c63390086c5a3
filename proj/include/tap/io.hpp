/**
 * @file io.hpp
 * @brief File formats and wire encodings: timeseries CSV, spec/solution/
 *        report JSON documents, line-protocol messages and text tables.
 *
 * All emitters are deterministic: fixed key order, shortest round-trip
 * number formatting, LF line endings.
 */
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "tap/metamorphic.hpp"
#include "tap/mutation.hpp"
#include "tap/signal.hpp"
#include "tap/types.hpp"

namespace tap::io {

using json = nlohmann::ordered_json;

// --- timeseries CSV (header: time_hours,elevation_m) ---

TimeSeries read_timeseries_csv(std::istream& in);
TimeSeries read_timeseries_csv_file(const std::string& path);
void write_timeseries_csv(const TimeSeries& series, std::ostream& out);
void write_timeseries_csv_file(const TimeSeries& series, const std::string& path);

// --- synthetic spec JSON ---

json spec_to_json(const SyntheticSpec& spec);
SyntheticSpec spec_from_json(const json& doc);

// --- solution JSON ---

json solution_to_json(const TidalSolution& solution);
TidalSolution solution_from_json(const json& doc);

// --- campaign report JSON + table ---

json campaign_report_to_json(const mt::CampaignReport& report);
mt::CampaignReport campaign_report_from_json(const json& doc);
std::string campaign_report_table(const mt::CampaignReport& report);

// --- mutation report JSON + table ---

json mutation_report_to_json(const mut::MutationReport& report);
mut::MutationReport mutation_report_from_json(const json& doc);
std::string mutation_report_table(const mut::MutationReport& report);

// --- mutant catalog ---

json mutant_catalog_to_json(const std::vector<mut::MutantRecord>& mutants);
std::string mutant_catalog_table(const std::vector<mut::MutantRecord>& mutants);

// --- engine line protocol ---
//
// One JSON document per line. Requests:
//   {"mode":"analyze","times":[...],"elevations":[...],
//    "constituents":[{"name":"M2","frequency":0.5}],"trend":true}
//   {"mode":"predict","times":[...],"a0":0.1,"a1":0.0,
//    "constituents":[{"name":"M2","frequency":0.5,"amplitude":1.2,
//                     "phase_deg":40.0}]}
// Responses:
//   {"a0":0.1,"a1":0.0,"constituents":[{"name":"M2","amplitude":1.2,
//    "phase_deg":40.0}]}
//   {"elevations":[...]}
//   {"error":"message"}

struct ProtocolRequest {
  enum class Mode { analyze, predict };
  Mode mode = Mode::analyze;
  // analyze
  TimeSeries series;
  ConstituentSet constituents;
  bool trend = true;
  // predict
  TidalSolution solution;
  std::vector<double> times;
};

std::string encode_analyze_request(const TimeSeries& series, const ConstituentSet& constituents,
                                   bool trend);
std::string encode_predict_request(const TidalSolution& solution,
                                   const std::vector<double>& times);

/// Parses one request line (server side). Throws ProtocolError.
ProtocolRequest parse_request(const std::string& line);

std::string encode_analyze_response(const TidalSolution& solution);
std::string encode_predict_response(const TimeSeries& series);
std::string encode_error_response(const std::string& message);

/// Parses an analyze response (adapter side); the request's constituent set
/// supplies the frequencies. Throws ProtocolError on malformed input and
/// EngineFailureError when the engine reported an error.
TidalSolution parse_analyze_response(const std::string& line, const ConstituentSet& constituents);

/// Parses a predict response against the requested times.
TimeSeries parse_predict_response(const std::string& line, const std::vector<double>& times);

}  // namespace tap::io
