/**
 * @file metamorphic.hpp
 * @brief Metamorphic relations MR1-MR7 for tidal analysis engines:
 *        follow-up construction, expected output relations, two-stage
 *        assessment and campaign execution.
 *
 * The relations:
 *   MR1  inserting a predicted point       -> full output equality
 *   MR2  reflecting the sea level          -> a0, a1 negate; amplitude equal (N=1)
 *   MR3  shifting the sea level by h       -> a0 shifts by h, rest equal
 *   MR4  scaling the sea level by gamma>0  -> a0, a1, A_k scale, phases equal
 *   MR5  swapping two samples              -> full output equality
 *   MR6  cancelling the fitted signal      -> A_1 of the follow-up is 0
 *        (single constituent, no trend)
 *   MR7  shifting all times by one period  -> a0' = a0 - 2*pi*a1/sigma_1,
 *        (single constituent, with trend)     rest equal
 */
#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tap/engine.hpp"
#include "tap/rng.hpp"
#include "tap/signal.hpp"
#include "tap/types.hpp"

namespace tap::mt {

enum class MRId : int { MR1 = 1, MR2, MR3, MR4, MR5, MR6, MR7 };

std::string to_string(MRId mr);
MRId parse_mr(const std::string& text);
const std::vector<MRId>& all_mrs();

/// Absolute tolerances per quantity class, in native units.
struct Tolerance {
  double metres = 0.01;          // amplitudes and intercepts
  double metres_per_hour = 0.01; // trend
  double degrees = 0.01;         // phases, compared circularly
};

/// The input triple an engine is run on.
struct EngineInput {
  TimeSeries series;
  ConstituentSet constituents;
  FitConfig config;
};

struct Mr1Params {
  double appended_time = 0.0;
};
struct Mr3Params {
  double shift = 0.0;
};
struct Mr4Params {
  double scale = 1.0;  // > 0
};
struct Mr5Params {
  std::size_t first = 0;
  std::size_t second = 0;
};
struct NoParams {};

using MrParams = std::variant<NoParams, Mr1Params, Mr3Params, Mr4Params, Mr5Params>;

/// A source/follow-up pair under one MR.
struct MRCase {
  MRId mr = MRId::MR1;
  EngineInput source;
  MrParams params;
  EngineInput followup;
};

/// Expected constraints on the follow-up output, derived from the source
/// output. Absent optionals are unconstrained.
struct ExpectedComponent {
  std::string name;
  std::optional<double> amplitude;
  std::optional<double> phase_deg;
};

struct ExpectedRelation {
  std::optional<double> a0;
  std::optional<double> a1;
  std::vector<ExpectedComponent> components;
};

/// Per-quantity comparison outcome.
struct QuantityDelta {
  std::string quantity;
  double expected = 0.0;
  double actual = 0.0;
  double delta = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

enum class VerdictStatus { satisfied, violated, inconclusive };
enum class VerdictStage { none, constituent_set, relation };

struct MRVerdict {
  VerdictStatus status = VerdictStatus::satisfied;
  VerdictStage stage = VerdictStage::none;
  std::vector<QuantityDelta> deltas;
  std::string note;  // failure reason for inconclusive verdicts
};

std::string to_string(VerdictStatus status);
std::string to_string(VerdictStage stage);

/// Options shaping follow-up construction and relation strictness.
struct RelationOptions {
  // The printed MR2 relation constrains only amplitudes; the implied
  // phase shift of 180 degrees is checked only when this is set.
  bool mr2_strict_phase = false;
};

/// Constructs the follow-up input for `mr` from a source input and the
/// engine's output on it. Throws PreconditionError when MR6/MR7 are invoked
/// outside their single-constituent trend configurations.
EngineInput mr_followup(MRId mr, const EngineInput& source, const TidalSolution& source_output,
                        const MrParams& params);

/// Bundles a source input with its MR-transformed follow-up.
MRCase make_mr_case(MRId mr, const EngineInput& source, const TidalSolution& source_output,
                    const MrParams& params);

/// Expected constraint set on the follow-up output.
ExpectedRelation mr_expected_relation(MRId mr, const TidalSolution& source_output,
                                      const MrParams& params, const RelationOptions& options = {});

/// Two-stage assessment: constituent sets first, then per-quantity
/// relations within the tolerance. Phases are compared circularly and
/// skipped when both amplitudes fall below the metre tolerance.
MRVerdict assess(const ExpectedRelation& expected, const TidalSolution& followup_output,
                 const Tolerance& tolerance);

/// How MR1 picks the appended time.
enum class Mr1Offset { next_step, random_inside, random_outside };

struct CampaignConfig {
  std::vector<MRId> mrs = all_mrs();
  long n_cases = 100;
  Seed master_seed{0};
  Tolerance tolerance{};
  int workers = 1;
  RelationOptions relation_options{};
  Mr1Offset mr1_offset = Mr1Offset::next_step;
};

struct MrTally {
  long satisfied = 0;
  long violated = 0;
  long inconclusive = 0;
  long skipped = 0;   // source failure prevented assessment
  long crashes = 0;   // engine failures on follow-up cases
};

struct CaseOutcome {
  long index = 0;
  SyntheticSpec spec;
  std::map<MRId, MRVerdict> verdicts;
  std::map<MRId, std::string> skipped;  // MR -> source failure reason
  double max_ne_residual_rel = 0.0;
};

struct CampaignReport {
  Seed master_seed{0};
  long n_cases = 0;
  Tolerance tolerance{};
  std::vector<MRId> mrs;
  std::string engine_name;
  std::map<MRId, MrTally> totals;
  std::vector<CaseOutcome> cases;
  double max_ne_residual_rel = 0.0;
  long source_failures = 0;

  long violations_total() const;
};

/// Runs the full campaign: draw spec, generate, analyze source, build
/// follow-ups, analyze them, assess. Case i derives all randomness from
/// derive_stream(master_seed, i), so results are independent of worker
/// count and case execution order.
CampaignReport run_campaign(const Engine& engine, const CampaignConfig& config);

}  // namespace tap::mt
