/**
 * @file mutation.hpp
 * @brief Runtime mutation lab: seeded fault catalog, equivalence filtering
 *        and per-MR mutation scoring.
 *
 * Mutants are named fault points compiled into the analysis core; each is
 * bit-inert while inactive, and an engine instance activates exactly one.
 */
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tap/engine.hpp"
#include "tap/metamorphic.hpp"
#include "tap/rng.hpp"

namespace tap::mut {

enum class MutationCategory {
  array_index,
  condition_if,
  logic_comparison,
  logic_value,
  math_operator,
};

std::string to_string(MutationCategory category);
const std::vector<MutationCategory>& all_categories();

/// One seeded fault: id, operator category, fault point and the
/// original-vs-mutated behavior.
struct MutantRecord {
  std::string id;  // fault site name; unique
  MutationCategory category = MutationCategory::math_operator;
  FaultSite site = FaultSite::none;
  std::string location;     // where in the core the fault point sits
  std::string description;  // original -> mutated behavior
};

/// The built-in catalog.
const std::vector<MutantRecord>& list_mutants();

/// Looks a mutant up by id; throws CatalogMissError when absent.
const MutantRecord& find_mutant(const std::string& id);

/// Engine variant with exactly the named fault active.
std::unique_ptr<Engine> with_mutant(const std::string& id);

/// Outcome of the equivalence filter.
struct FilterResult {
  std::vector<MutantRecord> survivors;
  std::vector<MutantRecord> equivalents;
};

/// Runs each mutant and the reference on `n_probes` random cases
/// (alternating trend configurations, analysis plus prediction mode) and
/// removes mutants whose outputs match the reference within 1e-12 on every
/// probe. A mutant crash counts as a difference.
FilterResult filter_equivalents(const std::vector<MutantRecord>& mutants, int n_probes, Seed seed);

/// Kill counts per mutant and MR over a campaign.
struct KillMatrix {
  struct Row {
    MutantRecord mutant;
    std::map<mt::MRId, long> kills;   // violated verdicts over n_cases
    long crash_cases = 0;             // cases with any engine failure
    bool killed = false;              // by any MR
    double max_ne_residual_rel = 0.0; // fit certificate over the mutant's campaign
  };
  std::vector<Row> rows;
  long n_cases = 0;
};

/// Mutation score per MR: MS = M_K / M_N * 100%.
struct MutationScore {
  std::map<mt::MRId, double> score_percent;
  std::map<mt::MRId, long> killed_mutants;  // M_K per MR
  long non_equivalent = 0;                  // M_N
};

struct MutationConfig {
  mt::CampaignConfig campaign{};
  int n_probes = 20;
  // The kill criterion is an MR violation; crashes are recorded separately
  // and count as kills only when this is set.
  bool crash_counts_as_kill = false;
};

struct MutationReport {
  MutationConfig config{};
  FilterResult filter;
  KillMatrix matrix;
  MutationScore scores;
};

/// Filters the catalog, then runs the MR campaign with every surviving
/// mutant as the system under test (source and follow-up cases both run on
/// the mutant engine) and scores each MR.
MutationReport mutation_campaign(const std::vector<MutantRecord>& mutants,
                                 const MutationConfig& config);

}  // namespace tap::mut
