#include "tap/mutation.hpp"

#include <algorithm>
#include <cmath>

#include "tap/errors.hpp"
#include "tap/signal.hpp"

namespace tap::mut {

std::string to_string(MutationCategory category) {
  switch (category) {
    case MutationCategory::array_index: return "array_index";
    case MutationCategory::condition_if: return "condition_if";
    case MutationCategory::logic_comparison: return "logic_comparison";
    case MutationCategory::logic_value: return "logic_value";
    case MutationCategory::math_operator: return "math_operator";
  }
  return "unknown";
}

const std::vector<MutationCategory>& all_categories() {
  static const std::vector<MutationCategory> categories{
      MutationCategory::array_index, MutationCategory::condition_if,
      MutationCategory::logic_comparison, MutationCategory::logic_value,
      MutationCategory::math_operator};
  return categories;
}

const std::vector<MutantRecord>& list_mutants() {
  using C = MutationCategory;
  static const std::vector<MutantRecord> catalog{
      // array_index
      {"dm_sin_col_lag", C::array_index, FaultSite::dm_sin_col_lag,
       "design matrix: sine column",
       "sin(sigma*t[j]) -> sin(sigma*t[j-1]) (clamped at the first row)"},
      {"dm_drop_last_row", C::array_index, FaultSite::dm_drop_last_row,
       "design matrix: row loop bound",
       "rows 0..M-1 filled -> last row left as zeros"},
      {"y_read_lag", C::array_index, FaultSite::y_read_lag,
       "fit: observation vector",
       "y[j] -> y[j+1] (clamped at the last sample)"},
      {"sol_a0_from_wrong_index", C::array_index, FaultSite::sol_a0_from_wrong_index,
       "fit: intercept extraction",
       "a0 = beta[0] -> a0 = beta[1]"},
      {"notrend_b_from_a0", C::array_index, FaultSite::notrend_b_from_a0,
       "fit: no-trend coefficient slice",
       "no-trend path: B1 = beta[1] -> B1 = beta[0]"},

      // condition_if
      {"dm_trend_forced_on", C::condition_if, FaultSite::dm_trend_forced_on,
       "analysis: trend branch",
       "if (include_trend) -> if (true)"},
      {"dm_trend_forced_off", C::condition_if, FaultSite::dm_trend_forced_off,
       "analysis: trend branch",
       "if (include_trend) -> if (false)"},
      {"cond_check_disabled", C::condition_if, FaultSite::cond_check_disabled,
       "fit: conditioning guard",
       "if (rcond < floor) throw -> if (false)"},
      {"predict_trend_skipped", C::condition_if, FaultSite::predict_trend_skipped,
       "prediction: trend term",
       "y += a1*t -> term skipped"},
      {"phase_wrap_skipped", C::condition_if, FaultSite::phase_wrap_skipped,
       "conversion: phase normalization",
       "normalize to [0, 360) -> left as raw atan2 degrees"},

      // logic_comparison
      {"dof_check_strict", C::logic_comparison, FaultSite::dof_check_strict,
       "fit: degrees-of-freedom guard",
       "M >= P -> M > P"},
      {"cond_check_le", C::logic_comparison, FaultSite::cond_check_le,
       "fit: conditioning guard",
       "rcond < floor -> rcond <= floor"},
      {"cond_check_gt", C::logic_comparison, FaultSite::cond_check_gt,
       "fit: conditioning guard",
       "rcond < floor -> rcond > floor"},
      {"phase_norm_flip", C::logic_comparison, FaultSite::phase_norm_flip,
       "conversion: phase normalization",
       "if (deg < 0) deg += 360 -> if (deg > 0) deg += 360"},
      {"rayleigh_cmp_flip", C::logic_comparison, FaultSite::rayleigh_cmp_flip,
       "analysis: Rayleigh proximity warning",
       "separation < 2*pi -> separation > 2*pi"},

      // logic_value
      {"trend_flag_negated", C::logic_value, FaultSite::trend_flag_negated,
       "analysis: configuration read",
       "include_trend -> !include_trend"},
      {"rayleigh_flag_forced", C::logic_value, FaultSite::rayleigh_flag_forced,
       "analysis: configuration read",
       "rayleigh_check -> true"},

      // math_operator
      {"coef_b_plus_c", C::math_operator, FaultSite::coef_b_plus_c,
       "fit: cosine coefficient assembly",
       "B = beta[k] -> B = beta[k] + beta[k+1]"},
      {"coef_b_offset", C::math_operator, FaultSite::coef_b_offset,
       "fit: cosine coefficient assembly",
       "B -> B + 0.1"},
      {"coef_c_negated", C::math_operator, FaultSite::coef_c_negated,
       "fit: sine coefficient assembly",
       "C -> -C"},
      {"sol_amp_sq_sumdiff", C::math_operator, FaultSite::sol_amp_sq_sumdiff,
       "conversion: amplitude",
       "sqrt(B^2 + C^2) -> sqrt(|B^2 - C^2|)"},
      {"sol_phase_atan2_swapped", C::math_operator, FaultSite::sol_phase_atan2_swapped,
       "conversion: phase",
       "atan2(-C, B) -> atan2(B, -C)"},
      {"sol_phase_rad_as_deg", C::math_operator, FaultSite::sol_phase_rad_as_deg,
       "conversion: phase units",
       "phase*180/pi -> phase"},
      {"sol_a1_negated", C::math_operator, FaultSite::sol_a1_negated,
       "fit: trend extraction",
       "a1 -> -a1"},
      {"sol_a1_doubled", C::math_operator, FaultSite::sol_a1_doubled,
       "fit: trend extraction",
       "a1 -> 2*a1"},
      {"sol_a0_abs", C::math_operator, FaultSite::sol_a0_abs,
       "fit: intercept extraction",
       "a0 -> |a0|"},
      {"phase_ref_defect", C::math_operator, FaultSite::phase_ref_defect,
       "analysis: phase referencing",
       "phase referenced to t=0 -> re-referenced against the record's last "
       "timestamp whenever the trend branch runs"},
      {"dm_cos_sign", C::math_operator, FaultSite::dm_cos_sign,
       "design matrix: cosine column",
       "cos(sigma*t) -> -cos(sigma*t)"},
      {"dm_freq_doubled", C::math_operator, FaultSite::dm_freq_doubled,
       "design matrix: constituent frequency",
       "sigma -> 2*sigma"},
      {"predict_phase_sign", C::math_operator, FaultSite::predict_phase_sign,
       "prediction: phase sign",
       "cos(sigma*t + phi) -> cos(sigma*t - phi)"},
  };
  return catalog;
}

const MutantRecord& find_mutant(const std::string& id) {
  for (const auto& record : list_mutants()) {
    if (record.id == id) return record;
  }
  throw CatalogMissError("mutant catalog", id);
}

std::unique_ptr<Engine> with_mutant(const std::string& id) {
  const MutantRecord& record = find_mutant(id);
  return std::make_unique<ReferenceEngine>(FaultState{record.site});
}

namespace {

constexpr double kEquivalenceTolerance = 1e-12;
constexpr std::uint64_t kProbeSpecStream = 0;
constexpr std::uint64_t kProbeNoiseStream = 1;

struct Probe {
  TimeSeries series;
  ConstituentSet constituents;
  FitConfig config;
};

Probe make_probe(Seed seed, int index) {
  Probe probe;
  const SyntheticSpec spec = random_campaign_spec(derive_stream(seed, kProbeSpecStream));
  probe.series = generate(spec, derive_stream(seed, kProbeNoiseStream));
  for (const auto& c : spec.constituents) probe.constituents.members.push_back(c.constituent);
  probe.config = FitConfig{index % 2 == 0};
  return probe;
}

bool solutions_match(const TidalSolution& a, const TidalSolution& b) {
  if (a.components.size() != b.components.size()) return false;
  if (std::fabs(a.a0 - b.a0) > kEquivalenceTolerance) return false;
  if (std::fabs(a.a1 - b.a1) > kEquivalenceTolerance) return false;
  for (std::size_t k = 0; k < a.components.size(); ++k) {
    if (a.components[k].constituent.name != b.components[k].constituent.name) return false;
    if (std::fabs(a.components[k].amplitude - b.components[k].amplitude) > kEquivalenceTolerance)
      return false;
    if (std::fabs(a.components[k].phase_deg - b.components[k].phase_deg) > kEquivalenceTolerance)
      return false;
  }
  return true;
}

bool series_match(const TimeSeries& a, const TimeSeries& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (std::fabs(a.elevations[j] - b.elevations[j]) > kEquivalenceTolerance) return false;
  }
  return true;
}

}  // namespace

FilterResult filter_equivalents(const std::vector<MutantRecord>& mutants, int n_probes,
                                Seed seed) {
  if (n_probes < 1) {
    throw InvalidInputError("filter_equivalents: n_probes must be >= 1");
  }

  const ReferenceEngine reference;

  struct ProbeOutputs {
    Probe probe;
    TidalSolution solution;
    TimeSeries prediction;
  };
  std::vector<ProbeOutputs> reference_runs;
  reference_runs.reserve(static_cast<std::size_t>(n_probes));
  for (int p = 0; p < n_probes; ++p) {
    ProbeOutputs run;
    run.probe = make_probe(derive_stream(seed, static_cast<std::uint64_t>(p)), p);
    run.solution =
        reference.analyze(run.probe.series, run.probe.constituents, run.probe.config);
    run.prediction = reference.predict(run.solution, run.probe.series.times);
    reference_runs.push_back(std::move(run));
  }

  FilterResult result;
  for (const auto& record : mutants) {
    const auto engine = with_mutant(record.id);
    bool differs = false;
    for (const auto& run : reference_runs) {
      try {
        const TidalSolution mutated =
            engine->analyze(run.probe.series, run.probe.constituents, run.probe.config);
        if (!solutions_match(run.solution, mutated)) {
          differs = true;
          break;
        }
        const TimeSeries predicted = engine->predict(run.solution, run.probe.series.times);
        if (!series_match(run.prediction, predicted)) {
          differs = true;
          break;
        }
      } catch (const Error&) {
        differs = true;  // a crash is an observable difference
        break;
      }
    }
    (differs ? result.survivors : result.equivalents).push_back(record);
  }
  return result;
}

MutationReport mutation_campaign(const std::vector<MutantRecord>& mutants,
                                 const MutationConfig& config) {
  if (mutants.empty()) {
    throw InvalidInputError("mutation_campaign: mutant list must not be empty");
  }

  MutationReport report;
  report.config = config;

  // Filter seed derives from the campaign master seed so that kill results
  // and filter decisions share one seed family.
  const Seed filter_seed = derive_stream(config.campaign.master_seed, 0x46494C54ULL);
  report.filter = filter_equivalents(mutants, config.n_probes, filter_seed);

  report.matrix.n_cases = config.campaign.n_cases;
  report.scores.non_equivalent = static_cast<long>(report.filter.survivors.size());
  for (const mt::MRId mr : config.campaign.mrs) {
    report.scores.killed_mutants[mr] = 0;
    report.scores.score_percent[mr] = 0.0;
  }

  for (const auto& record : report.filter.survivors) {
    const auto engine = with_mutant(record.id);
    const mt::CampaignReport campaign = mt::run_campaign(*engine, config.campaign);

    KillMatrix::Row row;
    row.mutant = record;
    row.max_ne_residual_rel = campaign.max_ne_residual_rel;
    for (const auto& [mr, tally] : campaign.totals) {
      long kills = tally.violated;
      if (config.crash_counts_as_kill) kills += tally.crashes + tally.skipped;
      row.kills[mr] = kills;
      if (kills > 0) row.killed = true;
    }
    for (const auto& outcome : campaign.cases) {
      bool crashed = !outcome.skipped.empty();
      for (const auto& [mr, verdict] : outcome.verdicts) {
        crashed = crashed || verdict.status == mt::VerdictStatus::inconclusive;
      }
      if (crashed) ++row.crash_cases;
    }
    report.matrix.rows.push_back(std::move(row));
  }

  for (const mt::MRId mr : config.campaign.mrs) {
    long killed = 0;
    for (const auto& row : report.matrix.rows) {
      const auto it = row.kills.find(mr);
      if (it != row.kills.end() && it->second > 0) ++killed;
    }
    report.scores.killed_mutants[mr] = killed;
    report.scores.score_percent[mr] =
        report.scores.non_equivalent > 0
            ? 100.0 * static_cast<double>(killed) / static_cast<double>(report.scores.non_equivalent)
            : 0.0;
  }
  return report;
}

}  // namespace tap::mut
