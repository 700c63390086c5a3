#include "tap/metamorphic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "tap/errors.hpp"
#include "tap/harmonic.hpp"

namespace tap::mt {

std::string to_string(MRId mr) { return "MR" + std::to_string(static_cast<int>(mr)); }

MRId parse_mr(const std::string& text) {
  for (const MRId mr : all_mrs()) {
    if (text == to_string(mr)) return mr;
  }
  throw CatalogMissError("metamorphic relation", text);
}

const std::vector<MRId>& all_mrs() {
  static const std::vector<MRId> ids{MRId::MR1, MRId::MR2, MRId::MR3, MRId::MR4,
                                     MRId::MR5, MRId::MR6, MRId::MR7};
  return ids;
}

std::string to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::satisfied: return "satisfied";
    case VerdictStatus::violated: return "violated";
    case VerdictStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string to_string(VerdictStage stage) {
  switch (stage) {
    case VerdictStage::none: return "none";
    case VerdictStage::constituent_set: return "constituent-set";
    case VerdictStage::relation: return "relation";
  }
  return "unknown";
}

namespace {

template <typename T>
const T& params_as(const MrParams& params, MRId mr) {
  const T* p = std::get_if<T>(&params);
  if (p == nullptr) {
    throw InvalidInputError(to_string(mr) + ": transformation parameters of the wrong kind");
  }
  return *p;
}

void require_single_constituent(MRId mr, const EngineInput& source, bool want_trend) {
  if (source.constituents.size() != 1) {
    throw PreconditionError(to_string(mr) + " requires a single-constituent configuration");
  }
  if (source.config.include_trend != want_trend) {
    throw PreconditionError(to_string(mr) + " requires include_trend=" +
                            (want_trend ? std::string("true") : std::string("false")));
  }
}

}  // namespace

EngineInput mr_followup(MRId mr, const EngineInput& source, const TidalSolution& source_output,
                        const MrParams& params) {
  source.series.validate();
  EngineInput followup = source;

  switch (mr) {
    case MRId::MR1: {
      const auto& p = params_as<Mr1Params>(params, mr);
      const TimeSeries point = predict(source_output, {p.appended_time});
      followup.series.times.push_back(p.appended_time);
      followup.series.elevations.push_back(point.elevations.front());
      break;
    }
    case MRId::MR2: {
      for (auto& y : followup.series.elevations) y = -y;
      break;
    }
    case MRId::MR3: {
      const auto& p = params_as<Mr3Params>(params, mr);
      for (auto& y : followup.series.elevations) y += p.shift;
      break;
    }
    case MRId::MR4: {
      const auto& p = params_as<Mr4Params>(params, mr);
      if (!(p.scale > 0.0)) {
        throw InvalidInputError("MR4: scale factor must be positive");
      }
      for (auto& y : followup.series.elevations) y *= p.scale;
      break;
    }
    case MRId::MR5: {
      const auto& p = params_as<Mr5Params>(params, mr);
      const std::size_t m = source.series.size();
      if (p.first >= m || p.second >= m) {
        throw InvalidInputError("MR5: swap indices out of range");
      }
      std::swap(followup.series.times[p.first], followup.series.times[p.second]);
      std::swap(followup.series.elevations[p.first], followup.series.elevations[p.second]);
      break;
    }
    case MRId::MR6: {
      require_single_constituent(mr, source, /*want_trend=*/false);
      TidalSolution oscillation;
      oscillation.a0 = 0.0;
      oscillation.a1 = 0.0;
      oscillation.components = {source_output.components.at(0)};
      const TimeSeries fitted = predict(oscillation, source.series.times);
      for (std::size_t j = 0; j < followup.series.size(); ++j) {
        followup.series.elevations[j] -= fitted.elevations[j];
      }
      break;
    }
    case MRId::MR7: {
      require_single_constituent(mr, source, /*want_trend=*/true);
      const double period = source.constituents.members.at(0).period_hours();
      for (auto& t : followup.series.times) t += period;
      break;
    }
  }
  return followup;
}

MRCase make_mr_case(MRId mr, const EngineInput& source, const TidalSolution& source_output,
                    const MrParams& params) {
  MRCase mr_case;
  mr_case.mr = mr;
  mr_case.source = source;
  mr_case.params = params;
  mr_case.followup = mr_followup(mr, source, source_output, params);
  return mr_case;
}

ExpectedRelation mr_expected_relation(MRId mr, const TidalSolution& source_output,
                                      const MrParams& params, const RelationOptions& options) {
  ExpectedRelation expected;
  const auto& components = source_output.components;
  expected.components.reserve(components.size());
  for (const auto& c : components) {
    expected.components.push_back(ExpectedComponent{c.constituent.name, std::nullopt, std::nullopt});
  }

  switch (mr) {
    case MRId::MR1:
    case MRId::MR5: {
      expected.a0 = source_output.a0;
      expected.a1 = source_output.a1;
      for (std::size_t k = 0; k < components.size(); ++k) {
        expected.components[k].amplitude = components[k].amplitude;
        expected.components[k].phase_deg = components[k].phase_deg;
      }
      break;
    }
    case MRId::MR2: {
      expected.a0 = -source_output.a0;
      expected.a1 = -source_output.a1;
      if (components.size() == 1) {
        expected.components[0].amplitude = components[0].amplitude;
        if (options.mr2_strict_phase) {
          expected.components[0].phase_deg = wrap_deg(components[0].phase_deg + 180.0);
        }
      }
      break;
    }
    case MRId::MR3: {
      const auto& p = params_as<Mr3Params>(params, mr);
      expected.a0 = source_output.a0 + p.shift;
      expected.a1 = source_output.a1;
      for (std::size_t k = 0; k < components.size(); ++k) {
        expected.components[k].amplitude = components[k].amplitude;
        expected.components[k].phase_deg = components[k].phase_deg;
      }
      break;
    }
    case MRId::MR4: {
      const auto& p = params_as<Mr4Params>(params, mr);
      expected.a0 = p.scale * source_output.a0;
      expected.a1 = p.scale * source_output.a1;
      for (std::size_t k = 0; k < components.size(); ++k) {
        expected.components[k].amplitude = p.scale * components[k].amplitude;
        expected.components[k].phase_deg = components[k].phase_deg;
      }
      break;
    }
    case MRId::MR6: {
      expected.components.at(0).amplitude = 0.0;
      break;
    }
    case MRId::MR7: {
      const double sigma = components.at(0).constituent.frequency;
      expected.a0 = source_output.a0 - kTwoPi * source_output.a1 / sigma;
      expected.a1 = source_output.a1;
      expected.components[0].amplitude = components[0].amplitude;
      expected.components[0].phase_deg = components[0].phase_deg;
      break;
    }
  }
  return expected;
}

MRVerdict assess(const ExpectedRelation& expected, const TidalSolution& followup_output,
                 const Tolerance& tolerance) {
  MRVerdict verdict;

  // Stage 1: the tidal constituents of source and follow-up outputs must be
  // the same set.
  std::vector<std::string> expected_names;
  for (const auto& c : expected.components) expected_names.push_back(c.name);
  std::vector<std::string> actual_names;
  for (const auto& c : followup_output.components) actual_names.push_back(c.constituent.name);
  std::sort(expected_names.begin(), expected_names.end());
  std::sort(actual_names.begin(), actual_names.end());
  if (expected_names != actual_names) {
    verdict.status = VerdictStatus::violated;
    verdict.stage = VerdictStage::constituent_set;
    verdict.note = "constituent sets differ between source and follow-up outputs";
    return verdict;
  }

  // Stage 2: per-quantity relation checks.
  bool all_pass = true;
  auto check = [&](const std::string& quantity, double expected_value, double actual_value,
                   double tol, bool circular) {
    QuantityDelta d;
    d.quantity = quantity;
    d.expected = expected_value;
    d.actual = actual_value;
    d.delta = circular ? circular_delta_deg(actual_value, expected_value)
                       : std::fabs(actual_value - expected_value);
    d.tolerance = tol;
    d.pass = d.delta <= tol;
    all_pass = all_pass && d.pass;
    verdict.deltas.push_back(d);
  };

  if (expected.a0) check("a0", *expected.a0, followup_output.a0, tolerance.metres, false);
  if (expected.a1) check("a1", *expected.a1, followup_output.a1, tolerance.metres_per_hour, false);

  for (const auto& ec : expected.components) {
    const auto it = std::find_if(
        followup_output.components.begin(), followup_output.components.end(),
        [&](const TidalComponent& c) { return c.constituent.name == ec.name; });
    const TidalComponent& actual = *it;
    if (ec.amplitude) {
      check("amplitude[" + ec.name + "]", *ec.amplitude, actual.amplitude, tolerance.metres,
            false);
    }
    if (ec.phase_deg) {
      // Phase is unidentifiable at zero amplitude; skip when both sides are
      // below the amplitude tolerance.
      const double expected_amp = ec.amplitude.value_or(actual.amplitude);
      if (expected_amp < tolerance.metres && actual.amplitude < tolerance.metres) continue;
      check("phase[" + ec.name + "]", *ec.phase_deg, actual.phase_deg, tolerance.degrees, true);
    }
  }

  if (!all_pass) {
    verdict.status = VerdictStatus::violated;
    verdict.stage = VerdictStage::relation;
  }
  return verdict;
}

long CampaignReport::violations_total() const {
  long total = 0;
  for (const auto& [mr, tally] : totals) total += tally.violated;
  return total;
}

namespace {

struct DrawnParams {
  double shift = 0.0;
  double scale = 1.0;
  std::size_t swap_first = 0;
  std::size_t swap_second = 0;
  double appended_time = 0.0;
};

DrawnParams draw_params(Rng& rng, const TimeSeries& series, double step, Mr1Offset offset) {
  DrawnParams p;
  // Fixed draw order keeps cases comparable across MR subsets.
  p.shift = rng.next_double(-5.0, 5.0);
  p.scale = rng.next_double(0.1, 10.0);
  const auto m = static_cast<std::int64_t>(series.size());
  p.swap_first = static_cast<std::size_t>(rng.next_int(0, m - 1));
  auto second = rng.next_int(0, m - 2);
  if (second >= static_cast<std::int64_t>(p.swap_first)) ++second;
  p.swap_second = static_cast<std::size_t>(second);
  const double u = rng.next_double();
  const double t_first = series.times.front();
  const double t_last = series.times.back();
  switch (offset) {
    case Mr1Offset::next_step: p.appended_time = t_last + step; break;
    case Mr1Offset::random_inside: p.appended_time = t_first + u * (t_last - t_first); break;
    case Mr1Offset::random_outside: p.appended_time = t_last + u * 48.0; break;
  }
  return p;
}

MrParams params_for(MRId mr, const DrawnParams& drawn) {
  switch (mr) {
    case MRId::MR1: return Mr1Params{drawn.appended_time};
    case MRId::MR3: return Mr3Params{drawn.shift};
    case MRId::MR4: return Mr4Params{drawn.scale};
    case MRId::MR5: return Mr5Params{drawn.swap_first, drawn.swap_second};
    default: return NoParams{};
  }
}

bool needs_trend_source(MRId mr) { return mr != MRId::MR6; }

}  // namespace

CampaignReport run_campaign(const Engine& engine, const CampaignConfig& config) {
  if (config.n_cases < 1) {
    throw InvalidInputError("run_campaign: n_cases must be >= 1");
  }
  if (config.mrs.empty()) {
    throw InvalidInputError("run_campaign: at least one MR must be selected");
  }
  if (!(config.tolerance.metres > 0.0) || !(config.tolerance.metres_per_hour > 0.0) ||
      !(config.tolerance.degrees > 0.0)) {
    throw InvalidInputError("run_campaign: tolerances must be positive");
  }

  CampaignReport report;
  report.master_seed = config.master_seed;
  report.n_cases = config.n_cases;
  report.tolerance = config.tolerance;
  report.mrs = config.mrs;
  report.engine_name = engine.name();
  for (const MRId mr : config.mrs) report.totals[mr];

  const bool want_trend_source =
      std::any_of(config.mrs.begin(), config.mrs.end(), needs_trend_source);
  const bool want_notrend_source =
      std::find(config.mrs.begin(), config.mrs.end(), MRId::MR6) != config.mrs.end();

  auto run_case = [&](long index) -> CaseOutcome {
    CaseOutcome outcome;
    outcome.index = index;

    const Seed case_seed = derive_stream(config.master_seed, static_cast<std::uint64_t>(index));
    outcome.spec = random_campaign_spec(derive_stream(case_seed, 0));
    const TimeSeries series = generate(outcome.spec, derive_stream(case_seed, 1));
    Rng params_rng(derive_stream(case_seed, 2));
    const DrawnParams drawn = draw_params(params_rng, series, outcome.spec.step, config.mr1_offset);

    ConstituentSet constituents;
    for (const auto& c : outcome.spec.constituents) constituents.members.push_back(c.constituent);

    const EngineInput trend_input{series, constituents, FitConfig{true}};
    const EngineInput notrend_input{series, constituents, FitConfig{false}};

    TidalSolution trend_solution;
    std::string trend_failure;
    bool trend_ok = false;
    if (want_trend_source) {
      try {
        trend_solution = engine.analyze(trend_input.series, trend_input.constituents,
                                        trend_input.config);
        trend_ok = true;
        outcome.max_ne_residual_rel =
            std::max(outcome.max_ne_residual_rel, trend_solution.ne_residual_rel);
      } catch (const Error& e) {
        trend_failure = e.what();
      }
    }

    TidalSolution notrend_solution;
    std::string notrend_failure;
    bool notrend_ok = false;
    if (want_notrend_source) {
      try {
        notrend_solution = engine.analyze(notrend_input.series, notrend_input.constituents,
                                          notrend_input.config);
        notrend_ok = true;
        outcome.max_ne_residual_rel =
            std::max(outcome.max_ne_residual_rel, notrend_solution.ne_residual_rel);
      } catch (const Error& e) {
        notrend_failure = e.what();
      }
    }

    for (const MRId mr : config.mrs) {
      const bool uses_trend = needs_trend_source(mr);
      const bool source_ok = uses_trend ? trend_ok : notrend_ok;
      if (!source_ok) {
        outcome.skipped[mr] =
            "engine failed on the source case: " + (uses_trend ? trend_failure : notrend_failure);
        continue;
      }
      const EngineInput& source = uses_trend ? trend_input : notrend_input;
      const TidalSolution& source_output = uses_trend ? trend_solution : notrend_solution;
      const MrParams params = params_for(mr, drawn);

      const MRCase mr_case = make_mr_case(mr, source, source_output, params);
      const ExpectedRelation expected =
          mr_expected_relation(mr, source_output, params, config.relation_options);

      MRVerdict verdict;
      try {
        const TidalSolution followup_output = engine.analyze(
            mr_case.followup.series, mr_case.followup.constituents, mr_case.followup.config);
        outcome.max_ne_residual_rel =
            std::max(outcome.max_ne_residual_rel, followup_output.ne_residual_rel);
        verdict = assess(expected, followup_output, config.tolerance);
      } catch (const Error& e) {
        verdict.status = VerdictStatus::inconclusive;
        verdict.stage = VerdictStage::none;
        verdict.note = std::string("engine failed on the follow-up case: ") + e.what();
      }
      outcome.verdicts.emplace(mr, std::move(verdict));
    }
    return outcome;
  };

  std::vector<CaseOutcome> outcomes(static_cast<std::size_t>(config.n_cases));
  const int workers = std::max(1, std::min<int>(config.workers, static_cast<int>(config.n_cases)));
  if (workers == 1) {
    for (long i = 0; i < config.n_cases; ++i) outcomes[static_cast<std::size_t>(i)] = run_case(i);
  } else {
    std::atomic<long> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        try {
          for (;;) {
            const long i = next.fetch_add(1);
            if (i >= config.n_cases) return;
            outcomes[static_cast<std::size_t>(i)] = run_case(i);
          }
        } catch (...) {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  // Single-threaded merge in case order.
  for (auto& outcome : outcomes) {
    for (const auto& [mr, verdict] : outcome.verdicts) {
      MrTally& tally = report.totals[mr];
      switch (verdict.status) {
        case VerdictStatus::satisfied: ++tally.satisfied; break;
        case VerdictStatus::violated: ++tally.violated; break;
        case VerdictStatus::inconclusive:
          ++tally.inconclusive;
          ++tally.crashes;
          break;
      }
    }
    for (const auto& [mr, reason] : outcome.skipped) {
      ++report.totals[mr].skipped;
    }
    if (!outcome.skipped.empty()) ++report.source_failures;
    report.max_ne_residual_rel = std::max(report.max_ne_residual_rel, outcome.max_ne_residual_rel);
    report.cases.push_back(std::move(outcome));
  }
  return report;
}

}  // namespace tap::mt
