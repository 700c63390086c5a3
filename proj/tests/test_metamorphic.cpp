#include <doctest.h>

#include <cmath>

#include "tap/constituents.hpp"
#include "tap/engine.hpp"
#include "tap/errors.hpp"
#include "tap/metamorphic.hpp"
#include "tap/signal.hpp"

using namespace tap;
using namespace tap::mt;

namespace {

EngineInput m2_case(double a0, double a1, double amplitude, double phase_deg, long count,
                    double noise_std, bool trend, Seed noise_seed = Seed{11}) {
  SyntheticSpec spec;
  spec.constituents.push_back(SyntheticComponent{constituent_frequency("M2"), amplitude, phase_deg});
  spec.intercept = a0;
  spec.trend = a1;
  spec.count = count;
  spec.noise_std = noise_std;
  EngineInput input;
  input.series = generate(spec, noise_seed);
  input.constituents = ConstituentSet::of({spec.constituents[0].constituent});
  input.config = FitConfig{trend};
  return input;
}

bool reports_equal(const CampaignReport& a, const CampaignReport& b) {
  if (a.n_cases != b.n_cases || a.cases.size() != b.cases.size()) return false;
  if (a.max_ne_residual_rel != b.max_ne_residual_rel) return false;
  for (std::size_t i = 0; i < a.cases.size(); ++i) {
    const auto& ca = a.cases[i];
    const auto& cb = b.cases[i];
    if (ca.index != cb.index || ca.verdicts.size() != cb.verdicts.size()) return false;
    if (ca.skipped != cb.skipped) return false;
    for (const auto& [mr, va] : ca.verdicts) {
      const auto it = cb.verdicts.find(mr);
      if (it == cb.verdicts.end()) return false;
      const auto& vb = it->second;
      if (va.status != vb.status || va.stage != vb.stage || va.note != vb.note) return false;
      if (va.deltas.size() != vb.deltas.size()) return false;
      for (std::size_t d = 0; d < va.deltas.size(); ++d) {
        if (va.deltas[d].quantity != vb.deltas[d].quantity) return false;
        if (va.deltas[d].expected != vb.deltas[d].expected) return false;
        if (va.deltas[d].actual != vb.deltas[d].actual) return false;
        if (va.deltas[d].delta != vb.deltas[d].delta) return false;
        if (va.deltas[d].pass != vb.deltas[d].pass) return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("mr identifiers") {
  CHECK(to_string(MRId::MR4) == "MR4");
  CHECK(parse_mr("MR6") == MRId::MR6);
  CHECK_THROWS_AS((void)parse_mr("MR8"), CatalogMissError);
  CHECK(all_mrs().size() == 7);
}

TEST_CASE("follow-up construction") {
  const ReferenceEngine engine;

  SUBCASE("MR3 shifts elevations") {
    EngineInput source;
    source.series = TimeSeries{{0.0, 1.0}, {0.5, 0.7}};
    source.constituents = ConstituentSet::of({constituent_frequency("M2")});
    source.config = FitConfig{};
    const EngineInput followup =
        mr_followup(MRId::MR3, source, TidalSolution{}, Mr3Params{1.0});
    CHECK(followup.series.elevations[0] == 1.5);
    CHECK(followup.series.elevations[1] == 1.7);
    CHECK(followup.series.times == source.series.times);
  }

  SUBCASE("MR5 exchanges samples") {
    EngineInput source;
    source.series = TimeSeries{{0.0, 1.0}, {1.0, 2.0}};
    source.constituents = ConstituentSet::of({constituent_frequency("M2")});
    const EngineInput followup =
        mr_followup(MRId::MR5, source, TidalSolution{}, Mr5Params{0, 1});
    CHECK(followup.series.times[0] == 1.0);
    CHECK(followup.series.times[1] == 0.0);
    CHECK(followup.series.elevations[0] == 2.0);
    CHECK(followup.series.elevations[1] == 1.0);
  }

  SUBCASE("MR2 negates, MR4 scales") {
    EngineInput source;
    source.series = TimeSeries{{0.0, 1.0}, {0.5, -0.25}};
    source.constituents = ConstituentSet::of({constituent_frequency("M2")});
    const EngineInput reflected = mr_followup(MRId::MR2, source, TidalSolution{}, NoParams{});
    CHECK(reflected.series.elevations[0] == -0.5);
    CHECK(reflected.series.elevations[1] == 0.25);
    const EngineInput scaled = mr_followup(MRId::MR4, source, TidalSolution{}, Mr4Params{2.0});
    CHECK(scaled.series.elevations[0] == 1.0);
    CHECK(scaled.series.elevations[1] == -0.5);
    CHECK_THROWS_AS(
        (void)mr_followup(MRId::MR4, source, TidalSolution{}, Mr4Params{-1.0}),
        InvalidInputError);
  }

  SUBCASE("MR1 appends the model point at the requested time") {
    const EngineInput source = m2_case(0.2, 0.0005, 1.4, 77.0, 200, 0.0, true);
    const TidalSolution output =
        engine.analyze(source.series, source.constituents, source.config);
    const double t_next = source.series.times.back() + 1.0;
    const EngineInput followup =
        mr_followup(MRId::MR1, source, output, Mr1Params{t_next});
    REQUIRE(followup.series.size() == source.series.size() + 1);
    CHECK(followup.series.times.back() == t_next);
    const TimeSeries expected = predict(output, {t_next});
    CHECK(followup.series.elevations.back() == expected.elevations[0]);
  }

  SUBCASE("MR6 cancels a noise-free pure constituent exactly") {
    const EngineInput source = m2_case(0.4, 0.0, 1.1, 210.0, 240, 0.0, false);
    const TidalSolution output =
        engine.analyze(source.series, source.constituents, source.config);
    const EngineInput followup = mr_followup(MRId::MR6, source, output, NoParams{});
    for (const double y : followup.series.elevations) {
      CHECK(std::fabs(y - 0.4) < 1e-8);  // only the intercept remains
    }
  }

  SUBCASE("MR6 and MR7 reject non-conforming configurations") {
    const EngineInput trended = m2_case(0.4, 0.0002, 1.1, 210.0, 240, 0.0, true);
    CHECK_THROWS_AS((void)mr_followup(MRId::MR6, trended, TidalSolution{}, NoParams{}),
                    PreconditionError);
    const EngineInput untrended = m2_case(0.4, 0.0, 1.1, 210.0, 240, 0.0, false);
    CHECK_THROWS_AS((void)mr_followup(MRId::MR7, untrended, TidalSolution{}, NoParams{}),
                    PreconditionError);
  }

  SUBCASE("MR7 shifts every time by one period") {
    const EngineInput source = m2_case(0.4, 0.0002, 1.1, 210.0, 240, 0.0, true);
    const EngineInput followup = mr_followup(MRId::MR7, source, TidalSolution{}, NoParams{});
    const double period = source.constituents.members[0].period_hours();
    for (std::size_t j = 0; j < source.series.size(); ++j) {
      CHECK(followup.series.times[j] == doctest::Approx(source.series.times[j] + period));
      CHECK(followup.series.elevations[j] == source.series.elevations[j]);
    }
  }
}

TEST_CASE("expected relations") {
  TidalSolution source;
  source.a0 = 1.0;
  source.a1 = 0.0;
  source.components.push_back(TidalComponent{constituent_frequency("M2"), 1.5, 30.0});

  SUBCASE("MR7 with zero trend degenerates to pure periodicity") {
    const ExpectedRelation expected =
        mr_expected_relation(MRId::MR7, source, NoParams{});
    CHECK(*expected.a0 == doctest::Approx(1.0));
    CHECK(*expected.a1 == 0.0);
    CHECK(*expected.components[0].amplitude == 1.5);
    CHECK(*expected.components[0].phase_deg == 30.0);
  }

  SUBCASE("MR7 intercept law, hand-evaluated") {
    TidalSolution trended = source;
    trended.a1 = 0.001;
    const ExpectedRelation expected =
        mr_expected_relation(MRId::MR7, trended, NoParams{});
    // a0' = a0 - 2*pi*a1/sigma = 1 - 0.001 * 12.42
    CHECK(*expected.a0 == doctest::Approx(0.98758).epsilon(1e-12));
  }

  SUBCASE("MR4 with unit scale degenerates to equality") {
    const ExpectedRelation expected =
        mr_expected_relation(MRId::MR4, source, Mr4Params{1.0});
    CHECK(*expected.a0 == 1.0);
    CHECK(*expected.components[0].amplitude == 1.5);
    CHECK(*expected.components[0].phase_deg == 30.0);
  }

  SUBCASE("MR2 negates the affine part and keeps the single amplitude") {
    TidalSolution trended = source;
    trended.a0 = -0.25;
    trended.a1 = 0.0004;
    const ExpectedRelation expected =
        mr_expected_relation(MRId::MR2, trended, NoParams{});
    CHECK(*expected.a0 == 0.25);
    CHECK(*expected.a1 == -0.0004);
    CHECK(*expected.components[0].amplitude == 1.5);
    CHECK_FALSE(expected.components[0].phase_deg.has_value());

    RelationOptions strict;
    strict.mr2_strict_phase = true;
    const ExpectedRelation with_phase =
        mr_expected_relation(MRId::MR2, trended, NoParams{}, strict);
    CHECK(*with_phase.components[0].phase_deg == doctest::Approx(210.0));
  }

  SUBCASE("MR6 constrains only the follow-up amplitude") {
    const ExpectedRelation expected =
        mr_expected_relation(MRId::MR6, source, NoParams{});
    CHECK_FALSE(expected.a0.has_value());
    CHECK_FALSE(expected.a1.has_value());
    CHECK(*expected.components[0].amplitude == 0.0);
    CHECK_FALSE(expected.components[0].phase_deg.has_value());
  }
}

TEST_CASE("assessment") {
  TidalSolution source;
  source.a0 = 0.5;
  source.a1 = 0.0003;
  source.components.push_back(TidalComponent{constituent_frequency("M2"), 1.5, 100.0});
  const ExpectedRelation equality =
      mr_expected_relation(MRId::MR5, source, NoParams{});

  SUBCASE("identical outputs satisfy equality") {
    const MRVerdict verdict = assess(equality, source, Tolerance{});
    CHECK(verdict.status == VerdictStatus::satisfied);
    CHECK(verdict.stage == VerdictStage::none);
    CHECK(verdict.deltas.size() == 4);  // a0, a1, amplitude, phase
  }

  SUBCASE("missing constituent fails at the constituent-set stage") {
    TidalSolution followup = source;
    followup.components[0].constituent.name = "S2";
    const MRVerdict verdict = assess(equality, followup, Tolerance{});
    CHECK(verdict.status == VerdictStatus::violated);
    CHECK(verdict.stage == VerdictStage::constituent_set);
  }

  SUBCASE("a 37-degree phase surprise is a relation violation") {
    TidalSolution followup = source;
    followup.components[0].phase_deg = wrap_deg(source.components[0].phase_deg + 37.0);
    const MRVerdict verdict = assess(equality, followup, Tolerance{});
    CHECK(verdict.status == VerdictStatus::violated);
    CHECK(verdict.stage == VerdictStage::relation);
    bool phase_reported = false;
    for (const auto& d : verdict.deltas) {
      if (d.quantity.rfind("phase", 0) == 0) {
        phase_reported = true;
        CHECK(d.delta == doctest::Approx(37.0));
        CHECK_FALSE(d.pass);
      }
    }
    CHECK(phase_reported);
  }

  SUBCASE("phase is skipped when both amplitudes are below tolerance") {
    TidalSolution tiny = source;
    tiny.components[0].amplitude = 0.001;
    const ExpectedRelation tiny_equality =
        mr_expected_relation(MRId::MR5, tiny, NoParams{});
    TidalSolution followup = tiny;
    followup.components[0].phase_deg = wrap_deg(tiny.components[0].phase_deg + 170.0);
    const MRVerdict verdict = assess(tiny_equality, followup, Tolerance{});
    CHECK(verdict.status == VerdictStatus::satisfied);
  }

  SUBCASE("circular comparison treats 359.999 vs 0.001 as equal") {
    TidalSolution near_zero = source;
    near_zero.components[0].phase_deg = 359.999;
    const ExpectedRelation relation =
        mr_expected_relation(MRId::MR5, near_zero, NoParams{});
    TidalSolution followup = near_zero;
    followup.components[0].phase_deg = 0.001;
    const MRVerdict verdict = assess(relation, followup, Tolerance{});
    CHECK(verdict.status == VerdictStatus::satisfied);
  }

  SUBCASE("loosening tolerances never flips satisfied to violated") {
    TidalSolution followup = source;
    followup.a0 += 0.005;
    followup.components[0].amplitude += 0.008;
    Tolerance tight;
    const MRVerdict tight_verdict = assess(equality, followup, tight);
    REQUIRE(tight_verdict.status == VerdictStatus::satisfied);
    Tolerance loose;
    loose.metres = 0.1;
    loose.metres_per_hour = 0.1;
    loose.degrees = 0.1;
    const MRVerdict loose_verdict = assess(equality, followup, loose);
    CHECK(loose_verdict.status == VerdictStatus::satisfied);
  }
}

TEST_CASE("reference engine satisfies all relations tightly on noise-free input") {
  const ReferenceEngine engine;

  SUBCASE("MR5 is exact, MR2/MR3/MR4 are tight") {
    const EngineInput source = m2_case(0.33, 0.0007, 2.1, 284.0, 300, 0.0, true);
    const TidalSolution output =
        engine.analyze(source.series, source.constituents, source.config);

    const auto run = [&](MRId mr, const MrParams& params) {
      const EngineInput followup = mr_followup(mr, source, output, params);
      const TidalSolution followup_output =
          engine.analyze(followup.series, followup.constituents, followup.config);
      return std::pair<ExpectedRelation, TidalSolution>(
          mr_expected_relation(mr, output, params), followup_output);
    };

    Tolerance tight;
    tight.metres = 1e-9;
    tight.metres_per_hour = 1e-9;
    tight.degrees = 1e-9;

    const auto [mr5_expected, mr5_output] = run(MRId::MR5, Mr5Params{3, 120});
    CHECK(assess(mr5_expected, mr5_output, tight).status == VerdictStatus::satisfied);

    const auto [mr2_expected, mr2_output] = run(MRId::MR2, NoParams{});
    CHECK(assess(mr2_expected, mr2_output, tight).status == VerdictStatus::satisfied);

    const auto [mr3_expected, mr3_output] = run(MRId::MR3, Mr3Params{2.5});
    CHECK(assess(mr3_expected, mr3_output, tight).status == VerdictStatus::satisfied);

    const auto [mr4_expected, mr4_output] = run(MRId::MR4, Mr4Params{4.2});
    CHECK(assess(mr4_expected, mr4_output, tight).status == VerdictStatus::satisfied);
  }

  SUBCASE("MR6 follow-up amplitude collapses below 0.01") {
    const EngineInput source = m2_case(0.4, 0.0, 1.3, 10.0, 400, 0.05, false);
    const TidalSolution output =
        engine.analyze(source.series, source.constituents, source.config);
    REQUIRE(output.components[0].amplitude > 0.1);
    const EngineInput followup = mr_followup(MRId::MR6, source, output, NoParams{});
    const TidalSolution followup_output =
        engine.analyze(followup.series, followup.constituents, followup.config);
    CHECK(followup_output.components[0].amplitude < 0.01);
  }

  SUBCASE("MR7 intercept law holds within tolerance") {
    const EngineInput source = m2_case(-0.6, 0.00085, 0.9, 96.0, 350, 0.02, true);
    const TidalSolution output =
        engine.analyze(source.series, source.constituents, source.config);
    const EngineInput followup = mr_followup(MRId::MR7, source, output, NoParams{});
    const TidalSolution followup_output =
        engine.analyze(followup.series, followup.constituents, followup.config);
    const double sigma = source.constituents.members[0].frequency;
    const double expected_a0 = output.a0 - kTwoPi * output.a1 / sigma;
    CHECK(std::fabs(followup_output.a0 - expected_a0) < 0.01);
  }
}

TEST_CASE("campaigns") {
  const ReferenceEngine engine;

  SUBCASE("clean engine yields zero violations") {
    CampaignConfig config;
    config.n_cases = 20;
    config.master_seed = Seed{7};
    const CampaignReport report = run_campaign(engine, config);
    CHECK(report.violations_total() == 0);
    CHECK(report.source_failures == 0);
    CHECK(report.max_ne_residual_rel <= 1e-8);
    for (const auto& [mr, tally] : report.totals) {
      CHECK(tally.satisfied == 20);
      CHECK(tally.violated == 0);
      CHECK(tally.inconclusive == 0);
    }
  }

  SUBCASE("invalid case counts are rejected") {
    CampaignConfig config;
    config.n_cases = 0;
    CHECK_THROWS_AS((void)run_campaign(engine, config), InvalidInputError);
  }

  SUBCASE("worker count does not change results") {
    CampaignConfig sequential;
    sequential.n_cases = 16;
    sequential.master_seed = Seed{321};
    sequential.workers = 1;
    CampaignConfig parallel = sequential;
    parallel.workers = 8;
    const CampaignReport a = run_campaign(engine, sequential);
    const CampaignReport b = run_campaign(engine, parallel);
    CHECK(reports_equal(a, b));
  }

  SUBCASE("MR subset selection runs only the requested relations") {
    CampaignConfig config;
    config.n_cases = 5;
    config.mrs = {MRId::MR1, MRId::MR4};
    const CampaignReport report = run_campaign(engine, config);
    CHECK(report.totals.size() == 2);
    CHECK(report.cases[0].verdicts.size() == 2);
  }

  SUBCASE("MR1 random offsets also hold for the reference engine") {
    CampaignConfig config;
    config.n_cases = 10;
    config.mrs = {MRId::MR1};
    config.mr1_offset = Mr1Offset::random_inside;
    CHECK(run_campaign(engine, config).violations_total() == 0);
    config.mr1_offset = Mr1Offset::random_outside;
    CHECK(run_campaign(engine, config).violations_total() == 0);
  }
}

TEST_CASE("non-positive tolerances are rejected") {
  const ReferenceEngine engine;
  CampaignConfig config;
  config.n_cases = 1;
  config.tolerance.metres = 0.0;
  CHECK_THROWS_AS((void)run_campaign(engine, config), InvalidInputError);
}
