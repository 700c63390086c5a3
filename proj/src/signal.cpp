#include "tap/signal.hpp"

#include <cmath>

#include "tap/constituents.hpp"
#include "tap/errors.hpp"
#include "tap/harmonic.hpp"

namespace tap {

void SyntheticSpec::validate() const {
  for (const auto& c : constituents) {
    if (!(c.constituent.frequency > 0.0)) {
      throw InvalidInputError("synthetic spec: constituent " + c.constituent.name +
                              " has non-positive frequency");
    }
    if (c.amplitude < 0.0 || !std::isfinite(c.amplitude)) {
      throw InvalidInputError("synthetic spec: amplitude must be finite and >= 0");
    }
    if (c.phase_deg < 0.0 || c.phase_deg >= 360.0) {
      throw InvalidInputError("synthetic spec: phase must lie in [0, 360)");
    }
  }
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
    throw InvalidInputError("synthetic spec: noise_std must be finite and >= 0");
  }
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw InvalidInputError("synthetic spec: step must be finite and > 0");
  }
  if (count < 1) {
    throw InvalidInputError("synthetic spec: count must be >= 1");
  }
  if (!std::isfinite(intercept) || !std::isfinite(trend) || !std::isfinite(start)) {
    throw InvalidInputError("synthetic spec: intercept, trend and start must be finite");
  }
}

TimeSeries generate(const SyntheticSpec& spec, Seed seed) {
  spec.validate();

  TidalSolution model;
  model.a0 = spec.intercept;
  model.a1 = spec.trend;
  for (const auto& c : spec.constituents) {
    model.components.push_back(TidalComponent{c.constituent, c.amplitude, c.phase_deg});
  }

  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(spec.count));
  for (long j = 0; j < spec.count; ++j) {
    times.push_back(spec.start + static_cast<double>(j) * spec.step);
  }

  TimeSeries series = predict(model, times);
  if (spec.noise_std > 0.0) {
    Rng rng(seed);
    for (auto& value : series.elevations) value += spec.noise_std * rng.next_gaussian();
  }
  return series;
}

SyntheticSpec random_campaign_spec(Seed seed) {
  Rng rng(seed);
  SyntheticSpec spec;
  // Draw order is part of the determinism contract; do not reorder.
  spec.count = rng.next_int(168, 720);
  const double amplitude = rng.next_double(0.1, 3.0);
  const double phase = rng.next_double(0.0, 360.0);
  spec.intercept = rng.next_double(-1.0, 1.0);
  spec.trend = rng.next_double(-0.001, 0.001);
  spec.noise_std = rng.next_double(0.0, 0.05);
  spec.start = 0.0;
  spec.step = 1.0;
  spec.constituents.push_back(SyntheticComponent{constituent_frequency("M2"), amplitude, phase});
  return spec;
}

}  // namespace tap
