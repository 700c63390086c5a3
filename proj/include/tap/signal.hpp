/**
 * @file signal.hpp
 * @brief Synthetic tidal series generation and random campaign specs.
 */
#pragma once

#include <vector>

#include "tap/rng.hpp"
#include "tap/types.hpp"

namespace tap {

/// One generated constituent: carrier plus amplitude/phase.
struct SyntheticComponent {
  Constituent constituent;
  double amplitude = 0.0;  // metres, >= 0
  double phase_deg = 0.0;  // degrees, in [0, 360)
};

/// Full description of a synthetic series: deterministic model plus
/// independent Gaussian noise.
struct SyntheticSpec {
  std::vector<SyntheticComponent> constituents;
  double intercept = 0.0;  // metres
  double trend = 0.0;      // metres/hour
  double noise_std = 0.0;  // metres, >= 0
  double start = 0.0;      // hours
  double step = 1.0;       // hours, > 0
  long count = 1;          // samples, >= 1

  void validate() const;
};

/// Evaluates the spec's model on the regular grid and adds seeded Gaussian
/// noise. Identical (spec, seed) pairs produce identical output.
TimeSeries generate(const SyntheticSpec& spec, Seed seed);

/// Draws a campaign case: a single M2 constituent sampled hourly, record
/// length uniform in [168, 720] points, amplitude uniform in [0.1, 3] m,
/// phase uniform in [0, 360) deg, intercept uniform in [-1, 1] m, trend
/// uniform in [-0.001, 0.001] m/h, noise_std uniform in [0, 0.05] m.
SyntheticSpec random_campaign_spec(Seed seed);

}  // namespace tap
