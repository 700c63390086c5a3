/**
 * @file types.hpp
 * @brief Core domain types for tidal analysis and prediction.
 *
 * Units throughout: time in hours, elevation in metres, frequency in
 * radians per hour, phases in degrees within [0, 360).
 */
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tap/errors.hpp"

namespace tap {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Normalizes an angle in degrees to [0, 360).
inline double wrap_deg(double deg) {
  double d = std::fmod(deg, 360.0);
  if (d < 0.0) d += 360.0;
  // fmod can return exactly 360 - eps rounded up; map 360 back to 0.
  if (d >= 360.0) d -= 360.0;
  return d;
}

/// Circular distance between two angles in degrees, in [0, 180].
inline double circular_delta_deg(double a, double b) {
  const double d = std::fabs(wrap_deg(a) - wrap_deg(b));
  return std::min(d, 360.0 - d);
}

/// Ordered (time, elevation) samples; the unit of analysis input and
/// prediction output. Monotonic time is a property of the on-disk format,
/// not of this type: analysis accepts samples in any order.
struct TimeSeries {
  std::vector<double> times;       // hours
  std::vector<double> elevations;  // metres

  std::size_t size() const noexcept { return times.size(); }

  /// Throws InvalidInputError unless lengths match, M >= 1 and all values
  /// are finite.
  void validate() const;
};

/// One astronomical tidal constituent.
struct Constituent {
  std::string name;
  double frequency = 0.0;  // radians per hour, > 0

  double period_hours() const { return kTwoPi / frequency; }
};

/// Ordered set of constituents with distinct names and distinct frequencies.
struct ConstituentSet {
  std::vector<Constituent> members;

  std::size_t size() const noexcept { return members.size(); }

  /// Validating factory; throws InvalidInputError on duplicate names or
  /// frequencies, or non-positive frequency.
  static ConstituentSet of(std::vector<Constituent> members);
};

/// Fit configuration knobs.
struct FitConfig {
  bool include_trend = true;
  double min_conditioning = 1e-10;  // reciprocal condition number floor, in (0, 1)
  bool rayleigh_check = true;
};

/// Regression-space coefficients: intercept, optional trend and one
/// (cosine, sine) pair per constituent.
struct RawCoefficients {
  struct Pair {
    double b = 0.0;  // cosine coefficient, metres
    double c = 0.0;  // sine coefficient, metres
  };

  double a0 = 0.0;             // metres
  bool has_trend = false;
  double a1 = 0.0;             // metres/hour, meaningful only when has_trend
  std::vector<Pair> pairs;     // one per constituent, in set order

  // Fit certificate: ||X^T (y - X beta)||_2 / ||y||_2 for the solved system.
  double ne_residual_rel = 0.0;
  // Reciprocal condition number estimate of the design matrix.
  double rcond = 0.0;
};

/// Polar form of one constituent's contribution A*cos(sigma*t + phi).
struct TidalComponent {
  Constituent constituent;
  double amplitude = 0.0;  // metres, >= 0
  double phase_deg = 0.0;  // degrees, in [0, 360)
};

/// Fitted intercept, trend and per-constituent amplitude/phase.
struct TidalSolution {
  double a0 = 0.0;  // metres
  double a1 = 0.0;  // metres/hour; zero when the fit had no trend term
  std::vector<TidalComponent> components;
  std::vector<std::string> warnings;

  // Diagnostics carried from the fit; not part of the exchange formats.
  double ne_residual_rel = 0.0;
  double rcond = 0.0;

  ConstituentSet constituent_set() const;
};

}  // namespace tap
