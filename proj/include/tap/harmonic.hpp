/**
 * @file harmonic.hpp
 * @brief Tidal response model: design matrix, OLS fit, polar conversion,
 *        analysis and prediction.
 *
 * The model fitted is
 *
 *   y(t) = a0 + a1*t + sum_k ( B_k cos(sigma_k t) + C_k sin(sigma_k t) )
 *
 * solved by ordinary least squares over the sample times, and reported in
 * polar form A_k cos(sigma_k t + phi_k) with A_k = sqrt(B_k^2 + C_k^2) and
 * phi_k = atan2(-C_k, B_k) normalized to [0, 360) degrees.
 *
 * All operations are pure functions of their inputs and safe to call
 * concurrently.
 */
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tap/faults.hpp"
#include "tap/types.hpp"

namespace tap {

/// Observation-per-row design matrix with columns
/// [1, t, cos(sigma_1 t), sin(sigma_1 t), ..., cos(sigma_N t), sin(sigma_N t)];
/// the t column is omitted when the trend is disabled.
struct DesignMatrix {
  Eigen::MatrixXd values;
  bool include_trend = false;

  long rows() const { return values.rows(); }
  long cols() const { return values.cols(); }
};

/// Amplitude/phase form of one (B, C) coefficient pair.
struct PolarComponent {
  double amplitude = 0.0;
  double phase_deg = 0.0;
};

DesignMatrix build_design_matrix(const std::vector<double>& times,
                                 const ConstituentSet& constituents, bool include_trend);

/// Least-squares fit of X beta ~ y via a column-pivoted QR decomposition.
/// Throws UnderDeterminedError when rows < cols and IllConditionedError when
/// the reciprocal condition estimate falls below `min_conditioning`.
RawCoefficients ols_fit(const DesignMatrix& design, const std::vector<double>& elevations,
                        double min_conditioning = FitConfig{}.min_conditioning);

/// Converts a (cosine, sine) coefficient pair to amplitude/phase. (0, 0)
/// maps to amplitude 0, phase 0 by convention.
PolarComponent raw_to_polar(double b, double c);

/// Analysis mode: fits `constituents` (plus intercept and optional trend) to
/// the series and reports the polar-form solution. Emits a warning on the
/// solution when two constituents are closer than the Rayleigh resolution
/// limit for the record span.
TidalSolution analyze(const TimeSeries& series, const ConstituentSet& constituents,
                      const FitConfig& config);

/// Prediction mode: evaluates the fitted model at the given times.
TimeSeries predict(const TidalSolution& solution, const std::vector<double>& times);

namespace detail {

// Fault-aware variants backing the public operations; the public functions
// forward with an empty FaultState. The mutation lab constructs engines on
// top of these with exactly one active site.
DesignMatrix build_design_matrix(const std::vector<double>& times,
                                 const ConstituentSet& constituents, bool include_trend,
                                 const FaultState& faults);
RawCoefficients ols_fit(const DesignMatrix& design, const std::vector<double>& elevations,
                        double min_conditioning, const FaultState& faults);
PolarComponent raw_to_polar(double b, double c, const FaultState& faults);
TidalSolution analyze(const TimeSeries& series, const ConstituentSet& constituents,
                      const FitConfig& config, const FaultState& faults);
TimeSeries predict(const TidalSolution& solution, const std::vector<double>& times,
                   const FaultState& faults);

}  // namespace detail

}  // namespace tap
