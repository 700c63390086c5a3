#include "tap/harmonic.hpp"

#include <algorithm>
#include <cmath>

#include "tap/errors.hpp"

namespace tap {

namespace {

double wrap_two_pi(double rad) {
  double r = std::fmod(rad, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

}  // namespace

namespace detail {

DesignMatrix build_design_matrix(const std::vector<double>& times,
                                 const ConstituentSet& constituents, bool include_trend,
                                 const FaultState& faults) {
  if (times.empty()) {
    throw InvalidInputError("design matrix: at least one sample time required");
  }
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (!std::isfinite(times[j])) {
      throw InvalidInputError("design matrix: non-finite time at sample " + std::to_string(j));
    }
  }

  const auto rows = static_cast<long>(times.size());
  const auto n = static_cast<long>(constituents.size());
  const long cols = (include_trend ? 2 : 1) + 2 * n;

  DesignMatrix design;
  design.include_trend = include_trend;
  design.values = Eigen::MatrixXd::Zero(rows, cols);

  for (long j = 0; j < rows; ++j) {
    if (faults.on(FaultSite::dm_drop_last_row) && j + 1 == rows) continue;

    long col = 0;
    design.values(j, col++) = 1.0;
    if (include_trend) design.values(j, col++) = times[j];

    const double t_cos = times[j];
    const double t_sin =
        faults.on(FaultSite::dm_sin_col_lag) ? times[j > 0 ? j - 1 : 0] : times[j];
    for (long k = 0; k < n; ++k) {
      double sigma = constituents.members[k].frequency;
      if (faults.on(FaultSite::dm_freq_doubled)) sigma *= 2.0;
      double cos_entry = std::cos(sigma * t_cos);
      if (faults.on(FaultSite::dm_cos_sign)) cos_entry = -cos_entry;
      design.values(j, col++) = cos_entry;
      design.values(j, col++) = std::sin(sigma * t_sin);
    }
  }
  return design;
}

RawCoefficients ols_fit(const DesignMatrix& design, const std::vector<double>& elevations,
                        double min_conditioning, const FaultState& faults) {
  const long rows = design.rows();
  const long cols = design.cols();
  if (static_cast<long>(elevations.size()) != rows) {
    throw InvalidInputError("ols_fit: design has " + std::to_string(rows) + " rows but " +
                            std::to_string(elevations.size()) + " elevations were given");
  }
  if (!(min_conditioning > 0.0) || !(min_conditioning < 1.0)) {
    throw InvalidInputError("ols_fit: min_conditioning must lie in (0, 1)");
  }

  const bool enough_rows = faults.on(FaultSite::dof_check_strict) ? rows > cols : rows >= cols;
  if (!enough_rows) throw UnderDeterminedError(rows, cols);

  Eigen::VectorXd y(rows);
  for (long j = 0; j < rows; ++j) {
    const long src = faults.on(FaultSite::y_read_lag) ? std::min(j + 1, rows - 1) : j;
    y(j) = elevations[static_cast<std::size_t>(src)];
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.values);

  // Reciprocal condition estimate from the pivoted R diagonal (magnitudes
  // are non-increasing under column pivoting).
  const Eigen::VectorXd diag = qr.matrixQR().diagonal().cwiseAbs();
  const double dmax = diag(0);
  const double dmin = diag(diag.size() - 1);
  const double rcond = dmax > 0.0 ? dmin / dmax : 0.0;

  if (!faults.on(FaultSite::cond_check_disabled)) {
    bool too_ill = rcond < min_conditioning;
    if (faults.on(FaultSite::cond_check_le)) too_ill = rcond <= min_conditioning;
    if (faults.on(FaultSite::cond_check_gt)) too_ill = rcond > min_conditioning;
    if (too_ill) throw IllConditionedError(rcond);
  }

  const Eigen::VectorXd beta = qr.solve(y);

  // Normal-equations certificate on the system actually solved.
  const Eigen::VectorXd residual = y - design.values * beta;
  const double y_norm = y.norm();
  const double cert = (design.values.transpose() * residual).norm();

  RawCoefficients out;
  out.has_trend = design.include_trend;
  out.ne_residual_rel = y_norm > 0.0 ? cert / y_norm : cert;
  out.rcond = rcond;

  const long a0_idx = faults.on(FaultSite::sol_a0_from_wrong_index) && cols > 1 ? 1 : 0;
  out.a0 = beta(a0_idx);
  if (faults.on(FaultSite::sol_a0_abs)) out.a0 = std::fabs(out.a0);

  if (design.include_trend) {
    out.a1 = beta(1);
    if (faults.on(FaultSite::sol_a1_negated)) out.a1 = -out.a1;
    if (faults.on(FaultSite::sol_a1_doubled)) out.a1 = 2.0 * out.a1;
  }

  const long base = design.include_trend ? 2 : 1;
  const long n = (cols - base) / 2;
  out.pairs.reserve(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) {
    RawCoefficients::Pair pair;
    long b_idx = base + 2 * k;
    if (faults.on(FaultSite::notrend_b_from_a0) && !design.include_trend && k == 0) b_idx = 0;
    pair.b = beta(b_idx);
    pair.c = beta(base + 2 * k + 1);
    if (faults.on(FaultSite::coef_b_plus_c)) pair.b = pair.b + pair.c;
    if (faults.on(FaultSite::coef_b_offset)) pair.b += 0.1;
    if (faults.on(FaultSite::coef_c_negated)) pair.c = -pair.c;
    out.pairs.push_back(pair);
  }
  return out;
}

PolarComponent raw_to_polar(double b, double c, const FaultState& faults) {
  if (!std::isfinite(b) || !std::isfinite(c)) {
    throw InvalidInputError("raw_to_polar: coefficients must be finite");
  }
  if (b == 0.0 && c == 0.0) return PolarComponent{0.0, 0.0};

  double amplitude = faults.on(FaultSite::sol_amp_sq_sumdiff)
                         ? std::sqrt(std::fabs(b * b - c * c))
                         : std::hypot(b, c);

  const double phase_rad =
      faults.on(FaultSite::sol_phase_atan2_swapped) ? std::atan2(b, -c) : std::atan2(-c, b);
  double deg = faults.on(FaultSite::sol_phase_rad_as_deg) ? phase_rad : rad_to_deg(phase_rad);

  if (!faults.on(FaultSite::phase_wrap_skipped)) {
    deg = std::fmod(deg, 360.0);
    const bool wrap_up = faults.on(FaultSite::phase_norm_flip) ? deg > 0.0 : deg < 0.0;
    if (wrap_up) deg += 360.0;
    if (deg >= 360.0 && !faults.on(FaultSite::phase_norm_flip)) deg -= 360.0;
  }
  return PolarComponent{amplitude, deg};
}

TidalSolution analyze(const TimeSeries& series, const ConstituentSet& constituents,
                      const FitConfig& config, const FaultState& faults) {
  series.validate();
  if (constituents.members.empty()) {
    throw InvalidInputError("analyze: constituent set must not be empty");
  }

  bool trend = config.include_trend;
  if (faults.on(FaultSite::trend_flag_negated)) trend = !trend;
  if (faults.on(FaultSite::dm_trend_forced_on)) trend = true;
  if (faults.on(FaultSite::dm_trend_forced_off)) trend = false;

  const bool rayleigh = faults.on(FaultSite::rayleigh_flag_forced) || config.rayleigh_check;

  const DesignMatrix design = build_design_matrix(series.times, constituents, trend, faults);
  const RawCoefficients raw = ols_fit(design, series.elevations, config.min_conditioning, faults);

  TidalSolution solution;
  solution.a0 = raw.a0;
  solution.a1 = trend ? raw.a1 : 0.0;
  solution.ne_residual_rel = raw.ne_residual_rel;
  solution.rcond = raw.rcond;

  const auto [t_min_it, t_max_it] = std::minmax_element(series.times.begin(), series.times.end());
  const double t_max = *t_max_it;

  solution.components.reserve(constituents.size());
  for (std::size_t k = 0; k < constituents.size(); ++k) {
    const PolarComponent polar = raw_to_polar(raw.pairs[k].b, raw.pairs[k].c, faults);
    TidalComponent component;
    component.constituent = constituents.members[k];
    component.amplitude = polar.amplitude;
    component.phase_deg = polar.phase_deg;
    if (faults.on(FaultSite::phase_ref_defect) && trend) {
      const double shift = rad_to_deg(wrap_two_pi(component.constituent.frequency * t_max));
      component.phase_deg = wrap_deg(component.phase_deg + shift);
    }
    solution.components.push_back(component);
  }

  if (rayleigh) {
    const double span = *t_max_it - *t_min_it;
    for (std::size_t i = 0; i < constituents.size(); ++i) {
      for (std::size_t j = i + 1; j < constituents.size(); ++j) {
        const double separation =
            std::fabs(constituents.members[i].frequency - constituents.members[j].frequency) *
            span;
        const bool unresolved =
            faults.on(FaultSite::rayleigh_cmp_flip) ? separation > kTwoPi : separation < kTwoPi;
        if (unresolved) {
          solution.warnings.push_back("Rayleigh: constituents " + constituents.members[i].name +
                                      " and " + constituents.members[j].name +
                                      " are not resolvable over a span of " +
                                      std::to_string(span) + " h");
        }
      }
    }
  }
  return solution;
}

TimeSeries predict(const TidalSolution& solution, const std::vector<double>& times,
                   const FaultState& faults) {
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (!std::isfinite(times[j])) {
      throw InvalidInputError("predict: non-finite time at index " + std::to_string(j));
    }
  }

  TimeSeries out;
  out.times = times;
  out.elevations.reserve(times.size());
  for (const double t : times) {
    double value = solution.a0;
    if (!faults.on(FaultSite::predict_trend_skipped)) value += solution.a1 * t;
    for (const auto& component : solution.components) {
      double phase = deg_to_rad(component.phase_deg);
      if (faults.on(FaultSite::predict_phase_sign)) phase = -phase;
      value += component.amplitude * std::cos(component.constituent.frequency * t + phase);
    }
    out.elevations.push_back(value);
  }
  return out;
}

}  // namespace detail

DesignMatrix build_design_matrix(const std::vector<double>& times,
                                 const ConstituentSet& constituents, bool include_trend) {
  return detail::build_design_matrix(times, constituents, include_trend, FaultState{});
}

RawCoefficients ols_fit(const DesignMatrix& design, const std::vector<double>& elevations,
                        double min_conditioning) {
  return detail::ols_fit(design, elevations, min_conditioning, FaultState{});
}

PolarComponent raw_to_polar(double b, double c) {
  return detail::raw_to_polar(b, c, FaultState{});
}

TidalSolution analyze(const TimeSeries& series, const ConstituentSet& constituents,
                      const FitConfig& config) {
  return detail::analyze(series, constituents, config, FaultState{});
}

TimeSeries predict(const TidalSolution& solution, const std::vector<double>& times) {
  return detail::predict(solution, times, FaultState{});
}

}  // namespace tap
