/**
 * @file faults.hpp
 * @brief Named fault points threaded through the analysis core.
 *
 * The mutation lab activates at most one site per engine instance. Every
 * hook is written so that an inactive site leaves the computation
 * bit-identical to the unhooked code path.
 */
#pragma once

#include <cstdint>
#include <string_view>

namespace tap {

enum class FaultSite : std::uint8_t {
  none = 0,

  // design matrix assembly
  dm_sin_col_lag,        // sine column tabulated with the previous row's time
  dm_cos_sign,           // cosine column negated
  dm_freq_doubled,       // constituent frequency doubled when tabulating columns
  dm_drop_last_row,      // last observation row left as zeros

  // observation vector / solve guards
  y_read_lag,            // observation vector read one sample ahead (clamped)
  dof_check_strict,      // M >= P degrees-of-freedom test replaced by M > P
  cond_check_disabled,   // conditioning floor test skipped entirely
  cond_check_le,         // conditioning floor test uses <= instead of <
  cond_check_gt,         // conditioning floor test reversed to >

  // configuration reads
  trend_flag_negated,    // include_trend read negated
  dm_trend_forced_on,    // trend branch forced as if always enabled
  dm_trend_forced_off,   // trend branch forced as if always disabled
  rayleigh_flag_forced,  // rayleigh_check read as always true
  rayleigh_cmp_flip,     // Rayleigh proximity comparison reversed

  // coefficient extraction
  sol_a0_from_wrong_index,  // intercept read from the following coefficient slot
  notrend_b_from_a0,        // no-trend path reads the first cosine coefficient
                            // from the intercept slot
  sol_a0_abs,               // intercept reported as its absolute value
  sol_a1_negated,           // trend coefficient negated
  sol_a1_doubled,           // trend coefficient doubled
  coef_b_plus_c,            // cosine coefficient assembled as B + C
  coef_b_offset,            // cosine coefficient offset by +0.1 m
  coef_c_negated,           // sine coefficient negated

  // polar conversion
  sol_amp_sq_sumdiff,        // amplitude from sqrt(|B^2 - C^2|)
  sol_phase_atan2_swapped,   // atan2 arguments exchanged
  sol_phase_rad_as_deg,      // radian phase reported as if already degrees
  phase_wrap_skipped,        // [0, 360) normalization skipped
  phase_norm_flip,           // normalization comparison reversed
  phase_ref_defect,          // phase re-referenced to the record's last timestamp
                             // whenever the trend branch runs

  // prediction mode
  predict_trend_skipped,  // trend term dropped from the predicted elevation
  predict_phase_sign,     // phase sign flipped inside the cosine
};

/// At most one active site per engine instance; default-constructed state is
/// the unfaulted reference.
struct FaultState {
  FaultSite site = FaultSite::none;

  bool on(FaultSite s) const noexcept { return site == s; }
};

}  // namespace tap
