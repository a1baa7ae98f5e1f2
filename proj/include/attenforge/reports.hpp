#pragma once

// CSV emission for sweep results, band metrics, and calibration tables.

#include <string>

#include "attenforge/design.hpp"

namespace attenforge {

// Writes two CSV files. The state file has the header
//   f_ghz,state,att_db,phase_deg,s11_db,s22_db
// with one row per (state, frequency), state-major; att_db and phase_deg are
// relative to the reference state (so the reference rows read exactly 0).
// The metrics file has the header
//   f_ghz,il_db,rms_amp_db,rms_phase_deg,rl_worst_db
// with one row per grid point; rl_worst is the smaller of the input/output
// return losses at that frequency.
void write_report_csv(const SweepResult& sweep_result, const BandMetrics& metrics,
                      const std::string& states_path,
                      const std::string& metrics_path);

// Header target_db,vc,achieved_db_at_f0; one row per calibration entry.
void write_calibration_csv(const CalibrationTable& table, const std::string& path);

}  // namespace attenforge
