#pragma once

// Element-value synthesis, compensation-capacitor optimization, continuous
// calibration, band sweeps, and the RMS/IL/RL figures of merit.

#include <functional>
#include <vector>

#include "attenforge/attenuator.hpp"

namespace attenforge {

// Per-state, per-frequency S-parameters; records are state-major.
struct SweepResult {
    std::vector<AttenuatorState> states;
    FrequencyGrid grid;
    std::vector<SParams2> records;

    const SParams2& at(size_t state_idx, size_t freq_idx) const {
        return records[state_idx * grid.points_hz.size() + freq_idx];
    }
};

struct BandSummary {
    double min{0.0};
    double max{0.0};
};

// Per-frequency arrays over the sweep grid plus min/max band summaries.
// rl_* report -20 log10 of the worst (largest) reflection over all states,
// as positive dB, capped at 99 dB.
struct BandMetrics {
    std::vector<double> il_db;
    std::vector<double> rl_in_db;
    std::vector<double> rl_out_db;
    std::vector<double> rms_amp_err_db;
    std::vector<double> rms_phase_err_deg;
    BandSummary il, rl_in, rl_out, rms_amp, rms_phase;
};

struct SynthesizedT {
    double r1_ohms{0.0};
    double r2_ohms{0.0};
};

// Textbook T-pad: k = 10^(A/20), r1 = z0 (k-1)/(k+1), r2 = 2 z0 k/(k^2-1).
SynthesizedT synth_ttype(double atten_db, double z0);

// Scalar search helpers (deterministic; shared by the fitters below).
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double f_tol, int max_iter = 200);
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double x_tol);
// Coarse grid of n points, then golden refinement around the best cell; falls
// back to the grid point if refinement does not improve. Ties break toward
// the smaller argument.
double grid_then_golden(const std::function<double(double)>& f, double lo,
                        double hi, int n, double x_tol);

// Bisection on r2 in [1, 10k] ohms so the unit's relative attenuation
// (ref vs att) at f0 hits target_delta_db within 1e-4 dB. A target below the
// attenuation reachable at the upper bracket returns the bracket top
// (effectively open); a target above the lower bracket's attenuation throws
// NumericError.
double fit_r2_for_delta(const SimplifiedTUnitSpec& unit, double target_delta_db,
                        double f0_hz, double z0);
double fit_r2_for_delta(const TTypeUnitSpec& unit, double target_delta_db,
                        double f0_hz, double z0);

// argmin over c_comp in [c_lo, c_hi] of the band RMS of the att-minus-ref
// phase difference; 64-point grid then golden refinement to 0.01 fF.
double optimize_ccomp(const TTypeUnitSpec& unit, const FrequencyGrid& band,
                      double c_lo, double c_hi, double z0);
double optimize_ccomp(const SimplifiedTUnitSpec& unit, const FrequencyGrid& band,
                      double c_lo, double c_hi, double z0);

// Root-finds vc for each target 0.0, 0.1, ..., range_db so the chip's
// relative attenuation from the vc_lo baseline (digital bits at reference)
// equals the target at f0 within 1e-3 dB. Throws NumericError naming the
// first unreachable target when the FET range is exhausted.
CalibrationTable calibrate_continuous(const AttenuatorChipSpec& chip, double f0_hz,
                                      double step_db = 0.1, double range_db = 2.0);

// Dense state x frequency evaluation, state-major. Parallel over records;
// ATTEN_FORGE_THREADS caps the worker count (0 or unset = hardware).
SweepResult sweep(const AttenuatorChipSpec& chip,
                  const std::vector<AttenuatorState>& states,
                  const FrequencyGrid& grid);

// Index of the reference state (both bits at Ref, nominal 0 dB); throws
// ConfigError if the list has none.
size_t reference_index(const std::vector<AttenuatorState>& states);

// Per-frequency RMS over non-reference states of (relative attenuation -
// ideal_db). The reference state is the one whose nominal label is 0.
std::vector<double> rms_amp_error(const SweepResult& sweep_result,
                                  const std::vector<double>& ideal_db);
// Same shape for phase: deviation of the state's s21 phase from the
// reference state's, wrapped to (-180, 180], ideal 0.
std::vector<double> rms_phase_error(const SweepResult& sweep_result);

// il from the reference state, rl from the worst |s11| / |s22| over states.
BandMetrics il_rl(const SweepResult& sweep_result);

// il_rl plus both RMS arrays (ideal = each state's nominal label) and all
// band summaries.
BandMetrics band_metrics(const SweepResult& sweep_result);

struct TuneOptions {
    int passes{3};
    double f0_hz{60e9};
    double c_lo{0.0};
    double c_hi{50e-15};
    double theta_lo_rad{0.0};
    double theta_hi_rad{40.0 * M_PI / 180.0};
    double r2_span{0.3};       // r2 searched in [r2*(1-span), r2*(1+span)]
    double gamma_limit{0.25};  // soft cap on worst |reflection| during tuning
    int grid_stride{4};        // objective evaluated on every stride-th point
};

// Sequential coordinate passes in the fixed order r2 fit -> c_comp -> TL
// theta (a documented heuristic). Each 1-D search minimizes the chip-level
// band metric the step is responsible for (RMS amplitude error for r2 and
// theta, RMS phase error for c_comp), computed over the 16 coarse states on
// a subsampled grid, with a soft penalty on worst reflection; the continuous
// unit is recalibrated at the start of every pass.
AttenuatorChipSpec tune_chip(const AttenuatorChipSpec& chip, const FrequencyGrid& band,
                             const TuneOptions& opts = {});

}  // namespace attenforge
