#include "attenforge/reports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "attenforge/errors.hpp"

namespace attenforge {

namespace {

// Reflection magnitudes can be exactly zero (ideal match); clamp instead of
// letting the log blow up so CSV rows stay finite.
double db_floor(double mag) {
    const double db = 20.0 * std::log10(std::max(mag, 1e-30));
    return std::max(db, -199.0);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw ConfigError("cannot write '" + path + "'");
    return out;
}

}  // namespace

void write_report_csv(const SweepResult& sweep_result, const BandMetrics& metrics,
                      const std::string& states_path,
                      const std::string& metrics_path) {
    const size_t n_freq = sweep_result.grid.points_hz.size();
    if (metrics.il_db.size() != n_freq || metrics.rms_amp_err_db.size() != n_freq)
        throw ConfigError("metrics were not computed on the sweep grid");

    const size_t ref = reference_index(sweep_result.states);
    char line[256];

    std::ofstream st = open_out(states_path);
    st << "f_ghz,state,att_db,phase_deg,s11_db,s22_db\n";
    for (size_t is = 0; is < sweep_result.states.size(); ++is) {
        const AttenuatorState& state = sweep_result.states[is];
        for (size_t jf = 0; jf < n_freq; ++jf) {
            const SParams2& sp = sweep_result.at(is, jf);
            const SParams2& rp = sweep_result.at(ref, jf);
            const double att = is == ref
                                   ? 0.0
                                   : mag_db(rp.s21) - mag_db(sp.s21);
            const double ph = is == ref
                                  ? 0.0
                                  : wrap_deg(phase_deg(sp.s21) - phase_deg(rp.s21));
            std::snprintf(line, sizeof line, "%.9g,%s,%.6f,%.6f,%.6f,%.6f\n",
                          sweep_result.grid.points_hz[jf] * 1e-9,
                          state.label.c_str(), att, ph,
                          db_floor(std::abs(sp.s11)), db_floor(std::abs(sp.s22)));
            st << line;
        }
    }
    if (!st)
        throw ConfigError("failed writing '" + states_path + "'");

    std::ofstream mt = open_out(metrics_path);
    mt << "f_ghz,il_db,rms_amp_db,rms_phase_deg,rl_worst_db\n";
    for (size_t jf = 0; jf < n_freq; ++jf) {
        const double rl_worst = std::min(metrics.rl_in_db[jf], metrics.rl_out_db[jf]);
        std::snprintf(line, sizeof line, "%.9g,%.6f,%.6f,%.6f,%.6f\n",
                      sweep_result.grid.points_hz[jf] * 1e-9, metrics.il_db[jf],
                      metrics.rms_amp_err_db[jf], metrics.rms_phase_err_deg[jf],
                      rl_worst);
        mt << line;
    }
    if (!mt)
        throw ConfigError("failed writing '" + metrics_path + "'");
}

void write_calibration_csv(const CalibrationTable& table, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "target_db,vc,achieved_db_at_f0\n";
    char line[128];
    for (const CalibrationEntry& e : table.entries) {
        std::snprintf(line, sizeof line, "%.1f,%.17g,%.6f\n", e.target_db, e.vc,
                      e.achieved_db_at_f0);
        out << line;
    }
    if (!out)
        throw ConfigError("failed writing '" + path + "'");
}

}  // namespace attenforge
