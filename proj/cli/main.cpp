#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "attenforge/config.hpp"
#include "attenforge/design.hpp"
#include "attenforge/errors.hpp"
#include "attenforge/reports.hpp"
#include "attenforge/touchstone.hpp"

namespace af = attenforge;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw af::ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void check_step(double step) {
    if (step != 0.5 && step != 0.1)
        throw af::ConfigError("--step must be 0.5 or 0.1");
}

struct SweepOutput {
    af::SweepResult result;
    af::BandMetrics metrics;
};

// calibrate -> enumerate -> sweep -> metrics, the shared back half of the
// sweep/report/export commands.
SweepOutput run_sweep(const af::ChipConfig& cfg, double step) {
    const af::AttenuatorChipSpec spec = af::to_chip_spec(cfg);
    const af::FrequencyGrid grid = af::to_grid(cfg);
    const double f0 = af::config_f0_hz(cfg);
    const af::CalibrationTable table = af::calibrate_continuous(spec, f0);
    const std::vector<af::AttenuatorState> states =
        af::enumerate_states(spec, step, f0, table);
    SweepOutput out{af::sweep(spec, states, grid), {}};
    out.metrics = af::band_metrics(out.result);
    return out;
}

struct ReportTargets {
    std::optional<double> il_max;
    std::optional<double> rms_amp;
    std::optional<double> rms_phase;
    std::optional<double> rl_min;
};

ReportTargets parse_targets(const std::string& text) {
    ReportTargets t;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        const size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw af::ConfigError("--targets entry '" + item + "' is not key=value");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        char* end = nullptr;
        const double v = std::strtod(val.c_str(), &end);
        if (end == val.c_str() || *end != '\0')
            throw af::ConfigError("--targets value for '" + key + "' is not a number");
        if (key == "il_max") t.il_max = v;
        else if (key == "rms_amp") t.rms_amp = v;
        else if (key == "rms_phase") t.rms_phase = v;
        else if (key == "rl_min") t.rl_min = v;
        else throw af::ConfigError("unknown --targets key '" + key + "'");
    }
    return t;
}

int cmd_synth(const std::string& cfg_path, const std::string& out_path) {
    af::ChipConfig cfg = af::parse_config_partial(read_file(cfg_path));
    const double a4 = cfg.synth_atten4_db.value_or(4.0);
    const double a2 = cfg.synth_atten2_db.value_or(2.0);
    const af::SynthesizedT s4 = af::synth_ttype(a4, cfg.z0_ohm);
    const af::SynthesizedT s2 = af::synth_ttype(a2, cfg.z0_ohm);
    cfg.unit4.r1.r_ohm = s4.r1_ohms;
    cfg.unit4.r2.r_ohm = s4.r2_ohms;
    cfg.unit2.r1.r_ohm = s2.r1_ohms;
    cfg.unit2.r2.r_ohm = s2.r2_ohms;
    // Round-trip through the full parser so every invariant is enforced
    // before the file lands on disk.
    const std::string text = af::write_config(cfg);
    af::parse_config(text);
    std::ofstream out(out_path, std::ios::trunc);
    if (!out)
        throw af::ConfigError("cannot write '" + out_path + "'");
    out << text;
    if (!out)
        throw af::ConfigError("failed writing '" + out_path + "'");
    std::printf("unit4 (%.1f dB): r1 = %.4f ohm, r2 = %.4f ohm\n", a4, s4.r1_ohms,
                s4.r2_ohms);
    std::printf("unit2 (%.1f dB): r1 = %.4f ohm, r2 = %.4f ohm\n", a2, s2.r1_ohms,
                s2.r2_ohms);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int cmd_optimize(const std::string& cfg_path, bool joint, const std::string& out_path) {
    af::ChipConfig cfg = af::load_config_file(cfg_path);
    af::AttenuatorChipSpec spec = af::to_chip_spec(cfg);
    const af::FrequencyGrid band = af::to_grid(cfg);
    if (joint) {
        af::TuneOptions opts;
        opts.f0_hz = af::config_f0_hz(cfg);
        spec = af::tune_chip(spec, band, opts);
        std::printf("unit4.r2 = %.4f ohm, unit2.r2 = %.4f ohm\n", spec.unit4.r2.r,
                    spec.unit2.r2.r);
        std::printf("tl_a.theta = %.4f deg, tl_b.theta = %.4f deg\n",
                    spec.tl_a.theta_ref_rad * 180.0 / M_PI,
                    spec.tl_b.theta_ref_rad * 180.0 / M_PI);
    } else {
        spec.unit4.c_comp =
            af::optimize_ccomp(spec.unit4, band, 0.0, 50e-15, spec.z0_ohms);
        spec.unit2.c_comp =
            af::optimize_ccomp(spec.unit2, band, 0.0, 50e-15, spec.z0_ohms);
    }
    std::printf("unit4.c_comp = %.3f fF, unit2.c_comp = %.3f fF\n",
                spec.unit4.c_comp * 1e15, spec.unit2.c_comp * 1e15);
    af::update_config_from_spec(cfg, spec);
    af::save_config_file(cfg, out_path);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int cmd_calibrate(const std::string& cfg_path, const std::string& out_path) {
    const af::ChipConfig cfg = af::load_config_file(cfg_path);
    const af::AttenuatorChipSpec spec = af::to_chip_spec(cfg);
    const af::CalibrationTable table =
        af::calibrate_continuous(spec, af::config_f0_hz(cfg));
    af::write_calibration_csv(table, out_path);
    std::printf("calibrated %zu settings, 0.0 to %.1f dB at %.2f GHz\n",
                table.entries.size(), table.entries.back().target_db, cfg.f0_ghz);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int cmd_sweep(const std::string& cfg_path, double step, const std::string& out_dir) {
    check_step(step);
    const af::ChipConfig cfg = af::load_config_file(cfg_path);
    const SweepOutput out = run_sweep(cfg, step);
    std::filesystem::create_directories(out_dir);
    const std::string states_path = out_dir + "/states.csv";
    const std::string metrics_path = out_dir + "/metrics.csv";
    af::write_report_csv(out.result, out.metrics, states_path, metrics_path);
    std::printf("swept %zu states x %zu frequencies\n", out.result.states.size(),
                out.result.grid.points_hz.size());
    std::printf("wrote %s\n", states_path.c_str());
    std::printf("wrote %s\n", metrics_path.c_str());
    return 0;
}

int cmd_report(const std::string& cfg_path, double step, const std::string& targets) {
    check_step(step);
    const ReportTargets t = parse_targets(targets);
    const af::ChipConfig cfg = af::load_config_file(cfg_path);
    const SweepOutput out = run_sweep(cfg, step);
    const af::BandMetrics& m = out.metrics;
    std::printf("band %.6g-%.6g GHz, %zu points, %zu states\n", cfg.grid.f_start_ghz,
                cfg.grid.f_stop_ghz, out.result.grid.points_hz.size(),
                out.result.states.size());
    std::printf("il_db            min %.3f  max %.3f\n", m.il.min, m.il.max);
    const double rl_worst = std::min(m.rl_in.min, m.rl_out.min);
    std::printf("rl_worst_db      min %.3f\n", rl_worst);
    std::printf("rms_amp_db       max %.3f\n", m.rms_amp.max);
    std::printf("rms_phase_deg    max %.3f\n", m.rms_phase.max);

    bool ok = true;
    auto verdict = [&ok](bool pass, const char* key, double got, const char* rel,
                         double want) {
        if (!pass)
            ok = false;
        std::printf("%s %s: %.3f %s %.3f\n", pass ? "PASS" : "FAIL", key, got, rel,
                    want);
    };
    if (t.il_max) verdict(m.il.max <= *t.il_max, "il_max", m.il.max, "<=", *t.il_max);
    if (t.rms_amp)
        verdict(m.rms_amp.max <= *t.rms_amp, "rms_amp", m.rms_amp.max, "<=", *t.rms_amp);
    if (t.rms_phase)
        verdict(m.rms_phase.max <= *t.rms_phase, "rms_phase", m.rms_phase.max, "<=",
                *t.rms_phase);
    if (t.rl_min) verdict(rl_worst >= *t.rl_min, "rl_min", rl_worst, ">=", *t.rl_min);
    return ok ? 0 : 4;
}

int cmd_export(const std::string& cfg_path, const std::string& label,
               const std::string& out_path) {
    const af::ChipConfig cfg = af::load_config_file(cfg_path);
    const af::AttenuatorChipSpec spec = af::to_chip_spec(cfg);
    const af::FrequencyGrid grid = af::to_grid(cfg);
    const double f0 = af::config_f0_hz(cfg);
    const af::CalibrationTable table = af::calibrate_continuous(spec, f0);
    const std::vector<af::AttenuatorState> states =
        af::enumerate_states(spec, 0.1, f0, table);
    const af::AttenuatorState* match = nullptr;
    for (const af::AttenuatorState& s : states)
        if (s.label == label)
            match = &s;
    if (!match)
        throw af::ConfigError("unknown state label '" + label +
                              "' (expected 0.0, 0.1, ..., 7.5)");
    af::TouchstoneFile ts;
    ts.r_ref_ohms = spec.z0_ohms;
    for (double f : grid.points_hz) {
        const af::SParams2 sp = af::chip_twoport(spec, *match, 2.0 * M_PI * f);
        ts.f_hz.push_back(f);
        ts.rows.push_back({sp.s11.real(), sp.s11.imag(), sp.s21.real(), sp.s21.imag(),
                           sp.s12.real(), sp.s12.imag(), sp.s22.real(), sp.s22.imag()});
    }
    af::write_touchstone(ts, out_path);
    std::printf("wrote %s (state %s, %zu points)\n", out_path.c_str(), label.c_str(),
                ts.f_hz.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"switch-type mmWave step attenuator designer"};
    app.require_subcommand(1);

    std::string cfg_path, out_path, out_dir = ".", state_label, targets;
    double step = 0.5;
    bool joint = false;

    CLI::App* synth = app.add_subcommand("synth", "fill in T-pad element values");
    synth->add_option("--config", cfg_path, "config file")->required();
    synth->add_option("--out", out_path, "output config (default: --config path)");

    CLI::App* optimize =
        app.add_subcommand("optimize", "optimize c_comp (with --joint: r2/c_comp/theta)");
    optimize->add_option("--config", cfg_path, "config file")->required();
    optimize->add_flag("--joint", joint, "joint chip-level tuning pass");
    optimize->add_option("--out", out_path, "output config (default: --config path)");

    CLI::App* calibrate =
        app.add_subcommand("calibrate", "build the continuous-unit control table");
    calibrate->add_option("--config", cfg_path, "config file")->required();
    calibrate->add_option("--out", out_path, "calibration CSV path")
        ->default_val("calibration.csv");

    CLI::App* sweep = app.add_subcommand("sweep", "sweep all states over the band");
    sweep->add_option("--config", cfg_path, "config file")->required();
    sweep->add_option("--step", step, "state pitch in dB (0.5 or 0.1)");
    sweep->add_option("--out-dir", out_dir, "directory for states.csv/metrics.csv");

    CLI::App* report = app.add_subcommand("report", "band summary with pass/fail");
    report->add_option("--config", cfg_path, "config file")->required();
    report->add_option("--step", step, "state pitch in dB (0.5 or 0.1)");
    report->add_option("--targets", targets,
                       "thresholds, e.g. il_max=3.8,rms_amp=0.15,rms_phase=1.6,rl_min=11.5");

    CLI::App* exp = app.add_subcommand("export", "write one state as Touchstone .s2p");
    exp->add_option("--config", cfg_path, "config file")->required();
    exp->add_option("--state", state_label, "state label, e.g. 2.5")->required();
    exp->add_option("--out", out_path, "output .s2p path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*synth)
            return cmd_synth(cfg_path, out_path.empty() ? cfg_path : out_path);
        if (*optimize)
            return cmd_optimize(cfg_path, joint, out_path.empty() ? cfg_path : out_path);
        if (*calibrate)
            return cmd_calibrate(cfg_path, out_path);
        if (*sweep)
            return cmd_sweep(cfg_path, step, out_dir);
        if (*report)
            return cmd_report(cfg_path, step, targets);
        if (*exp)
            return cmd_export(cfg_path, state_label, out_path);
    } catch (const af::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const af::NumericError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 1;
}
