#pragma once

// Chip configuration file: flat dotted-key `key = value [unit]` lines with
// required unit suffixes. Values are kept in the file's own units (ohms, fF,
// GHz, degrees, volts) so that parse(write(config)) is exactly the identity;
// conversion to SI happens when the chip spec is built.

#include <optional>
#include <string>

#include "attenforge/attenuator.hpp"

namespace attenforge {

struct ChipConfig {
    double z0_ohm{50.0};
    double f0_ghz{60.0};
    struct {
        double f_start_ghz{20.0};
        double f_stop_ghz{100.0};
        int points{81};
    } grid;
    double step_db{0.5};

    struct SwitchKeys {
        double r_on_ohm{10.0};
        double c_off_ff{15.0};
        double c_par_on_ff{0.0};
    };
    struct ResistorKeys {
        double r_ohm{50.0};
        double c_par_ff{0.0};
    };
    struct TlineKeys {
        double z_c_ohm{50.0};
        double theta_deg{0.0};
        double f_ref_ghz{60.0};
    };

    struct {
        ResistorKeys r1, r2;
        double c_comp_ff{0.0};
        SwitchKeys m1, m2;
    } unit4;
    TlineKeys tl_a;
    struct {
        ResistorKeys r1, r2;
        double c_comp_ff{0.0};
        SwitchKeys m2;
    } unit2;
    TlineKeys tl_b;
    struct {
        ResistorKeys r2;
        double fet_r_min_ohm{40.0};
        double fet_r_max_ohm{2500.0};
        double fet_vc_lo_v{0.0};
        double fet_vc_hi_v{1.2};
        double fet_shape{4.0};
    } cont;

    std::optional<double> synth_atten4_db;
    std::optional<double> synth_atten2_db;
};

// Throws ConfigError (with a line number where applicable) on unknown keys,
// missing required keys, bad values, unit mismatches, duplicates, or any
// violated invariant of the nested model types.
ChipConfig parse_config(const std::string& text);
ChipConfig load_config_file(const std::string& path);

// Canonical serialization: fixed key order, 17-significant-digit values,
// canonical unit suffixes. parse(write(c)) == c exactly.
std::string write_config(const ChipConfig& cfg);
void save_config_file(const ChipConfig& cfg, const std::string& path);

// Like parse_config, but tolerates missing unit resistor values (unit4.r1.r,
// unit4.r2.r, unit2.r1.r, unit2.r2.r); used by synthesis to complete a
// minimal config. Full validation is re-run once the values are filled in.
ChipConfig parse_config_partial(const std::string& text);

AttenuatorChipSpec to_chip_spec(const ChipConfig& cfg);
FrequencyGrid to_grid(const ChipConfig& cfg);
inline double config_f0_hz(const ChipConfig& cfg) { return cfg.f0_ghz * 1e9; }

// Copies the tunable values of a chip spec back into file units.
void update_config_from_spec(ChipConfig& cfg, const AttenuatorChipSpec& spec);

}  // namespace attenforge
