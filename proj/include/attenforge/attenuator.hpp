#pragma once

// The three attenuation units (4-dB T-type with a bypass switch, 2-dB
// simplified T without the series switch, continuously tuned shunt unit),
// the full chip cascade, and the closed-form S21/phase evaluators for the
// compensated T-type attenuation state.

#include <string>
#include <vector>

#include "attenforge/devices.hpp"
#include "attenforge/mna.hpp"
#include "attenforge/netcore.hpp"

namespace attenforge {

// 4-dB unit: series arms r1, shunt r2 with compensation capacitor c_comp,
// series bypass switch (bridges the whole series path) and shunt switch.
struct TTypeUnitSpec {
    ResistorModel r1;
    ResistorModel r2;
    double c_comp{0.0};
    SwitchModel series_switch;
    SwitchModel shunt_switch;
};

// 2-dB unit: the series switch is removed; the metal-line arms are always in
// the path and only the shunt branch switches.
struct SimplifiedTUnitSpec {
    ResistorModel r1;
    ResistorModel r2;
    double c_comp{0.0};
    SwitchModel shunt_switch;
};

// Continuous unit: shunt-only branch, r2 in series with the tuned FET.
struct ContinuousUnitSpec {
    ResistorModel r2;
    ContinuousFetModel fet;
};

// Ideal line: electrical length theta_ref at f_ref, theta(f) = theta_ref*f/f_ref.
struct TlineSpec {
    double z_c_ohms{50.0};
    double theta_ref_rad{0.0};
    double f_ref_hz{60e9};
};

struct AttenuatorChipSpec {
    TTypeUnitSpec unit4;
    TlineSpec tl_a;
    SimplifiedTUnitSpec unit2;
    TlineSpec tl_b;
    ContinuousUnitSpec cont;
    double z0_ohms{50.0};
};

enum class BitState { Ref, Att };

struct AttenuatorState {
    BitState bit4{BitState::Ref};
    BitState bit2{BitState::Ref};
    double vc{0.0};
    double nominal_db{0.0};  // label value; ideal relative attenuation
    std::string label;       // e.g. "3.5"
};

struct CalibrationEntry {
    double target_db{0.0};
    double vc{0.0};
    double achieved_db_at_f0{0.0};
};

// Targets strictly increasing, vc strictly increasing with target.
struct CalibrationTable {
    std::vector<CalibrationEntry> entries;
};

void validate_table(const CalibrationTable& table);

// S21 of the compensated T attenuation state, exactly as the closed form:
//   num = 2 z0 (r2 + r_on2) + 2 j w c z0 r_on2 r2
//   den = (1 + j w c r2) [2 r_on2 (z0+r1) + (z0+r1)^2] + 2 r2 (z0+r1)
Complex eval_eq1(double r1, double r2, double r_on2, double c_comp, double z0,
                 double omega);

// First-order (in omega) phase of eval_eq1, radians:
//   w c r_on2 r2/(r2+r_on2) - w c (2 r_on2+r1+z0) r2/(z0+r1+2 r_on2+2 r2)
double eval_eq2(double r1, double r2, double r_on2, double c_comp, double z0,
                double omega);

// Attenuation state: arms in the series path, series switch off-capacitance
// bridging the whole path, shunt switch on. Reference state: series switch
// on (bypassing the arms), shunt switch off.
Abcd ttype_twoport(const TTypeUnitSpec& spec, BitState state, double omega);
Abcd simplified_twoport(const SimplifiedTUnitSpec& spec, BitState state, double omega);
Abcd continuous_twoport(const ContinuousUnitSpec& spec, double vc, double omega);

Abcd chip_abcd(const AttenuatorChipSpec& chip, const AttenuatorState& state,
               double omega);
SParams2 chip_twoport(const AttenuatorChipSpec& chip, const AttenuatorState& state,
                      double omega);

// Ordered states covering 0..7.5 dB at the given pitch (0.5 -> the 16 coarse
// states, 0.1 -> 76 states). Digital bits supply {0,2,4,6} dB, the continuous
// unit the remainder via the calibration table (built at f0_hz). Throws
// ConfigError when the step does not divide the range or a table entry for a
// required continuous setting is missing.
std::vector<AttenuatorState> enumerate_states(const AttenuatorChipSpec& chip,
                                              double step_db, double f0_hz,
                                              const CalibrationTable& table);

// Equivalent netlists of the same circuits, for oracle cross-checks.
Netlist ttype_netlist(const TTypeUnitSpec& spec, BitState state);
Netlist simplified_netlist(const SimplifiedTUnitSpec& spec, BitState state);
Netlist continuous_netlist(const ContinuousUnitSpec& spec, double vc);
Netlist eq1_netlist(double r1, double r2, double r_on2, double c_comp);

// Full chip as a lumped netlist; each ideal line becomes an LC ladder.
Netlist chip_netlist(const AttenuatorChipSpec& chip, const AttenuatorState& state,
                     int tline_sections = 16);

}  // namespace attenforge
