#pragma once

// Device models: switch transistors (on/off), resistors with distributed
// parasitics lumped as a symmetric pi, and the continuously tuned shunt FET.

#include <optional>

#include "attenforge/netcore.hpp"

namespace attenforge {

// r_on in the on state, c_off in the off state, plus an optional on-state
// drain/source parasitic capacitance.
struct SwitchModel {
    double r_on{10.0};
    double c_off{15e-15};
    double c_par_on{0.0};
};

// Series resistor with c_par/2 to ground at each terminal. Metal-line
// resistors are expressed as a smaller c_par than poly resistors of equal r.
struct ResistorModel {
    double r{50.0};
    double c_par{0.0};
};

// Voltage-controlled resistor: strictly decreasing r(vc) on [vc_lo, vc_hi]
// with exact endpoints r(vc_lo) = r_max, r(vc_hi) = r_min. A normalized
// logistic in 'shape' (shape -> 0 degenerates to a linear map).
struct ContinuousFetModel {
    double r_min{40.0};
    double r_max{2500.0};
    double vc_lo{0.0};
    double vc_hi{1.2};
    double shape{4.0};
};

void validate_model(const SwitchModel& m);
void validate_model(const ResistorModel& m);
void validate_model(const ContinuousFetModel& m);

enum class SwitchState { On, Off };

// Branch impedance of the switch. On: r_on parallel c_par_on. Off: the
// impedance of c_off; an off switch with no capacitance (or at omega = 0)
// is an open branch, reported as nullopt rather than an infinity.
std::optional<Complex> switch_branch(const SwitchModel& m, SwitchState state,
                                     double omega);

// shunt(jw c_par/2) * series(r) * shunt(jw c_par/2).
Abcd resistor_twoport(const ResistorModel& m, double omega);

// Throws ConfigError when vc is outside [vc_lo, vc_hi].
double fet_resistance(const ContinuousFetModel& m, double vc);

}  // namespace attenforge
