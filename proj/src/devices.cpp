#include "attenforge/devices.hpp"

#include <cmath>

namespace attenforge {

void validate_model(const SwitchModel& m) {
    if (!(m.r_on > 0.0))
        throw ConfigError("switch r_on must be positive");
    if (m.c_off < 0.0 || m.c_par_on < 0.0)
        throw ConfigError("switch capacitances must be non-negative");
}

void validate_model(const ResistorModel& m) {
    if (!(m.r > 0.0))
        throw ConfigError("resistor r must be positive");
    if (m.c_par < 0.0)
        throw ConfigError("resistor c_par must be non-negative");
}

void validate_model(const ContinuousFetModel& m) {
    if (!(m.r_min > 0.0) || !(m.r_min < m.r_max))
        throw ConfigError("fet requires 0 < r_min < r_max");
    if (!(m.vc_lo < m.vc_hi))
        throw ConfigError("fet requires vc_lo < vc_hi");
}

std::optional<Complex> switch_branch(const SwitchModel& m, SwitchState state,
                                     double omega) {
    if (state == SwitchState::On) {
        const Complex y = Complex(1.0 / m.r_on, omega * m.c_par_on);
        return 1.0 / y;
    }
    if (m.c_off == 0.0 || omega == 0.0)
        return std::nullopt;  // open branch
    return 1.0 / Complex(0.0, omega * m.c_off);
}

Abcd resistor_twoport(const ResistorModel& m, double omega) {
    const Abcd half = abcd_shunt(Complex(0.0, omega * m.c_par / 2.0));
    return abcd_cascade(abcd_cascade(half, abcd_series(Complex(m.r, 0.0))), half);
}

double fet_resistance(const ContinuousFetModel& m, double vc) {
    if (vc < m.vc_lo || vc > m.vc_hi)
        throw ConfigError("fet control voltage out of range");
    const double t = (vc - m.vc_lo) / (m.vc_hi - m.vc_lo);
    double u;
    if (std::abs(m.shape) < 1e-9) {
        u = t;
    } else {
        auto sig = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
        const double s = m.shape;
        u = (sig(s * (t - 0.5)) - sig(-s / 2.0)) / (sig(s / 2.0) - sig(-s / 2.0));
    }
    return m.r_max - (m.r_max - m.r_min) * u;
}

}  // namespace attenforge
