#include "attenforge/attenuator.hpp"

#include <cmath>
#include <cstdio>
#include <optional>

namespace attenforge {

namespace {

// Admittance of the grounded shunt branch hanging off the T mid node:
// c_par/2 of r2 at the top, (r2 || c_comp) in the middle, then the bottom
// node carrying r2's other c_par/2 plus the switch (or FET) to ground.
// An absent switch branch with no bottom capacitance leaves the branch open
// below the top parasitic.
Complex shunt_branch_y(const ResistorModel& r2, double c_comp,
                       const std::optional<Complex>& sw_z, double omega) {
    const Complex y_top(0.0, omega * r2.c_par / 2.0);
    const Complex z_mid = 1.0 / Complex(1.0 / r2.r, omega * c_comp);
    Complex y_bot(0.0, omega * r2.c_par / 2.0);
    if (sw_z)
        y_bot += 1.0 / *sw_z;
    if (std::abs(y_bot) < 1e-30)
        return y_top;
    return y_top + 1.0 / (z_mid + 1.0 / y_bot);
}

}  // namespace

void validate_table(const CalibrationTable& table) {
    if (table.entries.empty())
        throw ConfigError("calibration table is empty");
    for (size_t i = 1; i < table.entries.size(); ++i) {
        if (!(table.entries[i].target_db > table.entries[i - 1].target_db))
            throw ConfigError("calibration targets must be strictly increasing");
        if (!(table.entries[i].vc > table.entries[i - 1].vc))
            throw ConfigError("calibration vc must be strictly increasing");
    }
}

Complex eval_eq1(double r1, double r2, double r_on2, double c_comp, double z0,
                 double omega) {
    if (!(r1 > 0.0) || !(r2 > 0.0) || !(r_on2 > 0.0) || !(z0 > 0.0))
        throw NumericError("eval_eq1 requires positive resistances");
    const Complex jwc(0.0, omega * c_comp);
    const Complex num = 2.0 * z0 * (r2 + r_on2) + 2.0 * jwc * z0 * r_on2 * r2;
    const double zr = z0 + r1;
    const Complex den =
        (1.0 + jwc * r2) * (2.0 * r_on2 * zr + zr * zr) + 2.0 * r2 * zr;
    if (!(std::abs(den) > 1e-30))
        throw NumericError("eval_eq1 denominator vanished");
    return num / den;
}

double eval_eq2(double r1, double r2, double r_on2, double c_comp, double z0,
                double omega) {
    if (!(r1 > 0.0) || !(r2 > 0.0) || !(r_on2 > 0.0) || !(z0 > 0.0))
        throw NumericError("eval_eq2 requires positive resistances");
    const double wc = omega * c_comp;
    return wc * r_on2 * r2 / (r2 + r_on2) -
           wc * (2.0 * r_on2 + r1 + z0) * r2 / (z0 + r1 + 2.0 * r_on2 + 2.0 * r2);
}

Abcd ttype_twoport(const TTypeUnitSpec& spec, BitState state, double omega) {
    const bool att = state == BitState::Att;
    const Abcd arm = resistor_twoport(spec.r1, omega);
    const Complex y_sh = shunt_branch_y(
        spec.r2, spec.c_comp,
        switch_branch(spec.shunt_switch, att ? SwitchState::On : SwitchState::Off, omega),
        omega);
    const Abcd t = abcd_cascade(abcd_cascade(arm, abcd_shunt(y_sh)), arm);
    const std::optional<Complex> z_bridge = switch_branch(
        spec.series_switch, att ? SwitchState::Off : SwitchState::On, omega);
    if (!z_bridge)
        return t;
    return parallel_combine(t, abcd_series(*z_bridge));
}

Abcd simplified_twoport(const SimplifiedTUnitSpec& spec, BitState state,
                        double omega) {
    const bool att = state == BitState::Att;
    const Abcd arm = resistor_twoport(spec.r1, omega);
    const Complex y_sh = shunt_branch_y(
        spec.r2, spec.c_comp,
        switch_branch(spec.shunt_switch, att ? SwitchState::On : SwitchState::Off, omega),
        omega);
    return abcd_cascade(abcd_cascade(arm, abcd_shunt(y_sh)), arm);
}

Abcd continuous_twoport(const ContinuousUnitSpec& spec, double vc, double omega) {
    const Complex z_fet(fet_resistance(spec.fet, vc), 0.0);
    return abcd_shunt(shunt_branch_y(spec.r2, 0.0, z_fet, omega));
}

Abcd chip_abcd(const AttenuatorChipSpec& chip, const AttenuatorState& state,
               double omega) {
    const double f = omega / (2.0 * M_PI);
    auto tline = [&](const TlineSpec& tl) {
        return abcd_tline(tl.z_c_ohms, tl.theta_ref_rad * f / tl.f_ref_hz);
    };
    Abcd m = ttype_twoport(chip.unit4, state.bit4, omega);
    m = abcd_cascade(m, tline(chip.tl_a));
    m = abcd_cascade(m, simplified_twoport(chip.unit2, state.bit2, omega));
    m = abcd_cascade(m, tline(chip.tl_b));
    m = abcd_cascade(m, continuous_twoport(chip.cont, state.vc, omega));
    return m;
}

SParams2 chip_twoport(const AttenuatorChipSpec& chip, const AttenuatorState& state,
                      double omega) {
    return abcd_to_s(chip_abcd(chip, state, omega), chip.z0_ohms);
}

std::vector<AttenuatorState> enumerate_states(const AttenuatorChipSpec& chip,
                                              double step_db, double f0_hz,
                                              const CalibrationTable& table) {
    (void)f0_hz;  // the table is built at f0; kept for interface symmetry
    validate_table(table);
    const long step_tenths = std::lround(step_db * 10.0);
    constexpr long range_tenths = 75;  // 0..7.5 dB
    if (step_tenths < 1 || range_tenths % step_tenths != 0 ||
        std::abs(step_db * 10.0 - static_cast<double>(step_tenths)) > 1e-9)
        throw ConfigError("state step must divide the 7.5 dB range in 0.1 dB units");

    auto vc_for = [&](long cont_tenths) {
        for (const CalibrationEntry& e : table.entries)
            if (std::lround(e.target_db * 10.0) == cont_tenths)
                return e.vc;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.1f", cont_tenths / 10.0);
        throw ConfigError(std::string("missing calibration entry for ") + buf + " dB");
    };

    std::vector<AttenuatorState> states;
    for (long t = 0; t <= range_tenths; t += step_tenths) {
        const long digital = std::min(60L, (t / 20L) * 20L);
        const long cont = t - digital;
        AttenuatorState s;
        s.bit4 = digital >= 40 ? BitState::Att : BitState::Ref;
        s.bit2 = (digital % 40) >= 20 ? BitState::Att : BitState::Ref;
        s.vc = vc_for(cont);
        s.nominal_db = static_cast<double>(t) / 10.0;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1f", s.nominal_db);
        s.label = buf;
        // Guard against states outside the FET's calibrated span.
        fet_resistance(chip.cont.fet, s.vc);
        states.push_back(std::move(s));
    }
    return states;
}

namespace {

int add_node(Netlist& net) { return net.node_count++; }

void add_cap(Netlist& net, const std::string& name, int n1, int n2, double c) {
    if (c > 0.0)
        net.elements.push_back({ElementKind::Capacitor, name, n1, n2, c});
}

void add_res(Netlist& net, const std::string& name, int n1, int n2, double r) {
    net.elements.push_back({ElementKind::Resistor, name, n1, n2, r});
}

void add_resistor_model(Netlist& net, const std::string& prefix,
                        const ResistorModel& m, int n1, int n2) {
    add_cap(net, prefix + "_cpa", n1, 0, m.c_par / 2.0);
    add_res(net, prefix + "_r", n1, n2, m.r);
    add_cap(net, prefix + "_cpb", n2, 0, m.c_par / 2.0);
}

// Switch between n1 and n2 in the given state; an off switch with c_off = 0
// contributes nothing (open branch).
void add_switch(Netlist& net, const std::string& prefix, const SwitchModel& m,
                SwitchState state, int n1, int n2) {
    if (state == SwitchState::On) {
        add_res(net, prefix + "_ron", n1, n2, m.r_on);
        add_cap(net, prefix + "_cpon", n1, n2, m.c_par_on);
    } else {
        add_cap(net, prefix + "_coff", n1, n2, m.c_off);
    }
}

// Shunt branch from 'top' to ground: r2 (pi parasitics) in series with the
// switch; c_comp parallels r2 only.
void add_shunt_branch(Netlist& net, const std::string& prefix,
                      const ResistorModel& r2, double c_comp,
                      const SwitchModel& sw, SwitchState sw_state, int top) {
    const int bot = add_node(net);
    add_resistor_model(net, prefix + "_r2", r2, top, bot);
    add_cap(net, prefix + "_ccomp", top, bot, c_comp);
    add_switch(net, prefix + "_m2", sw, sw_state, bot, 0);
}

void add_ttype(Netlist& net, const std::string& prefix, const TTypeUnitSpec& spec,
               BitState state, int n_in, int n_out) {
    const bool att = state == BitState::Att;
    const int mid = add_node(net);
    add_resistor_model(net, prefix + "_r1a", spec.r1, n_in, mid);
    add_resistor_model(net, prefix + "_r1b", spec.r1, mid, n_out);
    add_switch(net, prefix + "_m1", spec.series_switch,
               att ? SwitchState::Off : SwitchState::On, n_in, n_out);
    add_shunt_branch(net, prefix, spec.r2, spec.c_comp, spec.shunt_switch,
                     att ? SwitchState::On : SwitchState::Off, mid);
}

void add_simplified(Netlist& net, const std::string& prefix,
                    const SimplifiedTUnitSpec& spec, BitState state, int n_in,
                    int n_out) {
    const bool att = state == BitState::Att;
    const int mid = add_node(net);
    add_resistor_model(net, prefix + "_r1a", spec.r1, n_in, mid);
    add_resistor_model(net, prefix + "_r1b", spec.r1, mid, n_out);
    add_shunt_branch(net, prefix, spec.r2, spec.c_comp, spec.shunt_switch,
                     att ? SwitchState::On : SwitchState::Off, mid);
}

void add_continuous(Netlist& net, const std::string& prefix,
                    const ContinuousUnitSpec& spec, double vc, int node) {
    const int bot = add_node(net);
    add_resistor_model(net, prefix + "_r2", spec.r2, node, bot);
    add_res(net, prefix + "_rfet", bot, 0, fet_resistance(spec.fet, vc));
}

Netlist fresh_two_port_net() {
    Netlist net;
    net.node_count = 3;  // ground, port 1, port 2
    net.port1 = {1, 0};
    net.port2 = {2, 0};
    return net;
}

}  // namespace

Netlist ttype_netlist(const TTypeUnitSpec& spec, BitState state) {
    Netlist net = fresh_two_port_net();
    add_ttype(net, "u", spec, state, 1, 2);
    validate_netlist(net);
    return net;
}

Netlist simplified_netlist(const SimplifiedTUnitSpec& spec, BitState state) {
    Netlist net = fresh_two_port_net();
    add_simplified(net, "u", spec, state, 1, 2);
    validate_netlist(net);
    return net;
}

Netlist continuous_netlist(const ContinuousUnitSpec& spec, double vc) {
    Netlist net;
    net.node_count = 2;
    net.port1 = {1, 0};
    net.port2 = {1, 0};
    add_continuous(net, "u", spec, vc, 1);
    validate_netlist(net);
    return net;
}

Netlist eq1_netlist(double r1, double r2, double r_on2, double c_comp) {
    Netlist net = fresh_two_port_net();
    const int mid = add_node(net);
    const int bot = add_node(net);
    add_res(net, "r1a", 1, mid, r1);
    add_res(net, "r1b", mid, 2, r1);
    add_res(net, "r2", mid, bot, r2);
    add_cap(net, "ccomp", mid, bot, c_comp);
    add_res(net, "ron2", bot, 0, r_on2);
    validate_netlist(net);
    return net;
}

Netlist chip_netlist(const AttenuatorChipSpec& chip, const AttenuatorState& state,
                     int tline_sections) {
    Netlist net = fresh_two_port_net();
    const int n_a = add_node(net);
    const int n_b = add_node(net);
    const int n_c = add_node(net);
    add_ttype(net, "u4", chip.unit4, state.bit4, 1, n_a);
    append_tline_ladder(net, n_a, n_b, chip.tl_a.z_c_ohms, chip.tl_a.theta_ref_rad,
                        chip.tl_a.f_ref_hz, tline_sections);
    add_simplified(net, "u2", chip.unit2, state.bit2, n_b, n_c);
    append_tline_ladder(net, n_c, 2, chip.tl_b.z_c_ohms, chip.tl_b.theta_ref_rad,
                        chip.tl_b.f_ref_hz, tline_sections);
    add_continuous(net, "ct", chip.cont, state.vc, 2);
    validate_netlist(net);
    return net;
}

}  // namespace attenforge
