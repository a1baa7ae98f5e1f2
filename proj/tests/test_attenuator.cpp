#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "attenforge/attenuator.hpp"
#include "attenforge/mna.hpp"

using namespace attenforge;

namespace {

constexpr double kOmega60 = 2.0 * M_PI * 60e9;
constexpr double kOmega100 = 2.0 * M_PI * 100e9;

double rel_diff(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

// 4-dB T-type unit with realistic parasitics everywhere.
TTypeUnitSpec full_ttype() {
    TTypeUnitSpec u;
    u.r1 = {11.3137, 1e-15};
    u.r2 = {104.829, 1.5e-15};
    u.c_comp = 8e-15;
    u.series_switch = {8.0, 4e-15, 2e-15};
    u.shunt_switch = {10.0, 4e-15, 0.0};
    return u;
}

SimplifiedTUnitSpec full_simplified() {
    SimplifiedTUnitSpec u;
    u.r1 = {5.7312, 0.5e-15};
    u.r2 = {107.6, 1.5e-15};
    u.c_comp = 5e-15;
    u.shunt_switch = {10.0, 4e-15, 0.0};
    return u;
}

AttenuatorChipSpec test_chip() {
    AttenuatorChipSpec chip;
    chip.unit4 = full_ttype();
    chip.unit4.c_comp = 0.0;
    chip.unit4.series_switch.c_par_on = 0.0;
    chip.tl_a = {55.0, 10.0 * M_PI / 180.0, 60e9};
    chip.unit2 = full_simplified();
    chip.unit2.c_comp = 0.0;
    chip.tl_b = {55.0, 10.0 * M_PI / 180.0, 60e9};
    chip.cont.r2 = {40.0, 1e-15};
    chip.cont.fet = {};
    return chip;
}

CalibrationTable fake_table(int entries = 21) {
    CalibrationTable t;
    for (int i = 0; i < entries; ++i)
        t.entries.push_back({0.1 * i, 0.05 * i, 0.1 * i});
    return t;
}

}  // namespace

TEST_CASE("closed-form S21 (resistive limit)") {
    const double r1 = 11.3127, r2 = 104.8288, ron = 10.0, z0 = 50.0;

    // With c_comp = 0 the value is real at any frequency and equals the
    // resistive-T expression.
    for (double w : {0.0, kOmega60, kOmega100}) {
        const Complex v = eval_eq1(r1, r2, ron, 0.0, z0, w);
        CHECK(v.imag() == 0.0);
        const double want = 2.0 * z0 * (r2 + ron) /
                            ((z0 + r1) * (z0 + r1) + 2.0 * (r2 + ron) * (z0 + r1));
        CHECK(v.real() == doctest::Approx(want).epsilon(1e-12));
    }

    const Complex dc = eval_eq1(r1, r2, ron, 0.0, z0, 0.0);
    CHECK(std::abs(dc) == doctest::Approx(0.64365).epsilon(5e-5));
    CHECK(mag_db(dc) == doctest::Approx(-3.829).epsilon(1e-3));

    // The oracle agrees at DC.
    const SParams2 sp = solve_sparams(eq1_netlist(r1, r2, ron, 20e-15), 0.0, z0);
    CHECK(std::abs(sp.s21 - dc) <= 1e-12);

    CHECK_THROWS_AS(eval_eq1(-1.0, r2, ron, 0.0, z0, 0.0), NumericError);
    CHECK_THROWS_AS(eval_eq1(r1, r2, ron, 0.0, 0.0, 0.0), NumericError);
}

TEST_CASE("closed form equals the oracle with compensation") {
    const double r1 = 11.3127, r2 = 104.8288, ron = 10.0, c = 20e-15, z0 = 50.0;
    const Netlist net = eq1_netlist(r1, r2, ron, c);
    for (double f : {20e9, 60e9, 100e9}) {
        const double w = 2.0 * M_PI * f;
        CHECK(rel_diff(solve_sparams(net, w, z0).s21, eval_eq1(r1, r2, ron, c, z0, w)) <=
              1e-9);
    }
}

TEST_CASE("first-order phase") {
    const double r1 = 11.3127, r2 = 104.8288, ron = 10.0, c = 20e-15, z0 = 50.0;

    CHECK(eval_eq2(r1, r2, ron, c, z0, 0.0) == 0.0);
    CHECK(eval_eq2(r1, r2, ron, 0.0, z0, kOmega60) == 0.0);

    // Residual against the exact phase is cubic in frequency: tiny at 1 GHz
    // and 8x larger at 2 GHz.
    const double w1 = 2.0 * M_PI * 1e9;
    const double e1 =
        std::abs(eval_eq2(r1, r2, ron, c, z0, w1) - std::arg(eval_eq1(r1, r2, ron, c, z0, w1)));
    const double e2 = std::abs(eval_eq2(r1, r2, ron, c, z0, 2.0 * w1) -
                               std::arg(eval_eq1(r1, r2, ron, c, z0, 2.0 * w1)));
    CHECK(e1 <= 1e-4);
    CHECK(e2 / e1 == doctest::Approx(8.0).epsilon(0.07));
}

TEST_CASE("T-type unit states") {
    // Ideal switches, reference state, DC: a perfect through.
    TTypeUnitSpec ideal = full_ttype();
    ideal.r1.c_par = ideal.r2.c_par = 0.0;
    ideal.c_comp = 0.0;
    ideal.series_switch = {1e-6, 0.0, 0.0};
    ideal.shunt_switch = {1e-6, 0.0, 0.0};
    const SParams2 ref = abcd_to_s(ttype_twoport(ideal, BitState::Ref, 0.0), 50.0);
    CHECK(std::abs(std::abs(ref.s21) - 1.0) <= 1e-4);

    // Attenuation state at DC with no bridge capacitance reduces to the
    // closed form with r_on2 = the shunt switch resistance.
    TTypeUnitSpec att = full_ttype();
    att.r1.c_par = att.r2.c_par = 0.0;
    att.series_switch.c_off = 0.0;
    att.shunt_switch = {10.0, 4e-15, 0.0};
    att.c_comp = 20e-15;
    const SParams2 a = abcd_to_s(ttype_twoport(att, BitState::Att, 0.0), 50.0);
    const Complex closed = eval_eq1(att.r1.r, att.r2.r, 10.0, att.c_comp, 50.0, 0.0);
    CHECK(std::abs(a.s21 - closed) <= 1e-12);

    // Full-parasitic attenuation state matches the oracle netlist at 60 GHz
    // in both states.
    const TTypeUnitSpec u = full_ttype();
    for (BitState st : {BitState::Att, BitState::Ref}) {
        const SParams2 got = abcd_to_s(ttype_twoport(u, st, kOmega60), 50.0);
        const SParams2 want = solve_sparams(ttype_netlist(u, st), kOmega60, 50.0);
        CHECK(rel_diff(got.s21, want.s21) <= 1e-9);
        CHECK(std::abs(got.s11 - want.s11) <= 1e-9);
    }
}

TEST_CASE("simplified unit states") {
    SimplifiedTUnitSpec u = full_simplified();

    // Reference state with no parasitics at DC: a plain series pad.
    SimplifiedTUnitSpec plain = u;
    plain.r1.c_par = plain.r2.c_par = 0.0;
    plain.c_comp = 0.0;
    plain.shunt_switch.c_off = 0.0;
    const SParams2 ref = abcd_to_s(simplified_twoport(plain, BitState::Ref, 0.0), 50.0);
    const double want_ref = 2.0 * 50.0 / (2.0 * 50.0 + 2.0 * plain.r1.r);
    CHECK(std::abs(ref.s21 - want_ref) <= 1e-12);

    // DC attenuation delta (ref vs att) equals the resistive closed forms.
    const SParams2 att = abcd_to_s(simplified_twoport(plain, BitState::Att, 0.0), 50.0);
    const double delta = mag_db(ref.s21) - mag_db(att.s21);
    const double rs = plain.r2.r + plain.shunt_switch.r_on;
    const double want_att = 2.0 * 50.0 * rs /
                            ((50.0 + plain.r1.r) * (50.0 + plain.r1.r) +
                             2.0 * rs * (50.0 + plain.r1.r));
    CHECK(delta ==
          doctest::Approx(20.0 * std::log10(want_ref / want_att)).epsilon(1e-12));

    // Full-parasitic states match the oracle at 100 GHz.
    for (BitState st : {BitState::Att, BitState::Ref}) {
        const SParams2 got = abcd_to_s(simplified_twoport(u, st, kOmega100), 50.0);
        const SParams2 want = solve_sparams(simplified_netlist(u, st), kOmega100, 50.0);
        CHECK(rel_diff(got.s21, want.s21) <= 1e-9);
    }
}

TEST_CASE("continuous unit") {
    ContinuousUnitSpec u;
    u.r2 = {40.0, 0.0};
    u.fet = {};

    // Nearly-open FET: the branch barely loads the line.
    ContinuousUnitSpec open_u = u;
    open_u.fet.r_max = 1e8;
    const SParams2 sp =
        abcd_to_s(continuous_twoport(open_u, open_u.fet.vc_lo, kOmega60), 50.0);
    CHECK(std::abs(sp.s21) >= 1.0 - 1e-5);

    // Attenuation strictly increases with control voltage.
    u.r2.c_par = 1e-15;
    double prev = 1.0;
    for (int i = 0; i <= 12; ++i) {
        const double vc = 1.2 * i / 12.0;
        const double mag =
            std::abs(abcd_to_s(continuous_twoport(u, vc, kOmega60), 50.0).s21);
        CHECK(mag < prev);
        prev = mag;
    }

    // More than the 2-dB tuning range is available end to end.
    const double hi = std::abs(abcd_to_s(continuous_twoport(u, 0.0, kOmega60), 50.0).s21);
    const double lo = std::abs(abcd_to_s(continuous_twoport(u, 1.2, kOmega60), 50.0).s21);
    CHECK(20.0 * std::log10(hi / lo) > 2.0);

    // Matches its own netlist through the oracle.
    const SParams2 got = abcd_to_s(continuous_twoport(u, 0.7, kOmega60), 50.0);
    const SParams2 want = solve_sparams(continuous_netlist(u, 0.7), kOmega60, 50.0);
    CHECK(rel_diff(got.s21, want.s21) <= 1e-9);
}

TEST_CASE("chip cascade") {
    AttenuatorChipSpec chip = test_chip();
    chip.tl_a.theta_ref_rad = 0.0;
    chip.tl_b.theta_ref_rad = 0.0;

    AttenuatorState st;
    st.bit4 = BitState::Att;
    st.bit2 = BitState::Ref;
    st.vc = 0.4;

    // Zero-length lines: the chip is exactly the product of its units.
    const Abcd got = chip_abcd(chip, st, kOmega60);
    Abcd want = ttype_twoport(chip.unit4, st.bit4, kOmega60);
    want = abcd_cascade(want, simplified_twoport(chip.unit2, st.bit2, kOmega60));
    want = abcd_cascade(want, continuous_twoport(chip.cont, st.vc, kOmega60));
    CHECK(std::abs(got.a - want.a) <= 1e-12);
    CHECK(std::abs(got.b - want.b) <= 1e-12);
    CHECK(std::abs(got.c - want.c) <= 1e-12);
    CHECK(std::abs(got.d - want.d) <= 1e-12);

    // With real line lengths, chip_twoport matches the full lumped netlist
    // oracle to the LC-ladder truncation accuracy (~1e-6 at 10-degree lines).
    chip = test_chip();
    const SParams2 sp = chip_twoport(chip, st, kOmega60);
    const SParams2 osp = solve_sparams(chip_netlist(chip, st), kOmega60, 50.0);
    CHECK(std::abs(std::abs(sp.s21) - std::abs(osp.s21)) <= 1e-5);
    CHECK(std::abs(wrap_deg(phase_deg(sp.s21) - phase_deg(osp.s21))) <= 0.01);
}

TEST_CASE("state enumeration") {
    const AttenuatorChipSpec chip = test_chip();
    const CalibrationTable table = fake_table();

    const auto coarse = enumerate_states(chip, 0.5, 60e9, table);
    REQUIRE(coarse.size() == 16);
    CHECK(coarse.front().label == "0.0");
    CHECK(coarse.front().bit4 == BitState::Ref);
    CHECK(coarse.front().bit2 == BitState::Ref);
    CHECK(coarse.front().vc == table.entries.front().vc);
    CHECK(coarse.back().label == "7.5");
    CHECK(coarse.back().bit4 == BitState::Att);
    CHECK(coarse.back().bit2 == BitState::Att);
    for (size_t i = 0; i < coarse.size(); ++i)
        CHECK(coarse[i].nominal_db == doctest::Approx(0.5 * i).epsilon(1e-12));

    // 2.5 dB decomposes into the 2-dB bit plus 0.5 dB continuous.
    const AttenuatorState& s25 = coarse[5];
    CHECK(s25.label == "2.5");
    CHECK(s25.bit4 == BitState::Ref);
    CHECK(s25.bit2 == BitState::Att);
    CHECK(s25.vc == table.entries[5].vc);

    // 7.0 dB uses both bits plus 1.0 dB continuous.
    const AttenuatorState& s70 = coarse[14];
    CHECK(s70.bit4 == BitState::Att);
    CHECK(s70.bit2 == BitState::Att);
    CHECK(s70.vc == table.entries[10].vc);

    const auto fine = enumerate_states(chip, 0.1, 60e9, table);
    CHECK(fine.size() == 76);

    CHECK_THROWS_AS(enumerate_states(chip, 0.2, 60e9, table), ConfigError);
    CHECK_THROWS_WITH_AS(enumerate_states(chip, 0.5, 60e9, fake_table(4)),
                         doctest::Contains("calibration"), ConfigError);
}

TEST_CASE("calibration table invariants") {
    CHECK_NOTHROW(validate_table(fake_table()));

    CalibrationTable bad = fake_table();
    bad.entries[3].vc = bad.entries[2].vc;
    CHECK_THROWS_AS(validate_table(bad), ConfigError);

    bad = fake_table();
    bad.entries[5].target_db = bad.entries[4].target_db - 0.05;
    CHECK_THROWS_AS(validate_table(bad), ConfigError);
}
