#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "attenforge/devices.hpp"
#include "attenforge/netcore.hpp"

using namespace attenforge;

namespace {

constexpr double kOmega60 = 2.0 * M_PI * 60e9;
constexpr double kOmega100 = 2.0 * M_PI * 100e9;

}  // namespace

TEST_CASE("switch branch impedance") {
    SwitchModel sw;
    sw.r_on = 10.0;
    sw.c_off = 15e-15;
    sw.c_par_on = 0.0;

    // On with no parasitic: exactly r_on at any frequency.
    auto z_on = switch_branch(sw, SwitchState::On, kOmega60);
    REQUIRE(z_on.has_value());
    CHECK(*z_on == Complex(10.0, 0.0));

    // On with a parasitic: r_on parallel the capacitor.
    sw.c_par_on = 5e-15;
    auto z_onp = switch_branch(sw, SwitchState::On, kOmega60);
    REQUIRE(z_onp.has_value());
    const Complex want = 1.0 / Complex(1.0 / 10.0, kOmega60 * 5e-15);
    CHECK(std::abs(*z_onp - want) <= 1e-12);
    sw.c_par_on = 0.0;

    // Off at 60 GHz: -j/(omega c_off), around -j * 176.8 ohms; identical to
    // the reciprocal of the oracle's capacitor stamp.
    auto z_off = switch_branch(sw, SwitchState::Off, kOmega60);
    REQUIRE(z_off.has_value());
    CHECK(z_off->real() == 0.0);
    CHECK(z_off->imag() == doctest::Approx(-176.8388).epsilon(1e-3));
    CHECK(std::abs(*z_off - 1.0 / Complex(0.0, kOmega60 * 15e-15)) <= 1e-12);

    // Off at DC (or with no off-capacitance) is the open-branch sentinel.
    CHECK_FALSE(switch_branch(sw, SwitchState::Off, 0.0).has_value());
    sw.c_off = 0.0;
    CHECK_FALSE(switch_branch(sw, SwitchState::Off, kOmega60).has_value());

    SwitchModel bad;
    bad.r_on = 0.0;
    CHECK_THROWS_AS(validate_model(bad), ConfigError);
    bad = SwitchModel{};
    bad.c_off = -1e-15;
    CHECK_THROWS_AS(validate_model(bad), ConfigError);
}

TEST_CASE("metal-line resistor pi model") {
    ResistorModel r;
    r.r = 5.0;
    r.c_par = 0.0;

    // No parasitic, or DC: collapses to a pure series resistor.
    Abcd m = resistor_twoport(r, kOmega100);
    CHECK(m.a == Complex(1.0));
    CHECK(m.b == Complex(5.0));
    CHECK(m.c == Complex(0.0));
    r.c_par = 20e-15;
    m = resistor_twoport(r, 0.0);
    CHECK(m.b == Complex(5.0));
    CHECK(m.c == Complex(0.0));

    // Smaller parasitic = smaller |s21| deviation from the DC value at
    // 100 GHz (the wideband argument for metal-line arms).
    const double dc = std::abs(abcd_to_s(abcd_series(Complex(5.0, 0.0)), 50.0).s21);
    ResistorModel small = r, big = r;
    small.c_par = 4e-15;
    big.c_par = 20e-15;
    const double dev_small =
        std::abs(std::abs(abcd_to_s(resistor_twoport(small, kOmega100), 50.0).s21) - dc);
    const double dev_big =
        std::abs(std::abs(abcd_to_s(resistor_twoport(big, kOmega100), 50.0).s21) - dc);
    CHECK(dev_small < dev_big);

    ResistorModel bad;
    bad.r = -1.0;
    CHECK_THROWS_AS(validate_model(bad), ConfigError);
    bad = ResistorModel{};
    bad.c_par = -1e-15;
    CHECK_THROWS_AS(validate_model(bad), ConfigError);
}

TEST_CASE("continuous FET resistance") {
    ContinuousFetModel fet;  // 40..2500 ohms over 0..1.2 V, shape 4

    CHECK(fet_resistance(fet, fet.vc_lo) == doctest::Approx(fet.r_max));
    CHECK(fet_resistance(fet, fet.vc_hi) == doctest::Approx(fet.r_min));
    const double mid = fet_resistance(fet, 0.6);
    CHECK(mid > fet.r_min);
    CHECK(mid < fet.r_max);

    // Strictly decreasing over the control range.
    double prev = fet_resistance(fet, 0.0);
    for (int i = 1; i <= 24; ++i) {
        const double r = fet_resistance(fet, 1.2 * i / 24.0);
        CHECK(r < prev);
        prev = r;
    }

    // Shape 0 degenerates to the linear law.
    ContinuousFetModel lin = fet;
    lin.shape = 0.0;
    CHECK(fet_resistance(lin, 0.6) ==
          doctest::Approx(0.5 * (fet.r_min + fet.r_max)).epsilon(1e-12));

    CHECK_THROWS_AS(fet_resistance(fet, -0.1), ConfigError);
    CHECK_THROWS_AS(fet_resistance(fet, 1.3), ConfigError);

    ContinuousFetModel bad = fet;
    bad.r_min = 0.0;
    CHECK_THROWS_AS(validate_model(bad), ConfigError);
    bad = fet;
    bad.r_max = bad.r_min;
    CHECK_THROWS_AS(validate_model(bad), ConfigError);
    bad = fet;
    bad.vc_hi = bad.vc_lo;
    CHECK_THROWS_AS(validate_model(bad), ConfigError);
}
