#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "attenforge/attenuator.hpp"
#include "attenforge/mna.hpp"

using namespace attenforge;

namespace {

constexpr double kOmega60 = 2.0 * M_PI * 60e9;

double rel_diff(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("admittance stamps") {
    // Single 50-ohm resistor node 1 to ground: one unknown, y = 0.02.
    Netlist net;
    net.node_count = 2;
    net.elements.push_back({ElementKind::Resistor, "r", 1, 0, 50.0});
    const MnaSystem sys = stamp_system(net, 0.0);
    REQUIRE(sys.unknowns == 1);
    CHECK(sys.at(0, 0) == Complex(0.02, 0.0));

    // 1 pF at omega = 1e9 stamps j*1e-3.
    Netlist cap;
    cap.node_count = 2;
    cap.elements.push_back({ElementKind::Capacitor, "c", 1, 0, 1e-12});
    const MnaSystem csys = stamp_system(cap, 1e9);
    CHECK(csys.at(0, 0) == Complex(0.0, 1e-3));

    // The compensated-T equivalent circuit is purely real at DC.
    const Netlist eq = eq1_netlist(11.3127, 104.8288, 10.0, 20e-15);
    const MnaSystem dsys = stamp_system(eq, 0.0);
    for (const Complex& v : dsys.y)
        CHECK(v.imag() == 0.0);

    Netlist ind;
    ind.node_count = 2;
    ind.elements.push_back({ElementKind::Inductor, "l", 1, 0, 1e-9});
    CHECK_NOTHROW(stamp_system(ind, 1e9));
    CHECK_THROWS_AS(stamp_system(ind, 0.0), NumericError);
}

TEST_CASE("two-port extraction") {
    // Series 50 ohms between the ports at z0 = 50: s21 = 2/3.
    Netlist net;
    net.node_count = 3;
    net.port1 = {1, 0};
    net.port2 = {2, 0};
    net.elements.push_back({ElementKind::Resistor, "r", 1, 2, 50.0});
    const SParams2 sp = solve_sparams(net, 0.0, 50.0);
    CHECK(std::abs(sp.s21 - 2.0 / 3.0) <= 1e-12);
    CHECK(std::abs(sp.s11 - 1.0 / 3.0) <= 1e-12);
    CHECK(std::abs(sp.s12 - sp.s21) <= 1e-14);

    // T-network (11.3127-ohm arms, 104.8288 + 10 shunt leg) at DC matches
    // both the chain-matrix route and the closed form's DC specialization.
    Netlist tnet;
    tnet.node_count = 4;
    tnet.port1 = {1, 0};
    tnet.port2 = {2, 0};
    tnet.elements.push_back({ElementKind::Resistor, "r1a", 1, 3, 11.3127});
    tnet.elements.push_back({ElementKind::Resistor, "r1b", 3, 2, 11.3127});
    tnet.elements.push_back({ElementKind::Resistor, "r2", 3, 0, 114.8288});
    const SParams2 tsp = solve_sparams(tnet, 0.0, 50.0);
    CHECK(std::abs(tsp.s21) == doctest::Approx(0.64365).epsilon(5e-5));

    Abcd chain = abcd_series(Complex(11.3127, 0.0));
    chain = abcd_cascade(chain, abcd_shunt(Complex(1.0 / 114.8288, 0.0)));
    chain = abcd_cascade(chain, abcd_series(Complex(11.3127, 0.0)));
    const SParams2 csp = abcd_to_s(chain, 50.0);
    CHECK(std::abs(tsp.s21 - csp.s21) <= 1e-12);
    CHECK(std::abs(tsp.s11 - csp.s11) <= 1e-12);

    const Complex closed = eval_eq1(11.3127, 104.8288, 10.0, 0.0, 50.0, 0.0);
    CHECK(std::abs(tsp.s21 - closed) <= 1e-12);
}

TEST_CASE("oracle equivalence with the closed form at 60 GHz") {
    const Netlist net = eq1_netlist(11.3127, 104.8288, 10.0, 20e-15);
    const SParams2 sp = solve_sparams(net, kOmega60, 50.0);
    const Complex closed = eval_eq1(11.3127, 104.8288, 10.0, 20e-15, 50.0, kOmega60);
    CHECK(rel_diff(sp.s21, closed) <= 1e-9);
}

TEST_CASE("reciprocity of an RLC bridge") {
    Netlist net;
    net.node_count = 4;
    net.port1 = {1, 0};
    net.port2 = {2, 0};
    net.elements.push_back({ElementKind::Resistor, "ra", 1, 3, 35.0});
    net.elements.push_back({ElementKind::Resistor, "rb", 3, 2, 70.0});
    net.elements.push_back({ElementKind::Capacitor, "cb", 1, 2, 30e-15});
    net.elements.push_back({ElementKind::Inductor, "ls", 3, 0, 120e-12});
    net.elements.push_back({ElementKind::Capacitor, "cs", 3, 0, 15e-15});
    const SParams2 sp = solve_sparams(net, 2.0 * M_PI * 40e9, 50.0);
    CHECK(std::abs(sp.s21 - sp.s12) <= 1e-12);
}

TEST_CASE("netlist validation") {
    Netlist net;
    net.node_count = 3;
    net.port1 = {1, 0};
    net.port2 = {2, 0};
    net.elements.push_back({ElementKind::Resistor, "r", 1, 2, 50.0});

    Netlist bad = net;
    bad.elements.push_back({ElementKind::Resistor, "loop", 1, 1, 10.0});
    CHECK_THROWS_AS(validate_netlist(bad), ConfigError);

    bad = net;
    bad.elements.push_back({ElementKind::Resistor, "neg", 1, 2, -5.0});
    CHECK_THROWS_AS(validate_netlist(bad), ConfigError);

    bad = net;
    bad.elements.push_back({ElementKind::Resistor, "oob", 1, 7, 5.0});
    CHECK_THROWS_AS(validate_netlist(bad), ConfigError);

    bad = net;
    bad.node_count = 5;
    bad.elements.push_back({ElementKind::Resistor, "island", 3, 4, 5.0});
    CHECK_THROWS_AS(validate_netlist(bad), ConfigError);

    bad = net;
    bad.port2 = {-1, 0};
    CHECK_THROWS_AS(validate_netlist(bad), ConfigError);

    CHECK_NOTHROW(validate_netlist(net));
}

TEST_CASE("netlist text format") {
    const char* text =
        "# series pad\n"
        "R rs 1 2 50 * the only element\n"
        "P1 1 0\n"
        "P2 2 0\n";
    const Netlist net = parse_netlist(text);
    REQUIRE(net.elements.size() == 1);
    CHECK(net.elements[0].name == "rs");
    CHECK(net.elements[0].value == 50.0);
    CHECK(net.port1 == std::make_pair(1, 0));
    CHECK(net.port2 == std::make_pair(2, 0));

    // format -> parse -> format is stable.
    const std::string once = format_netlist(net);
    const std::string twice = format_netlist(parse_netlist(once));
    CHECK(once == twice);

    CHECK_THROWS_WITH_AS(parse_netlist("Q x 1 0 5\nP1 1 0\nP2 1 0\n"),
                         doctest::Contains("line 1"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_netlist("R x 1 0\nP1 1 0\nP2 1 0\n"),
                         doctest::Contains("line 1"), ConfigError);
    CHECK_THROWS_AS(parse_netlist("R x 1 2 50\n"), ConfigError);  // no ports
    CHECK_THROWS_WITH_AS(parse_netlist("R x 1 2 50\nP1 1 0\nP2 2 0\nR y 2 0 bogus\n"),
                         doctest::Contains("line 4"), ConfigError);
}

TEST_CASE("dense complex LU") {
    // Factor/solve against a known product.
    const int n = 3;
    std::vector<Complex> a = {
        Complex(2.0, 1.0),  Complex(0.5, 0.0), Complex(0.0, -1.0),
        Complex(1.0, 0.0),  Complex(3.0, 2.0), Complex(0.2, 0.1),
        Complex(0.0, 0.5),  Complex(1.0, 1.0), Complex(4.0, -3.0)};
    const std::vector<Complex> x_true = {Complex(1.0, -2.0), Complex(0.5, 0.5),
                                         Complex(-1.0, 0.25)};
    std::vector<Complex> b(n, Complex(0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            b[i] += a[static_cast<size_t>(i * n + j)] * x_true[static_cast<size_t>(j)];
    const LuFactors f = lu_factor(a, n);
    const std::vector<Complex> x = lu_solve(f, b);
    for (int i = 0; i < n; ++i)
        CHECK(std::abs(x[static_cast<size_t>(i)] - x_true[static_cast<size_t>(i)]) <=
              1e-12);
    CHECK(f.growth >= 1.0);

    // Random dense systems large enough that partial pivoting must reorder
    // rows; solving a fabricated b = A * x_true exposes any mismatch between
    // the row-swap convention used by the factorization and by the solver.
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int m : {5, 12, 33}) {
        std::vector<Complex> ar(static_cast<size_t>(m) * m);
        for (Complex& v : ar) v = Complex(u(rng), u(rng));
        std::vector<Complex> xr(static_cast<size_t>(m));
        for (Complex& v : xr) v = Complex(u(rng), u(rng));
        std::vector<Complex> br(static_cast<size_t>(m), Complex(0.0));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                br[static_cast<size_t>(i)] +=
                    ar[static_cast<size_t>(i) * m + j] * xr[static_cast<size_t>(j)];
        const LuFactors fr = lu_factor(ar, m);
        int swaps = 0;
        for (int k = 0; k < m; ++k)
            swaps += fr.perm[static_cast<size_t>(k)] != k;
        CHECK(swaps >= 1);
        const std::vector<Complex> xg = lu_solve(fr, br);
        double worst = 0.0;
        for (int i = 0; i < m; ++i)
            worst = std::max(worst,
                             std::abs(xg[static_cast<size_t>(i)] - xr[static_cast<size_t>(i)]));
        CHECK(worst <= 1e-10);
    }

    // Rank-deficient matrix must be rejected.
    std::vector<Complex> sing = {Complex(1.0), Complex(2.0), Complex(2.0),
                                 Complex(4.0)};
    CHECK_THROWS_AS(lu_factor(sing, 2), NumericError);
    CHECK_THROWS_AS(lu_factor(std::vector<Complex>(4, Complex(0.0)), 2), NumericError);

    // Well-conditioned solve raises no conditioning flag.
    Netlist net;
    net.node_count = 3;
    net.port1 = {1, 0};
    net.port2 = {2, 0};
    net.elements.push_back({ElementKind::Resistor, "r", 1, 2, 50.0});
    bool warn = false;
    solve_sparams(net, 0.0, 50.0, &warn);
    CHECK_FALSE(warn);
}

TEST_CASE("LC ladder stand-in for an ideal line") {
    const double z_c = 55.0;
    const double theta = 30.0 * M_PI / 180.0;
    const double f_ref = 60e9;

    Netlist net;
    net.node_count = 3;
    net.port1 = {1, 0};
    net.port2 = {2, 0};
    append_tline_ladder(net, 1, 2, z_c, theta, f_ref);
    validate_netlist(net);

    for (double f : {30e9, 60e9}) {
        const double w = 2.0 * M_PI * f;
        const SParams2 got = solve_sparams(net, w, 50.0);
        const SParams2 want = abcd_to_s(abcd_tline(z_c, theta * f / f_ref), 50.0);
        CHECK(std::abs(std::abs(got.s21) - std::abs(want.s21)) <= 1e-3);
        // True ladder truncation at theta = 30 deg, 16 sections is ~0.001 deg.
        CHECK(std::abs(wrap_deg(phase_deg(got.s21) - phase_deg(want.s21))) <= 0.05);
    }
}
