#include "attenforge/mna.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace attenforge {

void validate_netlist(const Netlist& net) {
    if (net.node_count < 1)
        throw ConfigError("netlist has no nodes");
    auto check_node = [&](int n, const char* what) {
        if (n < 0 || n >= net.node_count)
            throw ConfigError(std::string("netlist ") + what + " node index out of range");
    };
    for (const Element& e : net.elements) {
        check_node(e.n1, "element");
        check_node(e.n2, "element");
        if (!(e.value > 0.0) || !std::isfinite(e.value))
            throw ConfigError("element '" + e.name + "' must have a positive finite value");
        if (e.n1 == e.n2)
            throw ConfigError("element '" + e.name + "' is shorted to itself");
    }
    if (net.port1.first < 0 || net.port2.first < 0)
        throw ConfigError("netlist must define ports P1 and P2");
    check_node(net.port1.first, "port1");
    check_node(net.port1.second, "port1");
    check_node(net.port2.first, "port2");
    check_node(net.port2.second, "port2");

    // Every element must reach ground or a port terminal through the network
    // (the port terminations tie those together), otherwise the terminated
    // MNA system can be singular.
    std::vector<std::vector<int>> adj(static_cast<size_t>(net.node_count));
    for (const Element& e : net.elements) {
        adj[static_cast<size_t>(e.n1)].push_back(e.n2);
        adj[static_cast<size_t>(e.n2)].push_back(e.n1);
    }
    std::vector<char> seen(static_cast<size_t>(net.node_count), 0);
    std::vector<int> stack;
    for (int seed : {0, net.port1.first, net.port1.second, net.port2.first,
                     net.port2.second})
        if (!seen[static_cast<size_t>(seed)]) {
            seen[static_cast<size_t>(seed)] = 1;
            stack.push_back(seed);
        }
    while (!stack.empty()) {
        int n = stack.back();
        stack.pop_back();
        for (int m : adj[static_cast<size_t>(n)])
            if (!seen[static_cast<size_t>(m)]) {
                seen[static_cast<size_t>(m)] = 1;
                stack.push_back(m);
            }
    }
    for (const Element& e : net.elements)
        if (!seen[static_cast<size_t>(e.n1)] || !seen[static_cast<size_t>(e.n2)])
            throw ConfigError("element '" + e.name + "' belongs to a floating subcircuit");
}

MnaSystem stamp_system(const Netlist& net, double omega) {
    if (omega < 0.0)
        throw NumericError("negative angular frequency");
    MnaSystem sys;
    sys.unknowns = net.node_count - 1;
    sys.y.assign(static_cast<size_t>(sys.unknowns) * sys.unknowns, Complex(0.0, 0.0));
    auto stamp = [&](int n1, int n2, Complex y) {
        const int i = n1 - 1;
        const int j = n2 - 1;
        if (i >= 0) sys.at(i, i) += y;
        if (j >= 0) sys.at(j, j) += y;
        if (i >= 0 && j >= 0) {
            sys.at(i, j) -= y;
            sys.at(j, i) -= y;
        }
    };
    for (const Element& e : net.elements) {
        switch (e.kind) {
            case ElementKind::Resistor:
                stamp(e.n1, e.n2, Complex(1.0 / e.value, 0.0));
                break;
            case ElementKind::Capacitor:
                stamp(e.n1, e.n2, Complex(0.0, omega * e.value));
                break;
            case ElementKind::Inductor:
                if (omega == 0.0)
                    throw NumericError("inductor '" + e.name +
                                       "' has no DC stamp (omega = 0 unsupported with inductors)");
                stamp(e.n1, e.n2, Complex(0.0, -1.0 / (omega * e.value)));
                break;
        }
    }
    return sys;
}

LuFactors lu_factor(std::vector<Complex> a, int n) {
    LuFactors f;
    f.n = n;
    f.perm.resize(static_cast<size_t>(n));
    double max_initial = 0.0;
    for (const Complex& v : a)
        max_initial = std::max(max_initial, std::abs(v));
    if (!(max_initial > 0.0))
        throw NumericError("singular system: zero matrix");
    double max_seen = max_initial;
    auto at = [&](int i, int j) -> Complex& { return a[static_cast<size_t>(i) * n + j]; };
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(at(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double m = std::abs(at(i, k));
            if (m > best) {
                best = m;
                piv = i;
            }
        }
        if (!(best > 1e-14 * max_initial))
            throw NumericError("singular system in LU factorization");
        f.perm[static_cast<size_t>(k)] = piv;
        if (piv != k)
            for (int j = 0; j < n; ++j)
                std::swap(at(k, j), at(piv, j));
        for (int i = k + 1; i < n; ++i) {
            const Complex m = at(i, k) / at(k, k);
            at(i, k) = m;
            for (int j = k + 1; j < n; ++j) {
                at(i, j) -= m * at(k, j);
                max_seen = std::max(max_seen, std::abs(at(i, j)));
            }
        }
    }
    f.lu = std::move(a);
    f.growth = max_seen / max_initial;
    return f;
}

std::vector<Complex> lu_solve(const LuFactors& f, std::vector<Complex> rhs) {
    const int n = f.n;
    auto at = [&](int i, int j) -> const Complex& {
        return f.lu[static_cast<size_t>(i) * n + j];
    };
    // The factorization swaps whole rows (multipliers included), so the stored
    // L expects the fully permuted right-hand side: apply every swap before
    // the first elimination, not interleaved with it.
    for (int k = 0; k < n; ++k)
        std::swap(rhs[static_cast<size_t>(k)], rhs[static_cast<size_t>(f.perm[static_cast<size_t>(k)])]);
    for (int k = 0; k < n; ++k)
        for (int i = k + 1; i < n; ++i)
            rhs[static_cast<size_t>(i)] -= at(i, k) * rhs[static_cast<size_t>(k)];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j)
            rhs[static_cast<size_t>(i)] -= at(i, j) * rhs[static_cast<size_t>(j)];
        rhs[static_cast<size_t>(i)] /= at(i, i);
    }
    return rhs;
}

SParams2 solve_sparams(const Netlist& net, double omega, double z0,
                       bool* conditioning_warning) {
    validate_netlist(net);
    if (!(z0 > 0.0))
        throw NumericError("reference impedance must be positive");
    MnaSystem sys = stamp_system(net, omega);

    // z0 terminations across both port pairs.
    const Complex g0(1.0 / z0, 0.0);
    auto stamp_term = [&](std::pair<int, int> p) {
        const int i = p.first - 1;
        const int j = p.second - 1;
        if (i >= 0) sys.at(i, i) += g0;
        if (j >= 0) sys.at(j, j) += g0;
        if (i >= 0 && j >= 0) {
            sys.at(i, j) -= g0;
            sys.at(j, i) -= g0;
        }
    };
    stamp_term(net.port1);
    stamp_term(net.port2);

    LuFactors f = lu_factor(sys.y, sys.unknowns);
    if (conditioning_warning)
        *conditioning_warning = f.growth > 1e10;

    // Norton drive of one port: inject +-1/z0 at its nodes; with both ports
    // terminated in z0 the port waves give s_mm = 2*V_m - 1, s_km = 2*V_k.
    auto drive = [&](std::pair<int, int> p) {
        std::vector<Complex> rhs(static_cast<size_t>(sys.unknowns), Complex(0.0, 0.0));
        if (p.first - 1 >= 0) rhs[static_cast<size_t>(p.first - 1)] += g0;
        if (p.second - 1 >= 0) rhs[static_cast<size_t>(p.second - 1)] -= g0;
        return lu_solve(f, std::move(rhs));
    };
    auto port_v = [&](const std::vector<Complex>& v, std::pair<int, int> p) {
        const Complex vp = p.first >= 1 ? v[static_cast<size_t>(p.first - 1)] : Complex(0.0);
        const Complex vm = p.second >= 1 ? v[static_cast<size_t>(p.second - 1)] : Complex(0.0);
        return vp - vm;
    };

    const std::vector<Complex> v1 = drive(net.port1);
    const std::vector<Complex> v2 = drive(net.port2);
    SParams2 s;
    s.s11 = 2.0 * port_v(v1, net.port1) - 1.0;
    s.s21 = 2.0 * port_v(v1, net.port2);
    s.s22 = 2.0 * port_v(v2, net.port2) - 1.0;
    s.s12 = 2.0 * port_v(v2, net.port1);
    s.z0_ohms = z0;
    return s;
}

Netlist parse_netlist(const std::string& text) {
    Netlist net;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    int max_node = 0;
    auto fail = [&](const std::string& msg) {
        throw ConfigError("netlist line " + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++line_no;
        const size_t cut = line.find_first_of("#*");
        if (cut != std::string::npos)
            line = line.substr(0, cut);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok))
            continue;
        if (tok == "P1" || tok == "P2") {
            int np = 0, nm = 0;
            if (!(ls >> np >> nm))
                fail("port directive needs two node indices");
            std::string extra;
            if (ls >> extra)
                fail("trailing tokens after port directive");
            (tok == "P1" ? net.port1 : net.port2) = {np, nm};
            max_node = std::max({max_node, np, nm});
            continue;
        }
        if (tok != "R" && tok != "C" && tok != "L")
            fail("unknown element kind '" + tok + "' (expected R, C, L, P1, or P2)");
        Element e;
        e.kind = tok == "R"   ? ElementKind::Resistor
                 : tok == "C" ? ElementKind::Capacitor
                              : ElementKind::Inductor;
        if (!(ls >> e.name >> e.n1 >> e.n2 >> e.value))
            fail("element needs: kind name n1 n2 value");
        std::string extra;
        if (ls >> extra)
            fail("trailing tokens after element");
        if (!(e.value > 0.0))
            fail("element value must be positive");
        if (e.n1 < 0 || e.n2 < 0)
            fail("negative node index");
        max_node = std::max({max_node, e.n1, e.n2});
        net.elements.push_back(std::move(e));
    }
    net.node_count = max_node + 1;
    validate_netlist(net);
    return net;
}

std::string format_netlist(const Netlist& net) {
    std::string out;
    char buf[160];
    for (const Element& e : net.elements) {
        const char kind = e.kind == ElementKind::Resistor   ? 'R'
                          : e.kind == ElementKind::Capacitor ? 'C'
                                                             : 'L';
        std::snprintf(buf, sizeof buf, "%c %s %d %d %.17g\n", kind, e.name.c_str(),
                      e.n1, e.n2, e.value);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "P1 %d %d\nP2 %d %d\n", net.port1.first,
                  net.port1.second, net.port2.first, net.port2.second);
    out += buf;
    return out;
}

void append_tline_ladder(Netlist& net, int node_from, int node_to,
                         double z_c_ohms, double theta_ref_rad, double f_ref_hz,
                         int sections) {
    if (!(z_c_ohms > 0.0) || !(f_ref_hz > 0.0) || sections < 1)
        throw ConfigError("bad transmission-line ladder parameters");
    const double tau = theta_ref_rad / (2.0 * M_PI * f_ref_hz);
    if (tau == 0.0) {
        // Zero-length line: short the two nodes with a negligible resistor so
        // the topology stays expressible in R/C/L elements.
        net.elements.push_back({ElementKind::Resistor,
                                "tl_short_" + std::to_string(node_from), node_from,
                                node_to, 1e-9});
        net.node_count = std::max(net.node_count, std::max(node_from, node_to) + 1);
        return;
    }
    const double l_half = z_c_ohms * tau / (2.0 * sections);
    const double c_sec = tau / (z_c_ohms * sections);
    int prev = node_from;
    for (int s = 0; s < sections; ++s) {
        const int mid = net.node_count++;
        const int next = s + 1 == sections ? node_to : net.node_count++;
        const std::string tag = std::to_string(node_from) + "_" + std::to_string(s);
        net.elements.push_back({ElementKind::Inductor, "tl_la_" + tag, prev, mid, l_half});
        net.elements.push_back({ElementKind::Capacitor, "tl_c_" + tag, mid, 0, c_sec});
        net.elements.push_back({ElementKind::Inductor, "tl_lb_" + tag, mid, next, l_half});
        prev = next;
    }
    net.node_count = std::max(net.node_count, std::max(node_from, node_to) + 1);
}

}  // namespace attenforge
