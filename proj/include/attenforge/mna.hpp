#pragma once

// Independent AC small-signal solver: modified nodal analysis over RLC
// netlists with a dense complex LU. Used as the ground-truth oracle for the
// closed-form evaluators and every ABCD-built network.

#include <string>
#include <utility>
#include <vector>

#include "attenforge/netcore.hpp"

namespace attenforge {

enum class ElementKind { Resistor, Capacitor, Inductor };

struct Element {
    ElementKind kind{ElementKind::Resistor};
    std::string name;
    int n1{0};
    int n2{0};
    double value{0.0};  // ohms, farads, or henries; must be > 0
};

// Node 0 is ground. Ports are (node+, node-) pairs.
struct Netlist {
    std::vector<Element> elements;
    int node_count{0};
    std::pair<int, int> port1{-1, 0};
    std::pair<int, int> port2{-1, 0};
};

// Throws ConfigError on bad node indices, non-positive values, unset ports,
// or floating subcircuits (every non-ground node must reach ground).
void validate_netlist(const Netlist& net);

// Node-admittance matrix with the ground row/column eliminated; unknown i
// corresponds to node i+1. Row-major, unknowns x unknowns.
struct MnaSystem {
    int unknowns{0};
    std::vector<Complex> y;
    Complex& at(int i, int j) { return y[static_cast<size_t>(i) * unknowns + j]; }
    const Complex& at(int i, int j) const { return y[static_cast<size_t>(i) * unknowns + j]; }
};

// Conductance G, capacitor jwC, inductor 1/(jwL) stamps. Throws NumericError
// when omega = 0 and the netlist contains an inductor (no DC formulation).
MnaSystem stamp_system(const Netlist& net, double omega);

// In-place dense LU with partial pivoting over an n x n complex matrix.
struct LuFactors {
    int n{0};
    std::vector<Complex> lu;
    std::vector<int> perm;
    double growth{1.0};  // max |u_ij| over max initial |a_ij|
};

// Throws NumericError on a (numerically) singular matrix.
LuFactors lu_factor(std::vector<Complex> a, int n);
std::vector<Complex> lu_solve(const LuFactors& f, std::vector<Complex> rhs);

// Terminates both ports with z0, drives each port in turn with a Norton
// source, and extracts the full 2x2 S-matrix. If conditioning_warning is
// non-null it is set when the LU growth factor exceeds 1e10.
SParams2 solve_sparams(const Netlist& net, double omega, double z0,
                       bool* conditioning_warning = nullptr);

// Text format, one statement per line (see README):
//   R|C|L name n1 n2 value     element
//   P1 n+ n-   /   P2 n+ n-    port definitions
// '#' or '*' start a comment. Throws ConfigError with the line number.
Netlist parse_netlist(const std::string& text);
std::string format_netlist(const Netlist& net);

// Appends a 16-section (by default) symmetric LC ladder equivalent of an
// ideal line between two existing nodes; the lumped stand-in used when a
// full chip must be expressed as a netlist. Matches |s21| of the ideal line
// within ~1e-3 up to theta ~ 70 degrees.
void append_tline_ladder(Netlist& net, int node_from, int node_to,
                         double z_c_ohms, double theta_ref_rad, double f_ref_hz,
                         int sections = 16);

}  // namespace attenforge
