#pragma once

// Touchstone version-1, 2-port, real/imaginary file support — the smallest
// surface that interoperates with standard RF tooling.

#include <array>
#include <string>
#include <vector>

#include "attenforge/netcore.hpp"

namespace attenforge {

// Row layout follows the 2-port column order:
// f  Re(S11) Im(S11) Re(S21) Im(S21) Re(S12) Im(S12) Re(S22) Im(S22)
struct TouchstoneFile {
    double r_ref_ohms{50.0};
    std::vector<double> f_hz;
    std::vector<std::array<double, 8>> rows;
};

// Writes `# GHz S RI R <r_ref>` and one 9-field row per frequency with 17
// significant digits (round-trips losslessly).
void write_touchstone(const TouchstoneFile& ts, const std::string& path);

// Throws ConfigError on a malformed option line, non-monotone frequencies,
// or any row without exactly 9 numeric fields (the row index is reported).
TouchstoneFile read_touchstone(const std::string& path);

}  // namespace attenforge
