#pragma once

// Complex two-port algebra: ABCD (chain) matrices, elementary network
// primitives, and conversion to S-parameters at a real reference impedance.

#include <complex>
#include <vector>

#include "attenforge/errors.hpp"

namespace attenforge {

using Complex = std::complex<double>;

// Chain matrix [[a, b], [c, d]]; b in ohms, c in siemens, a/d dimensionless.
// Default-constructed value is the identity (a matched through).
struct Abcd {
    Complex a{1.0};
    Complex b{0.0};
    Complex c{0.0};
    Complex d{1.0};
};

// Two-port scattering parameters referenced to a real z0.
struct SParams2 {
    Complex s11{0.0};
    Complex s21{1.0};
    Complex s12{1.0};
    Complex s22{0.0};
    double z0_ohms{50.0};
};

// Strictly increasing, positive frequencies in Hz.
struct FrequencyGrid {
    std::vector<double> points_hz;
};

// Throws ConfigError unless the grid is non-empty, positive, and strictly
// increasing.
void validate_grid(const FrequencyGrid& grid);

// n_points evenly spaced frequencies from f_start to f_stop inclusive.
FrequencyGrid linear_grid(double f_start_hz, double f_stop_hz, int n_points);

Abcd abcd_series(Complex z);
Abcd abcd_shunt(Complex y);
Abcd abcd_cascade(const Abcd& left, const Abcd& right);

// Ideal lossless line of characteristic impedance z_c and electrical length
// theta (radians). Throws NumericError for z_c <= 0.
Abcd abcd_tline(double z_c_ohms, double theta_rad);

Complex abcd_det(const Abcd& m);

// Two two-ports sharing both port pairs (Y-parameter addition). Both
// matrices must have a nonzero b entry (an invertible series path).
Abcd parallel_combine(const Abcd& m1, const Abcd& m2);

// Standard ABCD -> S conversion at a real reference z0. Throws NumericError
// if z0 <= 0 or the denominator a + b/z0 + c*z0 + d vanishes.
SParams2 abcd_to_s(const Abcd& m, double z0_ohms);

// 20*log10|s|; throws NumericError when |s| = 0.
double mag_db(Complex s);

// atan2-based phase in (-180, 180] degrees.
double phase_deg(Complex s);

// Wrap an angle difference in degrees into (-180, 180].
double wrap_deg(double deg);

}  // namespace attenforge
