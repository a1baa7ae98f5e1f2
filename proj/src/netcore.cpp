#include "attenforge/netcore.hpp"

#include <cmath>

namespace attenforge {

void validate_grid(const FrequencyGrid& grid) {
    if (grid.points_hz.empty())
        throw ConfigError("frequency grid is empty");
    double prev = 0.0;
    for (double f : grid.points_hz) {
        if (!(f > 0.0) || !std::isfinite(f))
            throw ConfigError("frequency grid points must be positive and finite");
        if (f <= prev)
            throw ConfigError("frequency grid points must be strictly increasing");
        prev = f;
    }
}

FrequencyGrid linear_grid(double f_start_hz, double f_stop_hz, int n_points) {
    if (n_points < 1)
        throw ConfigError("frequency grid needs at least one point");
    if (n_points == 1) {
        FrequencyGrid g{{f_start_hz}};
        validate_grid(g);
        return g;
    }
    FrequencyGrid g;
    g.points_hz.reserve(static_cast<size_t>(n_points));
    const double step = (f_stop_hz - f_start_hz) / (n_points - 1);
    for (int i = 0; i < n_points; ++i)
        g.points_hz.push_back(i + 1 == n_points ? f_stop_hz : f_start_hz + step * i);
    validate_grid(g);
    return g;
}

Abcd abcd_series(Complex z) {
    return Abcd{1.0, z, 0.0, 1.0};
}

Abcd abcd_shunt(Complex y) {
    return Abcd{1.0, 0.0, y, 1.0};
}

Abcd abcd_cascade(const Abcd& l, const Abcd& r) {
    return Abcd{l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
                l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
}

Abcd abcd_tline(double z_c_ohms, double theta_rad) {
    if (!(z_c_ohms > 0.0))
        throw NumericError("transmission line requires positive characteristic impedance");
    const double ct = std::cos(theta_rad);
    const double st = std::sin(theta_rad);
    return Abcd{Complex(ct, 0.0), Complex(0.0, z_c_ohms * st),
                Complex(0.0, st / z_c_ohms), Complex(ct, 0.0)};
}

Complex abcd_det(const Abcd& m) {
    return m.a * m.d - m.b * m.c;
}

Abcd parallel_combine(const Abcd& m1, const Abcd& m2) {
    if (std::abs(m1.b) < 1e-30 || std::abs(m2.b) < 1e-30)
        throw NumericError("parallel_combine requires an invertible series path (b != 0)");
    // ABCD -> Y for each, add, convert back.
    const Complex det1 = abcd_det(m1);
    const Complex det2 = abcd_det(m2);
    const Complex y11 = m1.d / m1.b + m2.d / m2.b;
    const Complex y12 = -det1 / m1.b - det2 / m2.b;
    const Complex y21 = -1.0 / m1.b - 1.0 / m2.b;
    const Complex y22 = m1.a / m1.b + m2.a / m2.b;
    if (std::abs(y21) < 1e-30)
        throw NumericError("parallel_combine produced a degenerate network (y21 = 0)");
    const Complex ydet = y11 * y22 - y12 * y21;
    return Abcd{-y22 / y21, -1.0 / y21, -ydet / y21, -y11 / y21};
}

SParams2 abcd_to_s(const Abcd& m, double z0_ohms) {
    if (!(z0_ohms > 0.0))
        throw NumericError("reference impedance must be positive");
    const Complex den = m.a + m.b / z0_ohms + m.c * z0_ohms + m.d;
    if (!(std::abs(den) > 1e-30) || !std::isfinite(std::abs(den)))
        throw NumericError("degenerate network: singular ABCD->S denominator");
    const Complex det = abcd_det(m);
    SParams2 s;
    s.s11 = (m.a + m.b / z0_ohms - m.c * z0_ohms - m.d) / den;
    s.s21 = 2.0 / den;
    s.s12 = 2.0 * det / den;
    s.s22 = (-m.a + m.b / z0_ohms - m.c * z0_ohms + m.d) / den;
    s.z0_ohms = z0_ohms;
    for (const Complex* v : {&s.s11, &s.s21, &s.s12, &s.s22})
        if (!std::isfinite(v->real()) || !std::isfinite(v->imag()))
            throw NumericError("non-finite S-parameter from ABCD conversion");
    return s;
}

double mag_db(Complex s) {
    const double mag = std::abs(s);
    if (!(mag > 0.0))
        throw NumericError("mag_db of zero magnitude (-infinity)");
    return 20.0 * std::log10(mag);
}

double phase_deg(Complex s) {
    return std::atan2(s.imag(), s.real()) * 180.0 / M_PI;
}

double wrap_deg(double deg) {
    double d = std::fmod(deg + 180.0, 360.0);
    if (d <= 0.0)
        d += 360.0;
    return d - 180.0;
}

}  // namespace attenforge
