#include "attenforge/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace attenforge {

namespace {

enum class Dim { Ohm, Cap, Freq, Deg, Volt, Plain };

const char* canonical_suffix(Dim d) {
    switch (d) {
        case Dim::Ohm: return "ohm";
        case Dim::Cap: return "ff";
        case Dim::Freq: return "ghz";
        case Dim::Deg: return "deg";
        case Dim::Volt: return "v";
        case Dim::Plain: return "";
    }
    return "";
}

// Accepted suffixes and the factor into the canonical unit of the dimension.
bool suffix_factor(Dim d, const std::string& unit, double* factor) {
    *factor = 1.0;
    switch (d) {
        case Dim::Ohm: return unit == "ohm";
        case Dim::Cap:
            if (unit == "ff") return true;
            if (unit == "pf") { *factor = 1000.0; return true; }
            return false;
        case Dim::Freq: return unit == "ghz";
        case Dim::Deg: return unit == "deg";
        case Dim::Volt: return unit == "v";
        case Dim::Plain: return unit.empty();
    }
    return false;
}

struct KeySpec {
    const char* key;
    Dim dim;
    std::function<double*(ChipConfig&)> field;
    bool integer{false};
};

std::vector<KeySpec> key_table() {
    auto f = [](double ChipConfig::* m) {
        return [m](ChipConfig& c) { return &(c.*m); };
    };
    (void)f;
    std::vector<KeySpec> t;
    auto add = [&](const char* key, Dim dim,
                   std::function<double*(ChipConfig&)> field, bool integer = false) {
        t.push_back({key, dim, std::move(field), integer});
    };
    add("z0", Dim::Ohm, [](ChipConfig& c) { return &c.z0_ohm; });
    add("f0", Dim::Freq, [](ChipConfig& c) { return &c.f0_ghz; });
    add("grid.f_start", Dim::Freq, [](ChipConfig& c) { return &c.grid.f_start_ghz; });
    add("grid.f_stop", Dim::Freq, [](ChipConfig& c) { return &c.grid.f_stop_ghz; });
    add("grid.points", Dim::Plain, nullptr, true);  // handled specially (int)
    add("states.step_db", Dim::Plain, [](ChipConfig& c) { return &c.step_db; });

    add("unit4.r1.r", Dim::Ohm, [](ChipConfig& c) { return &c.unit4.r1.r_ohm; });
    add("unit4.r1.c_par", Dim::Cap, [](ChipConfig& c) { return &c.unit4.r1.c_par_ff; });
    add("unit4.r2.r", Dim::Ohm, [](ChipConfig& c) { return &c.unit4.r2.r_ohm; });
    add("unit4.r2.c_par", Dim::Cap, [](ChipConfig& c) { return &c.unit4.r2.c_par_ff; });
    add("unit4.c_comp", Dim::Cap, [](ChipConfig& c) { return &c.unit4.c_comp_ff; });
    add("unit4.m1.r_on", Dim::Ohm, [](ChipConfig& c) { return &c.unit4.m1.r_on_ohm; });
    add("unit4.m1.c_off", Dim::Cap, [](ChipConfig& c) { return &c.unit4.m1.c_off_ff; });
    add("unit4.m1.c_par_on", Dim::Cap, [](ChipConfig& c) { return &c.unit4.m1.c_par_on_ff; });
    add("unit4.m2.r_on", Dim::Ohm, [](ChipConfig& c) { return &c.unit4.m2.r_on_ohm; });
    add("unit4.m2.c_off", Dim::Cap, [](ChipConfig& c) { return &c.unit4.m2.c_off_ff; });
    add("unit4.m2.c_par_on", Dim::Cap, [](ChipConfig& c) { return &c.unit4.m2.c_par_on_ff; });

    add("tl_a.z_c", Dim::Ohm, [](ChipConfig& c) { return &c.tl_a.z_c_ohm; });
    add("tl_a.theta", Dim::Deg, [](ChipConfig& c) { return &c.tl_a.theta_deg; });
    add("tl_a.f_ref", Dim::Freq, [](ChipConfig& c) { return &c.tl_a.f_ref_ghz; });

    add("unit2.r1.r", Dim::Ohm, [](ChipConfig& c) { return &c.unit2.r1.r_ohm; });
    add("unit2.r1.c_par", Dim::Cap, [](ChipConfig& c) { return &c.unit2.r1.c_par_ff; });
    add("unit2.r2.r", Dim::Ohm, [](ChipConfig& c) { return &c.unit2.r2.r_ohm; });
    add("unit2.r2.c_par", Dim::Cap, [](ChipConfig& c) { return &c.unit2.r2.c_par_ff; });
    add("unit2.c_comp", Dim::Cap, [](ChipConfig& c) { return &c.unit2.c_comp_ff; });
    add("unit2.m2.r_on", Dim::Ohm, [](ChipConfig& c) { return &c.unit2.m2.r_on_ohm; });
    add("unit2.m2.c_off", Dim::Cap, [](ChipConfig& c) { return &c.unit2.m2.c_off_ff; });
    add("unit2.m2.c_par_on", Dim::Cap, [](ChipConfig& c) { return &c.unit2.m2.c_par_on_ff; });

    add("tl_b.z_c", Dim::Ohm, [](ChipConfig& c) { return &c.tl_b.z_c_ohm; });
    add("tl_b.theta", Dim::Deg, [](ChipConfig& c) { return &c.tl_b.theta_deg; });
    add("tl_b.f_ref", Dim::Freq, [](ChipConfig& c) { return &c.tl_b.f_ref_ghz; });

    add("cont.r2.r", Dim::Ohm, [](ChipConfig& c) { return &c.cont.r2.r_ohm; });
    add("cont.r2.c_par", Dim::Cap, [](ChipConfig& c) { return &c.cont.r2.c_par_ff; });
    add("cont.fet.r_min", Dim::Ohm, [](ChipConfig& c) { return &c.cont.fet_r_min_ohm; });
    add("cont.fet.r_max", Dim::Ohm, [](ChipConfig& c) { return &c.cont.fet_r_max_ohm; });
    add("cont.fet.vc_lo", Dim::Volt, [](ChipConfig& c) { return &c.cont.fet_vc_lo_v; });
    add("cont.fet.vc_hi", Dim::Volt, [](ChipConfig& c) { return &c.cont.fet_vc_hi_v; });
    add("cont.fet.shape", Dim::Plain, [](ChipConfig& c) { return &c.cont.fet_shape; });
    return t;
}

// Keys a minimal synthesis config may omit.
bool synthesizable_key(const std::string& key) {
    return key == "unit4.r1.r" || key == "unit4.r2.r" || key == "unit2.r1.r" ||
           key == "unit2.r2.r";
}

// Optional keys: recognized, but not required to be present.
bool optional_key(const std::string& key) {
    return key == "states.step_db" || key == "synth.atten4_db" ||
           key == "synth.atten2_db";
}

std::string trim(const std::string& s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail_line(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

void validate_config(const ChipConfig& cfg) {
    if (!(cfg.f0_ghz > 0.0))
        throw ConfigError("f0 must be positive");
    if (!(cfg.grid.f_start_ghz > 0.0) || !(cfg.grid.f_stop_ghz > cfg.grid.f_start_ghz))
        throw ConfigError("grid requires 0 < f_start < f_stop");
    if (cfg.grid.points < 2 || cfg.grid.points > 100000)
        throw ConfigError("grid.points must be in [2, 100000]");
    const long step_tenths = std::lround(cfg.step_db * 10.0);
    if (step_tenths < 1 || 75 % step_tenths != 0 ||
        std::abs(cfg.step_db * 10.0 - static_cast<double>(step_tenths)) > 1e-9)
        throw ConfigError("states.step_db must divide the 7.5 dB range (0.5 or 0.1)");
    for (const std::optional<double>& t : {cfg.synth_atten4_db, cfg.synth_atten2_db})
        if (t && !(*t > 0.0))
            throw ConfigError("synthesis targets must be positive");
    // Building the chip spec runs every model validator and the grid check.
    to_chip_spec(cfg);
    validate_grid(to_grid(cfg));
}

ChipConfig parse_impl(const std::string& text, bool allow_missing_resistors) {
    ChipConfig cfg;
    const std::vector<KeySpec> table = key_table();
    std::map<std::string, int> seen;  // key -> line

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    bool have_points = false;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail_line(line_no, "expected `key = value [unit]`");
        const std::string key = trim(line.substr(0, eq));
        const std::string rhs = trim(line.substr(eq + 1));
        if (key.empty())
            fail_line(line_no, "empty key");
        if (rhs.empty())
            fail_line(line_no, "missing value for key '" + key + "'");
        if (seen.count(key))
            fail_line(line_no, "duplicate key '" + key + "' (first at line " +
                                   std::to_string(seen[key]) + ")");
        seen[key] = line_no;

        std::istringstream rs(rhs);
        std::string value_tok, unit_tok, extra_tok;
        rs >> value_tok;
        rs >> unit_tok;
        if (rs >> extra_tok)
            fail_line(line_no, "trailing tokens after value for '" + key + "'");
        char* end = nullptr;
        const double value = std::strtod(value_tok.c_str(), &end);
        if (end == value_tok.c_str() || *end != '\0' || !std::isfinite(value))
            fail_line(line_no, "bad numeric value '" + value_tok + "' for '" + key + "'");
        for (char& ch : unit_tok)
            ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));

        if (key == "synth.atten4_db" || key == "synth.atten2_db") {
            if (!unit_tok.empty())
                fail_line(line_no, "'" + key + "' is a plain dB number, no unit suffix");
            (key == "synth.atten4_db" ? cfg.synth_atten4_db : cfg.synth_atten2_db) = value;
            continue;
        }
        const KeySpec* spec = nullptr;
        for (const KeySpec& ks : table)
            if (key == ks.key) {
                spec = &ks;
                break;
            }
        if (!spec)
            fail_line(line_no, "unknown key '" + key + "'");
        double factor = 1.0;
        if (!suffix_factor(spec->dim, unit_tok, &factor)) {
            const std::string want = canonical_suffix(spec->dim);
            fail_line(line_no, "unit mismatch for '" + key + "': got '" + unit_tok +
                                   "', expected " + (want.empty() ? "no suffix" : "'" + want + "'"));
        }
        if (spec->integer) {
            if (value != std::floor(value))
                fail_line(line_no, "'" + key + "' must be an integer");
            cfg.grid.points = static_cast<int>(value);
            have_points = true;
            continue;
        }
        *spec->field(cfg) = value * factor;
    }

    for (const KeySpec& ks : table) {
        if (seen.count(ks.key))
            continue;
        if (optional_key(ks.key))
            continue;
        if (ks.integer && have_points)
            continue;
        if (allow_missing_resistors && synthesizable_key(ks.key))
            continue;
        throw ConfigError("missing required key '" + std::string(ks.key) + "'");
    }
    if (!allow_missing_resistors)
        validate_config(cfg);
    return cfg;
}

}  // namespace

ChipConfig parse_config(const std::string& text) { return parse_impl(text, false); }

ChipConfig parse_config_partial(const std::string& text) {
    return parse_impl(text, true);
}

ChipConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

namespace {

std::string fmt_value(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit(std::string& out, const char* key, double value, Dim dim) {
    out += key;
    out += " = ";
    out += fmt_value(value);
    const char* suffix = canonical_suffix(dim);
    if (*suffix) {
        out += ' ';
        out += suffix;
    }
    out += '\n';
}

}  // namespace

std::string write_config(const ChipConfig& cfg) {
    std::string out = "# attenuator chip configuration\n";
    ChipConfig copy = cfg;  // key_table fields are non-const accessors
    for (const KeySpec& ks : key_table()) {
        if (ks.integer) {
            out += ks.key;
            out += " = " + std::to_string(cfg.grid.points) + "\n";
            continue;
        }
        emit(out, ks.key, *ks.field(copy), ks.dim);
    }
    if (cfg.synth_atten4_db)
        emit(out, "synth.atten4_db", *cfg.synth_atten4_db, Dim::Plain);
    if (cfg.synth_atten2_db)
        emit(out, "synth.atten2_db", *cfg.synth_atten2_db, Dim::Plain);
    return out;
}

void save_config_file(const ChipConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw ConfigError("cannot write config file '" + path + "'");
    out << write_config(cfg);
    if (!out)
        throw ConfigError("failed writing config file '" + path + "'");
}

namespace {

SwitchModel to_switch(const ChipConfig::SwitchKeys& k) {
    SwitchModel m{k.r_on_ohm, k.c_off_ff * 1e-15, k.c_par_on_ff * 1e-15};
    validate_model(m);
    return m;
}

ResistorModel to_resistor(const ChipConfig::ResistorKeys& k) {
    ResistorModel m{k.r_ohm, k.c_par_ff * 1e-15};
    validate_model(m);
    return m;
}

TlineSpec to_tline(const ChipConfig::TlineKeys& k) {
    if (!(k.z_c_ohm > 0.0))
        throw ConfigError("transmission line z_c must be positive");
    if (k.theta_deg < 0.0)
        throw ConfigError("transmission line theta must be non-negative");
    if (!(k.f_ref_ghz > 0.0))
        throw ConfigError("transmission line f_ref must be positive");
    return TlineSpec{k.z_c_ohm, k.theta_deg * M_PI / 180.0, k.f_ref_ghz * 1e9};
}

}  // namespace

AttenuatorChipSpec to_chip_spec(const ChipConfig& cfg) {
    if (!(cfg.z0_ohm > 0.0))
        throw ConfigError("z0 must be positive");
    AttenuatorChipSpec spec;
    spec.z0_ohms = cfg.z0_ohm;
    spec.unit4.r1 = to_resistor(cfg.unit4.r1);
    spec.unit4.r2 = to_resistor(cfg.unit4.r2);
    if (cfg.unit4.c_comp_ff < 0.0 || cfg.unit2.c_comp_ff < 0.0)
        throw ConfigError("c_comp must be non-negative");
    spec.unit4.c_comp = cfg.unit4.c_comp_ff * 1e-15;
    spec.unit4.series_switch = to_switch(cfg.unit4.m1);
    spec.unit4.shunt_switch = to_switch(cfg.unit4.m2);
    spec.tl_a = to_tline(cfg.tl_a);
    spec.unit2.r1 = to_resistor(cfg.unit2.r1);
    spec.unit2.r2 = to_resistor(cfg.unit2.r2);
    spec.unit2.c_comp = cfg.unit2.c_comp_ff * 1e-15;
    spec.unit2.shunt_switch = to_switch(cfg.unit2.m2);
    spec.tl_b = to_tline(cfg.tl_b);
    spec.cont.r2 = to_resistor(cfg.cont.r2);
    spec.cont.fet = ContinuousFetModel{cfg.cont.fet_r_min_ohm, cfg.cont.fet_r_max_ohm,
                                       cfg.cont.fet_vc_lo_v, cfg.cont.fet_vc_hi_v,
                                       cfg.cont.fet_shape};
    validate_model(spec.cont.fet);
    return spec;
}

FrequencyGrid to_grid(const ChipConfig& cfg) {
    return linear_grid(cfg.grid.f_start_ghz * 1e9, cfg.grid.f_stop_ghz * 1e9,
                       cfg.grid.points);
}

namespace {

void from_switch(ChipConfig::SwitchKeys& k, const SwitchModel& m) {
    k.r_on_ohm = m.r_on;
    k.c_off_ff = m.c_off * 1e15;
    k.c_par_on_ff = m.c_par_on * 1e15;
}

void from_resistor(ChipConfig::ResistorKeys& k, const ResistorModel& m) {
    k.r_ohm = m.r;
    k.c_par_ff = m.c_par * 1e15;
}

void from_tline(ChipConfig::TlineKeys& k, const TlineSpec& t) {
    k.z_c_ohm = t.z_c_ohms;
    k.theta_deg = t.theta_ref_rad * 180.0 / M_PI;
    k.f_ref_ghz = t.f_ref_hz * 1e-9;
}

}  // namespace

void update_config_from_spec(ChipConfig& cfg, const AttenuatorChipSpec& spec) {
    cfg.z0_ohm = spec.z0_ohms;
    from_resistor(cfg.unit4.r1, spec.unit4.r1);
    from_resistor(cfg.unit4.r2, spec.unit4.r2);
    cfg.unit4.c_comp_ff = spec.unit4.c_comp * 1e15;
    from_switch(cfg.unit4.m1, spec.unit4.series_switch);
    from_switch(cfg.unit4.m2, spec.unit4.shunt_switch);
    from_tline(cfg.tl_a, spec.tl_a);
    from_resistor(cfg.unit2.r1, spec.unit2.r1);
    from_resistor(cfg.unit2.r2, spec.unit2.r2);
    cfg.unit2.c_comp_ff = spec.unit2.c_comp * 1e15;
    from_switch(cfg.unit2.m2, spec.unit2.shunt_switch);
    from_tline(cfg.tl_b, spec.tl_b);
    from_resistor(cfg.cont.r2, spec.cont.r2);
    cfg.cont.fet_r_min_ohm = spec.cont.fet.r_min;
    cfg.cont.fet_r_max_ohm = spec.cont.fet.r_max;
    cfg.cont.fet_vc_lo_v = spec.cont.fet.vc_lo;
    cfg.cont.fet_vc_hi_v = spec.cont.fet.vc_hi;
    cfg.cont.fet_shape = spec.cont.fet.shape;
}

}  // namespace attenforge
