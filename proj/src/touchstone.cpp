#include "attenforge/touchstone.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace attenforge {

void write_touchstone(const TouchstoneFile& ts, const std::string& path) {
    if (ts.f_hz.size() != ts.rows.size())
        throw ConfigError("touchstone frequency/row count mismatch");
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw ConfigError("cannot write touchstone file '" + path + "'");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", ts.r_ref_ohms);
    out << "! 2-port S-parameters\n";
    out << "# GHz S RI R " << buf << "\n";
    for (size_t i = 0; i < ts.rows.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", ts.f_hz[i] * 1e-9);
        out << buf;
        for (double v : ts.rows[i]) {
            std::snprintf(buf, sizeof buf, " %.17g", v);
            out << buf;
        }
        out << "\n";
    }
    if (!out)
        throw ConfigError("failed writing touchstone file '" + path + "'");
}

TouchstoneFile read_touchstone(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open touchstone file '" + path + "'");
    TouchstoneFile ts;
    bool have_option = false;
    double f_scale = 1e9;
    std::string line;
    int data_row = 0;
    while (std::getline(in, line)) {
        const size_t bang = line.find('!');
        if (bang != std::string::npos)
            line = line.substr(0, bang);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first))
            continue;
        if (first == "#") {
            if (have_option)
                throw ConfigError("touchstone file has more than one option line");
            std::string unit, param, fmt, rtok;
            double rval = 50.0;
            if (!(ls >> unit >> param >> fmt >> rtok >> rval))
                throw ConfigError("malformed touchstone option line");
            for (char& c : unit)
                c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            if (unit == "HZ") f_scale = 1.0;
            else if (unit == "KHZ") f_scale = 1e3;
            else if (unit == "MHZ") f_scale = 1e6;
            else if (unit == "GHZ") f_scale = 1e9;
            else throw ConfigError("unsupported touchstone frequency unit '" + unit + "'");
            if (param != "S" || fmt != "RI" || rtok != "R")
                throw ConfigError("only `# <unit> S RI R <z0>` touchstone files are supported");
            if (!(rval > 0.0))
                throw ConfigError("touchstone reference resistance must be positive");
            ts.r_ref_ohms = rval;
            have_option = true;
            continue;
        }
        // Data row: exactly 9 numeric fields.
        std::istringstream rs(line);
        std::vector<double> fields;
        double v = 0.0;
        while (rs >> v)
            fields.push_back(v);
        std::string leftover;
        rs.clear();
        if (rs >> leftover)
            throw ConfigError("touchstone data row " + std::to_string(data_row + 1) +
                              ": non-numeric field");
        if (fields.size() != 9)
            throw ConfigError("touchstone data row " + std::to_string(data_row + 1) +
                              ": expected 9 fields, got " + std::to_string(fields.size()));
        if (!have_option)
            throw ConfigError("touchstone data before the option line");
        const double f = fields[0] * f_scale;
        if (!ts.f_hz.empty() && !(f > ts.f_hz.back()))
            throw ConfigError("touchstone data row " + std::to_string(data_row + 1) +
                              ": frequencies must be strictly increasing");
        ts.f_hz.push_back(f);
        std::array<double, 8> row{};
        for (int i = 0; i < 8; ++i)
            row[static_cast<size_t>(i)] = fields[static_cast<size_t>(i + 1)];
        ts.rows.push_back(row);
        ++data_row;
    }
    if (!have_option)
        throw ConfigError("touchstone file has no option line");
    return ts;
}

}  // namespace attenforge
