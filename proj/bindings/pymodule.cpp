#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "attenforge/config.hpp"
#include "attenforge/design.hpp"
#include "attenforge/reports.hpp"
#include "attenforge/touchstone.hpp"

namespace py = pybind11;
namespace af = attenforge;

namespace {

using STuple = std::tuple<af::Complex, af::Complex, af::Complex, af::Complex>;

STuple as_tuple(const af::SParams2& sp) {
    return {sp.s11, sp.s21, sp.s12, sp.s22};
}

// A loaded chip design: wraps the config, its SI spec, and the band grid.
class Chip {
  public:
    explicit Chip(const std::string& config_path)
        : cfg_(af::load_config_file(config_path)), spec_(af::to_chip_spec(cfg_)) {}

    STuple sparams(bool bit4_att, bool bit2_att, double vc, double f_hz) const {
        af::AttenuatorState st;
        st.bit4 = bit4_att ? af::BitState::Att : af::BitState::Ref;
        st.bit2 = bit2_att ? af::BitState::Att : af::BitState::Ref;
        st.vc = vc;
        return as_tuple(af::chip_twoport(spec_, st, 2.0 * M_PI * f_hz));
    }

    std::vector<std::tuple<double, double, double>> calibrate() const {
        const af::CalibrationTable t =
            af::calibrate_continuous(spec_, af::config_f0_hz(cfg_));
        std::vector<std::tuple<double, double, double>> out;
        for (const af::CalibrationEntry& e : t.entries)
            out.emplace_back(e.target_db, e.vc, e.achieved_db_at_f0);
        return out;
    }

    py::dict sweep_metrics(double step_db) const {
        const double f0 = af::config_f0_hz(cfg_);
        const af::CalibrationTable table = af::calibrate_continuous(spec_, f0);
        const auto states = af::enumerate_states(spec_, step_db, f0, table);
        const af::SweepResult sr = af::sweep(spec_, states, af::to_grid(cfg_));
        const af::BandMetrics m = af::band_metrics(sr);
        py::dict d;
        d["il_min_db"] = m.il.min;
        d["il_max_db"] = m.il.max;
        d["rl_worst_db"] = std::min(m.rl_in.min, m.rl_out.min);
        d["rms_amp_max_db"] = m.rms_amp.max;
        d["rms_phase_max_deg"] = m.rms_phase.max;
        return d;
    }

    void tune(int passes) {
        af::TuneOptions opts;
        opts.passes = passes;
        opts.f0_hz = af::config_f0_hz(cfg_);
        af::update_config_from_spec(cfg_, af::tune_chip(spec_, af::to_grid(cfg_), opts));
        // Re-derive so the in-memory spec matches what a saved config loads
        // back to, down to the last bit.
        spec_ = af::to_chip_spec(cfg_);
    }

    void write(const std::string& path) const { af::save_config_file(cfg_, path); }

    double z0() const { return spec_.z0_ohms; }

  private:
    af::ChipConfig cfg_;
    af::AttenuatorChipSpec spec_;
};

STuple solve_netlist(const std::string& text, double f_hz, double z0) {
    const af::Netlist net = af::parse_netlist(text);
    return as_tuple(af::solve_sparams(net, 2.0 * M_PI * f_hz, z0));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "switch-type mmWave step attenuator models";

    m.def(
        "synth_ttype",
        [](double atten_db, double z0) {
            const af::SynthesizedT s = af::synth_ttype(atten_db, z0);
            return std::make_pair(s.r1_ohms, s.r2_ohms);
        },
        py::arg("atten_db"), py::arg("z0") = 50.0,
        "T-pad (r1, r2) in ohms for the given attenuation");

    m.def("eval_eq1", &af::eval_eq1, py::arg("r1"), py::arg("r2"), py::arg("r_on2"),
          py::arg("c_comp"), py::arg("z0"), py::arg("omega"),
          "closed-form S21 of the compensated T attenuation state");
    m.def("eval_eq2", &af::eval_eq2, py::arg("r1"), py::arg("r2"), py::arg("r_on2"),
          py::arg("c_comp"), py::arg("z0"), py::arg("omega"),
          "first-order phase (radians) of the same state");

    m.def("mag_db", &af::mag_db, py::arg("s"));
    m.def("phase_deg", &af::phase_deg, py::arg("s"));
    m.def("wrap_deg", &af::wrap_deg, py::arg("deg"));

    m.def("solve_netlist", &solve_netlist, py::arg("text"), py::arg("f_hz"),
          py::arg("z0") = 50.0,
          "(s11, s21, s12, s22) of an `R|C|L name n1 n2 value` netlist with "
          "P1/P2 port lines");

    m.def(
        "read_touchstone",
        [](const std::string& path) {
            const af::TouchstoneFile ts = af::read_touchstone(path);
            return std::make_tuple(ts.r_ref_ohms, ts.f_hz, ts.rows);
        },
        py::arg("path"), "(r_ref, f_hz list, rows) of a 2-port RI .s2p file");
    m.def(
        "write_touchstone",
        [](const std::string& path, double r_ref, const std::vector<double>& f_hz,
           const std::vector<std::array<double, 8>>& rows) {
            af::TouchstoneFile ts;
            ts.r_ref_ohms = r_ref;
            ts.f_hz = f_hz;
            ts.rows = rows;
            af::write_touchstone(ts, path);
        },
        py::arg("path"), py::arg("r_ref"), py::arg("f_hz"), py::arg("rows"));

    py::class_<Chip>(m, "Chip")
        .def(py::init<const std::string&>(), py::arg("config_path"))
        .def("sparams", &Chip::sparams, py::arg("bit4_att"), py::arg("bit2_att"),
             py::arg("vc"), py::arg("f_hz"),
             "(s11, s21, s12, s22) for one digital/continuous setting")
        .def("calibrate", &Chip::calibrate,
             "list of (target_db, vc, achieved_db_at_f0)")
        .def("sweep_metrics", &Chip::sweep_metrics, py::arg("step_db") = 0.5,
             "band summary dict over all states")
        .def("tune", &Chip::tune, py::arg("passes") = 3,
             "run the sequential chip tuning passes in place")
        .def("write", &Chip::write, py::arg("path"))
        .def_property_readonly("z0", &Chip::z0);

    py::register_exception<af::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<af::NumericError>(m, "NumericError", PyExc_ArithmeticError);
}
