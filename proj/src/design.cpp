#include "attenforge/design.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

namespace attenforge {

SynthesizedT synth_ttype(double atten_db, double z0) {
    if (!(atten_db > 0.0))
        throw NumericError("synth_ttype requires a positive attenuation");
    if (!(z0 > 0.0))
        throw NumericError("synth_ttype requires a positive reference impedance");
    const double k = std::pow(10.0, atten_db / 20.0);
    return SynthesizedT{z0 * (k - 1.0) / (k + 1.0), 2.0 * z0 * k / (k * k - 1.0)};
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double f_tol, int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo * fhi > 0.0)
        throw NumericError("bisect_root: no sign change over the bracket");
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (std::abs(fm) < f_tol || hi - lo < 1e-15 * std::max(1.0, std::abs(mid)))
            return mid;
        if (flo * fm <= 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double x_tol) {
    constexpr double gr = 0.6180339887498949;  // (sqrt(5)-1)/2
    double a = lo;
    double b = hi;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > x_tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return f(a) <= f(b) ? a : b;
}

double grid_then_golden(const std::function<double(double)>& f, double lo,
                        double hi, int n, double x_tol) {
    if (n < 2 || !(hi > lo))
        throw NumericError("grid_then_golden: bad search interval");
    std::vector<double> xs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        xs[static_cast<size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    int best = 0;
    double best_val = f(xs[0]);
    for (int i = 1; i < n; ++i) {
        const double v = f(xs[static_cast<size_t>(i)]);
        if (v < best_val) {  // strict: ties stay at the smaller argument
            best_val = v;
            best = i;
        }
    }
    const double a = xs[static_cast<size_t>(std::max(0, best - 1))];
    const double b = xs[static_cast<size_t>(std::min(n - 1, best + 1))];
    const double x = golden_min(f, a, b, x_tol);
    return f(x) <= best_val ? x : xs[static_cast<size_t>(best)];
}

namespace {

double unit_delta_db(const Abcd& ref, const Abcd& att, double z0) {
    const double mr = std::abs(abcd_to_s(ref, z0).s21);
    const double ma = std::abs(abcd_to_s(att, z0).s21);
    return 20.0 * std::log10(mr / ma);
}

// Shared bisection wrapper for both unit flavors. eval(r2, state) must
// return the unit ABCD with the shunt resistance replaced by r2.
double fit_r2_impl(const std::function<Abcd(double, BitState)>& eval,
                   double target_delta_db, double z0) {
    constexpr double lo = 1.0;
    constexpr double hi = 10e3;
    auto err = [&](double r2) {
        return unit_delta_db(eval(r2, BitState::Ref), eval(r2, BitState::Att), z0) -
               target_delta_db;
    };
    const double err_hi = err(hi);
    if (err_hi > 0.0)
        return hi;  // target below the resolution of an effectively open shunt
    if (err(lo) < 0.0)
        throw NumericError("fit_r2_for_delta: target attenuation unreachable within bracket");
    return bisect_root(err, lo, hi, 1e-4);
}

}  // namespace

double fit_r2_for_delta(const SimplifiedTUnitSpec& unit, double target_delta_db,
                        double f0_hz, double z0) {
    const double omega = 2.0 * M_PI * f0_hz;
    return fit_r2_impl(
        [&](double r2, BitState st) {
            SimplifiedTUnitSpec u = unit;
            u.r2.r = r2;
            return simplified_twoport(u, st, omega);
        },
        target_delta_db, z0);
}

double fit_r2_for_delta(const TTypeUnitSpec& unit, double target_delta_db,
                        double f0_hz, double z0) {
    const double omega = 2.0 * M_PI * f0_hz;
    return fit_r2_impl(
        [&](double r2, BitState st) {
            TTypeUnitSpec u = unit;
            u.r2.r = r2;
            return ttype_twoport(u, st, omega);
        },
        target_delta_db, z0);
}

namespace {

double rms_phase_diff_obj(const std::function<Abcd(BitState, double)>& eval,
                          const FrequencyGrid& band, double z0) {
    double acc = 0.0;
    for (double f : band.points_hz) {
        const double omega = 2.0 * M_PI * f;
        const double pr = phase_deg(abcd_to_s(eval(BitState::Ref, omega), z0).s21);
        const double pa = phase_deg(abcd_to_s(eval(BitState::Att, omega), z0).s21);
        const double d = wrap_deg(pa - pr);
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(band.points_hz.size()));
}

double optimize_ccomp_impl(const std::function<Abcd(double, BitState, double)>& eval,
                           const FrequencyGrid& band, double c_lo, double c_hi,
                           double z0) {
    if (!(c_lo < c_hi))
        throw NumericError("optimize_ccomp requires c_lo < c_hi");
    validate_grid(band);
    auto obj = [&](double c) {
        return rms_phase_diff_obj(
            [&](BitState st, double omega) { return eval(c, st, omega); }, band, z0);
    };
    return grid_then_golden(obj, c_lo, c_hi, 64, 1e-17);  // refine to 0.01 fF
}

}  // namespace

double optimize_ccomp(const TTypeUnitSpec& unit, const FrequencyGrid& band,
                      double c_lo, double c_hi, double z0) {
    return optimize_ccomp_impl(
        [&](double c, BitState st, double omega) {
            TTypeUnitSpec u = unit;
            u.c_comp = c;
            return ttype_twoport(u, st, omega);
        },
        band, c_lo, c_hi, z0);
}

double optimize_ccomp(const SimplifiedTUnitSpec& unit, const FrequencyGrid& band,
                      double c_lo, double c_hi, double z0) {
    return optimize_ccomp_impl(
        [&](double c, BitState st, double omega) {
            SimplifiedTUnitSpec u = unit;
            u.c_comp = c;
            return simplified_twoport(u, st, omega);
        },
        band, c_lo, c_hi, z0);
}

CalibrationTable calibrate_continuous(const AttenuatorChipSpec& chip, double f0_hz,
                                      double step_db, double range_db) {
    if (!(f0_hz > 0.0) || !(step_db > 0.0) || !(range_db >= step_db))
        throw NumericError("calibrate_continuous: bad step or range");
    const double omega = 2.0 * M_PI * f0_hz;
    const double vc_lo = chip.cont.fet.vc_lo;
    const double vc_hi = chip.cont.fet.vc_hi;
    AttenuatorState st;  // digital bits at reference
    st.vc = vc_lo;
    const double base = std::abs(chip_twoport(chip, st, omega).s21);
    auto delta = [&](double vc) {
        AttenuatorState s = st;
        s.vc = vc;
        return 20.0 * std::log10(base / std::abs(chip_twoport(chip, s, omega).s21));
    };
    const double max_delta = delta(vc_hi);

    CalibrationTable table;
    const long n_steps = std::lround(range_db / step_db);
    for (long i = 0; i <= n_steps; ++i) {
        const double target = step_db * static_cast<double>(i);
        if (i == 0) {
            table.entries.push_back({0.0, vc_lo, 0.0});
            continue;
        }
        if (target > max_delta) {
            char buf[96];
            std::snprintf(buf, sizeof buf,
                          "calibration target %.1f dB exceeds the FET range (max %.3f dB)",
                          target, max_delta);
            throw NumericError(buf);
        }
        const double vc =
            bisect_root([&](double v) { return delta(v) - target; }, vc_lo, vc_hi, 1e-3);
        table.entries.push_back({target, vc, delta(vc)});
    }
    validate_table(table);
    return table;
}

namespace {

int sweep_thread_count(size_t jobs) {
    long requested = 0;
    if (const char* env = std::getenv("ATTEN_FORGE_THREADS"))
        requested = std::strtol(env, nullptr, 10);
    if (requested <= 0)
        requested = static_cast<long>(std::thread::hardware_concurrency());
    if (requested < 1)
        requested = 1;
    return static_cast<int>(std::min<size_t>(static_cast<size_t>(requested), jobs));
}

}  // namespace

SweepResult sweep(const AttenuatorChipSpec& chip,
                  const std::vector<AttenuatorState>& states,
                  const FrequencyGrid& grid) {
    if (states.empty())
        throw ConfigError("sweep requires at least one state");
    validate_grid(grid);
    SweepResult result;
    result.states = states;
    result.grid = grid;
    const size_t nf = grid.points_hz.size();
    const size_t total = states.size() * nf;
    result.records.resize(total);

    auto run_range = [&](size_t begin, size_t end) {
        for (size_t idx = begin; idx < end; ++idx) {
            const size_t is = idx / nf;
            const size_t ifreq = idx % nf;
            result.records[idx] = chip_twoport(chip, states[is],
                                               2.0 * M_PI * grid.points_hz[ifreq]);
        }
    };

    const int workers = sweep_thread_count(total);
    if (workers <= 1) {
        run_range(0, total);
        return result;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    const size_t chunk = (total + static_cast<size_t>(workers) - 1) / static_cast<size_t>(workers);
    for (int w = 0; w < workers; ++w) {
        const size_t begin = static_cast<size_t>(w) * chunk;
        const size_t end = std::min(total, begin + chunk);
        if (begin >= end)
            break;
        pool.emplace_back(run_range, begin, end);
    }
    for (std::thread& t : pool)
        t.join();
    return result;
}

size_t reference_index(const std::vector<AttenuatorState>& states) {
    for (size_t i = 0; i < states.size(); ++i)
        if (states[i].bit4 == BitState::Ref && states[i].bit2 == BitState::Ref &&
            std::abs(states[i].nominal_db) < 1e-9)
            return i;
    throw ConfigError("state list has no reference (0 dB) state");
}

namespace {

size_t reference_index(const SweepResult& sr) { return reference_index(sr.states); }

}  // namespace

std::vector<double> rms_amp_error(const SweepResult& sr,
                                  const std::vector<double>& ideal_db) {
    if (ideal_db.size() != sr.states.size())
        throw ConfigError("rms_amp_error: ideal_db size mismatch");
    const size_t ref = reference_index(sr);
    const size_t nf = sr.grid.points_hz.size();
    std::vector<double> out(nf, 0.0);
    if (sr.states.size() < 2)
        return out;
    for (size_t k = 0; k < nf; ++k) {
        const double mag_ref = std::abs(sr.at(ref, k).s21);
        double acc = 0.0;
        for (size_t s = 0; s < sr.states.size(); ++s) {
            if (s == ref)
                continue;
            const double att = 20.0 * std::log10(mag_ref / std::abs(sr.at(s, k).s21));
            const double e = att - ideal_db[s];
            acc += e * e;
        }
        out[k] = std::sqrt(acc / static_cast<double>(sr.states.size() - 1));
    }
    return out;
}

std::vector<double> rms_phase_error(const SweepResult& sr) {
    const size_t ref = reference_index(sr);
    const size_t nf = sr.grid.points_hz.size();
    std::vector<double> out(nf, 0.0);
    if (sr.states.size() < 2)
        return out;
    for (size_t k = 0; k < nf; ++k) {
        const double ph_ref = phase_deg(sr.at(ref, k).s21);
        double acc = 0.0;
        for (size_t s = 0; s < sr.states.size(); ++s) {
            if (s == ref)
                continue;
            const double d = wrap_deg(phase_deg(sr.at(s, k).s21) - ph_ref);
            acc += d * d;
        }
        out[k] = std::sqrt(acc / static_cast<double>(sr.states.size() - 1));
    }
    return out;
}

namespace {

double reflection_db_capped(double mag) {
    if (!(mag > 1e-99))
        return 99.0;
    return std::min(99.0, -20.0 * std::log10(mag));
}

BandSummary summarize(const std::vector<double>& v) {
    BandSummary s{v.front(), v.front()};
    for (double x : v) {
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    return s;
}

}  // namespace

BandMetrics il_rl(const SweepResult& sr) {
    const size_t ref = reference_index(sr);
    const size_t nf = sr.grid.points_hz.size();
    BandMetrics m;
    m.il_db.resize(nf);
    m.rl_in_db.resize(nf);
    m.rl_out_db.resize(nf);
    for (size_t k = 0; k < nf; ++k) {
        m.il_db[k] = -20.0 * std::log10(std::abs(sr.at(ref, k).s21));
        double worst_in = 0.0;
        double worst_out = 0.0;
        for (size_t s = 0; s < sr.states.size(); ++s) {
            worst_in = std::max(worst_in, std::abs(sr.at(s, k).s11));
            worst_out = std::max(worst_out, std::abs(sr.at(s, k).s22));
        }
        m.rl_in_db[k] = reflection_db_capped(worst_in);
        m.rl_out_db[k] = reflection_db_capped(worst_out);
    }
    m.il = summarize(m.il_db);
    m.rl_in = summarize(m.rl_in_db);
    m.rl_out = summarize(m.rl_out_db);
    return m;
}

BandMetrics band_metrics(const SweepResult& sr) {
    BandMetrics m = il_rl(sr);
    std::vector<double> ideal;
    ideal.reserve(sr.states.size());
    for (const AttenuatorState& s : sr.states)
        ideal.push_back(s.nominal_db);
    m.rms_amp_err_db = rms_amp_error(sr, ideal);
    m.rms_phase_err_deg = rms_phase_error(sr);
    m.rms_amp = summarize(m.rms_amp_err_db);
    m.rms_phase = summarize(m.rms_phase_err_deg);
    return m;
}

namespace {

// Max-over-band RMS amplitude error, RMS phase error, and worst |reflection|
// for the given states on a (possibly subsampled) grid.
struct TuneMetrics {
    double rms_amp_max{0.0};
    double rms_phase_max{0.0};
    double gamma_worst{0.0};
};

TuneMetrics tune_metrics(const AttenuatorChipSpec& chip,
                         const std::vector<AttenuatorState>& states,
                         const std::vector<double>& freqs) {
    TuneMetrics tm;
    const size_t n = states.size();
    std::vector<SParams2> ss(n);
    for (double f : freqs) {
        const double omega = 2.0 * M_PI * f;
        for (size_t i = 0; i < n; ++i)
            ss[i] = chip_twoport(chip, states[i], omega);
        const double mag_ref = std::abs(ss[0].s21);
        const double ph_ref = phase_deg(ss[0].s21);
        double ea = 0.0;
        double ep = 0.0;
        for (size_t i = 1; i < n; ++i) {
            const double att = 20.0 * std::log10(mag_ref / std::abs(ss[i].s21));
            const double da = att - states[i].nominal_db;
            const double dp = wrap_deg(phase_deg(ss[i].s21) - ph_ref);
            ea += da * da;
            ep += dp * dp;
        }
        tm.rms_amp_max = std::max(tm.rms_amp_max, std::sqrt(ea / static_cast<double>(n - 1)));
        tm.rms_phase_max = std::max(tm.rms_phase_max, std::sqrt(ep / static_cast<double>(n - 1)));
        for (const SParams2& s : ss)
            tm.gamma_worst = std::max({tm.gamma_worst, std::abs(s.s11), std::abs(s.s22)});
    }
    return tm;
}

}  // namespace

AttenuatorChipSpec tune_chip(const AttenuatorChipSpec& chip, const FrequencyGrid& band,
                             const TuneOptions& opts) {
    validate_grid(band);
    if (opts.passes < 1)
        throw NumericError("tune_chip requires at least one pass");
    std::vector<double> sub;
    const int stride = std::max(1, opts.grid_stride);
    for (size_t i = 0; i < band.points_hz.size(); i += static_cast<size_t>(stride))
        sub.push_back(band.points_hz[i]);

    AttenuatorChipSpec cur = chip;
    for (int pass = 0; pass < opts.passes; ++pass) {
        const CalibrationTable table = calibrate_continuous(cur, opts.f0_hz);
        const std::vector<AttenuatorState> states =
            enumerate_states(cur, 0.5, opts.f0_hz, table);
        auto amp_obj = [&](const AttenuatorChipSpec& c) {
            const TuneMetrics tm = tune_metrics(c, states, sub);
            return tm.rms_amp_max + 10.0 * std::max(0.0, tm.gamma_worst - opts.gamma_limit);
        };
        auto phase_obj = [&](const AttenuatorChipSpec& c) {
            const TuneMetrics tm = tune_metrics(c, states, sub);
            return tm.rms_phase_max + 100.0 * std::max(0.0, tm.gamma_worst - opts.gamma_limit);
        };

        // r2 refit against the amplitude metric.
        cur.unit4.r2.r = grid_then_golden(
            [&](double r) {
                AttenuatorChipSpec c = cur;
                c.unit4.r2.r = r;
                return amp_obj(c);
            },
            cur.unit4.r2.r * (1.0 - opts.r2_span), cur.unit4.r2.r * (1.0 + opts.r2_span),
            24, 1e-3);
        cur.unit2.r2.r = grid_then_golden(
            [&](double r) {
                AttenuatorChipSpec c = cur;
                c.unit2.r2.r = r;
                return amp_obj(c);
            },
            cur.unit2.r2.r * (1.0 - opts.r2_span), cur.unit2.r2.r * (1.0 + opts.r2_span),
            24, 1e-3);

        // c_comp against the phase metric.
        cur.unit4.c_comp = grid_then_golden(
            [&](double c) {
                AttenuatorChipSpec ch = cur;
                ch.unit4.c_comp = c;
                return phase_obj(ch);
            },
            opts.c_lo, opts.c_hi, 48, 1e-17);
        cur.unit2.c_comp = grid_then_golden(
            [&](double c) {
                AttenuatorChipSpec ch = cur;
                ch.unit2.c_comp = c;
                return phase_obj(ch);
            },
            opts.c_lo, opts.c_hi, 48, 1e-17);

        // TL electrical lengths against the amplitude metric.
        cur.tl_a.theta_ref_rad = grid_then_golden(
            [&](double th) {
                AttenuatorChipSpec c = cur;
                c.tl_a.theta_ref_rad = th;
                return amp_obj(c);
            },
            opts.theta_lo_rad, opts.theta_hi_rad, 32, 1e-5);
        cur.tl_b.theta_ref_rad = grid_then_golden(
            [&](double th) {
                AttenuatorChipSpec c = cur;
                c.tl_b.theta_ref_rad = th;
                return amp_obj(c);
            },
            opts.theta_lo_rad, opts.theta_hi_rad, 32, 1e-5);
    }
    return cur;
}

}  // namespace attenforge
