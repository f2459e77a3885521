#include "blosim/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "blosim/errors.hpp"
#include "blosim/spec_analyzer.hpp"
#include "blosim/svg_plot.hpp"
#include "blosim/trace_synth.hpp"
#include "blosim/units.hpp"

namespace blosim {

namespace {

// Per-scenario sub-seeds: base seed is the calibration run, base+1..3 the
// measurement runs, so re-running with one --seed regenerates everything.
constexpr std::uint64_t kSnlSeed = 0;
constexpr std::uint64_t kPrimarySeed = 1;
constexpr std::uint64_t kSecondarySeed = 2;
constexpr std::uint64_t kTertiarySeed = 3;

std::filesystem::path ensure_out_dir(const RunOptions& opts) {
    std::error_code ec;
    std::filesystem::create_directories(opts.out_dir, ec);
    if (ec) throw io_error("cannot create output directory " + opts.out_dir.string());
    return opts.out_dir;
}

ReportEntry info_entry(std::string name, double value, std::string unit, std::string source) {
    ReportEntry e;
    e.name = std::move(name);
    e.value = value;
    e.unit = std::move(unit);
    e.source = std::move(source);
    return e;
}

ReportEntry checked_entry(std::string name, double value, std::string unit, double expected,
                          double tolerance, std::string source) {
    ReportEntry e;
    e.name = std::move(name);
    e.value = value;
    e.unit = std::move(unit);
    e.checked = true;
    e.expected = expected;
    e.tolerance = tolerance;
    e.pass = std::abs(value - expected) <= tolerance;
    e.source = std::move(source);
    return e;
}

double band_average_db(const Spectrum& spec) {
    double acc = 0.0;
    for (const double db : spec.power_db_rel_snl) acc += linear_from_db(db);
    return db_from_linear(acc / static_cast<double>(spec.power_db_rel_snl.size()));
}

// Extremes of a zero-span trace over points with a full VBW window;
// edge points are less smoothed and would bias min/max outward.
std::pair<double, double> trimmed_min_max_db(const Spectrum& spec) {
    const auto n = spec.power_db_rel_snl.size();
    std::size_t trim = 0;
    if (n >= 8 && spec.axis.size() >= 2) {
        const double dt = spec.axis[1] - spec.axis[0];
        trim = static_cast<std::size_t>(std::llround(1.0 / (2.0 * spec.vbw_hz * dt) / 2.0));
        trim = std::min(trim, n / 4);
    }
    double lo = spec.power_db_rel_snl[trim], hi = lo;
    for (std::size_t i = trim; i + trim < n; ++i) {
        lo = std::min(lo, spec.power_db_rel_snl[i]);
        hi = std::max(hi, spec.power_db_rel_snl[i]);
    }
    return {lo, hi};
}

double mean_db(const Spectrum& spec) { return band_average_db(spec); }

// Max spread of the per-quarter mean levels; flat for a phase-insensitive
// measurement even while the phase ramps.
double quarter_flatness_db(const Spectrum& spec) {
    const std::size_t n = spec.power_db_rel_snl.size();
    if (n < 8) return 0.0;
    double lo = 1e300, hi = -1e300;
    for (int q = 0; q < 4; ++q) {
        const std::size_t a = n * q / 4, b = n * (q + 1) / 4;
        double acc = 0.0;
        for (std::size_t i = a; i < b; ++i) acc += linear_from_db(spec.power_db_rel_snl[i]);
        const double m = db_from_linear(acc / static_cast<double>(b - a));
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    return hi - lo;
}

struct PeakHit {
    double freq_hz = 0.0;
    double power_db = 0.0;
};

// Highest bin within +/- window of f_expected.
PeakHit find_peak_near(const Spectrum& spec, double f_expected, double window_hz) {
    PeakHit best;
    best.power_db = -1e300;
    for (std::size_t i = 0; i < spec.axis.size(); ++i) {
        if (std::abs(spec.axis[i] - f_expected) > window_hz) continue;
        if (spec.power_db_rel_snl[i] > best.power_db) {
            best.power_db = spec.power_db_rel_snl[i];
            best.freq_hz = spec.axis[i];
        }
    }
    if (best.power_db == -1e300)
        throw config_error("scenario: no analysis bins near the expected peak");
    return best;
}

// Median level with tone neighborhoods masked out.
double floor_median_db(const Spectrum& spec, const std::vector<double>& tone_freqs,
                       double exclusion_hz) {
    std::vector<double> vals;
    vals.reserve(spec.axis.size());
    for (std::size_t i = 0; i < spec.axis.size(); ++i) {
        bool masked = false;
        for (const double f : tone_freqs)
            if (std::abs(spec.axis[i] - f) <= exclusion_hz) { masked = true; break; }
        if (!masked) vals.push_back(spec.power_db_rel_snl[i]);
    }
    if (vals.empty()) throw config_error("scenario: floor estimate has no unmasked bins");
    std::sort(vals.begin(), vals.end());
    return vals[vals.size() / 2];
}

SnlReference make_reference(const ScenarioConfig& config, const Trace& vacuum_trace,
                            double rbw_hz) {
    if (config.analyzer.snl_reference == "analytic")
        return SnlReference::analytic(vacuum_trace.sample_rate_hz);
    return SnlReference::from_vacuum_trace(vacuum_trace, rbw_hz);
}

void append_dark_floor_entry(RunReport& report, const ScenarioConfig& config,
                             const SnlReference& ref) {
    if (!config.analyzer.has_dark_floor) return;
    const DetectionChain floor_chain(config.chain.eta, config.chain.visibility,
                                     linear_from_db(config.analyzer.dark_floor_db));
    if (const auto db = dark_noise_floor_db(ref, floor_chain))
        report.entries.push_back(info_entry("dark_noise_floor_db", *db, "dB", "config"));
}

void write_report_file(RunReport& report, const std::filesystem::path& out_dir) {
    const auto path = out_dir / (report.scenario + "_report.txt");
    std::ofstream out(path);
    if (!out) throw io_error("cannot write report: " + path.string());
    out << report.to_text();
    report.artifacts.push_back(path.string());
}

std::string csv_path(const std::filesystem::path& dir, const std::string& name) {
    return (dir / name).string();
}

// Uniform analytic grid over [lo, hi]; excludes 0 where the variance ops
// are undefined.
std::vector<double> analytic_grid(double lo, double hi, double step) {
    std::vector<double> grid;
    for (double f = std::max(lo, step); f <= hi + step / 2; f += step) grid.push_back(f);
    return grid;
}

Spectrum analytic_spectrum(const std::vector<double>& freqs, const std::vector<double>& db,
                           double rbw, double vbw) {
    Spectrum s;
    s.axis = freqs;
    s.power_db_rel_snl = db;
    s.rbw_hz = rbw;
    s.vbw_hz = vbw;
    s.mode = SpectrumMode::swept;
    s.reference_desc = "analytic";
    return s;
}

} // namespace

bool RunReport::all_pass() const {
    for (const auto& e : entries)
        if (e.checked && !e.pass) return false;
    return true;
}

std::string RunReport::to_text() const {
    std::ostringstream os;
    os << "scenario: " << scenario << "\n";
    char buf[256];
    for (const auto& e : entries) {
        if (e.checked) {
            std::snprintf(buf, sizeof(buf), "  %-28s = %12.6g %-4s [%s vs %.6g +/- %.3g]",
                          e.name.c_str(), e.value, e.unit.c_str(), e.pass ? "PASS" : "FAIL",
                          e.expected, e.tolerance);
        } else {
            std::snprintf(buf, sizeof(buf), "  %-28s = %12.6g %-4s", e.name.c_str(), e.value,
                          e.unit.c_str());
        }
        os << buf;
        if (!e.source.empty()) os << "  (" << e.source << ")";
        os << "\n";
    }
    os << "artifacts:\n";
    for (const auto& a : artifacts) os << "  " << a << "\n";
    os << "result: " << (all_pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

RunReport cmd_spectrum(const ScenarioConfig& config, const RunOptions& opts) {
    config.validate();
    const auto out_dir = ensure_out_dir(opts);
    const auto model = config.make_model();
    const auto chain = config.make_chain();
    BloConfig blo = config.make_blo();
    if (!blo.dual_sideband())
        throw config_error("spectrum scenario requires blo.sidebands = dual");

    const auto& sp = config.spectrum;
    RunReport report;
    report.scenario = "spectrum";

    const std::string sq_csv = csv_path(out_dir, "spectrum_squeezed.csv");
    const std::string anti_csv = csv_path(out_dir, "spectrum_antisqueezed.csv");
    const std::string snl_csv = csv_path(out_dir, "spectrum_snl.csv");

    Spectrum spec_sq, spec_anti, spec_snl;
    SnlReference ref;

    if (opts.analytic) {
        const auto grid = analytic_grid(sp.band_lo_hz, sp.band_hi_hz,
                                        (sp.band_hi_hz - sp.band_lo_hz) / 400.0);
        std::vector<double> sq_db, anti_db, snl_db;
        BloConfig b = blo;
        for (const double f : grid) {
            b.theta = QuadratureAngle::phase();
            sq_db.push_back(db_from_linear(blo_variance(model, chain, b, f)));
            b.theta = QuadratureAngle::amplitude();
            anti_db.push_back(db_from_linear(blo_variance(model, chain, b, f)));
            snl_db.push_back(0.0);
        }
        spec_sq = analytic_spectrum(grid, sq_db, sp.rbw_hz, sp.vbw_hz);
        spec_anti = analytic_spectrum(grid, anti_db, sp.rbw_hz, sp.vbw_hz);
        spec_snl = analytic_spectrum(grid, snl_db, sp.rbw_hz, sp.vbw_hz);
        ref = SnlReference::analytic(config.synth.sample_rate_hz);
    } else {
        const std::uint64_t base = opts.seed_override.value_or(config.synth.seed);
        const double fs = config.synth.sample_rate_hz;
        const double duration = static_cast<double>(config.synth.num_samples) / fs;

        BloConfig calib = blo;
        calib.balance_epsilon = 0.0; // calibration runs with balanced subtraction
        const auto vacuum = SqueezingModel::flat(0.0);
        const Trace vac_trace =
            synthesize(vacuum, chain, calib, std::nullopt, duration, fs, base + kSnlSeed);
        ref = make_reference(config, vac_trace, sp.rbw_hz);

        BloConfig b = blo;
        b.theta = QuadratureAngle::phase();
        const Trace sq_trace =
            synthesize(model, chain, b, std::nullopt, duration, fs, base + kPrimarySeed);
        b.theta = QuadratureAngle::amplitude();
        const Trace anti_trace =
            synthesize(model, chain, b, std::nullopt, duration, fs, base + kSecondarySeed);

        spec_snl = swept_spectrum(vac_trace, sp.rbw_hz, sp.vbw_hz, ref, sp.band_lo_hz,
                                  sp.band_hi_hz);
        spec_sq = swept_spectrum(sq_trace, sp.rbw_hz, sp.vbw_hz, ref, sp.band_lo_hz,
                                 sp.band_hi_hz);
        spec_anti = swept_spectrum(anti_trace, sp.rbw_hz, sp.vbw_hz, ref, sp.band_lo_hz,
                                   sp.band_hi_hz);
    }

    write_spectrum_csv(spec_sq, sq_csv);
    write_spectrum_csv(spec_anti, anti_csv);
    write_spectrum_csv(spec_snl, snl_csv);
    report.artifacts = {sq_csv, anti_csv, snl_csv};

    const auto& rep = config.report;
    report.entries.push_back(checked_entry("squeezing_band_avg_db", band_average_db(spec_sq),
                                           "dB", rep.squeezing_db, rep.band_tolerance_db,
                                           sq_csv));
    report.entries.push_back(checked_entry("antisqueezing_band_avg_db",
                                           band_average_db(spec_anti), "dB",
                                           rep.antisqueezing_db, rep.band_tolerance_db,
                                           anti_csv));
    report.entries.push_back(checked_entry("snl_band_avg_db", band_average_db(spec_snl), "dB",
                                           0.0, rep.band_tolerance_db, snl_csv));
    append_dark_floor_entry(report, config, opts.analytic
                                                ? SnlReference::analytic(config.synth.sample_rate_hz)
                                                : ref);

    if (opts.svg) {
        const auto svg = csv_path(out_dir, "spectrum.svg");
        write_svg_plot(svg, "Noise power spectra", "frequency (Hz)", "power rel. SNL (dB)",
                       {{"antisqueezed", "blue", spec_anti.axis, spec_anti.power_db_rel_snl},
                        {"squeezed", "red", spec_sq.axis, spec_sq.power_db_rel_snl},
                        {"SNL", "black", spec_snl.axis, spec_snl.power_db_rel_snl}});
        report.artifacts.push_back(svg);
    }
    write_report_file(report, out_dir);
    return report;
}

RunReport cmd_zero_span(const ScenarioConfig& config, const RunOptions& opts) {
    config.validate();
    const auto out_dir = ensure_out_dir(opts);
    const auto model = config.make_model();
    const auto chain = config.make_chain();
    BloConfig blo = config.make_blo();
    blo.upper_enabled = blo.lower_enabled = true;

    const auto& zs = config.zero_span;
    const auto& rep = config.report;
    RunReport report;
    report.scenario = "zero_span";

    const std::string dual_csv = csv_path(out_dir, "zero_span_dual.csv");
    const std::string upper_csv = csv_path(out_dir, "zero_span_upper.csv");
    const std::string lower_csv = csv_path(out_dir, "zero_span_lower.csv");
    const std::string snl_csv = csv_path(out_dir, "zero_span_snl.csv");

    Spectrum spec_dual, spec_upper, spec_lower, spec_snl;

    const double fs = zs.sample_rate_hz;
    const double duration = static_cast<double>(config.synth.num_samples) / fs;
    const double theta_rate = 2.0 * kPi * zs.theta_ramp_turns / duration;

    if (opts.analytic) {
        const std::size_t npts = 2048;
        std::vector<double> times(npts), dual_db(npts), het_db(npts), snl_db(npts, 0.0);
        BloConfig b = blo;
        BloConfig single = blo;
        single.lower_enabled = false;
        const double het = heterodyne_variance(model, chain, single, zs.center_hz);
        for (std::size_t i = 0; i < npts; ++i) {
            times[i] = duration * static_cast<double>(i) / static_cast<double>(npts - 1);
            b.theta.radians = blo.theta.radians + theta_rate * times[i];
            dual_db[i] = db_from_linear(blo_variance(model, chain, b, zs.center_hz));
            het_db[i] = db_from_linear(het);
        }
        auto mk = [&](std::vector<double> db) {
            Spectrum s;
            s.axis = times;
            s.power_db_rel_snl = std::move(db);
            s.rbw_hz = zs.rbw_hz;
            s.vbw_hz = zs.vbw_hz;
            s.mode = SpectrumMode::zero_span;
            s.center_hz = zs.center_hz;
            s.reference_desc = "analytic";
            return s;
        };
        spec_dual = mk(dual_db);
        spec_upper = mk(het_db);
        spec_lower = mk(het_db);
        spec_snl = mk(snl_db);
    } else {
        const std::uint64_t base = opts.seed_override.value_or(config.synth.seed);
        const std::size_t block = static_cast<std::size_t>(config.synth.block_len);

        BloConfig calib = blo;
        calib.balance_epsilon = 0.0;
        const auto vacuum = SqueezingModel::flat(0.0);
        const Trace vac_trace =
            synthesize(vacuum, chain, calib, std::nullopt, duration, fs, base + kSnlSeed);
        const SnlReference ref = make_reference(config, vac_trace, zs.rbw_hz);

        const Trace dual_trace = synthesize_phase_ramp(model, chain, blo, theta_rate, block,
                                                       duration, fs, base + kPrimarySeed);
        BloConfig upper = blo;
        upper.lower_enabled = false;
        const Trace upper_trace = synthesize_phase_ramp(model, chain, upper, theta_rate, block,
                                                        duration, fs, base + kSecondarySeed);
        BloConfig lower = blo;
        lower.upper_enabled = false;
        const Trace lower_trace = synthesize_phase_ramp(model, chain, lower, theta_rate, block,
                                                        duration, fs, base + kTertiarySeed);

        spec_dual = zero_span(dual_trace, zs.center_hz, zs.rbw_hz, zs.vbw_hz, ref);
        spec_upper = zero_span(upper_trace, zs.center_hz, zs.rbw_hz, zs.vbw_hz, ref);
        spec_lower = zero_span(lower_trace, zs.center_hz, zs.rbw_hz, zs.vbw_hz, ref);
        spec_snl = zero_span(vac_trace, zs.center_hz, zs.rbw_hz, zs.vbw_hz, ref);
    }

    write_spectrum_csv(spec_dual, dual_csv);
    write_spectrum_csv(spec_upper, upper_csv);
    write_spectrum_csv(spec_lower, lower_csv);
    write_spectrum_csv(spec_snl, snl_csv);
    report.artifacts = {dual_csv, upper_csv, lower_csv, snl_csv};

    const auto [dual_min, dual_max] = trimmed_min_max_db(spec_dual);
    report.entries.push_back(checked_entry("dual_min_db", dual_min, "dB", rep.zero_span_min_db,
                                           rep.zero_span_tolerance_db, dual_csv));
    report.entries.push_back(checked_entry("dual_max_db", dual_max, "dB", rep.zero_span_max_db,
                                           rep.zero_span_tolerance_db, dual_csv));
    report.entries.push_back(checked_entry("upper_mean_db", mean_db(spec_upper), "dB",
                                           rep.heterodyne_db, rep.band_tolerance_db, upper_csv));
    report.entries.push_back(checked_entry("lower_mean_db", mean_db(spec_lower), "dB",
                                           rep.heterodyne_db, rep.band_tolerance_db, lower_csv));
    report.entries.push_back(checked_entry("upper_flatness_db", quarter_flatness_db(spec_upper),
                                           "dB", 0.0, rep.flatness_db, upper_csv));
    report.entries.push_back(checked_entry("snl_mean_db", mean_db(spec_snl), "dB", 0.0,
                                           rep.band_tolerance_db, snl_csv));

    if (opts.svg) {
        const auto svg = csv_path(out_dir, "zero_span.svg");
        write_svg_plot(svg, "Zero-span noise power", "time (s)", "power rel. SNL (dB)",
                       {{"dual (phase ramp)", "red", spec_dual.axis, spec_dual.power_db_rel_snl},
                        {"upper only", "green", spec_upper.axis, spec_upper.power_db_rel_snl},
                        {"lower only", "magenta", spec_lower.axis, spec_lower.power_db_rel_snl},
                        {"SNL", "black", spec_snl.axis, spec_snl.power_db_rel_snl}});
        report.artifacts.push_back(svg);
    }
    write_report_file(report, out_dir);
    return report;
}

RunReport cmd_signal(const ScenarioConfig& config, const RunOptions& opts) {
    config.validate();
    const auto out_dir = ensure_out_dir(opts);
    const auto model = config.make_model();
    const auto chain = config.make_chain();
    BloConfig blo = config.make_blo();
    if (!blo.dual_sideband())
        throw config_error("signal scenario requires blo.sidebands = dual");
    blo.balance_epsilon = config.signal.balance_epsilon;

    const auto& sig = config.signal;
    const auto& rep = config.report;
    RunReport report;
    report.scenario = "signal";

    const auto peak_freqs = signal_peak_frequencies(blo, sig.f_mod_hz);
    const bool beatnote_on = sig.balance_epsilon > 0.0;
    const double beatnote_hz = 2.0 * blo.omega0_hz;

    const std::string sq_csv = csv_path(out_dir, "signal_squeezed.csv");
    const std::string anti_csv = csv_path(out_dir, "signal_antisqueezed.csv");
    const std::string vac_csv = csv_path(out_dir, "signal_vacuum_floor.csv");
    const std::string snl_csv = csv_path(out_dir, "signal_snl.csv");

    const double fs = config.synth.sample_rate_hz;

    // One physical signal: amplitude fixed by the target SNR over the
    // squeezed floor, then re-injected unchanged over the other floors.
    SignalTone tone;
    tone.f_mod_hz = sig.f_mod_hz;
    tone.snr_target_db = sig.snr_target_db;
    tone.ref_bandwidth_hz = sig.ref_bandwidth_hz;
    BloConfig sq_cfg = blo;
    sq_cfg.theta = QuadratureAngle::phase();
    const double amplitude = tone_amplitude_for_snr(model, chain, sq_cfg, tone, fs);
    SignalTone fixed_tone = tone;
    fixed_tone.amplitude_override = amplitude;

    Spectrum spec_sq, spec_anti, spec_vac, spec_snl;

    if (opts.analytic) {
        const double step = 10e3;
        const auto grid = analytic_grid(sig.band_lo_hz, sig.band_hi_hz, step);
        const auto vacuum = SqueezingModel::flat(0.0);
        const double ref_density = 2.0 / fs;
        auto curve = [&](const SqueezingModel& m, QuadratureAngle theta) {
            BloConfig b = blo;
            b.theta = theta;
            std::vector<double> db(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i)
                db[i] = db_from_linear(blo_variance(m, chain, b, grid[i]));
            // Displayed tone heights at this analyzer RBW.
            auto add_tone_display = [&](double f, double tone_power) {
                std::size_t nearest = 0;
                for (std::size_t i = 1; i < grid.size(); ++i)
                    if (std::abs(grid[i] - f) < std::abs(grid[nearest] - f)) nearest = i;
                const double disp = tone_power / (ref_density * sig.rbw_hz);
                db[nearest] = db_from_linear(linear_from_db(db[nearest]) + disp);
            };
            for (const double f : peak_freqs) add_tone_display(f, 0.5 * amplitude * amplitude);
            if (beatnote_on) {
                BloConfig bn = blo;
                add_tone_display(beatnote_hz, beatnote_power(bn));
            }
            return db;
        };
        spec_sq = analytic_spectrum(grid, curve(model, QuadratureAngle::phase()), sig.rbw_hz,
                                    sig.vbw_hz);
        spec_anti = analytic_spectrum(grid, curve(model, QuadratureAngle::amplitude()),
                                      sig.rbw_hz, sig.vbw_hz);
        spec_vac = analytic_spectrum(grid, curve(vacuum, QuadratureAngle::phase()), sig.rbw_hz,
                                     sig.vbw_hz);
        std::vector<double> flat(grid.size(), 0.0);
        spec_snl = analytic_spectrum(grid, flat, sig.rbw_hz, sig.vbw_hz);
    } else {
        const std::uint64_t base = opts.seed_override.value_or(config.synth.seed);
        const double duration = static_cast<double>(config.synth.num_samples) / fs;
        const auto vacuum = SqueezingModel::flat(0.0);

        BloConfig calib = blo;
        calib.balance_epsilon = 0.0;
        const Trace snl_trace =
            synthesize(vacuum, chain, calib, std::nullopt, duration, fs, base + kSnlSeed);
        const SnlReference ref = make_reference(config, snl_trace, sig.rbw_hz);

        const Trace sq_trace =
            synthesize(model, chain, sq_cfg, fixed_tone, duration, fs, base + kPrimarySeed);
        BloConfig anti_cfg = blo;
        anti_cfg.theta = QuadratureAngle::amplitude();
        const Trace anti_trace =
            synthesize(model, chain, anti_cfg, fixed_tone, duration, fs, base + kSecondarySeed);
        const Trace vac_trace =
            synthesize(vacuum, chain, sq_cfg, fixed_tone, duration, fs, base + kTertiarySeed);

        spec_sq = swept_spectrum(sq_trace, sig.rbw_hz, sig.vbw_hz, ref, sig.band_lo_hz,
                                 sig.band_hi_hz);
        spec_anti = swept_spectrum(anti_trace, sig.rbw_hz, sig.vbw_hz, ref, sig.band_lo_hz,
                                   sig.band_hi_hz);
        spec_vac = swept_spectrum(vac_trace, sig.rbw_hz, sig.vbw_hz, ref, sig.band_lo_hz,
                                  sig.band_hi_hz);
        spec_snl = swept_spectrum(snl_trace, sig.rbw_hz, sig.vbw_hz, ref, sig.band_lo_hz,
                                  sig.band_hi_hz);
    }

    write_spectrum_csv(spec_sq, sq_csv);
    write_spectrum_csv(spec_anti, anti_csv);
    write_spectrum_csv(spec_vac, vac_csv);
    write_spectrum_csv(spec_snl, snl_csv);
    report.artifacts = {sq_csv, anti_csv, vac_csv, snl_csv};

    std::vector<double> masked = peak_freqs;
    if (beatnote_on) masked.push_back(beatnote_hz);

    const auto peak_sq = find_peak_near(spec_sq, peak_freqs.front(), 5.0 * sig.rbw_hz);
    const auto peak_vac = find_peak_near(spec_vac, peak_freqs.front(), 5.0 * sig.rbw_hz);
    const double floor_sq = floor_median_db(spec_sq, masked, 5.0 * sig.rbw_hz);
    const double floor_vac = floor_median_db(spec_vac, masked, 5.0 * sig.rbw_hz);
    const double snr_gain = (peak_sq.power_db - floor_sq) - (peak_vac.power_db - floor_vac);

    report.entries.push_back(checked_entry("signal_peak_hz", peak_sq.freq_hz, "Hz",
                                           peak_freqs.front(), sig.rbw_hz, sq_csv));
    if (peak_freqs.size() > 1) {
        const auto peak_hi = find_peak_near(spec_sq, peak_freqs.back(), 5.0 * sig.rbw_hz);
        report.entries.push_back(checked_entry("signal_peak_upper_hz", peak_hi.freq_hz, "Hz",
                                               peak_freqs.back(), sig.rbw_hz, sq_csv));
    }
    report.entries.push_back(checked_entry("squeezed_floor_db", floor_sq, "dB",
                                           rep.squeezing_db, rep.band_tolerance_db, sq_csv));
    report.entries.push_back(checked_entry("vacuum_floor_db", floor_vac, "dB", 0.0,
                                           rep.band_tolerance_db, vac_csv));
    report.entries.push_back(checked_entry("snr_gain_db", snr_gain, "dB", rep.snr_gain_db,
                                           rep.snr_gain_tolerance_db, sq_csv));
    if (beatnote_on) {
        const auto bn = find_peak_near(spec_sq, beatnote_hz, 5.0 * sig.rbw_hz);
        report.entries.push_back(
            checked_entry("beatnote_hz", bn.freq_hz, "Hz", beatnote_hz, sig.rbw_hz, sq_csv));
        report.entries.push_back(info_entry("beatnote_db", bn.power_db, "dB", sq_csv));
    }

    if (opts.svg) {
        const auto svg = csv_path(out_dir, "signal.svg");
        write_svg_plot(svg, "Baseband signal spectra", "frequency (Hz)", "power rel. SNL (dB)",
                       {{"antisqueezed floor", "blue", spec_anti.axis, spec_anti.power_db_rel_snl},
                        {"squeezed floor", "red", spec_sq.axis, spec_sq.power_db_rel_snl},
                        {"vacuum floor", "gray", spec_vac.axis, spec_vac.power_db_rel_snl},
                        {"SNL", "black", spec_snl.axis, spec_snl.power_db_rel_snl}});
        report.artifacts.push_back(svg);
    }
    write_report_file(report, out_dir);
    return report;
}

RunReport cmd_fit(double v_sq_db, double v_anti_db, const RunOptions& opts) {
    if (!(v_sq_db < 0.0) || !(v_anti_db > 0.0))
        throw infeasible_error("fit: need a squeezed level below 0 dB and an antisqueezed "
                               "level above 0 dB");
    const auto out_dir = ensure_out_dir(opts);
    const double v_sq = linear_from_db(v_sq_db);
    const double v_anti = linear_from_db(v_anti_db);
    const LossFit fit = fit_loss_and_r(v_sq, v_anti);

    RunReport report;
    report.scenario = "fit";
    const std::string src = "fit(" + std::to_string(v_sq_db) + " dB, " +
                            std::to_string(v_anti_db) + " dB)";
    report.entries.push_back(info_entry("squeezing_parameter_r", fit.r, "", src));
    report.entries.push_back(info_entry("eta_eff", fit.eta_eff, "", src));
    report.entries.push_back(
        info_entry("pure_squeezing_db", db_from_linear(std::exp(-2.0 * fit.r)), "dB", src));
    write_report_file(report, out_dir);
    return report;
}

RunReport cmd_synth(const ScenarioConfig& config, const RunOptions& opts) {
    config.validate();
    const auto out_dir = ensure_out_dir(opts);
    const auto model = config.make_model();
    const auto chain = config.make_chain();
    const BloConfig blo = config.make_blo();

    const double fs = config.synth.sample_rate_hz;
    const double duration = static_cast<double>(config.synth.num_samples) / fs;
    const std::uint64_t seed = opts.seed_override.value_or(config.synth.seed);
    const Trace trace = synthesize(model, chain, blo, std::nullopt, duration, fs, seed);

    RunReport report;
    report.scenario = "synth";
    const auto bin_path = out_dir / "trace.bin";
    write_trace_binary(trace, bin_path);
    report.artifacts.push_back(bin_path.string());

    if (opts.csv_trace) {
        if (trace.size() > (1u << 20))
            throw config_error("synth: CSV export is limited to 2^20 samples; "
                               "use the binary format for long traces");
        const auto csv = out_dir / "trace.csv";
        write_trace_csv(trace, csv);
        report.artifacts.push_back(csv.string());
    }

    double mean = 0.0;
    for (const double v : trace.samples) mean += v;
    mean /= static_cast<double>(trace.size());
    double var = 0.0;
    for (const double v : trace.samples) var += (v - mean) * (v - mean);
    var /= static_cast<double>(trace.size());

    report.entries.push_back(info_entry("num_samples", static_cast<double>(trace.size()), "",
                                        bin_path.string()));
    report.entries.push_back(info_entry("sample_rate_hz", fs, "Hz", bin_path.string()));
    report.entries.push_back(info_entry("seed", static_cast<double>(seed), "", bin_path.string()));
    report.entries.push_back(info_entry("sample_variance", var, "SNL", bin_path.string()));
    write_report_file(report, out_dir);
    return report;
}

} // namespace blosim
