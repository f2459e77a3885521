#include "blosim/spec_analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "blosim/errors.hpp"
#include "blosim/fft.hpp"
#include "blosim/units.hpp"

namespace blosim {

namespace {

std::size_t next_pow2(std::size_t v) {
    std::size_t p = 1;
    while (p < v) p <<= 1;
    return p;
}

// Gaussian analysis window with equivalent noise bandwidth matched to
// the requested RBW: sigma_n = fs / (2 sqrt(pi) rbw), truncated at
// about +/-4 sigma. The realized ENBW is recomputed from the truncated
// window and used for all power scalings.
struct AnalysisWindow {
    std::vector<double> w;
    double sum = 0.0;
    double sum_sq = 0.0;
    double enbw_hz = 0.0;
};

AnalysisWindow make_window(double sample_rate_hz, double rbw_hz, std::size_t max_len) {
    const double sigma_n = sample_rate_hz / (2.0 * std::sqrt(kPi) * rbw_hz);
    std::size_t len = next_pow2(static_cast<std::size_t>(std::ceil(8.0 * sigma_n)));
    len = std::clamp<std::size_t>(len, 64, max_len);

    AnalysisWindow win;
    win.w.resize(len);
    const double center = 0.5 * static_cast<double>(len - 1);
    for (std::size_t i = 0; i < len; ++i) {
        const double d = (static_cast<double>(i) - center) / sigma_n;
        win.w[i] = std::exp(-0.5 * d * d);
    }
    win.sum = std::accumulate(win.w.begin(), win.w.end(), 0.0);
    for (const double v : win.w) win.sum_sq += v * v;
    win.enbw_hz = sample_rate_hz * win.sum_sq / (win.sum * win.sum);
    return win;
}

void check_trace(const Trace& trace) {
    if (trace.samples.empty()) throw config_error("analyzer: empty trace");
    if (!(trace.sample_rate_hz > 0.0))
        throw config_error("analyzer: trace sample rate must be > 0");
}

void check_bandwidths(const Trace& trace, double rbw_hz, double vbw_hz) {
    if (!(rbw_hz > 0.0) || !(vbw_hz > 0.0))
        throw config_error("analyzer: rbw and vbw must be > 0");
    if (vbw_hz > rbw_hz) throw config_error("analyzer: vbw must not exceed rbw");
    const double resolution = trace.sample_rate_hz / static_cast<double>(trace.samples.size());
    if (rbw_hz < 2.0 * resolution) {
        std::ostringstream os;
        os << "analyzer: rbw " << rbw_hz << " Hz is finer than twice the trace frequency "
           << "resolution (" << resolution << " Hz)";
        throw config_error(os.str());
    }
}

// Centered moving average on linear power, window shrinking at the
// edges so the mean of stationary noise is preserved.
std::vector<double> moving_average(const std::vector<double>& x, std::size_t window) {
    if (window <= 1 || x.size() <= 1) return x;
    window = std::min(window, x.size());
    const std::size_t half = window / 2;
    std::vector<double> prefix(x.size() + 1, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) prefix[i + 1] = prefix[i] + x[i];
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(x.size(), i + half + 1);
        out[i] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
    }
    return out;
}

void check_reference(const SnlReference& ref) {
    if (!(ref.psd_level > 0.0)) throw config_error("analyzer: SNL reference level must be > 0");
}

} // namespace

SnlReference SnlReference::analytic(double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0))
        throw config_error("SnlReference::analytic: sample rate must be > 0");
    SnlReference ref;
    ref.psd_level = 2.0 / sample_rate_hz;
    ref.derivation = "analytic";
    return ref;
}

SnlReference SnlReference::from_vacuum_trace(const Trace& trace, double rbw_hz) {
    const WelchPsd psd = welch_psd_density(trace, rbw_hz);
    double level = 0.0;
    std::size_t count = 0;
    // Interior bins only; DC and Nyquist carry different statistics.
    for (std::size_t i = 1; i + 1 < psd.density.size(); ++i) {
        level += psd.density[i];
        ++count;
    }
    if (count == 0) throw config_error("SnlReference: vacuum trace too short");
    SnlReference ref;
    ref.psd_level = level / static_cast<double>(count);
    ref.derivation = "vacuum_trace(seed=" + std::to_string(trace.seed) + ")";
    check_reference(ref);
    return ref;
}

WelchPsd welch_psd_density(const Trace& trace, double rbw_hz) {
    check_trace(trace);
    const std::size_t n = trace.samples.size();
    const double fs = trace.sample_rate_hz;
    if (!(rbw_hz > 0.0)) throw config_error("welch_psd_density: rbw must be > 0");
    if (rbw_hz < 2.0 * fs / static_cast<double>(n))
        throw config_error("welch_psd_density: rbw finer than the trace resolution allows");

    const auto win = make_window(fs, rbw_hz, next_pow2(n) / 4);
    const std::size_t seg = win.w.size();
    const std::size_t hop = seg / 2;
    const std::size_t half = seg / 2;

    fft::RfftPlan plan(seg);
    std::vector<double> buf(seg);
    std::vector<std::complex<double>> spec(half + 1);
    std::vector<double> acc(half + 1, 0.0);

    std::size_t segments = 0;
    for (std::size_t start = 0; start + seg <= n; start += hop) {
        for (std::size_t i = 0; i < seg; ++i) buf[i] = trace.samples[start + i] * win.w[i];
        plan.execute(buf.data(), spec.data());
        for (std::size_t k = 0; k <= half; ++k) acc[k] += std::norm(spec[k]);
        ++segments;
    }
    if (segments == 0) throw config_error("welch_psd_density: trace shorter than one segment");

    WelchPsd out;
    out.enbw_hz = win.enbw_hz;
    out.segment_len = seg;
    out.n_segments = segments;
    out.freq_hz.resize(half + 1);
    out.density.resize(half + 1);
    const double scale = 1.0 / (static_cast<double>(segments) * fs * win.sum_sq);
    for (std::size_t k = 0; k <= half; ++k) {
        out.freq_hz[k] = static_cast<double>(k) * fs / static_cast<double>(seg);
        const double one_sided = (k == 0 || k == half) ? 1.0 : 2.0;
        out.density[k] = one_sided * acc[k] * scale;
    }
    return out;
}

WelchPsd periodogram_density(const Trace& trace) {
    check_trace(trace);
    const std::size_t n = trace.samples.size();
    const double fs = trace.sample_rate_hz;
    const auto spec = fft::rfft(trace.samples);

    WelchPsd out;
    out.enbw_hz = fs / static_cast<double>(n);
    out.segment_len = n;
    out.n_segments = 1;
    out.freq_hz.resize(spec.size());
    out.density.resize(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
        out.freq_hz[k] = static_cast<double>(k) * fs / static_cast<double>(n);
        const bool edge = (k == 0) || (n % 2 == 0 && k == n / 2);
        const double one_sided = edge ? 1.0 : 2.0;
        out.density[k] = one_sided * std::norm(spec[k]) / (fs * static_cast<double>(n));
    }
    return out;
}

Spectrum swept_spectrum(const Trace& trace, double rbw_hz, double vbw_hz,
                        const SnlReference& ref, double band_lo_hz, double band_hi_hz) {
    check_trace(trace);
    check_bandwidths(trace, rbw_hz, vbw_hz);
    check_reference(ref);
    const double nyquist = trace.sample_rate_hz / 2.0;
    if (!(band_lo_hz >= 0.0) || !(band_hi_hz > band_lo_hz) || band_hi_hz > nyquist)
        throw config_error("swept_spectrum: band must lie within (0, Nyquist]");

    const WelchPsd psd = welch_psd_density(trace, rbw_hz);
    std::vector<double> freqs;
    std::vector<double> ratio;
    for (std::size_t k = 1; k < psd.freq_hz.size(); ++k) {
        if (psd.freq_hz[k] < band_lo_hz || psd.freq_hz[k] > band_hi_hz) continue;
        freqs.push_back(psd.freq_hz[k]);
        ratio.push_back(psd.density[k] / ref.psd_level);
    }
    if (freqs.empty()) throw config_error("swept_spectrum: no analysis bins inside the band");

    // The record represents one sweep across the displayed bins, so the
    // VBW averaging time 1/(2 vbw) covers duration/nbins per bin.
    const double time_per_bin = trace.duration_s() / static_cast<double>(ratio.size());
    const auto vbw_bins = static_cast<std::size_t>(
        std::llround(1.0 / (2.0 * vbw_hz * time_per_bin)));
    ratio = moving_average(ratio, std::max<std::size_t>(vbw_bins, 1));

    Spectrum out;
    out.axis = std::move(freqs);
    out.power_db_rel_snl.reserve(ratio.size());
    for (const double r : ratio) out.power_db_rel_snl.push_back(db_from_linear(r));
    out.rbw_hz = rbw_hz;
    out.vbw_hz = vbw_hz;
    out.mode = SpectrumMode::swept;
    out.reference_desc = ref.derivation;
    return out;
}

Spectrum zero_span(const Trace& trace, double center_hz, double rbw_hz, double vbw_hz,
                   const SnlReference& ref) {
    check_trace(trace);
    check_bandwidths(trace, rbw_hz, vbw_hz);
    check_reference(ref);
    const double nyquist = trace.sample_rate_hz / 2.0;
    if (!(center_hz - rbw_hz / 2.0 > 0.0) || !(center_hz + rbw_hz / 2.0 < nyquist))
        throw config_error("zero_span: center +/- rbw/2 must lie within (0, Nyquist)");

    const double fs = trace.sample_rate_hz;
    const std::size_t n = trace.samples.size();
    const auto win = make_window(fs, rbw_hz, next_pow2(n) / 8);
    const std::size_t seg = win.w.size();
    const std::size_t hop = std::max<std::size_t>(1, seg / 8);

    // Demodulating FIR taps: window times the complex carrier.
    std::vector<std::complex<double>> taps(seg);
    for (std::size_t i = 0; i < seg; ++i) {
        const double phase = -2.0 * kPi * center_hz * static_cast<double>(i) / fs;
        taps[i] = win.w[i] * std::complex<double>(std::cos(phase), std::sin(phase));
    }

    std::vector<double> times;
    std::vector<double> power;
    const double display_scale = 2.0 / (win.sum * win.sum) / (ref.psd_level * win.enbw_hz);
    for (std::size_t start = 0; start + seg <= n; start += hop) {
        std::complex<double> z = 0.0;
        for (std::size_t i = 0; i < seg; ++i) z += taps[i] * trace.samples[start + i];
        times.push_back((static_cast<double>(start) + 0.5 * static_cast<double>(seg - 1)) / fs);
        power.push_back(std::norm(z) * display_scale);
    }
    if (power.empty()) throw config_error("zero_span: trace shorter than the analysis filter");

    const double dt = static_cast<double>(hop) / fs;
    const auto vbw_pts =
        static_cast<std::size_t>(std::llround(1.0 / (2.0 * vbw_hz * dt)));
    power = moving_average(power, std::max<std::size_t>(vbw_pts, 1));

    Spectrum out;
    out.axis = std::move(times);
    out.power_db_rel_snl.reserve(power.size());
    for (const double p : power) out.power_db_rel_snl.push_back(db_from_linear(p));
    out.rbw_hz = rbw_hz;
    out.vbw_hz = vbw_hz;
    out.mode = SpectrumMode::zero_span;
    out.center_hz = center_hz;
    out.reference_desc = ref.derivation;
    return out;
}

std::optional<double> dark_noise_floor_db(const SnlReference& ref, const DetectionChain& chain) {
    check_reference(ref);
    if (chain.dark_noise_rel_snl() == 0.0) return std::nullopt;
    return db_from_linear(chain.dark_noise_rel_snl());
}

void write_spectrum_csv(const Spectrum& spectrum, const std::filesystem::path& path) {
    if (spectrum.axis.size() != spectrum.power_db_rel_snl.size())
        throw config_error("write_spectrum_csv: axis/power length mismatch");

    std::ofstream out(path);
    if (!out) throw io_error("cannot open spectrum CSV for writing: " + path.string());

    char line[128];
    out << "# mode=" << (spectrum.mode == SpectrumMode::swept ? "swept" : "zero_span") << "\n";
    std::snprintf(line, sizeof(line), "# rbw_hz=%.12g\n", spectrum.rbw_hz);
    out << line;
    std::snprintf(line, sizeof(line), "# vbw_hz=%.12g\n", spectrum.vbw_hz);
    out << line;
    if (spectrum.mode == SpectrumMode::zero_span) {
        std::snprintf(line, sizeof(line), "# center_hz=%.12g\n", spectrum.center_hz);
        out << line;
    }
    out << "# reference=" << spectrum.reference_desc << "\n";
    out << (spectrum.mode == SpectrumMode::swept ? "freq_hz" : "time_s")
        << ",power_db_rel_snl\n";
    for (std::size_t i = 0; i < spectrum.axis.size(); ++i) {
        std::snprintf(line, sizeof(line), "%.12g,%.12g\n", spectrum.axis[i],
                      spectrum.power_db_rel_snl[i]);
        out << line;
    }
    if (!out) throw io_error("failed writing spectrum CSV: " + path.string());
}

} // namespace blosim
