#ifndef BLOSIM_SPEC_ANALYZER_HPP
#define BLOSIM_SPEC_ANALYZER_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "blosim/squeezing_model.hpp"
#include "blosim/trace_synth.hpp"

namespace blosim {

enum class SpectrumMode { swept, zero_span };

/// Frequency-binned (swept) or time-indexed (zero-span) noise power
/// relative to the shot-noise limit, with the analyzer settings that
/// produced it. `axis` is frequency in Hz for swept mode and time in
/// seconds for zero-span.
struct Spectrum {
    std::vector<double> axis;
    std::vector<double> power_db_rel_snl;
    double rbw_hz = 0.0;
    double vbw_hz = 0.0;
    SpectrumMode mode = SpectrumMode::swept;
    double center_hz = 0.0; // zero-span only
    std::string reference_desc;
};

/// Shot-noise calibration level: the one-sided PSD density (trace
/// units^2/Hz) of a vacuum-input record through the same chain.
struct SnlReference {
    double psd_level = 0.0;
    std::string derivation;

    /// Closed-form level for unit-variance vacuum records: 2/sample_rate.
    static SnlReference analytic(double sample_rate_hz);
    /// Calibration from a dedicated vacuum-input run (band-averaged
    /// Welch density), mirroring an experimental SNL trace.
    static SnlReference from_vacuum_trace(const Trace& trace, double rbw_hz);
};

/// Welch estimate of the one-sided PSD density using a Gaussian window
/// whose equivalent noise bandwidth matches the requested RBW.
struct WelchPsd {
    std::vector<double> freq_hz;
    std::vector<double> density;
    double enbw_hz = 0.0;
    std::size_t segment_len = 0;
    std::size_t n_segments = 0;
};

WelchPsd welch_psd_density(const Trace& trace, double rbw_hz);

/// Full-record rectangular-window periodogram density. Satisfies the
/// discrete Parseval identity exactly: sum(density)*df equals the
/// mean-removed time-domain variance.
WelchPsd periodogram_density(const Trace& trace);

/// Swept noise-power spectrum over [band_lo, band_hi]: RBW-matched Welch
/// PSD, video-bandwidth smoothing as a linear-power moving average (the
/// record duration plays the role of the sweep time), normalized by the
/// SNL reference and converted to dB.
Spectrum swept_spectrum(const Trace& trace, double rbw_hz, double vbw_hz,
                        const SnlReference& ref, double band_lo_hz, double band_hi_hz);

/// Zero-span measurement: complex demodulation at `center_hz` through the
/// RBW-matched Gaussian filter, envelope power detection, VBW moving
/// average over time, SNL normalization. Axis is time.
Spectrum zero_span(const Trace& trace, double center_hz, double rbw_hz, double vbw_hz,
                   const SnlReference& ref);

/// Dark-noise level in dB relative to SNL; empty when the chain has no
/// dark noise (never a non-finite float).
std::optional<double> dark_noise_floor_db(const SnlReference& ref, const DetectionChain& chain);

/// CSV export: '#' comment block of settings, then
/// freq_hz,power_db_rel_snl rows (time_s,... for zero-span). Byte-exact
/// for identical inputs.
void write_spectrum_csv(const Spectrum& spectrum, const std::filesystem::path& path);

} // namespace blosim

#endif
