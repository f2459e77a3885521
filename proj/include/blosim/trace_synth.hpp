#ifndef BLOSIM_TRACE_SYNTH_HPP
#define BLOSIM_TRACE_SYNTH_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blosim/blo_detection.hpp"
#include "blosim/squeezing_model.hpp"

namespace blosim {

/// Uniformly sampled real difference-photocurrent record in
/// SNL-normalized units: a vacuum-input record has unit variance per
/// sample, i.e. one-sided PSD density 2/sample_rate across the band.
/// Identical (parameters, seed) regenerate the record bit-for-bit.
struct Trace {
    double sample_rate_hz = 0.0;
    std::vector<double> samples;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> annotations;

    std::size_t size() const { return samples.size(); }
    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate_hz;
    }
};

/// Deterministic baseband signal tone injected into the squeezed field.
/// The target SNR is the displayed peak height over the noise floor at
/// the peak, referred to an analyzer resolution bandwidth of
/// ref_bandwidth_hz. amplitude_override bypasses the SNR calculation
/// (used to re-inject the identical tone over a different noise floor).
struct SignalTone {
    double f_mod_hz = 0.0;
    double snr_target_db = 6.0;
    double ref_bandwidth_hz = 30e3;
    std::optional<double> amplitude_override;
};

/// Synthesize a stationary difference-photocurrent record.
///
/// Frequency-domain shaping: a white complex Gaussian half-spectrum is
/// scaled by sqrt of the target PSD (blo_variance for a dual-sideband
/// LO, heterodyne_variance for a single one, both without the dark
/// term), inverse transformed, then deterministic tones (signal peaks,
/// LO beatnote) and white dark noise are added.
Trace synthesize(const SqueezingModel& model, const DetectionChain& chain,
                 const BloConfig& cfg, const std::optional<SignalTone>& tone,
                 double duration_s, double sample_rate_hz, std::uint64_t seed);

/// Piecewise-stationary synthesis with the relative phase advancing
/// linearly at theta_rate: theta is held constant over each block of
/// block_len samples and stepped between blocks.
Trace synthesize_phase_ramp(const SqueezingModel& model, const DetectionChain& chain,
                            const BloConfig& cfg, double theta_rate_rad_s,
                            std::size_t block_len, double duration_s,
                            double sample_rate_hz, std::uint64_t seed);

/// Tone amplitude (sample units) that realizes tone.snr_target_db of
/// displayed SNR over the configured noise floor at the peak frequency.
double tone_amplitude_for_snr(const SqueezingModel& model, const DetectionChain& chain,
                              const BloConfig& cfg, const SignalTone& tone,
                              double sample_rate_hz);

/// Binary trace file: 64-byte little-endian header
/// (magic "BLOTRACE", u32 version, u32 reserved, f64 sample_rate,
/// u64 length, u64 seed, zero padding) followed by length f64 samples.
void write_trace_binary(const Trace& trace, const std::filesystem::path& path);
Trace read_trace_binary(const std::filesystem::path& path);

/// CSV export (time_s,value), intended for small traces.
void write_trace_csv(const Trace& trace, const std::filesystem::path& path);

} // namespace blosim

#endif
