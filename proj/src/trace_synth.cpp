#include "blosim/trace_synth.hpp"

#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <sstream>

#include "blosim/errors.hpp"
#include "blosim/fft.hpp"
#include "blosim/rng.hpp"
#include "blosim/units.hpp"

namespace blosim {

namespace {

// Sub-stream layout of a trace seed (fixed; part of the reproducibility
// contract): 0 = shaped spectral noise, 1 = dark noise, 2+b = block b of
// a phase-ramp synthesis.
constexpr std::uint64_t kSpectralStream = 0;
constexpr std::uint64_t kDarkStream = 1;
constexpr std::uint64_t kFirstBlockStream = 2;

std::size_t checked_sample_count(double duration_s, double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0)) throw config_error("synthesize: sample rate must be > 0");
    if (!(duration_s > 0.0)) throw config_error("synthesize: zero-length record requested");
    const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
    if (n < (1u << 14)) {
        std::ostringstream os;
        os << "synthesize: record too short (" << n << " samples, need at least 2^14)";
        throw config_error(os.str());
    }
    if (n % 2 != 0) throw config_error("synthesize: sample count must be even");
    return n;
}

void check_nyquist(double sample_rate_hz, double max_tone_hz) {
    if (max_tone_hz > 0.0 && !(sample_rate_hz > 2.0 * max_tone_hz)) {
        std::ostringstream os;
        os << "synthesize: sample rate " << sample_rate_hz
           << " Hz violates the Nyquist bound for a tone at " << max_tone_hz << " Hz";
        throw config_error(os.str());
    }
}

// Target one-sided PSD (rel. SNL, dark excluded) of the difference
// photocurrent at analysis frequency omega for the given LO mode.
double shaped_psd(const SqueezingModel& model, const DetectionChain& chain,
                  const BloConfig& cfg, double omega_hz) {
    const DetectionChain clean = chain.without_dark();
    if (cfg.dual_sideband()) return blo_variance(model, clean, cfg, omega_hz);
    return heterodyne_variance(model, clean, cfg, omega_hz);
}

// Fill a record of plan.size() samples (even) with shaped Gaussian noise
// whose one-sided PSD in SNL units is psd_of_bin(k), k = 1..n/2 at bin
// spacing fs/n. The half-spectrum coefficient of bin k is
// (z0 + i z1) sqrt(P_k/(2n)), which after the unnormalized inverse
// transform gives per-sample variance mean_k(P_k); a flat P == 1
// reproduces the vacuum record.
template <typename PsdFn>
std::vector<double> shaped_noise(const fft::IrfftPlan& plan, Xoshiro256pp& rng,
                                 PsdFn&& psd_of_bin) {
    const std::size_t n = plan.size();
    const std::size_t half = n / 2;
    std::vector<std::complex<double>> spec(half + 1);
    spec[0] = 0.0;
    for (std::size_t k = 1; k <= half; ++k) {
        const auto g = gaussian_pair(rng);
        const double scale = std::sqrt(psd_of_bin(k) / (2.0 * static_cast<double>(n)));
        if (k == half) {
            spec[k] = g.z0 * scale; // Nyquist bin is real
        } else {
            spec[k] = std::complex<double>(g.z0 * scale, g.z1 * scale);
        }
    }
    std::vector<double> out(n);
    plan.execute(spec.data(), out.data());
    return out;
}

void add_tone(std::vector<double>& samples, double sample_rate_hz, double freq_hz,
              double amplitude) {
    const double w = 2.0 * kPi * freq_hz / sample_rate_hz;
    for (std::size_t i = 0; i < samples.size(); ++i)
        samples[i] += amplitude * std::cos(w * static_cast<double>(i));
}

void add_dark_noise(std::vector<double>& samples, const DetectionChain& chain,
                    std::uint64_t seed) {
    if (chain.dark_noise_rel_snl() <= 0.0) return;
    const double sigma = std::sqrt(chain.dark_noise_rel_snl());
    Xoshiro256pp rng(seed, kDarkStream);
    for (std::size_t i = 0; i + 1 < samples.size(); i += 2) {
        const auto g = gaussian_pair(rng);
        samples[i] += sigma * g.z0;
        samples[i + 1] += sigma * g.z1;
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void annotate_common(Trace& trace, const SqueezingModel& model, const DetectionChain& chain,
                     const BloConfig& cfg) {
    trace.annotations["model"] = model.describe();
    trace.annotations["eta"] = fmt(chain.eta());
    trace.annotations["visibility"] = fmt(chain.visibility());
    trace.annotations["dark_noise_rel_snl"] = fmt(chain.dark_noise_rel_snl());
    trace.annotations["omega0_hz"] = fmt(cfg.omega0_hz);
    trace.annotations["theta_rad"] = fmt(cfg.theta.radians);
    trace.annotations["balance_epsilon"] = fmt(cfg.balance_epsilon);
    trace.annotations["sidebands"] =
        cfg.dual_sideband() ? "dual" : (cfg.upper_enabled ? "upper" : "lower");
    trace.annotations["seed"] = std::to_string(trace.seed);
    trace.annotations["sample_rate_hz"] = fmt(trace.sample_rate_hz);
}

} // namespace

double tone_amplitude_for_snr(const SqueezingModel& model, const DetectionChain& chain,
                              const BloConfig& cfg, const SignalTone& tone,
                              double sample_rate_hz) {
    if (tone.amplitude_override) return *tone.amplitude_override;
    if (!(tone.snr_target_db > 0.0))
        throw config_error("signal tone: snr_target_db must be > 0");
    if (!(tone.ref_bandwidth_hz > 0.0))
        throw config_error("signal tone: ref_bandwidth_hz must be > 0");

    // Displayed peak = tone power + floor power in the reference RBW, so
    // amplitude targets (snr - 1) times the floor-in-RBW.
    const double f_peak = signal_peak_frequencies(cfg, tone.f_mod_hz).front();
    const double floor_rel_snl = cfg.dual_sideband()
                                     ? blo_variance(model, chain, cfg, f_peak)
                                     : heterodyne_variance(model, chain, cfg, f_peak);
    const double floor_density = floor_rel_snl * 2.0 / sample_rate_hz;
    const double snr_lin = linear_from_db(tone.snr_target_db);
    return std::sqrt(2.0 * (snr_lin - 1.0) * floor_density * tone.ref_bandwidth_hz);
}

Trace synthesize(const SqueezingModel& model, const DetectionChain& chain,
                 const BloConfig& cfg, const std::optional<SignalTone>& tone,
                 double duration_s, double sample_rate_hz, std::uint64_t seed) {
    cfg.validate();
    const std::size_t n = checked_sample_count(duration_s, sample_rate_hz);

    const bool beatnote_on = cfg.dual_sideband() && cfg.balance_epsilon > 0.0;
    double max_tone = beatnote_on ? 2.0 * cfg.omega0_hz : 0.0;
    std::vector<double> peak_freqs;
    if (tone) {
        peak_freqs = signal_peak_frequencies(cfg, tone->f_mod_hz);
        max_tone = std::max(max_tone, peak_freqs.back());
    }
    check_nyquist(sample_rate_hz, max_tone);

    // Validate the mode once; the per-bin loop then evaluates the PSD
    // without re-checking configuration.
    shaped_psd(model, chain, cfg, sample_rate_hz / static_cast<double>(n));

    const DetectionChain clean = chain.without_dark();
    const double df = sample_rate_hz / static_cast<double>(n);
    const auto eta = clean.eta_eff();
    Xoshiro256pp rng(seed, kSpectralStream);
    fft::IrfftPlan plan(n);
    std::vector<double> samples;
    if (cfg.dual_sideband()) {
        const double theta = cfg.theta.radians;
        const double c2 = std::cos(theta) * std::cos(theta);
        const double s2 = std::sin(theta) * std::sin(theta);
        samples = shaped_noise(plan, rng, [&](std::size_t k) {
            const auto v =
                detail::pair_averaged_ideal(model, cfg, df * static_cast<double>(k));
            return eta * (c2 * v.x + s2 * v.y) + (1.0 - eta);
        });
    } else {
        samples = shaped_noise(plan, rng, [&](std::size_t k) {
            const auto v =
                detail::pair_averaged_ideal(model, cfg, df * static_cast<double>(k));
            return eta * 0.5 * (v.x + v.y) + (1.0 - eta);
        });
    }

    Trace trace;
    trace.sample_rate_hz = sample_rate_hz;
    trace.seed = seed;
    trace.samples = std::move(samples);

    if (tone) {
        const double amp = tone_amplitude_for_snr(model, chain, cfg, *tone, sample_rate_hz);
        for (const double f : peak_freqs) add_tone(trace.samples, sample_rate_hz, f, amp);
        trace.annotations["tone_f_mod_hz"] = fmt(tone->f_mod_hz);
        trace.annotations["tone_amplitude"] = fmt(amp);
    }
    if (beatnote_on)
        add_tone(trace.samples, sample_rate_hz, 2.0 * cfg.omega0_hz, beatnote_amplitude(cfg));
    add_dark_noise(trace.samples, chain, seed);

    annotate_common(trace, model, chain, cfg);
    trace.annotations["kind"] = "stationary";
    return trace;
}

Trace synthesize_phase_ramp(const SqueezingModel& model, const DetectionChain& chain,
                            const BloConfig& cfg, double theta_rate_rad_s,
                            std::size_t block_len, double duration_s,
                            double sample_rate_hz, std::uint64_t seed) {
    cfg.validate();
    const std::size_t n = checked_sample_count(duration_s, sample_rate_hz);
    if (block_len < 32 || block_len % 2 != 0)
        throw config_error("synthesize_phase_ramp: block_len must be even and >= 32");
    if (block_len * 8 > n)
        throw config_error("synthesize_phase_ramp: block_len must be much shorter than the record");

    const bool beatnote_on = cfg.dual_sideband() && cfg.balance_epsilon > 0.0;
    check_nyquist(sample_rate_hz, beatnote_on ? 2.0 * cfg.omega0_hz : 0.0);

    // Pair-averaged ideal variances on the block bin grid, computed once;
    // per block only the phase weighting changes.
    const double df = sample_rate_hz / static_cast<double>(block_len);
    const std::size_t half = block_len / 2;
    std::vector<QuadVariances> pair_avg(half + 1);
    for (std::size_t k = 1; k <= half; ++k)
        pair_avg[k] = detail::pair_averaged_ideal(model, cfg, df * static_cast<double>(k));

    shaped_psd(model, chain, cfg, df); // mode validation

    const double eta = chain.eta_eff();
    const bool dual = cfg.dual_sideband();
    const std::size_t n_blocks = (n + block_len - 1) / block_len;

    Trace trace;
    trace.sample_rate_hz = sample_rate_hz;
    trace.seed = seed;
    trace.samples.reserve(n);

    fft::IrfftPlan plan(block_len);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const double t_center =
            (static_cast<double>(b) + 0.5) * static_cast<double>(block_len) / sample_rate_hz;
        const double theta = cfg.theta.radians + theta_rate_rad_s * t_center;
        const double c2 = std::cos(theta) * std::cos(theta);
        const double s2 = std::sin(theta) * std::sin(theta);

        Xoshiro256pp rng(seed, kFirstBlockStream + b);
        auto block = shaped_noise(plan, rng, [&](std::size_t k) {
            const auto& v = pair_avg[k];
            const double v_ideal = dual ? (c2 * v.x + s2 * v.y) : 0.5 * (v.x + v.y);
            return eta * v_ideal + (1.0 - eta);
        });

        const std::size_t take = std::min(block_len, n - trace.samples.size());
        trace.samples.insert(trace.samples.end(), block.begin(), block.begin() + take);
    }

    if (beatnote_on)
        add_tone(trace.samples, sample_rate_hz, 2.0 * cfg.omega0_hz, beatnote_amplitude(cfg));
    add_dark_noise(trace.samples, chain, seed);

    annotate_common(trace, model, chain, cfg);
    trace.annotations["kind"] = "phase_ramp";
    trace.annotations["theta_rate_rad_s"] = fmt(theta_rate_rad_s);
    trace.annotations["block_len"] = std::to_string(block_len);
    return trace;
}

// ---------------------------------------------------------------------
// Trace file I/O

namespace {

constexpr char kMagic[8] = {'B', 'L', 'O', 'T', 'R', 'A', 'C', 'E'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderSize = 64;

void put_u32(unsigned char* p, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}
void put_u64(unsigned char* p, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}
std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
}
std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}
std::uint64_t bits_of(double d) {
    std::uint64_t u;
    std::memcpy(&u, &d, 8);
    return u;
}
double double_of(std::uint64_t u) {
    double d;
    std::memcpy(&d, &u, 8);
    return d;
}

} // namespace

void write_trace_binary(const Trace& trace, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open trace file for writing: " + path.string());

    unsigned char header[kHeaderSize] = {};
    std::memcpy(header, kMagic, 8);
    put_u32(header + 8, kVersion);
    put_u64(header + 16, bits_of(trace.sample_rate_hz));
    put_u64(header + 24, static_cast<std::uint64_t>(trace.samples.size()));
    put_u64(header + 32, trace.seed);
    out.write(reinterpret_cast<const char*>(header), kHeaderSize);

    std::vector<unsigned char> buf(trace.samples.size() * 8);
    for (std::size_t i = 0; i < trace.samples.size(); ++i)
        put_u64(buf.data() + 8 * i, bits_of(trace.samples[i]));
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
    if (!out) throw io_error("failed writing trace file: " + path.string());
}

Trace read_trace_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open trace file: " + path.string());

    unsigned char header[kHeaderSize];
    in.read(reinterpret_cast<char*>(header), kHeaderSize);
    if (!in || std::memcmp(header, kMagic, 8) != 0)
        throw io_error("not a trace file (bad magic): " + path.string());
    if (get_u32(header + 8) != kVersion)
        throw io_error("unsupported trace file version in " + path.string());

    Trace trace;
    trace.sample_rate_hz = double_of(get_u64(header + 16));
    const std::uint64_t length = get_u64(header + 24);
    trace.seed = get_u64(header + 32);

    std::vector<unsigned char> buf(length * 8);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!in) throw io_error("truncated trace file: " + path.string());
    trace.samples.resize(length);
    for (std::uint64_t i = 0; i < length; ++i)
        trace.samples[i] = double_of(get_u64(buf.data() + 8 * i));
    return trace;
}

void write_trace_csv(const Trace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open trace CSV for writing: " + path.string());
    out << "time_s,value\n";
    char line[64];
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g\n",
                      static_cast<double>(i) / trace.sample_rate_hz, trace.samples[i]);
        out << line;
    }
    if (!out) throw io_error("failed writing trace CSV: " + path.string());
}

} // namespace blosim
