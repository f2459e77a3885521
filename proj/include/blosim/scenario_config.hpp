#ifndef BLOSIM_SCENARIO_CONFIG_HPP
#define BLOSIM_SCENARIO_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include "blosim/blo_detection.hpp"
#include "blosim/squeezing_model.hpp"

namespace blosim {

/// Flat key = value configuration with [sections]; unknown sections or
/// keys are rejected. The built-in defaults describe the stock
/// apparatus: 5 MHz LO offset, 98% visibility, the chain fitted to the
/// measured 0.39 / 10.2 variance pair, and the analyzer settings used
/// by the reference measurements.
struct ScenarioConfig {
    struct Model {
        std::string variant = "flat"; // flat | lorentzian_opo
        double r = 1.3567499029348873;
        double gamma_hz = 35e6;
    } model;

    struct Chain {
        double eta = 0.6802559469060961;
        double visibility = 0.98;
        double dark_noise_rel_snl = 0.0; // additive dark term in the model
    } chain;

    struct Blo {
        double omega0_hz = 5e6;
        double power_upper_w = 2e-3;
        double power_lower_w = 2e-3;
        double theta_rad = 0.0;
        double balance_epsilon = 0.0;
        std::string sidebands = "dual"; // dual | upper | lower
    } blo;

    struct Synth {
        double sample_rate_hz = 50e6;
        std::uint64_t num_samples = 1u << 22;
        std::uint64_t seed = 20240101;
        std::uint64_t block_len = 1024;
    } synth;

    struct SpectrumScenario {
        double rbw_hz = 100e3;
        double vbw_hz = 300.0;
        double band_lo_hz = 1.5e6;
        double band_hi_hz = 8.5e6;
    } spectrum;

    struct ZeroSpanScenario {
        double center_hz = 5e6;
        double rbw_hz = 100e3;
        double vbw_hz = 100.0;
        double sample_rate_hz = 12.5e6;
        double theta_ramp_turns = 1.0;
    } zero_span;

    struct SignalScenario {
        double f_mod_hz = 0.0;
        double snr_target_db = 30.0;
        double ref_bandwidth_hz = 30e3;
        double rbw_hz = 30e3;
        double vbw_hz = 1e3;
        double band_lo_hz = 0.0;
        double band_hi_hz = 12e6;
        double balance_epsilon = 0.3;
    } signal;

    struct Analyzer {
        std::string snl_reference = "vacuum_trace"; // vacuum_trace | analytic
        double dark_floor_db = -14.0;               // reported dark-noise level
        bool has_dark_floor = true;
    } analyzer;

    struct Report {
        double squeezing_db = -4.09;
        double antisqueezing_db = 10.09;
        double heterodyne_db = 7.24;
        double band_tolerance_db = 0.3;
        double zero_span_min_db = -4.1;
        double zero_span_max_db = 10.1;
        double zero_span_tolerance_db = 0.4;
        double snr_gain_db = 4.09;
        double snr_gain_tolerance_db = 0.4;
        double flatness_db = 0.2;
    } report;

    /// Build validated domain objects from the raw fields.
    SqueezingModel make_model() const;
    DetectionChain make_chain() const;
    BloConfig make_blo() const;

    /// Throws config_error if any component invariant fails.
    void validate() const;
};

ScenarioConfig default_config();
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

} // namespace blosim

#endif
