#ifndef BLOSIM_BLO_DETECTION_HPP
#define BLOSIM_BLO_DETECTION_HPP

#include <span>
#include <vector>

#include "blosim/squeezing_model.hpp"

namespace blosim {

/// Bichromatic local oscillator configuration: two strong coherent tones
/// at +/- omega0 around the signal carrier, a relative phase theta, and a
/// residual common-mode leakage that sets the 2*omega0 beatnote.
struct BloConfig {
    double omega0_hz = 5e6;
    double power_upper_w = 2e-3;
    double power_lower_w = 2e-3;
    QuadratureAngle theta;
    double balance_epsilon = 0.0;
    bool upper_enabled = true;
    bool lower_enabled = true;

    bool dual_sideband() const { return upper_enabled && lower_enabled; }
    bool single_sideband() const { return upper_enabled != lower_enabled; }

    /// Basic invariants; ops add their own mode-specific checks.
    void validate() const;
};

/// The two sideband pairs measured at analysis frequency omega:
/// +/- |omega0 - omega| and +/- (omega0 + omega).
struct SidebandPairSelection {
    double pair_low_hz;
    double pair_high_hz;
};

SidebandPairSelection select_pairs(const BloConfig& cfg, double omega_hz);

/// Detected noise power of the difference photocurrent at analysis
/// frequency omega, relative to the shot-noise limit, for the dual-tone
/// LO at relative phase cfg.theta. Equal-weight average over the two
/// measured sideband pairs, which carry zero cross-covariance for
/// omega > 0; omega == 0 (coincident pairs) is rejected.
double blo_variance(const SqueezingModel& model, const DetectionChain& chain,
                    const BloConfig& cfg, double omega_hz);

/// Same with a single LO tone: phase-insensitive, equal to the mean of
/// both quadrature variances averaged over the measured sideband pair.
double heterodyne_variance(const SqueezingModel& model, const DetectionChain& chain,
                           const BloConfig& cfg, double omega_hz);

/// blo_variance evaluated pointwise over a list of relative phases.
std::vector<double> phase_scan(const SqueezingModel& model, const DetectionChain& chain,
                               const BloConfig& cfg, double omega_hz,
                               std::span<const double> thetas_rad);

/// Analysis frequencies at which a baseband signal at offset f_mod from
/// the carrier appears: {omega0 - f_mod, omega0 + f_mod}, collapsing to
/// {omega0} for f_mod == 0. Requires 0 <= f_mod < omega0.
std::vector<double> signal_peak_frequencies(const BloConfig& cfg, double f_mod_hz);

/// Power (relative to SNL, concentrated in a deterministic tone at
/// 2*omega0) of the LO beatnote leaking through imperfect photocurrent
/// subtraction: 2 * epsilon^2 * p_up * p_lo with p the LO power fractions.
double beatnote_power(const BloConfig& cfg);

/// Time-domain amplitude of that tone in SNL-normalized current units.
double beatnote_amplitude(const BloConfig& cfg);

namespace detail {
/// Pair-averaged ideal variances at analysis frequency omega; shared by
/// the variance ops and the trace synthesizer's fast path.
QuadVariances pair_averaged_ideal(const SqueezingModel& model, const BloConfig& cfg,
                                  double omega_hz);
} // namespace detail

} // namespace blosim

#endif
