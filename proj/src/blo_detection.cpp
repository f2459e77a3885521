#include "blosim/blo_detection.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "blosim/errors.hpp"
#include "blosim/units.hpp"

namespace blosim {

void BloConfig::validate() const {
    if (!(omega0_hz > 0.0)) throw config_error("blo: omega0 must be > 0");
    if (!(power_upper_w >= 0.0) || !(power_lower_w >= 0.0))
        throw config_error("blo: LO sideband powers must be >= 0");
    if (power_upper_w == 0.0 && power_lower_w == 0.0)
        throw config_error("blo: LO sideband powers must not both be zero");
    if (!(balance_epsilon >= 0.0)) throw config_error("blo: balance_epsilon must be >= 0");
    if (upper_enabled && power_upper_w == 0.0)
        throw config_error("blo: upper sideband enabled with zero power");
    if (lower_enabled && power_lower_w == 0.0)
        throw config_error("blo: lower sideband enabled with zero power");
    if (!upper_enabled && !lower_enabled)
        throw config_error("blo: at least one LO sideband must be enabled");
}

namespace {

void require_equal_powers(const BloConfig& cfg) {
    const double sum = cfg.power_upper_w + cfg.power_lower_w;
    const double imbalance = std::abs(cfg.power_upper_w - cfg.power_lower_w) / sum;
    if (imbalance >= 1e-9) {
        std::ostringstream os;
        os << "blo: dual-sideband detection requires equal LO powers "
           << "(relative imbalance " << imbalance << ")";
        throw config_error(os.str());
    }
}

double variance_at_angle(const QuadVariances& v, double theta_rad) {
    const double c = std::cos(theta_rad);
    const double s = std::sin(theta_rad);
    return c * c * v.x + s * s * v.y;
}

} // namespace

SidebandPairSelection select_pairs(const BloConfig& cfg, double omega_hz) {
    cfg.validate();
    if (!(omega_hz >= 0.0)) throw std::domain_error("select_pairs: omega must be >= 0");
    return {std::abs(cfg.omega0_hz - omega_hz), cfg.omega0_hz + omega_hz};
}

namespace detail {

QuadVariances pair_averaged_ideal(const SqueezingModel& model, const BloConfig& cfg,
                                  double omega_hz) {
    const auto pairs = select_pairs(cfg, omega_hz);
    const auto lo = model.ideal_variances(pairs.pair_low_hz);
    const auto hi = model.ideal_variances(pairs.pair_high_hz);
    return {0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
}

} // namespace detail

double blo_variance(const SqueezingModel& model, const DetectionChain& chain,
                    const BloConfig& cfg, double omega_hz) {
    cfg.validate();
    if (!cfg.dual_sideband())
        throw config_error("blo_variance: both LO sidebands must be enabled");
    require_equal_powers(cfg);
    if (!(omega_hz >= 0.0)) throw std::domain_error("blo_variance: omega must be >= 0");
    if (omega_hz == 0.0)
        throw degenerate_frequency_error(
            "blo_variance: at omega = 0 the two measured sideband pairs coincide and the "
            "independent-pair average does not apply; evaluate a single pair directly via "
            "ideal_variances/detected_variance instead");

    const auto pairs = select_pairs(cfg, omega_hz);
    const double theta = cfg.theta.radians;
    const double v_lo =
        detected_variance(variance_at_angle(model.ideal_variances(pairs.pair_low_hz), theta),
                          chain.without_dark());
    const double v_hi =
        detected_variance(variance_at_angle(model.ideal_variances(pairs.pair_high_hz), theta),
                          chain.without_dark());
    return 0.5 * (v_lo + v_hi) + chain.dark_noise_rel_snl();
}

double heterodyne_variance(const SqueezingModel& model, const DetectionChain& chain,
                           const BloConfig& cfg, double omega_hz) {
    cfg.validate();
    if (!cfg.single_sideband())
        throw config_error(
            "heterodyne_variance: exactly one LO sideband must be enabled");
    if (!(omega_hz >= 0.0)) throw std::domain_error("heterodyne_variance: omega must be >= 0");

    const auto v = detail::pair_averaged_ideal(model, cfg, omega_hz);
    return detected_variance(0.5 * (v.x + v.y), chain);
}

std::vector<double> phase_scan(const SqueezingModel& model, const DetectionChain& chain,
                               const BloConfig& cfg, double omega_hz,
                               std::span<const double> thetas_rad) {
    if (thetas_rad.empty()) throw std::invalid_argument("phase_scan: empty phase list");
    std::vector<double> out;
    out.reserve(thetas_rad.size());
    BloConfig scan_cfg = cfg;
    for (const double theta : thetas_rad) {
        scan_cfg.theta.radians = theta;
        out.push_back(blo_variance(model, chain, scan_cfg, omega_hz));
    }
    return out;
}

std::vector<double> signal_peak_frequencies(const BloConfig& cfg, double f_mod_hz) {
    cfg.validate();
    if (!(f_mod_hz >= 0.0))
        throw std::domain_error("signal_peak_frequencies: f_mod must be >= 0");
    if (f_mod_hz >= cfg.omega0_hz) {
        std::ostringstream os;
        os << "signal_peak_frequencies: baseband offset " << f_mod_hz
           << " Hz is out of band (must be below omega0 = " << cfg.omega0_hz << " Hz)";
        throw config_error(os.str());
    }
    if (f_mod_hz == 0.0) return {cfg.omega0_hz};
    return {cfg.omega0_hz - f_mod_hz, cfg.omega0_hz + f_mod_hz};
}

double beatnote_amplitude(const BloConfig& cfg) {
    cfg.validate();
    const double total = cfg.power_upper_w + cfg.power_lower_w;
    const double p_up = (cfg.upper_enabled ? cfg.power_upper_w : 0.0) / total;
    const double p_lo = (cfg.lower_enabled ? cfg.power_lower_w : 0.0) / total;
    return 2.0 * cfg.balance_epsilon * std::sqrt(p_up * p_lo);
}

double beatnote_power(const BloConfig& cfg) {
    const double a = beatnote_amplitude(cfg);
    return 0.5 * a * a;
}

} // namespace blosim
