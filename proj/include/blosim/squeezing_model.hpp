#ifndef BLOSIM_SQUEEZING_MODEL_HPP
#define BLOSIM_SQUEEZING_MODEL_HPP

#include <string>

namespace blosim {

/// Ideal (pre-loss) quadrature variances of the signal field at one
/// sideband frequency, in shot-noise units. x is the antisqueezed
/// amplitude quadrature, y the squeezed phase quadrature.
struct QuadVariances {
    double x;
    double y;
};

/// Sideband-resolved variance spectrum of a broadband squeezed vacuum.
///
/// Two variants:
///  - flat: frequency-independent (e^{2r}, e^{-2r});
///  - lorentzian_opo: below-threshold OPO output,
///      V_-/+(nu) = 1 -/+ 4x / ((1 +/- x)^2 + (nu/gamma)^2),
///    with the pump parameter x on (0,1) chosen so that V_y(0) = e^{-2 r0}.
class SqueezingModel {
public:
    static SqueezingModel flat(double r);
    static SqueezingModel lorentzian_opo(double r0, double gamma_hz);

    /// Ideal variances at sideband frequency nu >= 0 (Hz).
    QuadVariances ideal_variances(double nu_hz) const;

    bool is_flat() const { return flat_; }
    double squeezing_parameter() const { return r_; }
    double gamma_hz() const { return gamma_hz_; }
    double pump_x() const { return pump_x_; }
    std::string describe() const;

private:
    SqueezingModel() = default;
    bool flat_ = true;
    double r_ = 0.0;
    double gamma_hz_ = 0.0;
    double pump_x_ = 0.0;
};

/// Efficiency budget of the measurement chain. Losses act as vacuum
/// admixture; mode mismatch enters through the interference visibility
/// squared; dark noise is an additive white term in shot-noise units.
class DetectionChain {
public:
    DetectionChain() = default;
    DetectionChain(double eta, double visibility, double dark_noise_rel_snl);

    double eta() const { return eta_; }
    double visibility() const { return visibility_; }
    double dark_noise_rel_snl() const { return dark_; }
    double eta_eff() const { return eta_ * visibility_ * visibility_; }

    DetectionChain without_dark() const { return DetectionChain(eta_, visibility_, 0.0); }

private:
    double eta_ = 1.0;
    double visibility_ = 1.0;
    double dark_ = 0.0;
};

/// Relative phase between local oscillator and signal. 0 selects the
/// amplitude quadrature, pi/2 the phase quadrature; interpreted mod 2*pi.
struct QuadratureAngle {
    double radians = 0.0;

    static QuadratureAngle amplitude() { return {0.0}; }
    static QuadratureAngle phase();
};

/// Loss map: V_detected = eta_eff * V_ideal + (1 - eta_eff) + dark.
double detected_variance(double v_ideal, const DetectionChain& chain);

struct LossFit {
    double r;
    double eta_eff;
};

/// Invert a measured squeezed/antisqueezed variance pair (shot-noise
/// units, dark-free) into the flat-model squeezing parameter and the
/// effective efficiency that reproduce it exactly:
///   eta_eff (e^{2r} - 1) = v_anti - 1,   eta_eff (1 - e^{-2r}) = 1 - v_sq.
/// Pairs with v_sq * v_anti < 1 have no solution; pairs within rounding
/// of that boundary resolve to the pure-state limit eta_eff = 1.
LossFit fit_loss_and_r(double v_sq_meas, double v_anti_meas);

} // namespace blosim

#endif
