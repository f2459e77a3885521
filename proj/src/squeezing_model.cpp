#include "blosim/squeezing_model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "blosim/errors.hpp"
#include "blosim/units.hpp"

namespace blosim {

namespace {

// Solve (1-x)^2/(1+x)^2 = e^{-2 r0} for the pump parameter x on [0, 1)
// by bisection to 1e-12. (Closed form exists; bisection keeps the
// defining equation in one place.)
double solve_pump_x(double r0) {
    if (r0 == 0.0) return 0.0;
    const double target = std::exp(-2.0 * r0);
    double lo = 0.0, hi = 1.0;
    // V_y(0) is monotonically decreasing in x.
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double vy0 = (1.0 - mid) * (1.0 - mid) / ((1.0 + mid) * (1.0 + mid));
        (vy0 > target ? lo : hi) = mid;
        if (hi - lo < 1e-12) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace

SqueezingModel SqueezingModel::flat(double r) {
    if (!(r >= 0.0)) throw std::domain_error("SqueezingModel::flat: r must be >= 0");
    SqueezingModel m;
    m.flat_ = true;
    m.r_ = r;
    return m;
}

SqueezingModel SqueezingModel::lorentzian_opo(double r0, double gamma_hz) {
    if (!(r0 >= 0.0)) throw std::domain_error("SqueezingModel::lorentzian_opo: r0 must be >= 0");
    if (!(gamma_hz > 0.0))
        throw std::domain_error("SqueezingModel::lorentzian_opo: gamma must be > 0");
    SqueezingModel m;
    m.flat_ = false;
    m.r_ = r0;
    m.gamma_hz_ = gamma_hz;
    m.pump_x_ = solve_pump_x(r0);
    return m;
}

QuadVariances SqueezingModel::ideal_variances(double nu_hz) const {
    if (!(nu_hz >= 0.0))
        throw std::domain_error("ideal_variances: sideband frequency must be >= 0");
    if (flat_) {
        return {std::exp(2.0 * r_), std::exp(-2.0 * r_)};
    }
    const double x = pump_x_;
    const double d2 = (nu_hz / gamma_hz_) * (nu_hz / gamma_hz_);
    const double vx = 1.0 + 4.0 * x / ((1.0 - x) * (1.0 - x) + d2);
    const double vy = 1.0 - 4.0 * x / ((1.0 + x) * (1.0 + x) + d2);
    return {vx, vy};
}

std::string SqueezingModel::describe() const {
    std::ostringstream os;
    if (flat_) {
        os << "flat(r=" << r_ << ")";
    } else {
        os << "lorentzian_opo(r0=" << r_ << ", gamma_hz=" << gamma_hz_ << ")";
    }
    return os.str();
}

DetectionChain::DetectionChain(double eta, double visibility, double dark_noise_rel_snl)
    : eta_(eta), visibility_(visibility), dark_(dark_noise_rel_snl) {
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::domain_error("DetectionChain: eta must be in (0, 1]");
    if (!(visibility > 0.0 && visibility <= 1.0))
        throw std::domain_error("DetectionChain: visibility must be in (0, 1]");
    if (!(dark_noise_rel_snl >= 0.0) || !std::isfinite(dark_noise_rel_snl))
        throw std::domain_error("DetectionChain: dark noise must be finite and >= 0");
}

QuadratureAngle QuadratureAngle::phase() { return {kPi / 2.0}; }

double detected_variance(double v_ideal, const DetectionChain& chain) {
    if (!(v_ideal > 0.0)) throw std::domain_error("detected_variance: variance must be > 0");
    const double eta = chain.eta_eff();
    return eta * v_ideal + (1.0 - eta) + chain.dark_noise_rel_snl();
}

LossFit fit_loss_and_r(double v_sq_meas, double v_anti_meas) {
    if (!(v_sq_meas > 0.0 && v_sq_meas < 1.0 && v_anti_meas > 1.0)) {
        std::ostringstream os;
        os << "fit_loss_and_r: need 0 < v_sq < 1 < v_anti, got (" << v_sq_meas << ", "
           << v_anti_meas << ")";
        throw infeasible_error(os.str());
    }

    const double excess = v_anti_meas - 1.0;  // eta_eff (e^{2r} - 1)
    const double deficit = 1.0 - v_sq_meas;   // eta_eff (1 - e^{-2r})
    const double product = v_sq_meas * v_anti_meas;

    // The loss map always produces excess > deficit (equivalently
    // v_sq * v_anti > 1). A pair on the wrong side of that boundary by
    // more than rounding cannot come from this model.
    constexpr double boundary_tol = 1e-6;
    if (product < 1.0 - boundary_tol) {
        std::ostringstream os;
        os << "fit_loss_and_r: pair (" << v_sq_meas << ", " << v_anti_meas
           << ") has v_sq*v_anti = " << product
           << " < 1; no squeezing parameter and efficiency reproduce it";
        throw infeasible_error(os.str());
    }
    if (product < 1.0) {
        // Within rounding of the pure-state boundary: eta_eff = 1 and the
        // geometric-mean squeezing parameter, continuous with the exact
        // solution at product == 1.
        return {0.25 * std::log(v_anti_meas / v_sq_meas), 1.0};
    }

    const double a = excess / deficit; // e^{2r}
    return {0.5 * std::log(a), excess / (a - 1.0)};
}

} // namespace blosim
