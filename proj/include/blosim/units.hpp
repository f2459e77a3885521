#ifndef BLOSIM_UNITS_HPP
#define BLOSIM_UNITS_HPP

#include <cmath>
#include <stdexcept>

namespace blosim {

inline double db_from_linear(double power_ratio) {
    if (!(power_ratio > 0.0))
        throw std::domain_error("db_from_linear: power ratio must be > 0");
    return 10.0 * std::log10(power_ratio);
}

inline double linear_from_db(double db) {
    return std::pow(10.0, db / 10.0);
}

inline constexpr double kPi = 3.14159265358979323846;

} // namespace blosim

#endif
