#ifndef BLOSIM_ERRORS_HPP
#define BLOSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace blosim {

/// Invalid or inconsistent configuration (bad keys, bad parameter
/// combinations, out-of-band requests). Maps to CLI exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// The requested analysis frequency makes the two measured sideband
/// pairs coincide, where the independent-pair combination is undefined.
class degenerate_frequency_error : public config_error {
public:
    explicit degenerate_frequency_error(const std::string& what) : config_error(what) {}
};

/// Physically infeasible request (e.g. a variance pair no loss model
/// can produce). Maps to CLI exit code 3.
class infeasible_error : public std::runtime_error {
public:
    explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

/// File I/O failure. Maps to CLI exit code 4.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace blosim

#endif
