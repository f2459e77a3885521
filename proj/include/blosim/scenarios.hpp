#ifndef BLOSIM_SCENARIOS_HPP
#define BLOSIM_SCENARIOS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "blosim/scenario_config.hpp"

namespace blosim {

struct RunOptions {
    std::filesystem::path out_dir = "out";
    std::optional<std::uint64_t> seed_override;
    bool analytic = false;
    bool svg = false;
    bool csv_trace = false; // synth command: also emit a CSV copy
};

/// One headline number of a scenario run. Checked entries carry the
/// expected value and tolerance they were compared against (both come
/// from the configuration, not from code).
struct ReportEntry {
    std::string name;
    double value = 0.0;
    std::string unit;
    bool checked = false;
    bool pass = true;
    double expected = 0.0;
    double tolerance = 0.0;
    std::string source; // artifact the number was computed from
};

struct RunReport {
    std::string scenario;
    std::vector<ReportEntry> entries;
    std::vector<std::string> artifacts;

    bool all_pass() const;
    std::string to_text() const;
};

/// Swept noise-power spectra of the squeezed and antisqueezed
/// quadratures over the analysis band, plus the SNL reference.
RunReport cmd_spectrum(const ScenarioConfig& config, const RunOptions& opts);

/// Zero-span traces at the configured center frequency: dual-tone LO
/// with a linear phase ramp, and the two single-tone (heterodyne) modes.
RunReport cmd_zero_span(const ScenarioConfig& config, const RunOptions& opts);

/// Baseband-signal scenario: signal tone plus LO beatnote over squeezed,
/// antisqueezed and vacuum noise floors.
RunReport cmd_signal(const ScenarioConfig& config, const RunOptions& opts);

/// Invert a measured squeezed/antisqueezed pair (dB) into the squeezing
/// parameter and effective efficiency.
RunReport cmd_fit(double v_sq_db, double v_anti_db, const RunOptions& opts);

/// Export a raw synthesized trace (binary, optionally CSV).
RunReport cmd_synth(const ScenarioConfig& config, const RunOptions& opts);

} // namespace blosim

#endif
