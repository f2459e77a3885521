#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <stdexcept>

#include "blosim/errors.hpp"
#include "blosim/scenario_config.hpp"
#include "blosim/scenarios.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"blosim: phase-sensitive balanced-homodyne detection of a broadband "
                 "squeezed vacuum with a two-tone local oscillator"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    bool have_seed = false;
    blosim::RunOptions opts;

    app.add_option("--config", config_path, "configuration file (key = value with [sections])");
    app.add_option("--seed", seed, "override the synthesis seed")
        ->each([&](const std::string&) { have_seed = true; });
    app.add_flag("--analytic", opts.analytic,
                 "emit closed-form curves instead of synthesized traces");
    app.add_option("--out-dir", opts.out_dir, "output directory (default: out)");
    app.add_flag("--svg", opts.svg, "also emit SVG plots derived from the CSV data");

    auto* spectrum = app.add_subcommand(
        "spectrum", "swept noise-power spectra of both quadratures plus the SNL");
    auto* zero_span_cmd = app.add_subcommand(
        "zero-span", "fixed-frequency traces: phase-scanned dual-tone LO and both "
                     "single-tone (heterodyne) modes");
    auto* signal = app.add_subcommand(
        "signal", "baseband signal tone over squeezed, antisqueezed and vacuum floors");
    auto* fit = app.add_subcommand(
        "fit", "invert a measured squeezed/antisqueezed pair into (r, eta_eff)");
    auto* synth = app.add_subcommand("synth", "export a raw synthesized trace");

    double v_sq_db = 0.0, v_anti_db = 0.0;
    fit->add_option("squeezed_db", v_sq_db, "measured squeezed level, dB rel. SNL (< 0)")
        ->required();
    fit->add_option("antisqueezed_db", v_anti_db, "measured antisqueezed level, dB rel. SNL (> 0)")
        ->required();

    bool csv_trace = false;
    synth->add_flag("--csv", csv_trace, "also write a CSV copy (small traces only)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (have_seed) opts.seed_override = seed;
        opts.csv_trace = csv_trace;

        blosim::ScenarioConfig config =
            config_path.empty() ? blosim::default_config() : blosim::load_config(config_path);

        blosim::RunReport report;
        if (spectrum->parsed()) report = blosim::cmd_spectrum(config, opts);
        else if (zero_span_cmd->parsed()) report = blosim::cmd_zero_span(config, opts);
        else if (signal->parsed()) report = blosim::cmd_signal(config, opts);
        else if (fit->parsed()) report = blosim::cmd_fit(v_sq_db, v_anti_db, opts);
        else if (synth->parsed()) report = blosim::cmd_synth(config, opts);

        std::cout << report.to_text();
        return kExitOk;
    } catch (const blosim::infeasible_error& e) {
        std::cerr << "error (infeasible): " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const blosim::io_error& e) {
        std::cerr << "error (io): " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error (io): " << e.what() << "\n";
        return kExitIo;
    } catch (const blosim::config_error& e) {
        std::cerr << "error (config): " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "error (config): " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error (config): " << e.what() << "\n";
        return kExitConfig;
    }
}
