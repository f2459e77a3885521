#include "blosim/scenario_config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "blosim/errors.hpp"
#include "blosim/units.hpp"

namespace blosim {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        if (!std::isfinite(v)) throw std::invalid_argument("not finite");
        return v;
    } catch (const std::exception&) {
        throw config_error("config: invalid numeric value for " + key + ": '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw config_error("config: invalid integer value for " + key + ": '" + value + "'");
    }
}

} // namespace

SqueezingModel ScenarioConfig::make_model() const {
    if (model.variant == "flat") return SqueezingModel::flat(model.r);
    if (model.variant == "lorentzian_opo")
        return SqueezingModel::lorentzian_opo(model.r, model.gamma_hz);
    throw config_error("config: model.variant must be 'flat' or 'lorentzian_opo', got '" +
                       model.variant + "'");
}

DetectionChain ScenarioConfig::make_chain() const {
    try {
        return DetectionChain(chain.eta, chain.visibility, chain.dark_noise_rel_snl);
    } catch (const std::domain_error& e) {
        throw config_error(std::string("config: ") + e.what());
    }
}

BloConfig ScenarioConfig::make_blo() const {
    BloConfig cfg;
    cfg.omega0_hz = blo.omega0_hz;
    cfg.power_upper_w = blo.power_upper_w;
    cfg.power_lower_w = blo.power_lower_w;
    cfg.theta.radians = blo.theta_rad;
    cfg.balance_epsilon = blo.balance_epsilon;
    if (blo.sidebands == "dual") {
        cfg.upper_enabled = cfg.lower_enabled = true;
    } else if (blo.sidebands == "upper") {
        cfg.upper_enabled = true;
        cfg.lower_enabled = false;
    } else if (blo.sidebands == "lower") {
        cfg.upper_enabled = false;
        cfg.lower_enabled = true;
    } else {
        throw config_error("config: blo.sidebands must be dual, upper or lower, got '" +
                           blo.sidebands + "'");
    }
    cfg.validate();
    return cfg;
}

void ScenarioConfig::validate() const {
    make_model();
    make_chain();
    make_blo();
    if (!(synth.sample_rate_hz > 0.0)) throw config_error("config: synth.sample_rate_hz must be > 0");
    if (synth.num_samples < (1u << 14))
        throw config_error("config: synth.num_samples must be at least 2^14");
    if (!(spectrum.rbw_hz > 0.0) || !(spectrum.vbw_hz > 0.0) ||
        spectrum.vbw_hz > spectrum.rbw_hz)
        throw config_error("config: spectrum rbw/vbw invalid (need 0 < vbw <= rbw)");
    if (!(spectrum.band_lo_hz >= 0.0) || !(spectrum.band_hi_hz > spectrum.band_lo_hz))
        throw config_error("config: spectrum band invalid");
    if (!(zero_span.rbw_hz > 0.0) || !(zero_span.vbw_hz > 0.0) ||
        zero_span.vbw_hz > zero_span.rbw_hz)
        throw config_error("config: zero_span rbw/vbw invalid (need 0 < vbw <= rbw)");
    if (!(zero_span.sample_rate_hz > 0.0))
        throw config_error("config: zero_span.sample_rate_hz must be > 0");
    if (!(zero_span.theta_ramp_turns > 0.0))
        throw config_error("config: zero_span.theta_ramp_turns must be > 0");
    if (!(signal.rbw_hz > 0.0) || !(signal.vbw_hz > 0.0) || signal.vbw_hz > signal.rbw_hz)
        throw config_error("config: signal rbw/vbw invalid (need 0 < vbw <= rbw)");
    if (!(signal.snr_target_db > 0.0))
        throw config_error("config: signal.snr_target_db must be > 0");
    if (!(signal.ref_bandwidth_hz > 0.0))
        throw config_error("config: signal.ref_bandwidth_hz must be > 0");
    if (!(signal.balance_epsilon >= 0.0))
        throw config_error("config: signal.balance_epsilon must be >= 0");
    if (analyzer.snl_reference != "vacuum_trace" && analyzer.snl_reference != "analytic")
        throw config_error("config: analyzer.snl_reference must be vacuum_trace or analytic");
    if (!(report.band_tolerance_db > 0.0) || !(report.zero_span_tolerance_db > 0.0) ||
        !(report.snr_gain_tolerance_db > 0.0) || !(report.flatness_db > 0.0))
        throw config_error("config: report tolerances must be > 0");
}

ScenarioConfig default_config() { return ScenarioConfig{}; }

namespace {

void apply(ScenarioConfig& cfg, const std::string& section, const std::string& key,
           const std::string& value) {
    const std::string where = "[" + section + "] " + key;

    auto dark_value = [&](bool& has, double& linear) {
        if (value == "none") {
            has = false;
            linear = 0.0;
        } else {
            has = true;
            linear = linear_from_db(parse_double(where, value));
        }
    };

    if (section == "model") {
        if (key == "variant") cfg.model.variant = value;
        else if (key == "r") cfg.model.r = parse_double(where, value);
        else if (key == "gamma_hz") cfg.model.gamma_hz = parse_double(where, value);
        else throw config_error("config: unknown key " + where);
    } else if (section == "chain") {
        if (key == "eta") cfg.chain.eta = parse_double(where, value);
        else if (key == "visibility") cfg.chain.visibility = parse_double(where, value);
        else if (key == "dark_noise_db") {
            bool has = false;
            dark_value(has, cfg.chain.dark_noise_rel_snl);
        } else throw config_error("config: unknown key " + where);
    } else if (section == "blo") {
        if (key == "omega0_hz") cfg.blo.omega0_hz = parse_double(where, value);
        else if (key == "power_upper_w") cfg.blo.power_upper_w = parse_double(where, value);
        else if (key == "power_lower_w") cfg.blo.power_lower_w = parse_double(where, value);
        else if (key == "theta_rad") cfg.blo.theta_rad = parse_double(where, value);
        else if (key == "balance_epsilon") cfg.blo.balance_epsilon = parse_double(where, value);
        else if (key == "sidebands") cfg.blo.sidebands = value;
        else throw config_error("config: unknown key " + where);
    } else if (section == "synth") {
        if (key == "sample_rate_hz") cfg.synth.sample_rate_hz = parse_double(where, value);
        else if (key == "num_samples") cfg.synth.num_samples = parse_u64(where, value);
        else if (key == "seed") cfg.synth.seed = parse_u64(where, value);
        else if (key == "block_len") cfg.synth.block_len = parse_u64(where, value);
        else throw config_error("config: unknown key " + where);
    } else if (section == "spectrum") {
        if (key == "rbw_hz") cfg.spectrum.rbw_hz = parse_double(where, value);
        else if (key == "vbw_hz") cfg.spectrum.vbw_hz = parse_double(where, value);
        else if (key == "band_lo_hz") cfg.spectrum.band_lo_hz = parse_double(where, value);
        else if (key == "band_hi_hz") cfg.spectrum.band_hi_hz = parse_double(where, value);
        else throw config_error("config: unknown key " + where);
    } else if (section == "zero_span") {
        if (key == "center_hz") cfg.zero_span.center_hz = parse_double(where, value);
        else if (key == "rbw_hz") cfg.zero_span.rbw_hz = parse_double(where, value);
        else if (key == "vbw_hz") cfg.zero_span.vbw_hz = parse_double(where, value);
        else if (key == "sample_rate_hz")
            cfg.zero_span.sample_rate_hz = parse_double(where, value);
        else if (key == "theta_ramp_turns")
            cfg.zero_span.theta_ramp_turns = parse_double(where, value);
        else throw config_error("config: unknown key " + where);
    } else if (section == "signal") {
        if (key == "f_mod_hz") cfg.signal.f_mod_hz = parse_double(where, value);
        else if (key == "snr_target_db") cfg.signal.snr_target_db = parse_double(where, value);
        else if (key == "ref_bandwidth_hz")
            cfg.signal.ref_bandwidth_hz = parse_double(where, value);
        else if (key == "rbw_hz") cfg.signal.rbw_hz = parse_double(where, value);
        else if (key == "vbw_hz") cfg.signal.vbw_hz = parse_double(where, value);
        else if (key == "band_lo_hz") cfg.signal.band_lo_hz = parse_double(where, value);
        else if (key == "band_hi_hz") cfg.signal.band_hi_hz = parse_double(where, value);
        else if (key == "balance_epsilon")
            cfg.signal.balance_epsilon = parse_double(where, value);
        else throw config_error("config: unknown key " + where);
    } else if (section == "analyzer") {
        if (key == "snl_reference") cfg.analyzer.snl_reference = value;
        else if (key == "dark_floor_db") {
            if (value == "none") {
                cfg.analyzer.has_dark_floor = false;
                cfg.analyzer.dark_floor_db = 0.0;
            } else {
                cfg.analyzer.has_dark_floor = true;
                cfg.analyzer.dark_floor_db = parse_double(where, value);
            }
        } else throw config_error("config: unknown key " + where);
    } else if (section == "report") {
        if (key == "squeezing_db") cfg.report.squeezing_db = parse_double(where, value);
        else if (key == "antisqueezing_db")
            cfg.report.antisqueezing_db = parse_double(where, value);
        else if (key == "heterodyne_db") cfg.report.heterodyne_db = parse_double(where, value);
        else if (key == "band_tolerance_db")
            cfg.report.band_tolerance_db = parse_double(where, value);
        else if (key == "zero_span_min_db")
            cfg.report.zero_span_min_db = parse_double(where, value);
        else if (key == "zero_span_max_db")
            cfg.report.zero_span_max_db = parse_double(where, value);
        else if (key == "zero_span_tolerance_db")
            cfg.report.zero_span_tolerance_db = parse_double(where, value);
        else if (key == "snr_gain_db") cfg.report.snr_gain_db = parse_double(where, value);
        else if (key == "snr_gain_tolerance_db")
            cfg.report.snr_gain_tolerance_db = parse_double(where, value);
        else if (key == "flatness_db") cfg.report.flatness_db = parse_double(where, value);
        else throw config_error("config: unknown key " + where);
    } else {
        throw config_error("config: unknown section [" + section + "]");
    }
}

} // namespace

ScenarioConfig parse_config_text(const std::string& text) {
    ScenarioConfig cfg = default_config();
    std::istringstream in(text);
    std::string raw;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("config: malformed section header at line " +
                                   std::to_string(line_no));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config: expected key = value at line " +
                               std::to_string(line_no) + ": '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw config_error("config: key '" + key + "' outside any [section]");
        if (key.empty() || value.empty())
            throw config_error("config: empty key or value at line " + std::to_string(line_no));
        apply(cfg, section, key, value);
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace blosim
