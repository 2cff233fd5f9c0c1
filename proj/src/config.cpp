#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "thzturb/atmosphere.hpp"
#include "thzturb/constants.hpp"
#include "thzturb/scenario.hpp"

namespace thzturb::scenario {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

struct RawValue {
    int line;
    std::string text;
};

struct RawConfig {
    std::map<std::string, std::map<std::string, RawValue>> sections;
    std::vector<ConfigError> errors;
};

RawConfig parse_raw(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    std::set<std::string> seen_sections;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']') {
                raw.errors.push_back({lineno, t, "malformed section header"});
                section.clear();
                continue;
            }
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) {
                raw.errors.push_back({lineno, t, "empty section name"});
                continue;
            }
            if (!seen_sections.insert(section).second) {
                if (section == "sweep")
                    raw.errors.push_back({lineno, section, "exactly one sweep axis per run"});
                else
                    raw.errors.push_back({lineno, section, "duplicate section"});
            }
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            raw.errors.push_back({lineno, t, "expected 'key = value'"});
            continue;
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (section.empty()) {
            raw.errors.push_back({lineno, key, "key outside any section"});
            continue;
        }
        if (key.empty()) {
            raw.errors.push_back({lineno, t, "empty key"});
            continue;
        }
        auto& sec = raw.sections[section];
        if (sec.count(key)) {
            if (section == "sweep" && key == "parameter")
                raw.errors.push_back({lineno, key, "exactly one sweep axis per run"});
            else
                raw.errors.push_back({lineno, section + "." + key, "duplicate key"});
            continue;
        }
        sec[key] = {lineno, value};
    }
    return raw;
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"run", {"computation", "seed"}},
        {"link",
         {"frequency_hz", "distance_m", "altitude_m", "tx_power_dbm", "bandwidth_hz",
          "noise_psd_dbm_hz"}},
        {"tx_array", {"nx", "ny", "spacing_m"}},
        {"rx_array", {"nx", "ny", "spacing_m"}},
        {"turbulence",
         {"model", "cn2", "hv_ground_risc", "hv_wind_speed", "weak_threshold",
          "saturated_threshold"}},
        {"risc", {"band", "temperature_k", "pressure_mbar", "water_vapor_mbar"}},
        {"nc", {"rx_mode", "rx_separation_m"}},
        {"channel", {"correlation", "fading"}},
        {"curves",
         {"cn2", "distance_m", "spacing_m", "array_n", "sigma_r2", "ground_risc", "wind_speed"}},
        {"sweep", {"parameter", "from", "to", "points", "scale"}},
        {"absorption", {"table_csv", "scale_height_m"}},
        {"particles", {"table_csv", "medium_csv"}},
        {"output", {"path", "format"}},
    };
    return s;
}

const std::map<std::string, std::set<std::string>>& sweep_params_by_computation() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"risc-profile", {"altitude_m"}},
        {"rytov", {"frequency_hz", "distance_m", "cn2"}},
        {"nc", {"tx_separation_m"}},
        {"losc", {"distance_m", "cn2", "spacing_m", "frequency_hz"}},
        {"gg-pdf", {"psi"}},
        {"attenuation", {"frequency_hz", "distance_m", "cn2"}},
        {"link-budget", {"distance_m", "frequency_hz", "altitude_m"}},
        {"capacity", {"distance_m", "cn2", "frequency_hz"}},
        {"channel-sample", {"sample_index"}},
    };
    return s;
}

const std::map<std::string, std::set<std::string>>& curves_by_computation() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"risc-profile", {"ground_risc", "wind_speed"}},
        {"rytov", {"cn2", "distance_m"}},
        {"nc", {"cn2", "distance_m"}},
        {"losc", {"cn2", "spacing_m", "array_n", "distance_m"}},
        {"gg-pdf", {"sigma_r2"}},
        {"attenuation", {"cn2", "distance_m"}},
        {"link-budget", {}},
        {"capacity", {"cn2", "distance_m"}},
        {"channel-sample", {}},
    };
    return s;
}

class Extractor {
public:
    Extractor(RawConfig& raw, std::vector<ConfigError>& errors) : raw_(raw), errors_(errors) {}

    bool has(const std::string& section, const std::string& key) const {
        const auto s = raw_.sections.find(section);
        return s != raw_.sections.end() && s->second.count(key);
    }

    std::optional<RawValue> take(const std::string& section, const std::string& key) {
        auto s = raw_.sections.find(section);
        if (s == raw_.sections.end()) return std::nullopt;
        auto k = s->second.find(key);
        if (k == s->second.end()) return std::nullopt;
        return k->second;
    }

    void number(const std::string& section, const std::string& key, double& out) {
        const auto v = take(section, key);
        if (!v) return;
        if (!parse_number(v->text, out))
            errors_.push_back({v->line, section + "." + key, "not a number: '" + v->text + "'"});
    }

    void integer(const std::string& section, const std::string& key, int& out) {
        const auto v = take(section, key);
        if (!v) return;
        double d;
        if (!parse_number(v->text, d) || d != std::floor(d))
            errors_.push_back({v->line, section + "." + key, "not an integer: '" + v->text + "'"});
        else
            out = static_cast<int>(d);
    }

    void uint64(const std::string& section, const std::string& key, std::uint64_t& out) {
        const auto v = take(section, key);
        if (!v) return;
        try {
            std::size_t pos = 0;
            const unsigned long long u = std::stoull(v->text, &pos);
            if (pos != v->text.size()) throw std::invalid_argument("trailing junk");
            out = u;
        } catch (const std::exception&) {
            errors_.push_back({v->line, section + "." + key, "not an unsigned integer"});
        }
    }

    void string_value(const std::string& section, const std::string& key, std::string& out) {
        const auto v = take(section, key);
        if (v) out = v->text;
    }

    void opt_string(const std::string& section, const std::string& key,
                    std::optional<std::string>& out) {
        const auto v = take(section, key);
        if (v) out = v->text;
    }

    void boolean(const std::string& section, const std::string& key, bool& out) {
        const auto v = take(section, key);
        if (!v) return;
        if (v->text == "on" || v->text == "true")
            out = true;
        else if (v->text == "off" || v->text == "false")
            out = false;
        else
            errors_.push_back({v->line, section + "." + key, "expected on/off, got '" + v->text + "'"});
    }

    void number_list(const std::string& section, const std::string& key,
                     std::vector<double>& out) {
        const auto v = take(section, key);
        if (!v) return;
        std::stringstream ss(v->text);
        std::string cell;
        std::vector<double> values;
        bool ok = true;
        while (std::getline(ss, cell, ',')) {
            double d;
            if (!parse_number(trim(cell), d)) {
                errors_.push_back({v->line, section + "." + key, "not a number: '" + trim(cell) + "'"});
                ok = false;
                break;
            }
            values.push_back(d);
        }
        if (ok && values.empty())
            errors_.push_back({v->line, section + "." + key, "empty list"});
        if (ok && !values.empty()) out = std::move(values);
    }

    void error(int line, const std::string& key, const std::string& message) {
        errors_.push_back({line, key, message});
    }

private:
    static bool parse_number(const std::string& s, double& out) {
        try {
            std::size_t pos = 0;
            out = std::stod(s, &pos);
            return pos == s.size() && std::isfinite(out);
        } catch (const std::exception&) {
            return false;
        }
    }

    RawConfig& raw_;
    std::vector<ConfigError>& errors_;
};

}  // namespace

double ScenarioConfig::tx_spacing() const {
    return tx_array.spacing_m.value_or(0.5 * wavelength(link.frequency_hz));
}

double ScenarioConfig::rx_spacing() const {
    return rx_array.spacing_m.value_or(0.5 * wavelength(link.frequency_hz));
}

// Everything that affects the numbers; the [output] destination is appended
// separately so the config hash is independent of where the table goes.
std::string ScenarioConfig::canonical_core_text() const {
    std::ostringstream out;
    out << "[run]\ncomputation = " << computation << "\nseed = " << seed << "\n";
    out << "[link]\n";
    out << "altitude_m = " << fmt_double(link.altitude_m) << "\n";
    out << "bandwidth_hz = " << fmt_double(link.bandwidth_hz) << "\n";
    out << "distance_m = " << fmt_double(link.distance_m) << "\n";
    out << "frequency_hz = " << fmt_double(link.frequency_hz) << "\n";
    out << "noise_psd_dbm_hz = " << fmt_double(10.0 * std::log10(link.noise_psd_w_hz * 1e3))
        << "\n";
    out << "tx_power_dbm = " << fmt_double(10.0 * std::log10(link.tx_power_w * 1e3)) << "\n";
    const auto array_block = [&](const char* name, const ArraySpec& a, double resolved) {
        out << "[" << name << "]\nnx = " << a.nx << "\nny = " << a.ny
            << "\nspacing_m = " << fmt_double(resolved) << "\n";
    };
    array_block("tx_array", tx_array, tx_spacing());
    array_block("rx_array", rx_array, rx_spacing());
    out << "[turbulence]\n";
    if (turbulence.cn2)
        out << "cn2 = " << fmt_double(*turbulence.cn2) << "\nmodel = constant\n";
    else
        out << "model = hv\n";
    out << "hv_ground_risc = " << fmt_double(turbulence.hv_ground_risc) << "\n";
    out << "hv_wind_speed = " << fmt_double(turbulence.hv_wind_speed) << "\n";
    out << "saturated_threshold = " << fmt_double(turbulence.saturated_threshold) << "\n";
    out << "weak_threshold = " << fmt_double(turbulence.weak_threshold) << "\n";
    out << "[risc]\nband = " << (risc.thz_band ? "thz" : "infrared") << "\n";
    out << "pressure_mbar = " << fmt_double(risc.pressure_mbar) << "\n";
    out << "temperature_k = " << fmt_double(risc.temperature_k) << "\n";
    out << "water_vapor_mbar = " << fmt_double(risc.water_vapor_mbar) << "\n";
    out << "[nc]\nrx_mode = "
        << (nc.rx_mode == NcSpec::RxMode::equal ? "equal"
                                                : (nc.rx_mode == NcSpec::RxMode::zero ? "zero" : "fixed"))
        << "\nrx_separation_m = " << fmt_double(nc.rx_separation_m) << "\n";
    out << "[channel]\ncorrelation = " << (channel.correlation ? "on" : "off")
        << "\nfading = " << (channel.fading ? "on" : "off") << "\n";
    if (!curves.empty()) {
        out << "[curves]\n";
        for (const auto& [key, values] : curves) {
            out << key << " = ";
            for (std::size_t i = 0; i < values.size(); ++i)
                out << (i ? "," : "") << fmt_double(values[i]);
            out << "\n";
        }
    }
    out << "[sweep]\nfrom = " << fmt_double(sweep.from) << "\nparameter = " << sweep.parameter
        << "\npoints = " << sweep.points << "\nscale = " << (sweep.log_scale ? "log" : "lin")
        << "\nto = " << fmt_double(sweep.to) << "\n";
    if (absorption_csv) {
        out << "[absorption]\nscale_height_m = " << fmt_double(absorption_scale_height_m)
            << "\ntable_csv = " << *absorption_csv << "\n";
    }
    if (particles_csv || medium_csv) {
        out << "[particles]\n";
        if (medium_csv) out << "medium_csv = " << *medium_csv << "\n";
        if (particles_csv) out << "table_csv = " << *particles_csv << "\n";
    }
    return out.str();
}

std::string ScenarioConfig::canonical_text() const {
    std::ostringstream out;
    out << canonical_core_text();
    out << "[output]\nformat = " << (output.format == OutputSpec::Format::csv ? "csv" : "json")
        << "\n";
    if (output.path) out << "path = " << *output.path << "\n";
    return out.str();
}

std::uint64_t ScenarioConfig::config_hash() const {
    const std::string text = canonical_core_text();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double ScenarioConfig::effective_cn2() const {
    if (turbulence.cn2) return *turbulence.cn2;
    const atmosphere::TurbulenceProfile profile(turbulence.hv_ground_risc,
                                                turbulence.hv_wind_speed);
    if (risc.thz_band)
        return atmosphere::risc_thz(link.altitude_m, profile, risc.temperature_k,
                                    risc.pressure_mbar, risc.water_vapor_mbar);
    return atmosphere::risc_infrared(link.altitude_m, profile);
}

const std::vector<std::string>& computation_names() {
    static const std::vector<std::string> names = {
        "risc-profile", "rytov", "nc", "losc", "gg-pdf", "attenuation",
        "link-budget", "capacity", "channel-sample"};
    return names;
}

ValidationResult validate_config(const std::string& text,
                                 const std::optional<std::string>& computation_override) {
    ValidationResult result;
    RawConfig raw = parse_raw(text);
    result.errors = raw.errors;

    // unknown sections and keys
    for (const auto& [section, keys] : raw.sections) {
        const auto s = schema().find(section);
        if (s == schema().end()) {
            result.errors.push_back({keys.empty() ? 0 : keys.begin()->second.line, section,
                                     "unknown section"});
            continue;
        }
        for (const auto& [key, value] : keys) {
            if (!s->second.count(key))
                result.errors.push_back({value.line, section + "." + key, "unknown key"});
        }
    }

    ScenarioConfig cfg;
    Extractor ex(raw, result.errors);

    ex.string_value("run", "computation", cfg.computation);
    ex.uint64("run", "seed", cfg.seed);
    if (computation_override) cfg.computation = *computation_override;

    ex.number("link", "frequency_hz", cfg.link.frequency_hz);
    ex.number("link", "distance_m", cfg.link.distance_m);
    ex.number("link", "altitude_m", cfg.link.altitude_m);
    double tx_power_dbm = 10.0, noise_dbm_hz = -174.0;
    ex.number("link", "tx_power_dbm", tx_power_dbm);
    ex.number("link", "noise_psd_dbm_hz", noise_dbm_hz);
    cfg.link.tx_power_w = 1e-3 * std::pow(10.0, tx_power_dbm / 10.0);
    cfg.link.noise_psd_w_hz = 1e-3 * std::pow(10.0, noise_dbm_hz / 10.0);
    ex.number("link", "bandwidth_hz", cfg.link.bandwidth_hz);

    const auto read_array = [&](const char* name, ArraySpec& a) {
        ex.integer(name, "nx", a.nx);
        ex.integer(name, "ny", a.ny);
        if (ex.has(name, "spacing_m")) {
            double s = 0.0;
            ex.number(name, "spacing_m", s);
            a.spacing_m = s;
        }
    };
    read_array("tx_array", cfg.tx_array);
    read_array("rx_array", cfg.rx_array);

    std::string turb_model = "constant";
    ex.string_value("turbulence", "model", turb_model);
    if (turb_model == "hv") {
        cfg.turbulence.cn2.reset();
    } else if (turb_model != "constant") {
        result.errors.push_back({0, "turbulence.model", "expected constant or hv"});
    }
    if (ex.has("turbulence", "cn2")) {
        double v = 0.0;
        ex.number("turbulence", "cn2", v);
        cfg.turbulence.cn2 = v;
    }
    ex.number("turbulence", "hv_ground_risc", cfg.turbulence.hv_ground_risc);
    ex.number("turbulence", "hv_wind_speed", cfg.turbulence.hv_wind_speed);
    ex.number("turbulence", "weak_threshold", cfg.turbulence.weak_threshold);
    ex.number("turbulence", "saturated_threshold", cfg.turbulence.saturated_threshold);

    std::string band = "thz";
    ex.string_value("risc", "band", band);
    if (band == "thz")
        cfg.risc.thz_band = true;
    else if (band == "infrared")
        cfg.risc.thz_band = false;
    else
        result.errors.push_back({0, "risc.band", "expected thz or infrared"});
    ex.number("risc", "temperature_k", cfg.risc.temperature_k);
    ex.number("risc", "pressure_mbar", cfg.risc.pressure_mbar);
    ex.number("risc", "water_vapor_mbar", cfg.risc.water_vapor_mbar);

    std::string rx_mode = "equal";
    ex.string_value("nc", "rx_mode", rx_mode);
    if (rx_mode == "equal")
        cfg.nc.rx_mode = NcSpec::RxMode::equal;
    else if (rx_mode == "zero")
        cfg.nc.rx_mode = NcSpec::RxMode::zero;
    else if (rx_mode == "fixed")
        cfg.nc.rx_mode = NcSpec::RxMode::fixed;
    else
        result.errors.push_back({0, "nc.rx_mode", "expected equal, zero or fixed"});
    ex.number("nc", "rx_separation_m", cfg.nc.rx_separation_m);

    ex.boolean("channel", "correlation", cfg.channel.correlation);
    ex.boolean("channel", "fading", cfg.channel.fading);

    for (const std::string key :
         {"cn2", "distance_m", "spacing_m", "array_n", "sigma_r2", "ground_risc", "wind_speed"}) {
        std::vector<double> values;
        ex.number_list("curves", key, values);
        if (!values.empty()) cfg.curves[key] = std::move(values);
    }

    ex.string_value("sweep", "parameter", cfg.sweep.parameter);
    ex.number("sweep", "from", cfg.sweep.from);
    ex.number("sweep", "to", cfg.sweep.to);
    ex.integer("sweep", "points", cfg.sweep.points);
    std::string scale = "lin";
    ex.string_value("sweep", "scale", scale);
    if (scale == "log")
        cfg.sweep.log_scale = true;
    else if (scale != "lin")
        result.errors.push_back({0, "sweep.scale", "expected lin or log"});

    ex.opt_string("absorption", "table_csv", cfg.absorption_csv);
    ex.number("absorption", "scale_height_m", cfg.absorption_scale_height_m);
    ex.opt_string("particles", "table_csv", cfg.particles_csv);
    ex.opt_string("particles", "medium_csv", cfg.medium_csv);

    ex.opt_string("output", "path", cfg.output.path);
    std::string format = "csv";
    ex.string_value("output", "format", format);
    if (format == "json")
        cfg.output.format = OutputSpec::Format::json;
    else if (format != "csv")
        result.errors.push_back({0, "output.format", "expected csv or json"});

    // semantic validation
    const auto err = [&](const std::string& key, const std::string& message) {
        result.errors.push_back({0, key, message});
    };
    if (cfg.computation.empty()) {
        err("run.computation", "missing computation name");
    } else if (!sweep_params_by_computation().count(cfg.computation)) {
        err("run.computation", "unknown computation '" + cfg.computation + "'");
    }
    if (!(cfg.link.frequency_hz > 0.0)) err("link.frequency_hz", "must be > 0");
    if (!(cfg.link.distance_m > 0.0)) err("link.distance_m", "must be > 0");
    if (cfg.link.altitude_m < 0.0) err("link.altitude_m", "must be >= 0");
    if (!(cfg.link.bandwidth_hz > 0.0)) err("link.bandwidth_hz", "must be > 0");
    if (cfg.tx_array.nx < 1 || cfg.tx_array.ny < 1) err("tx_array", "element counts must be >= 1");
    if (cfg.rx_array.nx < 1 || cfg.rx_array.ny < 1) err("rx_array", "element counts must be >= 1");
    if (cfg.tx_array.spacing_m && !(*cfg.tx_array.spacing_m > 0.0))
        err("tx_array.spacing_m", "must be > 0");
    if (cfg.rx_array.spacing_m && !(*cfg.rx_array.spacing_m > 0.0))
        err("rx_array.spacing_m", "must be > 0");
    if (cfg.turbulence.cn2 && *cfg.turbulence.cn2 < 0.0) err("turbulence.cn2", "must be >= 0");
    if (cfg.turbulence.hv_ground_risc < 0.0) err("turbulence.hv_ground_risc", "must be >= 0");
    if (cfg.turbulence.hv_wind_speed < 0.0) err("turbulence.hv_wind_speed", "must be >= 0");
    if (!(cfg.risc.temperature_k > 0.0)) err("risc.temperature_k", "must be > 0");
    if (!(cfg.risc.pressure_mbar > 0.0)) err("risc.pressure_mbar", "must be > 0");
    if (cfg.risc.water_vapor_mbar < 0.0) err("risc.water_vapor_mbar", "must be >= 0");
    if (cfg.nc.rx_separation_m < 0.0) err("nc.rx_separation_m", "must be >= 0");
    if (!raw.sections.count("sweep")) {
        err("sweep", "missing [sweep] section (exactly one sweep axis per run)");
    } else {
        if (cfg.sweep.parameter.empty()) err("sweep.parameter", "missing sweep parameter");
        if (cfg.sweep.points < 2) err("sweep.points", "point count must be >= 2 for sweeps");
        if (cfg.sweep.log_scale && !(cfg.sweep.from > 0.0 && cfg.sweep.to > 0.0))
            err("sweep", "log scale requires positive bounds");
        const auto sp = sweep_params_by_computation().find(cfg.computation);
        if (sp != sweep_params_by_computation().end() && !cfg.sweep.parameter.empty() &&
            !sp->second.count(cfg.sweep.parameter))
            err("sweep.parameter",
                "'" + cfg.sweep.parameter + "' is not a sweep axis of " + cfg.computation);
    }
    const auto cv = curves_by_computation().find(cfg.computation);
    if (cv != curves_by_computation().end()) {
        for (const auto& [key, values] : cfg.curves) {
            if (!cv->second.count(key))
                err("curves." + key, "not a curve family of " + cfg.computation);
            else if (key == cfg.sweep.parameter)
                err("curves." + key, "curve family cannot equal the sweep parameter");
            if (key == "array_n")
                for (const double v : values)
                    if (v != std::floor(v) || v < 1.0) err("curves.array_n", "must be integers >= 1");
        }
    }
    if (cfg.computation == "link-budget" && !cfg.absorption_csv)
        err("absorption.table_csv", "link-budget requires an absorption table");
    if (cfg.particles_csv && !cfg.medium_csv)
        err("particles.medium_csv", "particle scattering requires a medium index table");

    if (!result.errors.empty()) return result;
    result.config = std::move(cfg);
    return result;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    ValidationResult r = validate_config(ss.str());
    if (!r.ok()) {
        std::string msg = "invalid config " + path + ":";
        for (const auto& e : r.errors) {
            msg += "\n  ";
            if (e.line > 0) msg += "line " + std::to_string(e.line) + ": ";
            msg += e.key + ": " + e.message;
        }
        throw std::runtime_error(msg);
    }
    return *std::move(r.config);
}

}  // namespace thzturb::scenario
