#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>

#include "thzturb/atmosphere.hpp"
#include "thzturb/coherence.hpp"
#include "thzturb/constants.hpp"
#include "thzturb/errors.hpp"
#include "thzturb/fading.hpp"
#include "thzturb/propagation.hpp"
#include "thzturb/rng.hpp"
#include "thzturb/scenario.hpp"
#include "thzturb/version.hpp"

namespace thzturb::scenario {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

using Setting = std::map<std::string, double>;

std::vector<Setting> curve_settings(const std::map<std::string, std::vector<double>>& curves) {
    std::vector<Setting> out{{}};
    for (const auto& [key, values] : curves) {  // map order: deterministic
        std::vector<Setting> next;
        next.reserve(out.size() * values.size());
        for (const auto& base : out) {
            for (const double v : values) {
                Setting s = base;
                s[key] = v;
                next.push_back(std::move(s));
            }
        }
        out = std::move(next);
    }
    return out;
}

std::string setting_label(const Setting& s) {
    static const std::map<std::string, std::string> shorts = {
        {"cn2", "cn2"},     {"distance_m", "L"},  {"spacing_m", "d"}, {"array_n", "N"},
        {"sigma_r2", "s2"}, {"ground_risc", "A"}, {"wind_speed", "v"}};
    std::string label;
    for (const auto& [key, value] : s) {
        const auto it = shorts.find(key);
        label += "_" + (it == shorts.end() ? key : it->second) + fmt_short(value);
    }
    return label;
}

std::vector<double> sweep_values(const SweepSpec& s) {
    std::vector<double> v(s.points);
    for (int i = 0; i < s.points; ++i) {
        const double t = static_cast<double>(i) / (s.points - 1);
        if (s.log_scale)
            v[i] = std::exp(std::log(s.from) + t * (std::log(s.to) - std::log(s.from)));
        else
            v[i] = s.from + t * (s.to - s.from);
    }
    return v;
}

std::string sweep_unit(const std::string& parameter) {
    if (parameter == "distance_m" || parameter == "altitude_m" || parameter == "spacing_m" ||
        parameter == "tx_separation_m")
        return "m";
    if (parameter == "frequency_hz") return "Hz";
    if (parameter == "cn2") return "m^-2/3";
    return "1";
}

// Link/medium/array state with curve-setting and sweep overrides applied.
struct Resolved {
    double frequency_hz;
    double distance_m;
    double altitude_m;
    double cn2;
    int tx_nx, tx_ny, rx_nx, rx_ny;
    double tx_spacing_m, rx_spacing_m;

    double k() const { return wavenumber(frequency_hz); }
    coherence::PlanarArray tx() const { return {tx_nx, tx_ny, tx_spacing_m}; }
    coherence::PlanarArray rx() const { return {rx_nx, rx_ny, rx_spacing_m}; }
};

Resolved resolve(const ScenarioConfig& c, const Setting& setting, const std::string& sweep_param,
                 double x) {
    Resolved r;
    r.frequency_hz = c.link.frequency_hz;
    r.distance_m = c.link.distance_m;
    r.altitude_m = c.link.altitude_m;
    r.tx_nx = c.tx_array.nx;
    r.tx_ny = c.tx_array.ny;
    r.rx_nx = c.rx_array.nx;
    r.rx_ny = c.rx_array.ny;
    std::optional<double> cn2_override;
    std::optional<double> spacing_override;
    const auto apply = [&](const std::string& key, double v) {
        if (key == "frequency_hz") r.frequency_hz = v;
        else if (key == "distance_m") r.distance_m = v;
        else if (key == "altitude_m") r.altitude_m = v;
        else if (key == "cn2") cn2_override = v;
        else if (key == "spacing_m") spacing_override = v;
        else if (key == "array_n") {
            const int n = static_cast<int>(v);
            r.tx_nx = r.tx_ny = r.rx_nx = r.rx_ny = n;
        }
    };
    for (const auto& [key, v] : setting) apply(key, v);
    apply(sweep_param, x);
    // spacing defaults follow the resolved frequency
    r.tx_spacing_m = spacing_override.value_or(
        c.tx_array.spacing_m.value_or(0.5 * wavelength(r.frequency_hz)));
    r.rx_spacing_m = spacing_override.value_or(
        c.rx_array.spacing_m.value_or(0.5 * wavelength(r.frequency_hz)));
    if (cn2_override) {
        r.cn2 = *cn2_override;
    } else if (c.turbulence.cn2) {
        r.cn2 = *c.turbulence.cn2;
    } else {
        const atmosphere::TurbulenceProfile profile(c.turbulence.hv_ground_risc,
                                                    c.turbulence.hv_wind_speed);
        r.cn2 = c.risc.thz_band
                    ? atmosphere::risc_thz(r.altitude_m, profile, c.risc.temperature_k,
                                           c.risc.pressure_mbar, c.risc.water_vapor_mbar)
                    : atmosphere::risc_infrared(r.altitude_m, profile);
    }
    return r;
}

struct Computation {
    std::vector<std::string> value_names;  // per curve setting, before label suffix
    std::vector<std::string> value_units;
    // returns one value per value_name; NaN = singular sentinel
    std::function<std::vector<double>(const ScenarioConfig&, const Setting&, double x,
                                      std::uint64_t point_seed)>
        eval;
};

double attenuation_or_nan(double sigma_r2, double d_ra2) {
    try {
        return fading::turbulence_attenuation_db(sigma_r2, d_ra2);
    } catch (const singular_point_error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

Computation make_computation(const ScenarioConfig& config) {
    const std::string& name = config.computation;
    Computation comp;
    if (name == "risc-profile") {
        comp.value_names = {"cn2"};
        comp.value_units = {"m^-2/3"};
        comp.eval = [](const ScenarioConfig& c, const Setting& s, double x, std::uint64_t) {
            const double a = s.count("ground_risc") ? s.at("ground_risc") : c.turbulence.hv_ground_risc;
            const double v = s.count("wind_speed") ? s.at("wind_speed") : c.turbulence.hv_wind_speed;
            const atmosphere::TurbulenceProfile profile(a, v);
            const double value =
                c.risc.thz_band
                    ? atmosphere::risc_thz(x, profile, c.risc.temperature_k, c.risc.pressure_mbar,
                                           c.risc.water_vapor_mbar)
                    : atmosphere::risc_infrared(x, profile);
            return std::vector<double>{value};
        };
    } else if (name == "rytov") {
        comp.value_names = {"sigma_r2", "regime"};
        comp.value_units = {"1", "0weak_1strong_2sat"};
        comp.eval = [](const ScenarioConfig& c, const Setting& s, double x, std::uint64_t) {
            const Resolved r = resolve(c, s, c.sweep.parameter, x);
            const double s2 = atmosphere::rytov_variance(r.cn2, r.frequency_hz, r.distance_m);
            const atmosphere::RegimeThresholds th{c.turbulence.weak_threshold,
                                                  c.turbulence.saturated_threshold};
            return std::vector<double>{s2, static_cast<double>(atmosphere::classify_regime(s2, th))};
        };
    } else if (name == "nc") {
        comp.value_names = {"rho"};
        comp.value_units = {"1"};
        comp.eval = [](const ScenarioConfig& c, const Setting& s, double x, std::uint64_t) {
            const Resolved r = resolve(c, s, c.sweep.parameter, 0.0);
            const double d_t = x;
            double d_r = 0.0;
            switch (c.nc.rx_mode) {
                case NcSpec::RxMode::equal: d_r = d_t; break;
                case NcSpec::RxMode::zero: d_r = 0.0; break;
                case NcSpec::RxMode::fixed: d_r = c.nc.rx_separation_m; break;
            }
            const coherence::NCQuery q{d_t, d_r, r.cn2, r.k(), r.distance_m};
            return std::vector<double>{coherence::nc_closed_form(q)};
        };
    } else if (name == "losc") {
        comp.value_names = {"losc_db"};
        comp.value_units = {"dB"};
        comp.eval = [](const ScenarioConfig& c, const Setting& s, double x, std::uint64_t) {
            const Resolved r = resolve(c, s, c.sweep.parameter, x);
            return std::vector<double>{
                coherence::losc_loss_db(r.tx(), r.rx(), r.cn2, r.k(), r.distance_m)};
        };
    } else if (name == "gg-pdf") {
        comp.value_names = {"pdf"};
        comp.value_units = {"1"};
        comp.eval = [](const ScenarioConfig& c, const Setting& s, double x, std::uint64_t) {
            const Resolved r = resolve(c, s, c.sweep.parameter, 0.0);
            const double s2 = s.count("sigma_r2")
                                  ? s.at("sigma_r2")
                                  : atmosphere::rytov_variance(r.cn2, r.frequency_hz, r.distance_m);
            const double d2 = fading::aperture_param(r.frequency_hz, r.distance_m);
            const fading::GammaGammaParams p = fading::andrews_params(s2, d2);
            return std::vector<double>{fading::gamma_gamma_pdf(x, p)};
        };
    } else if (name == "attenuation") {
        comp.value_names = {"attenuation_db"};
        comp.value_units = {"dB"};
        comp.eval = [](const ScenarioConfig& c, const Setting& s, double x, std::uint64_t) {
            const Resolved r = resolve(c, s, c.sweep.parameter, x);
            const double s2 = atmosphere::rytov_variance(r.cn2, r.frequency_hz, r.distance_m);
            const double d2 = fading::aperture_param(r.frequency_hz, r.distance_m);
            return std::vector<double>{attenuation_or_nan(s2, d2)};
        };
    } else if (name == "link-budget") {
        comp.value_names = {"fspl_db", "absorption_db", "scattering_db",
                            "turb_attenuation_db", "losc_db", "total_db"};
        comp.value_units = {"dB", "dB", "dB", "dB", "dB", "dB"};
        // tables loaded once, shared across sweep points
        auto absorption = std::make_shared<propagation::AbsorptionTable>(
            propagation::AbsorptionTable::from_csv(*config.absorption_csv,
                                                   config.absorption_scale_height_m));
        std::shared_ptr<propagation::ParticleSizeDistribution> particles;
        std::shared_ptr<propagation::MieMedium> medium;
        if (config.particles_csv) {
            particles = std::make_shared<propagation::ParticleSizeDistribution>(
                propagation::ParticleSizeDistribution::from_csv(*config.particles_csv));
            medium = std::make_shared<propagation::MieMedium>(
                propagation::MieMedium::from_csv(*config.medium_csv));
        }
        comp.eval = [absorption, particles, medium](const ScenarioConfig& c, const Setting& s,
                                                    double x, std::uint64_t) {
            const Resolved r = resolve(c, s, c.sweep.parameter, x);
            const double fspl = propagation::fspl_db(r.frequency_hz, r.distance_m);
            const double k_abs =
                propagation::absorption_coefficient(r.frequency_hz, r.altitude_m, *absorption);
            const double abs_db = neper_to_db * k_abs * r.distance_m;
            double sca_db = 0.0;
            if (particles) {
                const double k_sca = propagation::scattering_extinction_per_m(
                    r.frequency_hz, r.altitude_m, *particles, *medium);
                sca_db = neper_to_db * k_sca * r.distance_m;
            }
            const double s2 = atmosphere::rytov_variance(r.cn2, r.frequency_hz, r.distance_m);
            const double att = attenuation_or_nan(
                s2, fading::aperture_param(r.frequency_hz, r.distance_m));
            const double losc =
                coherence::losc_loss_db(r.tx(), r.rx(), r.cn2, r.k(), r.distance_m);
            const double total = fspl + abs_db + sca_db + att + losc;
            return std::vector<double>{fspl, abs_db, sca_db, att, losc, total};
        };
    } else if (name == "capacity") {
        comp.value_names = {"capacity_bps"};
        comp.value_units = {"bit/s"};
        comp.eval = [](const ScenarioConfig& c, const Setting& s, double x, std::uint64_t) {
            const Resolved r = resolve(c, s, c.sweep.parameter, x);
            const LinkGeometry geom{r.frequency_hz, r.distance_m, r.altitude_m,
                                    c.link.tx_power_w, c.link.bandwidth_hz, c.link.noise_psd_w_hz};
            const double alpha_los = propagation::los_path_gain(geom, 0.0, 0.0);
            const double s2 = atmosphere::rytov_variance(r.cn2, r.frequency_hz, r.distance_m);
            double alpha_turb = 1.0;
            if (s2 > 0.0) {
                const double att =
                    attenuation_or_nan(s2, fading::aperture_param(r.frequency_hz, r.distance_m));
                if (std::isnan(att)) return std::vector<double>{att};
                alpha_turb = std::pow(10.0, -att / 20.0);
            }
            const coherence::CapacityInputs in{c.link.bandwidth_hz, c.link.tx_power_w,
                                               c.link.noise_psd_w_hz, alpha_los, alpha_turb,
                                               r.tx(), r.rx()};
            return std::vector<double>{
                coherence::ergodic_capacity_bound(in, r.cn2, r.k(), r.distance_m)};
        };
    } else if (name == "channel-sample") {
        comp.value_names = {"psi_mean", "psi_var", "h_fro2"};
        comp.value_units = {"1", "1", "1"};
        comp.eval = [](const ScenarioConfig& c, const Setting& s, double x, std::uint64_t seed) {
            const Resolved r = resolve(c, s, c.sweep.parameter, 0.0);
            (void)x;
            const LinkGeometry geom{r.frequency_hz, r.distance_m, r.altitude_m,
                                    c.link.tx_power_w, c.link.bandwidth_hz, c.link.noise_psd_w_hz};
            const double alpha_los = propagation::los_path_gain(geom, 0.0, 0.0);
            std::optional<fading::GammaGammaParams> params;
            if (c.channel.fading) {
                const double s2 = atmosphere::rytov_variance(r.cn2, r.frequency_hz, r.distance_m);
                if (s2 > 0.0)
                    params = fading::andrews_params(
                        s2, fading::aperture_param(r.frequency_hz, r.distance_m));
            }
            const auto sample = coherence::channel_matrix_sample(
                r.tx(), r.rx(), {}, alpha_los, params, c.channel.correlation, seed, r.cn2, r.k(),
                r.distance_m);
            double sum = 0.0, sum2 = 0.0, fro2 = 0.0;
            for (const auto& h : sample.h) {
                const double amp = std::abs(h) / alpha_los;
                sum += amp;
                sum2 += amp * amp;
                fro2 += std::norm(h);
            }
            const double n = static_cast<double>(sample.h.size());
            const double mean = sum / n;
            return std::vector<double>{mean, sum2 / n - mean * mean, fro2};
        };
    } else {
        throw std::invalid_argument("unknown computation name '" + name + "'");
    }
    return comp;
}

}  // namespace

SweepTable run_scenario(const ScenarioConfig& config) {
    const Computation comp = make_computation(config);
    const std::vector<Setting> settings = curve_settings(config.curves);
    const std::vector<double> xs = sweep_values(config.sweep);

    SweepTable table;
    char hash_buf[24];
    std::snprintf(hash_buf, sizeof hash_buf, "%016" PRIx64, config.config_hash());
    table.meta = {{"computation", config.computation},
                  {"config_hash", hash_buf},
                  {"seed", std::to_string(config.seed)},
                  {"version", version}};
    table.columns.push_back(config.sweep.parameter);
    table.units.push_back(sweep_unit(config.sweep.parameter));
    for (const auto& setting : settings) {
        const std::string label = setting_label(setting);
        for (std::size_t i = 0; i < comp.value_names.size(); ++i) {
            table.columns.push_back(comp.value_names[i] + label);
            table.units.push_back(comp.value_units[i]);
        }
    }

    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
        std::vector<double> row{xs[ix]};
        const std::uint64_t point_seed = rng::Stream::derive(config.seed, ix);
        for (const auto& setting : settings) {
            try {
                const auto values = comp.eval(config, setting, xs[ix], point_seed);
                row.insert(row.end(), values.begin(), values.end());
            } catch (const singular_point_error&) {
                for (std::size_t i = 0; i < comp.value_names.size(); ++i)
                    row.push_back(std::numeric_limits<double>::quiet_NaN());
            } catch (const numerical_error& e) {
                throw numerical_error(std::string(e.what()) + " [at sweep point " +
                                      config.sweep.parameter + " = " + fmt17(xs[ix]) + "]");
            } catch (const std::out_of_range& e) {
                throw numerical_error(std::string(e.what()) + " [at sweep point " +
                                      config.sweep.parameter + " = " + fmt17(xs[ix]) + "]");
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string SweepTable::to_csv() const {
    std::ostringstream out;
    for (const auto& [key, value] : meta) out << "# " << key << " = " << value << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << "\n";
    for (std::size_t i = 0; i < units.size(); ++i) out << (i ? "," : "") << units[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt17(row[i]);
        out << "\n";
    }
    return out.str();
}

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string SweepTable::to_json() const {
    std::ostringstream out;
    out << "{\n  \"meta\": {";
    for (std::size_t i = 0; i < meta.size(); ++i)
        out << (i ? ", " : "") << "\"" << json_escape(meta[i].first) << "\": \""
            << json_escape(meta[i].second) << "\"";
    out << "},\n  \"columns\": [";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << (i ? ", " : "") << "{\"name\": \"" << json_escape(columns[i]) << "\", \"unit\": \""
            << json_escape(units[i]) << "\"}";
    out << "],\n  \"rows\": [";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out << (r ? ",\n    " : "\n    ") << "[";
        for (std::size_t i = 0; i < rows[r].size(); ++i) {
            out << (i ? ", " : "");
            if (std::isnan(rows[r][i]))
                out << "null";
            else
                out << fmt17(rows[r][i]);
        }
        out << "]";
    }
    out << "\n  ]\n}\n";
    return out.str();
}

void emit(const SweepTable& table, OutputSpec::Format format, std::ostream& out) {
    out << (format == OutputSpec::Format::csv ? table.to_csv() : table.to_json());
}

void emit(const SweepTable& table, OutputSpec::Format format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    emit(table, format, out);
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace thzturb::scenario
