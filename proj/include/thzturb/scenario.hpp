#ifndef THZTURB_SCENARIO_HPP
#define THZTURB_SCENARIO_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "thzturb/link.hpp"

namespace thzturb::scenario {

struct SweepSpec {
    std::string parameter;
    double from = 0.0;
    double to = 0.0;
    int points = 0;
    bool log_scale = false;
};

struct ArraySpec {
    int nx = 32;
    int ny = 32;
    std::optional<double> spacing_m;  // default: lambda/2 at the link frequency
};

struct TurbulenceSpec {
    std::optional<double> cn2 = 1e-9;  // constant-RISC; unset -> HV profile at link altitude
    double hv_ground_risc = 1.7e-14;
    double hv_wind_speed = 21.0;
    double weak_threshold = 0.1;
    double saturated_threshold = 10.0;
};

struct RiscSpec {
    bool thz_band = true;
    double temperature_k = 288.15;
    double pressure_mbar = 1013.25;
    double water_vapor_mbar = 0.0;
};

struct NcSpec {
    enum class RxMode { equal, zero, fixed };
    RxMode rx_mode = RxMode::equal;
    double rx_separation_m = 0.0;
};

struct ChannelSpec {
    bool correlation = false;
    bool fading = true;
};

struct OutputSpec {
    enum class Format { csv, json };
    std::optional<std::string> path;  // unset -> stdout
    Format format = Format::csv;
};

struct ScenarioConfig {
    std::string computation;
    std::uint64_t seed = 1;
    LinkGeometry link;  // powers stored linear (W, W/Hz)
    ArraySpec tx_array;
    ArraySpec rx_array;
    TurbulenceSpec turbulence;
    RiscSpec risc;
    NcSpec nc;
    ChannelSpec channel;
    std::map<std::string, std::vector<double>> curves;  // curve-family lists
    SweepSpec sweep;
    std::optional<std::string> absorption_csv;
    double absorption_scale_height_m = 2000.0;
    std::optional<std::string> particles_csv;
    std::optional<std::string> medium_csv;
    OutputSpec output;

    double tx_spacing() const;
    double rx_spacing() const;
    // Constant RISC when set, else the HV profile evaluated at the link altitude.
    double effective_cn2() const;

    // Canonical normal form: sections and keys sorted, numbers re-serialized.
    std::string canonical_text() const;
    // Canonical form without the [output] destination (what the hash covers).
    std::string canonical_core_text() const;
    std::uint64_t config_hash() const;  // FNV-1a of the canonical core text
};

struct ConfigError {
    int line;  // 0 when not tied to a line
    std::string key;
    std::string message;
};

struct ValidationResult {
    std::optional<ScenarioConfig> config;
    std::vector<ConfigError> errors;  // all violations, not first-error-only

    bool ok() const { return errors.empty() && config.has_value(); }
};

// Full parse-and-validate of the config text; never throws on bad input.
// computation_override, when set, replaces [run] computation before the
// semantic checks (the CLI's positional argument).
ValidationResult validate_config(const std::string& text,
                                 const std::optional<std::string>& computation_override = {});

// Convenience: read + validate, throwing std::runtime_error listing every violation.
ScenarioConfig load_config_file(const std::string& path);

struct SweepTable {
    std::vector<std::string> columns;
    std::vector<std::string> units;
    std::vector<std::vector<double>> rows;                // NaN marks singular sentinel points
    std::vector<std::pair<std::string, std::string>> meta;  // ordered, deterministic

    std::string to_csv() const;
    std::string to_json() const;
};

// Dispatches the configured computation over the sweep axis. Deterministic for
// a fixed config + seed. Singular model points become NaN sentinel rows; other
// numerical failures are rethrown annotated with the sweep point.
SweepTable run_scenario(const ScenarioConfig& config);

// Writes through the configured format; throws on I/O failure naming the path.
void emit(const SweepTable& table, OutputSpec::Format format, const std::string& path);
void emit(const SweepTable& table, OutputSpec::Format format, std::ostream& out);

const std::vector<std::string>& computation_names();

}  // namespace thzturb::scenario

#endif
