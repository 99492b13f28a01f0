#pragma once

#include <tvaraug/dataset.hpp>
#include <tvaraug/tvar.hpp>
#include <tvaraug/validate.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace tvaraug::cli {

/**
 * @brief Contents of a `--config` JSON file.
 *
 * Per-channel overrides are partial: only the listed fields replace the
 * defaults. Command-line flags take precedence over every field here.
 */
struct CliConfig {
    CsvSchema schema;
    Alignment alignment = Alignment::ByRul;
    ChannelTvarParams defaults;
    std::map<std::string, std::map<std::string, double>> channel_overrides;
    FitMode fit_mode = FitMode::MomentMatching;
    InterpMode interp_mode = InterpMode::Direct;
    std::size_t order = 0;
    std::optional<std::size_t> count;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> realizations;
    std::optional<std::uint64_t> validate_seed;
    Tolerances tolerances;
    std::string model_path;
    std::string synthetic_path;
    std::string stats_path;
    std::string report_path;
    unsigned threads = 0;

    /// Defaults merged with the overrides; every channel checked against the rate bounds.
    ModelConfig model_config() const;
};

/// Throws Error(InvalidConfig) on unknown keys, wrong types or out-of-range parameters.
CliConfig parse_config(const std::string& json_text);
CliConfig load_config(const std::filesystem::path& path);

/// Short description of the config file layout, printed on usage errors.
std::string config_help();

/// Exit codes: 0 success, 1 validation failed, 2 usage, input or I/O error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tvaraug::cli
