// cli.hpp — experiment configuration, CSV/JSON output and figure presets

#pragma once

#include "tga/model.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tga::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitNumericalError = 2;

enum class Command { Scatter, Spectrum, Dynamics, Winding };

std::string to_string(Command command);
Command parse_command(const std::string& name);

using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct ExperimentConfig {
    Command command = Command::Scatter;
    std::map<std::string, std::string> values;  // fully resolved, defaults included
    std::vector<std::string> notes;             // echoed into the sidecar

    const std::string& get(const std::string& key) const;
    double number(const std::string& key) const;
    long integer(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::filesystem::path output() const { return get("output"); }
};

// Parses "key = value" lines; '#' starts a comment. Throws InvalidParameter.
KeyValues parse_key_values(std::istream& in);
KeyValues read_config_file(const std::filesystem::path& path);

// Splits "key=value". Throws InvalidParameter.
std::pair<std::string, std::string> parse_override(const std::string& text);

// Applies defaults, then file entries, then overrides (overrides win). Unknown
// keys, missing required keys and malformed values throw InvalidParameter.
ExperimentConfig resolve_config(Command command, const KeyValues& file_entries,
                                const KeyValues& overrides);

// Keys accepted by a command, in the order they are documented.
std::vector<std::string> accepted_keys(Command command);

SystemParams system_from_config(const ExperimentConfig& config);

// 15 significant digits, locale independent.
std::string format_number(double value);

// Runs one experiment, writing <output> and <output>.meta.json.
// Returns kExitOk, kExitConfigError or kExitNumericalError; messages go to err.
int run(const ExperimentConfig& config, std::ostream& err);

std::vector<std::string> figure_ids();

// Preset configurations for a figure, one per data file, outputs placed in out_dir.
std::vector<ExperimentConfig> figure_configs(const std::string& figure_id,
                                             const std::filesystem::path& out_dir);

int reproduce_figure(const std::string& figure_id, const std::filesystem::path& out_dir,
                     std::ostream& log, std::ostream& err);

// Fast invariant checks on seeded random parameters; one line per check.
bool run_selftest(std::uint64_t seed, std::ostream& out);

std::string version();

}  // namespace tga::cli
