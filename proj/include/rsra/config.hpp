#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rsra/sim_engine.hpp"

namespace rsra {

/// Sweep and output settings from the [experiment] section.
struct ExperimentConfig {
  std::uint32_t replications = 20;
  std::string out_dir = "out";
  std::vector<double> dp_values;    ///< dB, for the delta-P sweep
  std::vector<double> load_values;  ///< device counts, for the load sweep

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Fully resolved configuration file contents. deployment.seed doubles as
/// the base seed of replicated studies (replication i uses seed + i).
struct RunConfig {
  SimulationConfig sim;
  ExperimentConfig experiment;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig default_config();

/// Every settable key, e.g. "rach.p_bar", in file order.
const std::vector<std::string>& config_keys();

/// Sets one key from its textual value. Throws ConfigError naming the key
/// when it is unknown or the value does not parse.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Applies "key=value".
void apply_override(RunConfig& cfg, std::string_view assignment);

/// Parses TOML-style text ([section] headers, key = value, '#' comments,
/// strings, numbers and flat numeric arrays) on top of cfg.
void parse_config_text(RunConfig& cfg, std::string_view text);

/// default_config() overlaid with the file. Throws std::runtime_error when
/// the file cannot be read.
RunConfig load_config_file(const std::filesystem::path& path);

/// Range checks for every section; throws ConfigError naming the key.
void validate(const RunConfig& cfg);

/// Resolved configuration as (key, value) pairs in config_keys() order.
std::vector<std::pair<std::string, std::string>> to_key_values(const RunConfig& cfg);

/// to_key_values rendered as a parseable config file.
std::string to_config_text(const RunConfig& cfg);

}  // namespace rsra
