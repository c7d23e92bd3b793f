#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "climctl/simulate.hpp"

// Run configuration: a JSON document mirroring ScenarioConfig. Every model
// parameter is an individual key, so overriding the emissivity for the
// warmed parameterization is a single `--set model.eps=0.8408`. Unknown
// keys are rejected with the offending path in the message.

namespace climctl {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    ScenarioConfig scenario;
    std::filesystem::path out_dir = "out";
};

// `base` supplies the defaults (regulator or offset scenario).
RunConfig load_config(const std::filesystem::path& path, const ScenarioConfig& base);

// Dotted-path overrides, e.g. "model.eps=0.8408" or "grid.n_a=16".
void apply_override(RunConfig& cfg, const std::string& key_value);

// Revalidates every module invariant; throws ConfigError naming the key.
void validate(const RunConfig& cfg);

std::string config_to_json(const RunConfig& cfg);

}  // namespace climctl
