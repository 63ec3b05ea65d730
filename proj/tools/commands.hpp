// commands.hpp: subcommands of the casimir-decoherence executable

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "casdec/config.hpp"

namespace casdec::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum ExitCode : int { ok = 0, failure = 1, config_error = 2, convergence_error = 3 };

// Every section is optional; unknown keys at any level are rejected.
//   physics: mass, omega0, transparency, temperature, hbar
//   spectrum, coeffs, evolve, sieve, pairs, thermal: see the README
struct Config {
    nlohmann::json raw = nlohmann::json::object();
    PhysicalConfig physics{};
};

Config parse_config(const nlohmann::json& j);
Config load_config(const std::filesystem::path& path);

// Each command writes its files into out and returns the summary it also
// stores as <command>.json.
nlohmann::json cmd_spectrum(const Config& cfg, const std::filesystem::path& out);
nlohmann::json cmd_coeffs(const Config& cfg, const std::filesystem::path& out);
nlohmann::json cmd_evolve(const Config& cfg, const std::filesystem::path& out);
nlohmann::json cmd_sieve(const Config& cfg, const std::filesystem::path& out);
nlohmann::json cmd_pairs(const Config& cfg, const std::filesystem::path& out);
nlohmann::json cmd_thermal(const Config& cfg, const std::filesystem::path& out);
// 1, 2: coefficient presets; 3: spectral density
nlohmann::json cmd_figure(int which, const Config& cfg, const std::filesystem::path& out);

// 2 for configuration and domain errors, 3 for convergence failures, 1 otherwise.
int exit_code(const std::exception& e);

// Parses argv, runs one command and maps exceptions to exit codes.
int run(int argc, char** argv);

}  // namespace casdec::cli
