#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ilw {

inline constexpr const char* kToolVersion = "0.1.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fully resolved configuration: the input JSON with every default filled in
/// and every value range-checked. An empty or whitespace-only file resolves
/// to all defaults. Unknown keys and out-of-range values are errors that name
/// the offending key.
struct ResolvedConfig {
    nlohmann::json values;

    double number(const std::string& section, const std::string& key) const;
    std::string text(const std::string& section, const std::string& key) const;
    std::vector<double> numbers(const std::string& section, const std::string& key) const;
};

ResolvedConfig parse_config(const std::filesystem::path& path);
ResolvedConfig parse_config_text(const std::string& text);
std::string serialize_config(const ResolvedConfig& config);

/// FNV-1a 64-bit content digest (integrity fingerprint for the manifest).
uint64_t fnv1a64_file(const std::filesystem::path& path);
std::string digest_hex(uint64_t digest);

struct RunOptions {
    std::filesystem::path out_dir = ".";
    int threads = 1;
    uint64_t seed = 0x1157ull;
};

/// Written next to the outputs of every run: command, resolved config, seed,
/// version, wall-clock bounds, and a digest inventory of every produced file.
struct RunManifest {
    std::string command;
    nlohmann::json resolved_config;
    uint64_t seed = 0;
    int threads = 1;
    std::string tool_version = kToolVersion;
    std::string started_at;
    std::string finished_at;
    std::vector<std::pair<std::string, std::string>> outputs; // path, digest

    void add_output(const std::filesystem::path& path);
    void write(const std::filesystem::path& path) const;
};

std::string timestamp_utc();

/// Runs one subcommand end to end. Exit code contract: 0 when every verdict
/// passes, 2 when a verdict fails, 1 on execution error.
int dispatch(const std::string& subcommand, const ResolvedConfig& config, const RunOptions& options);

} // namespace ilw
