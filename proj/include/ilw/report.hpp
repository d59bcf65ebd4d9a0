#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace ilw {

/// One checked statement with the tolerance it was judged by.
struct Verdict {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation; // e.g. "<=", ">=", "in [a,b]"

    nlohmann::json to_json() const;
};

/// Structured record of a study: inputs echo, measurement tables, fitted
/// quantities, and pass/fail verdicts.
struct ExperimentReport {
    std::string study;
    nlohmann::json inputs;
    nlohmann::json measurements;
    std::vector<Verdict> verdicts;

    bool all_pass() const;
    void add_verdict(const std::string& name, bool pass, double value, double threshold,
                     const std::string& relation);

    nlohmann::json to_json() const;
    void write_json(const std::filesystem::path& path) const;
};

/// CSV writers emit every number with 17 significant digits.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Plot-ready two-column series file ("x y" per line, 17 significant digits).
void write_series(const std::filesystem::path& path, const std::vector<double>& x,
                  const std::vector<double>& y);

std::string format_full(double v); // %.17g

} // namespace ilw
