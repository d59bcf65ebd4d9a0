#include "ilw/report.hpp"

#include <cstdio>
#include <fstream>

namespace ilw {

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json Verdict::to_json() const {
    return {{"name", name},
            {"pass", pass},
            {"value", value},
            {"threshold", threshold},
            {"relation", relation}};
}

bool ExperimentReport::all_pass() const {
    for (const Verdict& v : verdicts)
        if (!v.pass) return false;
    return true;
}

void ExperimentReport::add_verdict(const std::string& name, bool pass, double value,
                                   double threshold, const std::string& relation) {
    verdicts.push_back({name, pass, value, threshold, relation});
}

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json j;
    j["study"] = study;
    j["inputs"] = inputs;
    j["measurements"] = measurements;
    j["verdicts"] = nlohmann::json::array();
    for (const Verdict& v : verdicts) j["verdicts"].push_back(v.to_json());
    j["all_pass"] = all_pass();
    return j;
}

void ExperimentReport::write_json(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << to_json().dump(2) << "\n";
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i)
            out << format_full(row[i]) << (i + 1 < row.size() ? "," : "\n");
    }
}

void write_series(const std::filesystem::path& path, const std::vector<double>& x,
                  const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("write_series: length mismatch");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (size_t i = 0; i < x.size(); ++i)
        out << format_full(x[i]) << " " << format_full(y[i]) << "\n";
}

} // namespace ilw
