#include "ilw/config.hpp"

#include "ilw/dynamics.hpp"
#include "ilw/experiments.hpp"
#include "ilw/report.hpp"
#include "ilw/resonance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ilw {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json default_config() {
    json d;
    d["grid"] = {{"box_length", 40.0}, {"mode_count", 256}};
    d["profile"] = {{"amplitude", 1.0}, {"width", 1.0}};
    d["solver"] = {{"delta", 0.5},
                   {"dt", 2e-3},
                   {"horizon", 1.0},
                   {"dealias_fraction", 2.0 / 3.0},
                   {"record_every", 10},
                   {"equation", "kdv"},
                   {"linear_only", false}};
    d["converge"] = {{"s", 0.0},
                     {"delta_grid", {0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625}},
                     {"decrease_slack", 1.2},
                     {"final_ratio", 0.05}};
    d["equicont"] = {{"s", 0.0},
                     {"delta_grid", {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0}},
                     {"N_grid", {1.5, 3.0, 6.0, 12.0}},
                     {"geometric_ratio", 0.5},
                     {"final_threshold", 1e-8}};
    d["instability"] = {{"s", 0.0},
                        {"delta", 0.1},
                        {"t", 0.1},
                        {"theta", 0.1},
                        {"N_grid", {1e3, 1e4, 1e5, 1e6}},
                        {"quadrature_points", 32},
                        {"slope_tolerance", 0.05},
                        {"gap_exponent_tolerance", 0.1}};
    d["fd_check"] = {{"delta", 0.4},
                     {"t", 0.2},
                     {"epsilons", {1e-2, 5e-3, 2.5e-3}},
                     {"time_panels", 48},
                     {"dt", 5e-4},
                     {"low_modes", {1, 2}},
                     {"high_modes", {8, 9}},
                     {"low_amplitude", 0.25},
                     {"high_amplitude", 0.2}};
    d["resonance_sweep"] = {{"identity_samples", 100000},
                            {"samples_per_delta", 10000},
                            {"correction_ratio_samples", 100000},
                            {"jacobian_samples", 20000},
                            {"tol", 1e-9},
                            {"deltas",
                             {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125,
                              0.00390625, 0.001953125, 0.0009765625}},
                            {"csv_rows", 2000}};
    return d;
}

void fail_key(const std::string& path, const std::string& why) {
    throw ConfigError("config key '" + path + "': " + why);
}

void merge_checked(json& base, const json& user, const std::string& path) {
    for (auto it = user.begin(); it != user.end(); ++it) {
        const std::string sub = path.empty() ? it.key() : path + "." + it.key();
        if (!base.contains(it.key())) fail_key(sub, "unknown key");
        if (base[it.key()].is_object() && it->is_object())
            merge_checked(base[it.key()], *it, sub);
        else
            base[it.key()] = *it;
    }
}

void require(bool ok, const std::string& path, const std::string& range) {
    if (!ok) fail_key(path, "out of range, expected " + range);
}

void validate(const json& c) {
    require(c["grid"]["box_length"].is_number() && c["grid"]["box_length"].get<double>() > 0.0,
            "grid.box_length", "box_length > 0");
    const int n = c["grid"]["mode_count"].get<int>();
    require(n >= 2 && n % 2 == 0, "grid.mode_count", "positive even integer");

    require(c["solver"]["delta"].is_number() && c["solver"]["delta"].get<double>() >= 0.0,
            "solver.delta", "delta >= 0");
    require(c["solver"]["dt"].get<double>() > 0.0, "solver.dt", "dt > 0");
    require(c["solver"]["horizon"].get<double>() > 0.0, "solver.horizon", "horizon > 0");
    const double frac = c["solver"]["dealias_fraction"].get<double>();
    require(frac > 0.0 && frac <= 1.0, "solver.dealias_fraction", "in (0, 1]");
    require(c["solver"]["record_every"].get<int>() >= 1, "solver.record_every", ">= 1");
    const std::string eq = c["solver"]["equation"].get<std::string>();
    require(eq == "kdv" || eq == "scaled-ilw" || eq == "low-frequency" ||
                eq == "coupled-low-residual",
            "solver.equation", "one of kdv|scaled-ilw|low-frequency|coupled-low-residual");

    require(c["converge"]["s"].get<double>() >= 0.0, "converge.s", "s >= 0");
    require(c["equicont"]["s"].get<double>() >= 0.0, "equicont.s", "s >= 0");

    const double idelta = c["instability"]["delta"].get<double>();
    require(idelta > 0.0 && idelta <= 1.0, "instability.delta", "in (0, 1]");
    require(c["instability"]["t"].get<double>() != 0.0, "instability.t", "nonzero");
    require(c["instability"]["theta"].get<double>() > 0.0, "instability.theta", "theta > 0");

    require(c["fd_check"]["delta"].get<double>() > 0.0, "fd_check.delta", "delta > 0");
    require(c["fd_check"]["t"].get<double>() > 0.0, "fd_check.t", "t > 0");
}

EquationKind parse_kind(const std::string& name) {
    if (name == "kdv") return EquationKind::kdv;
    if (name == "scaled-ilw") return EquationKind::scaled_ilw;
    if (name == "low-frequency") return EquationKind::low_frequency;
    if (name == "coupled-low-residual") return EquationKind::coupled_low_residual;
    throw ConfigError("unknown equation '" + name + "'");
}

} // namespace

double ResolvedConfig::number(const std::string& section, const std::string& key) const {
    return values.at(section).at(key).get<double>();
}

std::string ResolvedConfig::text(const std::string& section, const std::string& key) const {
    return values.at(section).at(key).get<std::string>();
}

std::vector<double> ResolvedConfig::numbers(const std::string& section,
                                            const std::string& key) const {
    return values.at(section).at(key).get<std::vector<double>>();
}

ResolvedConfig parse_config_text(const std::string& text) {
    json user = json::object();
    std::string stripped = text;
    stripped.erase(0, stripped.find_first_not_of(" \t\r\n"));
    if (!stripped.empty()) {
        try {
            user = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!user.is_object()) throw ConfigError("config root must be a JSON object");
    }
    json resolved = default_config();
    merge_checked(resolved, user, "");
    validate(resolved);
    return ResolvedConfig{resolved};
}

ResolvedConfig parse_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not found: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize_config(const ResolvedConfig& config) { return config.values.dump(2); }

uint64_t fnv1a64_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot digest " + path.string());
    uint64_t h = 0xcbf29ce484222325ull;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
        if (in.eof()) break;
    }
    return h;
}

std::string digest_hex(uint64_t digest) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void RunManifest::add_output(const fs::path& path) {
    outputs.emplace_back(path.string(), digest_hex(fnv1a64_file(path)));
}

void RunManifest::write(const fs::path& path) const {
    json j;
    j["command"] = command;
    j["config"] = resolved_config;
    j["seed"] = seed;
    j["threads"] = threads;
    j["tool_version"] = tool_version;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    j["fftw_plan"] = "estimate"; // pinned for bitwise reproducibility
    j["outputs"] = json::array();
    for (const auto& [p, d] : outputs) j["outputs"].push_back({{"path", p}, {"digest", d}});
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest " + path.string());
    out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

namespace {

RealGrid grid_from(const ResolvedConfig& c) {
    return RealGrid(c.number("grid", "box_length"),
                    static_cast<int>(c.number("grid", "mode_count")));
}

SolverConfig solver_from(const ResolvedConfig& c) {
    SolverConfig config(grid_from(c), DepthParameter(c.number("solver", "delta")),
                        c.number("solver", "dt"), c.number("solver", "horizon"));
    config.dealias_fraction = c.number("solver", "dealias_fraction");
    config.record_every = static_cast<int>(c.number("solver", "record_every"));
    config.linear_only = c.values["solver"]["linear_only"].get<bool>();
    return config;
}

SpectralField cosine_band_field(const RealGrid& grid, const std::vector<double>& modes,
                                double amplitude) {
    SpectralField f(grid);
    const double half = 0.5 * amplitude * grid.box_length();
    for (double m : modes) {
        const int k = static_cast<int>(std::lround(m));
        if (k <= 0 || k > grid.mode_count() / 2)
            throw ConfigError("band mode index out of grid range");
        f[k] += half;
        if (k < grid.mode_count() / 2) f[grid.mode_count() - k] += half;
    }
    return f;
}

int exit_code_for(const ExperimentReport& report) { return report.all_pass() ? 0 : 2; }

int run_resonance_sweep(const ResolvedConfig& c, const RunOptions& opt, RunManifest& manifest) {
    ExperimentReport report;
    report.study = "resonance-sweep";
    report.inputs = c.values["resonance_sweep"];

    const auto& rs = c.values["resonance_sweep"];
    const auto deltas = rs["deltas"].get<std::vector<double>>();
    const double tol = rs["tol"].get<double>();

    const auto ids = identity_sweep(rs["identity_samples"].get<int>(), opt.seed);
    report.measurements["identity"] = {{"max_rel_err_kdv", ids.max_rel_err_kdv},
                                       {"max_rel_err_bo", ids.max_rel_err_bo},
                                       {"samples", ids.samples}};
    report.add_verdict("kdv-identity", ids.max_rel_err_kdv < 1e-12, ids.max_rel_err_kdv, 1e-12, "<");
    report.add_verdict("bo-identity", ids.max_rel_err_bo < 1e-12, ids.max_rel_err_bo, 1e-12, "<");

    const auto sd = series_direct_sweep(rs["samples_per_delta"].get<int>(), deltas, tol, opt.seed + 1);
    report.measurements["series_direct"] = {{"max_rel_disagreement", sd.max_rel_disagreement},
                                            {"samples", sd.samples},
                                            {"skipped_cancellation", sd.skipped_cancellation}};
    report.add_verdict("series-direct", sd.max_rel_disagreement < 1e-8, sd.max_rel_disagreement,
                       1e-8, "<");

    const auto bx = correction_ratio_sweep(rs["correction_ratio_samples"].get<int>(), opt.seed + 2);
    report.measurements["correction_ratio"] = {{"min_ratio", bx.min_ratio}, {"max_ratio", bx.max_ratio}};
    report.add_verdict("correction-ratio-window", bx.max_ratio >= 5.0 - 1e-9 && bx.max_ratio <= 5.68,
                       bx.max_ratio, 5.68, "in [5, 5.68]");

    const auto lm = comparability_sweep(rs["samples_per_delta"].get<int>(), deltas, opt.seed + 3,
                                  rs["csv_rows"].get<int>());
    double low_c = 1e300, low_C = 0.0, high_c = 1e300, high_C = 0.0;
    for (size_t i = 0; i < lm.deltas.size(); ++i) {
        low_c = std::min(low_c, lm.low[i].min_ratio);
        low_C = std::max(low_C, lm.low[i].max_ratio);
        high_c = std::min(high_c, lm.high[i].min_ratio);
        high_C = std::max(high_C, lm.high[i].max_ratio);
    }
    report.measurements["comparability"] = {{"low", {{"c", low_c}, {"C", low_C}}},
                                      {"high", {{"c", high_c}, {"C", high_C}}}};
    report.add_verdict("comparability-low-spread", low_C / low_c <= 10.0, low_C / low_c, 10.0, "<=");
    report.add_verdict("comparability-high-spread", high_C / high_c <= 10.0, high_C / high_c, 10.0, "<=");

    const auto jac = jacobian_sweep(rs["jacobian_samples"].get<int>(), DepthParameter(0.25),
                                    opt.seed + 4);
    report.measurements["jacobian"] = {{"sign_mismatches", jac.sign_mismatches},
                                       {"max_fd_rel_err", jac.max_fd_rel_err},
                                       {"lower_bound_c", jac.lower_bound_c}};
    report.add_verdict("jacobian-sign", jac.sign_mismatches == 0, jac.sign_mismatches, 0, "==");
    report.add_verdict("jacobian-fd", jac.max_fd_rel_err < 1e-6, jac.max_fd_rel_err, 1e-6, "<");

    const fs::path csv = fs::path(opt.out_dir) / "resonance_rows.csv";
    {
        std::ofstream out(csv);
        out << "regime,delta,xi,xi1,xi2,ratio\n";
        for (const SweepRow& r : lm.rows)
            out << r.regime << "," << format_full(r.delta) << "," << format_full(r.xi) << ","
                << format_full(r.xi1) << "," << format_full(r.xi2) << "," << format_full(r.ratio)
                << "\n";
    }
    const fs::path rp = fs::path(opt.out_dir) / "report.json";
    report.write_json(rp);
    manifest.add_output(csv);
    manifest.add_output(rp);
    return exit_code_for(report);
}

int run_evolve(const ResolvedConfig& c, const RunOptions& opt, RunManifest& manifest) {
    const SolverConfig config = solver_from(c);
    const EquationKind kind = parse_kind(c.text("solver", "equation"));
    const SpectralField phi = gaussian_profile(config.grid, c.number("profile", "amplitude"),
                                               c.number("profile", "width"));
    const TrajectoryRecord record = evolve(kind, SystemState(phi), config);
    export_trajectory(record, config, kind, opt.out_dir.string());
    manifest.add_output(fs::path(opt.out_dir) / "snapshots.bin");
    manifest.add_output(fs::path(opt.out_dir) / "diagnostics.csv");
    manifest.add_output(fs::path(opt.out_dir) / "trajectory.json");
    return 0;
}

int run_converge_cmd(const ResolvedConfig& c, const RunOptions& opt, RunManifest& manifest) {
    ConvergenceStudySpec spec(grid_from(c), c.numbers("converge", "delta_grid"));
    spec.amplitude = c.number("profile", "amplitude");
    spec.width = c.number("profile", "width");
    spec.s = c.number("converge", "s");
    spec.horizon = c.number("solver", "horizon");
    spec.dt = c.number("solver", "dt");
    spec.record_every = static_cast<int>(c.number("solver", "record_every"));
    spec.decrease_slack = c.number("converge", "decrease_slack");
    spec.final_ratio = c.number("converge", "final_ratio");

    const ExperimentReport report = run_convergence(spec, opt.threads);

    std::vector<double> xs, ys;
    std::vector<std::vector<double>> rows;
    for (const auto& row : report.measurements["errors"]) {
        xs.push_back(row["delta"].get<double>());
        ys.push_back(row["error"].get<double>());
        rows.push_back({xs.back(), ys.back()});
    }
    const fs::path csv = fs::path(opt.out_dir) / "convergence.csv";
    write_csv(csv, {"delta", "sup_t_error"}, rows);
    const fs::path series = fs::path(opt.out_dir) / "convergence.xy";
    write_series(series, xs, ys);
    const fs::path rp = fs::path(opt.out_dir) / "report.json";
    report.write_json(rp);
    manifest.add_output(csv);
    manifest.add_output(series);
    manifest.add_output(rp);
    return exit_code_for(report);
}

int run_equicont_cmd(const ResolvedConfig& c, const RunOptions& opt, RunManifest& manifest) {
    EquicontinuityStudySpec spec(grid_from(c), c.numbers("equicont", "delta_grid"),
                                 c.numbers("equicont", "N_grid"));
    spec.amplitude = c.number("profile", "amplitude");
    spec.width = c.number("profile", "width");
    spec.s = c.number("equicont", "s");
    spec.horizon = c.number("solver", "horizon");
    spec.dt = c.number("solver", "dt");
    spec.record_every = static_cast<int>(c.number("solver", "record_every"));
    spec.geometric_ratio = c.number("equicont", "geometric_ratio");
    spec.final_threshold = c.number("equicont", "final_threshold");
    spec.linear_only = c.values["solver"]["linear_only"].get<bool>();

    const ExperimentReport report = run_equicontinuity(spec, opt.threads);

    const auto sup = report.measurements["sup_over_delta"].get<std::vector<double>>();
    const fs::path series = fs::path(opt.out_dir) / "equicontinuity.xy";
    write_series(series, spec.N_grid, sup);
    std::vector<std::vector<double>> rows;
    for (const auto& entry : report.measurements["tail_matrix"]) {
        std::vector<double> row{entry["delta"].get<double>()};
        for (double v : entry["tails"].get<std::vector<double>>()) row.push_back(v);
        rows.push_back(row);
    }
    std::vector<std::string> header{"delta"};
    for (double N : spec.N_grid) header.push_back("tail_N_" + std::to_string(N));
    const fs::path csv = fs::path(opt.out_dir) / "equicontinuity.csv";
    write_csv(csv, header, rows);
    const fs::path rp = fs::path(opt.out_dir) / "report.json";
    report.write_json(rp);
    manifest.add_output(series);
    manifest.add_output(csv);
    manifest.add_output(rp);
    return exit_code_for(report);
}

int run_instability_cmd(const ResolvedConfig& c, const RunOptions& opt, RunManifest& manifest) {
    InstabilityWitnessSpec spec;
    spec.s = c.number("instability", "s");
    spec.delta = c.number("instability", "delta");
    spec.t = c.number("instability", "t");
    spec.theta = c.number("instability", "theta");
    spec.N_grid = c.numbers("instability", "N_grid");
    spec.quadrature_points = static_cast<int>(c.number("instability", "quadrature_points"));
    spec.slope_tolerance = c.number("instability", "slope_tolerance");
    spec.gap_exponent_tolerance = c.number("instability", "gap_exponent_tolerance");

    const ExperimentReport report = run_instability(spec, opt.threads);

    std::vector<std::vector<double>> rows;
    std::vector<double> xs, ys;
    for (const auto& p : report.measurements["profiles"]) {
        rows.push_back({p["N"].get<double>(), p["alpha"].get<double>(),
                        p["norm_full"].get<double>(), p["norm_surrogate"].get<double>(),
                        p["gap_rel"].get<double>(), p["phi_norm"].get<double>()});
        xs.push_back(std::log(p["N"].get<double>()));
        ys.push_back(std::log(p["norm_full"].get<double>()));
    }
    const fs::path csv = fs::path(opt.out_dir) / "instability.csv";
    write_csv(csv, {"N", "alpha", "norm_full", "norm_surrogate", "gap_rel", "phi_norm"}, rows);
    const fs::path series = fs::path(opt.out_dir) / "instability_loglog.xy";
    write_series(series, xs, ys);
    const fs::path rp = fs::path(opt.out_dir) / "report.json";
    report.write_json(rp);
    manifest.add_output(csv);
    manifest.add_output(series);
    manifest.add_output(rp);
    return exit_code_for(report);
}

int run_fd_check_cmd(const ResolvedConfig& c, const RunOptions& opt, RunManifest& manifest) {
    const RealGrid grid = grid_from(c);
    SolverConfig config(grid, DepthParameter(c.number("fd_check", "delta")),
                        c.values["fd_check"]["dt"].get<double>(), c.number("fd_check", "t"));
    SpectralField phi = cosine_band_field(grid, c.numbers("fd_check", "low_modes"),
                                          c.values["fd_check"]["low_amplitude"].get<double>());
    const SpectralField high = cosine_band_field(grid, c.numbers("fd_check", "high_modes"),
                                                 c.values["fd_check"]["high_amplitude"].get<double>());
    for (int i = 0; i < phi.size(); ++i) phi[i] += high[i];

    GateauxCrosscheckSpec spec(config, phi, c.number("fd_check", "t"),
                               c.numbers("fd_check", "epsilons"));
    spec.time_panels = static_cast<int>(c.values["fd_check"]["time_panels"].get<double>());

    const ExperimentReport report = gateaux_fd_crosscheck(spec);

    const auto eps = c.numbers("fd_check", "epsilons");
    const auto disc = report.measurements["discrepancies"].get<std::vector<double>>();
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < eps.size() && i < disc.size(); ++i) rows.push_back({eps[i], disc[i]});
    const fs::path csv = fs::path(opt.out_dir) / "discrepancy.csv";
    write_csv(csv, {"epsilon", "l2_discrepancy"}, rows);
    const fs::path series = fs::path(opt.out_dir) / "discrepancy.xy";
    write_series(series, eps, disc);

    const fs::path rp = fs::path(opt.out_dir) / "report.json";
    report.write_json(rp);
    manifest.add_output(csv);
    manifest.add_output(series);
    manifest.add_output(rp);
    return exit_code_for(report);
}

int run_selftest(const ResolvedConfig&, const RunOptions& opt, RunManifest& manifest) {
    ExperimentReport report;
    report.study = "selftest";
    auto check = [&](const std::string& name, bool ok, double value = 0.0) {
        report.add_verdict(name, ok, value, 0.0, "trivial-example");
    };

    // spectral core basics
    const RealGrid grid(32.0, 128);
    std::vector<double> ones(128, 1.0);
    const SpectralField constant = forward_transform(grid, ones);
    check("constant-transform", std::abs(constant[0] - cplx(32.0, 0.0)) < 1e-9 * 32.0);
    const SpectralField low = project_low(constant, grid.max_frequency());
    check("full-band-projector", low[0] == constant[0]);

    // symbols
    check("cmi-at-zero", coth_minus_inverse(0.0) == 0.0);
    check("L-at-zero", L_delta(DepthParameter(0.7), 0.0) == 0.0);
    check("propagator-identity", std::abs(propagator_phase(DepthParameter(0.3), 0.0, 5.0) -
                                          cplx(1.0, 0.0)) == 0.0);

    // resonance
    check("xi-kdv-collapse", xi_kdv({1.0, -1.0}) == 0.0);
    check("xi-kdv-example", std::abs(xi_kdv({1.0, 2.0}) - 18.0) < 1e-12);
    check("xi-bo-example", std::abs(std::abs(xi_bo({1.0, 3.0})) - 6.0) < 1e-12);
    check("correction-ratio-corner", std::abs(jacobian_correction_ratio(DepthParameter(0.5), {0.0, 0.0}, 1) - 5.0) < 1e-12);

    // dynamics
    SolverConfig config(RealGrid(32.0, 64), DepthParameter(0.5), 0.01, 0.05);
    const TrajectoryRecord zero_run =
        evolve(EquationKind::low_frequency, SystemState(SpectralField(config.grid)), config);
    check("zero-data-trajectory", l2_drift(zero_run).value == 0.0);

    // witness
    InstabilityWitnessSpec wspec;
    wspec.t = 1e-9; // effectively the t = 0 degenerate profile
    wspec.N_grid = {1e3};
    const BandProfile p = gateaux_second_derivative_quadrature(wspec, 1e3);
    check("witness-linear-in-t", p.norm_full < 1e-6);

    const fs::path rp = fs::path(opt.out_dir) / "report.json";
    report.write_json(rp);
    manifest.add_output(rp);
    return exit_code_for(report);
}

} // namespace

int dispatch(const std::string& subcommand, const ResolvedConfig& config,
             const RunOptions& options) {
    RunOptions opt = options;
    if (const char* env = std::getenv("ILW_THREADS")) opt.threads = std::atoi(env);
    if (opt.threads < 1) opt.threads = 1;
    fs::create_directories(opt.out_dir);

    RunManifest manifest;
    manifest.command = subcommand;
    manifest.resolved_config = config.values;
    manifest.seed = opt.seed;
    manifest.threads = opt.threads;
    manifest.started_at = timestamp_utc();

    int code = 1;
    try {
        if (subcommand == "resonance-sweep")
            code = run_resonance_sweep(config, opt, manifest);
        else if (subcommand == "evolve")
            code = run_evolve(config, opt, manifest);
        else if (subcommand == "converge")
            code = run_converge_cmd(config, opt, manifest);
        else if (subcommand == "equicont")
            code = run_equicont_cmd(config, opt, manifest);
        else if (subcommand == "instability")
            code = run_instability_cmd(config, opt, manifest);
        else if (subcommand == "fd-check")
            code = run_fd_check_cmd(config, opt, manifest);
        else if (subcommand == "selftest")
            code = run_selftest(config, opt, manifest);
        else
            throw ConfigError("unknown subcommand '" + subcommand + "'");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        manifest.finished_at = timestamp_utc();
        manifest.write(fs::path(opt.out_dir) / "manifest.json");
        return 1;
    }

    manifest.finished_at = timestamp_utc();
    manifest.write(fs::path(opt.out_dir) / "manifest.json");
    return code;
}

} // namespace ilw
