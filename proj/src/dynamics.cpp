#include "ilw/dynamics.hpp"

#include "ilw/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

namespace ilw {

namespace {

// ETDRK4 stage-weight brackets, each equal to z^{-3} times an entire
// function of z = dt * (linear symbol). Taylor coefficients of the brackets:
//   alpha: -4 - z + e^z (4 - 3z + z^2)   -> a_k = 4/k! - 3/(k-1)! + 1/(k-2)!
//   beta:   2 + z + e^z (z - 2)          -> b_k = 1/(k-1)! - 2/k!
//   gamma: -4 - 3z - z^2 + e^z (4 - z)   -> g_k = 4/k! - 1/(k-1)!
// The series start at k = 3; they are used for |z| < 0.75 where the direct
// formulas lose digits to cancellation, and the direct formulas elsewhere.
constexpr int kPhiTerms = 26;
constexpr double kPhiSwitch = 0.75;

struct PhiWeights {
    cplx e_full, e_half, q, alpha, beta, gamma;
};

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

PhiWeights phi_weights(double symbol, double dt) {
    const cplx z(0.0, dt * symbol);
    PhiWeights w;
    w.e_full = std::exp(z);
    w.e_half = std::exp(0.5 * z);

    if (std::abs(z) < kPhiSwitch) {
        cplx q = 0.0, a = 0.0, b = 0.0, g = 0.0;
        for (int k = kPhiTerms; k >= 3; --k) {
            const double fk = factorial(k), fk1 = factorial(k - 1), fk2 = factorial(k - 2);
            a = a * z + (4.0 / fk - 3.0 / fk1 + 1.0 / fk2);
            b = b * z + (1.0 / fk1 - 2.0 / fk);
            g = g * z + (4.0 / fk - 1.0 / fk1);
        }
        for (int k = kPhiTerms; k >= 1; --k)
            q = q * z + 1.0 / (std::pow(2.0, k) * factorial(k));
        w.q = dt * q;
        w.alpha = dt * a;
        w.beta = dt * b;
        w.gamma = dt * g;
    } else {
        const cplx z3 = z * z * z;
        w.q = dt * (w.e_half - 1.0) / z;
        w.alpha = dt * (-4.0 - z + w.e_full * (4.0 - 3.0 * z + z * z)) / z3;
        w.beta = dt * (2.0 + z + w.e_full * (z - 2.0)) / z3;
        w.gamma = dt * (-4.0 - 3.0 * z - z * z + w.e_full * (4.0 - z)) / z3;
    }
    return w;
}

bool in_band(double xi, double cutoff) { return std::abs(xi) <= cutoff; }

void check_dealiased(const SpectralField& f, double retained, const char* who) {
    double total = 0.0, above = 0.0;
    const RealGrid& grid = f.grid();
    for (int i = 0; i < grid.mode_count(); ++i) {
        const double m = std::norm(f[i]);
        total += m;
        if (!in_band(grid.frequency(i), retained)) above += m;
    }
    if (total > 0.0 && above > 1e-13 * total)
        throw AliasingError(std::string(who) + ": input carries energy above the retained band");
}

// d/dx (f g) in Fourier space, product formed physically, dealiased.
SpectralField dx_product(const SpectralField& f, const SpectralField& g, double retained) {
    const RealGrid& grid = f.grid();
    std::vector<double> pf = inverse_transform(f);
    std::vector<double> pg = inverse_transform(g);
    for (size_t j = 0; j < pf.size(); ++j) pf[j] *= pg[j];
    SpectralField out = forward_transform(grid, pf);
    for (int i = 0; i < grid.mode_count(); ++i) {
        const double xi = grid.frequency(i);
        out[i] = in_band(xi, retained) ? out[i] * cplx(0.0, xi) : cplx(0.0, 0.0);
    }
    return out;
}

bool state_finite(const SystemState& s) {
    auto ok = [](const SpectralField& f) {
        for (const cplx& c : f.coeffs()) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
            if (std::abs(c.real()) > 1e12 || std::abs(c.imag()) > 1e12) return false;
        }
        return true;
    };
    if (!ok(s.low)) return false;
    if (s.res && !ok(*s.res)) return false;
    return true;
}

SpectralField band_limit(const SpectralField& f, double cutoff) {
    SpectralField out = f;
    const RealGrid& grid = f.grid();
    for (int i = 0; i < grid.mode_count(); ++i)
        if (!in_band(grid.frequency(i), cutoff)) out[i] = 0.0;
    return out;
}

} // namespace

std::string equation_name(EquationKind k) {
    switch (k) {
        case EquationKind::kdv: return "kdv";
        case EquationKind::scaled_ilw: return "scaled-ilw";
        case EquationKind::low_frequency: return "low-frequency";
        case EquationKind::coupled_low_residual: return "coupled-low-residual";
    }
    return "?";
}

double SolverConfig::low_band_cutoff() const {
    return delta.is_kdv() ? std::numeric_limits<double>::infinity() : 1.0 / delta.delta;
}

SpectralField SystemState::total() const {
    if (!res) return low;
    SpectralField sum = low;
    for (int i = 0; i < sum.size(); ++i) sum[i] += (*res)[i];
    return sum;
}

SystemState nonlinear_rhs(EquationKind kind, const SystemState& state,
                          const SolverConfig& config) {
    const double retained = config.retained_band();
    const double low_cut = config.low_band_cutoff();
    const RealGrid& grid = config.grid;

    check_dealiased(state.low, retained, "nonlinear_rhs");
    if (state.res) check_dealiased(*state.res, retained, "nonlinear_rhs");

    switch (kind) {
        case EquationKind::kdv:
        case EquationKind::scaled_ilw:
            return SystemState(dx_product(state.low, state.low, retained));

        case EquationKind::low_frequency: {
            // Support-enforcing form: the square of the projected field,
            // projected again, so the low band is an exact invariant.
            SpectralField inner = band_limit(state.low, low_cut);
            SpectralField rhs = dx_product(inner, inner, retained);
            for (int i = 0; i < grid.mode_count(); ++i)
                if (!in_band(grid.frequency(i), low_cut)) rhs[i] = 0.0;
            return SystemState(std::move(rhs));
        }

        case EquationKind::coupled_low_residual: {
            if (!state.res)
                throw std::invalid_argument("nonlinear_rhs: coupled kind needs a field pair");
            const SpectralField& vlow = state.low;
            const SpectralField& vres = *state.res;
            SpectralField low_sq = dx_product(vlow, vlow, retained);
            SpectralField res_sq = dx_product(vres, vres, retained);
            SpectralField cross = dx_product(vres, vlow, retained);

            SpectralField low_rhs(grid);
            SpectralField res_rhs(grid);
            for (int i = 0; i < grid.mode_count(); ++i) {
                const bool low_part = in_band(grid.frequency(i), low_cut);
                low_rhs[i] = low_part ? low_sq[i] : cplx(0.0, 0.0);
                res_rhs[i] = res_sq[i] + 2.0 * cross[i] + (low_part ? cplx(0.0, 0.0) : low_sq[i]);
            }
            return SystemState(std::move(low_rhs), std::move(res_rhs));
        }
    }
    throw std::logic_error("nonlinear_rhs: unknown kind");
}

EtdStepper::EtdStepper(EquationKind kind, const SolverConfig& config)
    : kind_(kind), config_(config) {
    const MultiplierTable table(config.grid, config.delta);
    const int n = config.grid.mode_count();
    e_full_.resize(n);
    e_half_.resize(n);
    q_.resize(n);
    alpha_.resize(n);
    beta_.resize(n);
    gamma_.resize(n);
    for (int i = 0; i < n; ++i) {
        const PhiWeights w = phi_weights(table.value(i), config.dt);
        e_full_[i] = w.e_full;
        e_half_[i] = w.e_half;
        q_[i] = w.q;
        alpha_[i] = w.alpha;
        beta_[i] = w.beta;
        gamma_[i] = w.gamma;
    }
}

SystemState EtdStepper::linear_step(const SystemState& state, double dt) const {
    const MultiplierTable table(config_.grid, config_.delta);
    SystemState out = state;
    auto apply = [&](SpectralField& f) {
        for (int i = 0; i < f.size(); ++i) {
            const double phase = dt * table.value(i);
            f[i] *= cplx(std::cos(phase), std::sin(phase));
        }
    };
    apply(out.low);
    if (out.res) apply(*out.res);
    return out;
}

SystemState EtdStepper::step(const SystemState& state) const {
    if (config_.linear_only) return linear_step(state, config_.dt);

    auto axpy = [&](const std::vector<cplx>& coef, const SystemState& base,
                    const SystemState& incr) {
        SystemState out = base;
        for (int i = 0; i < out.low.size(); ++i)
            out.low[i] = coef[i] * base.low[i];
        if (out.res)
            for (int i = 0; i < out.low.size(); ++i)
                (*out.res)[i] = coef[i] * (*base.res)[i];
        for (int i = 0; i < out.low.size(); ++i) out.low[i] += q_[i] * incr.low[i];
        if (out.res)
            for (int i = 0; i < out.low.size(); ++i) (*out.res)[i] += q_[i] * (*incr.res)[i];
        return out;
    };

    const SystemState n_u = nonlinear_rhs(kind_, state, config_);
    const SystemState a = axpy(e_half_, state, n_u);
    const SystemState n_a = nonlinear_rhs(kind_, a, config_);
    const SystemState b = axpy(e_half_, state, n_a);
    const SystemState n_b = nonlinear_rhs(kind_, b, config_);

    SystemState two_nb_minus_nu = n_b;
    for (int i = 0; i < two_nb_minus_nu.low.size(); ++i)
        two_nb_minus_nu.low[i] = 2.0 * n_b.low[i] - n_u.low[i];
    if (two_nb_minus_nu.res)
        for (int i = 0; i < two_nb_minus_nu.low.size(); ++i)
            (*two_nb_minus_nu.res)[i] = 2.0 * (*n_b.res)[i] - (*n_u.res)[i];
    const SystemState c = axpy(e_half_, a, two_nb_minus_nu);
    const SystemState n_c = nonlinear_rhs(kind_, c, config_);

    SystemState out = state;
    auto combine = [&](SpectralField& dst, const SpectralField& u, const SpectralField& nu,
                       const SpectralField& na, const SpectralField& nb,
                       const SpectralField& nc) {
        for (int i = 0; i < dst.size(); ++i)
            dst[i] = e_full_[i] * u[i] + alpha_[i] * nu[i] + 2.0 * beta_[i] * (na[i] + nb[i]) +
                     gamma_[i] * nc[i];
    };
    combine(out.low, state.low, n_u.low, n_a.low, n_b.low, n_c.low);
    if (out.res)
        combine(*out.res, *state.res, *n_u.res, *n_a.res, *n_b.res, *n_c.res);
    return out;
}

SystemState step(EquationKind kind, const SystemState& state, const SolverConfig& config) {
    SystemState out = EtdStepper(kind, config).step(state);
    if (!state_finite(out)) throw BlowUpError(config.dt, TrajectoryRecord{});
    return out;
}

namespace {

Diagnostics make_diagnostics(const SystemState& state, const SolverConfig& config, double t) {
    Diagnostics d;
    d.time = t;
    const SpectralField total = state.total();
    d.l2 = l2_norm(total);
    d.h1 = sobolev_norm(total, 1.0);
    d.mean = total[0];

    double energy = 0.0, retained = 0.0;
    const RealGrid& grid = config.grid;
    for (int i = 0; i < grid.mode_count(); ++i) {
        const double m = std::norm(total[i]);
        energy += m;
        if (in_band(grid.frequency(i), config.retained_band())) retained += m;
    }
    d.retained_energy_fraction = energy > 0.0 ? retained / energy : 1.0;

    double high = 0.0;
    for (int i = 0; i < grid.mode_count(); ++i)
        if (!in_band(grid.frequency(i), config.low_band_cutoff()))
            high += std::norm(state.low[i]);
    d.low_high_band_mass = high;
    return d;
}

} // namespace

TrajectoryRecord evolve(EquationKind kind, const SystemState& initial,
                        const SolverConfig& config) {
    const double retained = config.retained_band();
    const double low_cut = config.low_band_cutoff();

    SystemState state = initial;
    if (kind == EquationKind::coupled_low_residual && !state.coupled()) {
        SpectralField low = band_limit(initial.low, low_cut);
        SpectralField res = initial.low;
        for (int i = 0; i < res.size(); ++i) res[i] -= low[i];
        state = SystemState(std::move(low), std::move(res));
    } else if (kind != EquationKind::coupled_low_residual && state.coupled()) {
        throw std::invalid_argument("evolve: field pair passed to a scalar equation");
    }

    state.low = band_limit(state.low, retained);
    if (state.res) *state.res = band_limit(*state.res, retained);
    if (kind == EquationKind::low_frequency || kind == EquationKind::coupled_low_residual)
        state.low = band_limit(state.low, low_cut);

    const int steps = std::max(1, static_cast<int>(std::lround(config.horizon / config.dt)));
    const EtdStepper stepper(kind, config);

    TrajectoryRecord record;
    record.initial_boundary = boundary_mass(state.total());
    auto snapshot = [&](double t) {
        record.times.push_back(t);
        record.snapshots.push_back(state);
        record.diagnostics.push_back(make_diagnostics(state, config, t));
    };
    snapshot(0.0);

    for (int s = 1; s <= steps; ++s) {
        state = stepper.step(state);
        const double t = s * config.dt;
        if (!state_finite(state)) throw BlowUpError(t, std::move(record));
        if (s % config.record_every == 0 || s == steps) snapshot(t);
    }
    record.final_boundary = boundary_mass(record.snapshots.back().total());
    return record;
}

DriftResult l2_drift(const TrajectoryRecord& record) {
    if (record.diagnostics.empty()) return {};
    const double base = record.diagnostics.front().l2;
    DriftResult out;
    out.absolute = base == 0.0;
    for (const Diagnostics& d : record.diagnostics) {
        const double dev = std::abs(d.l2 - base);
        out.value = std::max(out.value, out.absolute ? dev : dev / base);
    }
    return out;
}

void export_trajectory(const TrajectoryRecord& record, const SolverConfig& config,
                       EquationKind kind, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    const fs::path bin_path = fs::path(out_dir) / "snapshots.bin";
    {
        std::ofstream bin(bin_path, std::ios::binary);
        for (const SystemState& s : record.snapshots) {
            auto dump = [&](const SpectralField& f) {
                bin.write(reinterpret_cast<const char*>(f.coeffs().data()),
                          static_cast<std::streamsize>(f.coeffs().size() * sizeof(cplx)));
            };
            dump(s.low);
            if (s.res) dump(*s.res);
        }
    }

    std::vector<std::vector<double>> rows;
    for (const Diagnostics& d : record.diagnostics)
        rows.push_back({d.time, d.l2, d.h1, d.mean.real(), d.mean.imag(),
                        d.retained_energy_fraction, d.low_high_band_mass});
    write_csv(fs::path(out_dir) / "diagnostics.csv",
              {"t", "l2", "h1", "mean_re", "mean_im", "retained_energy_fraction",
               "low_high_band_mass"},
              rows);

    nlohmann::json manifest;
    manifest["equation"] = equation_name(kind);
    manifest["grid"] = {{"box_length", config.grid.box_length()},
                        {"mode_count", config.grid.mode_count()}};
    manifest["delta"] = config.delta.delta;
    manifest["dt"] = config.dt;
    manifest["horizon"] = config.horizon;
    manifest["dealias_fraction"] = config.dealias_fraction;
    manifest["record_every"] = config.record_every;
    manifest["snapshots"] = record.size();
    manifest["fields_per_snapshot"] =
        (!record.snapshots.empty() && record.snapshots.front().coupled()) ? 2 : 1;
    manifest["layout"] = "complex128 coefficients, fft index order, fields consecutive";
    manifest["times"] = record.times;
    manifest["boundary_mass"] = {
        {"initial",
         {{"physical", record.initial_boundary.physical_fraction},
          {"spectral", record.initial_boundary.spectral_fraction}}},
        {"final",
         {{"physical", record.final_boundary.physical_fraction},
          {"spectral", record.final_boundary.spectral_fraction}}}};
    std::ofstream mj(fs::path(out_dir) / "trajectory.json");
    mj << manifest.dump(2) << "\n";
}

} // namespace ilw
