#pragma once

#include "ilw/resonance.hpp"
#include "ilw/spectral_field.hpp"
#include "ilw/symbols.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ilw {

/// Which evolution to run. LowFrequency keeps data and nonlinearity inside
/// {|xi| <= 1/delta}; CoupledLowResidual advances that system together with
/// the complementary residual equation. delta = 0 collapses every variant
/// onto KdV (full-band projector).
enum class EquationKind { kdv, scaled_ilw, low_frequency, coupled_low_residual };
std::string equation_name(EquationKind k);

struct SolverConfig {
    RealGrid grid;
    DepthParameter delta;
    double dt;
    double horizon;
    double dealias_fraction = 2.0 / 3.0; // retained band fraction per product
    int record_every = 1;
    bool linear_only = false; // drop the nonlinearity (testing/diagnostics)

    SolverConfig(const RealGrid& g, const DepthParameter& d, double dt_, double horizon_)
        : grid(g), delta(d), dt(dt_), horizon(horizon_) {
        if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt > 0 required");
        if (!(horizon > 0.0)) throw std::invalid_argument("SolverConfig: horizon > 0 required");
        if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
            throw std::invalid_argument("SolverConfig: dealias_fraction in (0,1] required");
    }

    /// |xi| kept when forming quadratic products.
    double retained_band() const { return dealias_fraction * grid.max_frequency(); }
    /// Cutoff of the low-frequency projector (infinite on the KdV branch).
    double low_band_cutoff() const;
};

/// Single field for scalar equations; low/residual pair for the coupled one.
struct SystemState {
    SpectralField low;
    std::optional<SpectralField> res;

    explicit SystemState(SpectralField f) : low(std::move(f)) {}
    SystemState(SpectralField l, SpectralField r) : low(std::move(l)), res(std::move(r)) {}

    bool coupled() const { return res.has_value(); }
    /// Physical total: low + res when coupled, low otherwise.
    SpectralField total() const;
};

struct AliasingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Diagnostics {
    double time = 0.0;
    double l2 = 0.0;
    double h1 = 0.0; // H^1 norm of the total
    cplx mean = 0.0;                      // xi = 0 coefficient of the total
    double retained_energy_fraction = 0.0; // within the dealias band
    double low_high_band_mass = 0.0;       // low component mass above 1/delta
};

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<SystemState> snapshots;
    std::vector<Diagnostics> diagnostics;
    BoundaryMassReport initial_boundary;
    BoundaryMassReport final_boundary;

    size_t size() const { return times.size(); }
};

/// Nonfinite or |coeff| > 1e12 during evolution. Carries the offending time
/// and whatever trajectory had been recorded up to that point.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(double t, TrajectoryRecord partial)
        : std::runtime_error("solution blew up at t = " + std::to_string(t)),
          time(t), partial_trajectory(std::move(partial)) {}
    double time;
    TrajectoryRecord partial_trajectory;
};

/// Duhamel forcing, in Fourier space, of the chosen equation:
///   kdv / scaled_ilw:  d/dx (v^2)
///   low_frequency:     P d/dx ((P v)^2)           (support-enforcing form)
///   coupled:           { P d/dx ((v_low)^2),
///                        d/dx (v_res^2) + 2 d/dx (v_res v_low)
///                        + P_perp d/dx ((v_low)^2) }
/// Products are formed in physical space; the result is dealiased. Throws
/// AliasingError when the input carries more than 1e-13 of its energy above
/// the retained band.
SystemState nonlinear_rhs(EquationKind kind, const SystemState& state, const SolverConfig& config);

/// Fourth-order exponential Runge-Kutta stepper: the linear flow enters
/// exactly through the propagator phases, only the nonlinearity is stepped.
class EtdStepper {
public:
    EtdStepper(EquationKind kind, const SolverConfig& config);

    SystemState step(const SystemState& state) const;
    /// One step of the pure linear flow with step `dt` (sign allowed).
    SystemState linear_step(const SystemState& state, double dt) const;

    const SolverConfig& config() const { return config_; }
    EquationKind kind() const { return kind_; }

private:
    EquationKind kind_;
    SolverConfig config_;
    std::vector<cplx> e_full_, e_half_;          // e^{z}, e^{z/2}
    std::vector<cplx> q_, alpha_, beta_, gamma_; // ETDRK4 stage weights
};

SystemState step(EquationKind kind, const SystemState& state, const SolverConfig& config);

/// Advance to the horizon (round(horizon/dt) steps), recording every
/// record_every-th state plus the endpoints. Initial data are projected onto
/// the retained band, and onto the low band for the low-frequency variants.
TrajectoryRecord evolve(EquationKind kind, const SystemState& initial, const SolverConfig& config);

/// Largest relative deviation of the total L2 norm from its initial value;
/// falls back to the absolute deviation (flagged) when the initial norm is 0.
struct DriftResult {
    double value = 0.0;
    bool absolute = false;
};
DriftResult l2_drift(const TrajectoryRecord& record);

/// Trajectory export: raw little-endian doubles (2n per field per snapshot)
/// plus a JSON manifest describing the layout, and a CSV diagnostics stream.
void export_trajectory(const TrajectoryRecord& record, const SolverConfig& config,
                       EquationKind kind, const std::string& out_dir);

} // namespace ilw
