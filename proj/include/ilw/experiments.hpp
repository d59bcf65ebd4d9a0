#pragma once

#include "ilw/dynamics.hpp"
#include "ilw/report.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace ilw {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when the finite-difference amplitudes are too large for the
/// quadratic regime (discrepancy slope below 0.5).
struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Named analytic initial profiles (sampled onto a grid when a study runs).
SpectralField gaussian_profile(const RealGrid& grid, double amplitude, double width);

// ---------------------------------------------------------------------------
// Shallow-water convergence of the low-frequency dynamics to KdV.
// ---------------------------------------------------------------------------

struct ConvergenceStudySpec {
    RealGrid grid;
    double amplitude = 1.0;
    double width = 1.0; // gaussian width
    double s = 0.0;     // Sobolev index (>= 0)
    double horizon = 1.0;
    double dt = 2e-3;
    int record_every = 10;
    std::vector<double> delta_grid; // strictly decreasing
    double decrease_slack = 1.20;   // allowed non-monotonicity factor
    double final_ratio = 0.05;      // E(delta_min) < final_ratio * E(delta_max)

    ConvergenceStudySpec(const RealGrid& g, std::vector<double> deltas)
        : grid(g), delta_grid(std::move(deltas)) {}
};

/// For each delta: solve the low-frequency system from the projected data and
/// KdV from the full data, and record E(delta) = sup over recorded snapshots
/// of the H^s distance. Verdicts: decrease up to the slack factor, and the
/// final/initial ratio. A blown-up run is marked failed; the study continues.
ExperimentReport run_convergence(const ConvergenceStudySpec& spec, int threads = 1);

// ---------------------------------------------------------------------------
// Uniform-in-delta equicontinuity tails of the low-frequency flow.
// ---------------------------------------------------------------------------

struct EquicontinuityStudySpec {
    RealGrid grid;
    double amplitude = 1.0;
    double width = 1.0;
    double s = 0.0;
    double horizon = 1.0;
    double dt = 2e-3;
    int record_every = 10;
    std::vector<double> delta_grid; // includes 0 for the KdV member
    std::vector<double> N_grid;     // increasing cutoffs
    double geometric_ratio = 0.5;   // frozen reference decay per N step
    double final_threshold = 1e-8;  // sup_delta tail at the largest N
    bool linear_only = false;

    EquicontinuityStudySpec(const RealGrid& g, std::vector<double> deltas, std::vector<double> Ns)
        : grid(g), delta_grid(std::move(deltas)), N_grid(std::move(Ns)) {}
};

/// Tail matrix tau(N, delta) = sup_t ||P_N^perp v_delta(t)||_{H^s}; checks
/// that sup_delta tau(N, .) decays at least geometrically along the N grid
/// and ends below the threshold.
ExperimentReport run_equicontinuity(const EquicontinuityStudySpec& spec, int threads = 1);

// ---------------------------------------------------------------------------
// Mesh-free second-derivative witness on the band I1 + I2.
// ---------------------------------------------------------------------------

struct InstabilityWitnessSpec {
    double s = 0.0;
    double delta = 0.1; // in (0, 1]
    double t = 0.1;     // nonzero
    double theta = 0.1; // small positive
    std::vector<double> N_grid;
    int quadrature_points = 32;
    double slope_tolerance = 0.05;
    double gap_exponent_tolerance = 0.10;

    /// alpha(N) = delta * N^{-1-theta}: the band-width scaling, taken with
    /// constant exactly 1.
    double alpha(double N) const;
    void validate() const; // throws std::invalid_argument on violated invariants
};

/// Band profile of the second derivative of the residual solution map in the
/// data amplitude, restricted to I1 + I2 and computed by direct quadrature of
/// the oscillatory kernel (no spatial grid). The surrogate replaces the
/// kernel by its small-phase limit i t. Band coordinates are offsets from N
/// so the geometry survives N up to 1e6 and beyond in doubles.
struct BandProfile {
    double N = 0.0;
    double alpha = 0.0;
    std::vector<double> eta;        // xi - N on the band [alpha, 3 alpha]
    std::vector<cplx> full;         // quadrature path
    std::vector<cplx> surrogate;    // small-phase path
    double norm_full = 0.0;         // (int <xi>^{2s} |.|^2 dxi)^{1/2} over the band
    double norm_surrogate = 0.0;
    double gap_rel = 0.0;           // ||full - surrogate|| / ||surrogate||
    double phi_sobolev_norm = 0.0;  // closed-form H^s norm of the witness data
};

BandProfile gateaux_second_derivative_quadrature(const InstabilityWitnessSpec& spec, double N);

/// Runs the witness across the N grid, fits log(norm) against log(N), and
/// checks the slope against (1-theta)/2, the surrogate gap exponent against
/// -theta, and the data norm against [1/2, 4].
ExperimentReport run_instability(const InstabilityWitnessSpec& spec, int threads = 1);

// ---------------------------------------------------------------------------
// Grid-based cross-check of the explicit second-derivative formula.
// ---------------------------------------------------------------------------

struct GateauxCrosscheckSpec {
    SolverConfig config;
    SpectralField phi;            // band-limited direction on the grid
    double t;                     // evaluation time
    std::vector<double> epsilons; // decreasing amplitudes
    int time_panels = 48;         // composite quadrature panels for the Duhamel integrals
    double slope_min = 0.8, slope_max = 1.2;

    GateauxCrosscheckSpec(const SolverConfig& c, SpectralField direction, double t_,
                          std::vector<double> eps)
        : config(c), phi(std::move(direction)), t(t_), epsilons(std::move(eps)) {}
};

/// The three Duhamel integrals of the second derivative (squares and cross
/// products of the projected linear flows), evaluated by composite
/// Gauss-Legendre in time; returns the full second derivative (twice the
/// quadratic Taylor coefficient) at time t, plus each term's L2 size.
struct DuhamelSecondDerivative {
    SpectralField value;
    double term_res_sq = 0.0;
    double term_cross = 0.0;
    double term_low_sq = 0.0;
};
DuhamelSecondDerivative gateaux_second_derivative_duhamel(const DepthParameter& depth, double t,
                                                          const SpectralField& phi,
                                                          const SolverConfig& config,
                                                          int time_panels);

/// Finite-difference second derivative (v_res(2 eps) - 2 v_res(eps)) / eps^2
/// from coupled solves against the Duhamel quadrature; the discrepancy must
/// shrink linearly in eps (Richardson slope within [slope_min, slope_max]).
ExperimentReport gateaux_fd_crosscheck(const GateauxCrosscheckSpec& spec);

// ---------------------------------------------------------------------------

/// Deterministic fan-out helper: applies fn to every index, possibly in
/// parallel, and joins results in index order.
void parallel_for_indices(int count, int threads, const std::function<void(int)>& fn);

} // namespace ilw
