#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ilw/dynamics.hpp"
#include "ilw/experiments.hpp"

#include <cmath>

using namespace ilw;

namespace {

constexpr double kPi = 3.14159265358979323846;

SpectralField cosine_mode(const RealGrid& grid, int k, double amplitude) {
    SpectralField f(grid);
    f[k] = 0.5 * amplitude * grid.box_length();
    f[grid.conjugate_index(k)] = f[k];
    return f;
}

double field_distance(const SpectralField& a, const SpectralField& b) {
    SpectralField d = a;
    for (int i = 0; i < d.size(); ++i) d[i] -= b[i];
    return l2_norm(d);
}

} // namespace

// ============================================================================
// nonlinear right-hand side
// ============================================================================

TEST_CASE("zero state has zero forcing for every kind") {
    const RealGrid grid(20.0, 64);
    SolverConfig config(grid, DepthParameter(0.5), 1e-2, 1.0);
    for (EquationKind kind : {EquationKind::kdv, EquationKind::scaled_ilw,
                              EquationKind::low_frequency}) {
        const SystemState rhs = nonlinear_rhs(kind, SystemState{SpectralField(grid)}, config);
        CHECK(l2_norm(rhs.low) == 0.0);
    }
    const SystemState pair{SpectralField(grid), SpectralField(grid)};
    const SystemState rhs = nonlinear_rhs(EquationKind::coupled_low_residual, pair, config);
    CHECK(l2_norm(rhs.low) == 0.0);
    CHECK(l2_norm(*rhs.res) == 0.0);
}

TEST_CASE("cosine forcing matches the analytic two-mode convolution") {
    // d/dx (cos^2(k x)) = -k sin(2 k x)
    const RealGrid grid(10.0, 128);
    SolverConfig config(grid, DepthParameter(0.0), 1e-2, 1.0);
    const double kfreq = 2.0 * kPi / grid.box_length();
    const SystemState state(cosine_mode(grid, 1, 1.0));
    const SystemState rhs = nonlinear_rhs(EquationKind::kdv, state, config);

    std::vector<double> expected(static_cast<size_t>(grid.mode_count()));
    for (int j = 0; j < grid.mode_count(); ++j)
        expected[static_cast<size_t>(j)] = -kfreq * std::sin(2.0 * kfreq * grid.x(j));
    const SpectralField oracle = forward_transform(grid, expected);
    CHECK(field_distance(rhs.low, oracle) < 1e-12 * l2_norm(oracle));
}

TEST_CASE("low field confined to a third of the band leaves no residual forcing") {
    const RealGrid grid(2.0 * kPi, 128); // integer frequencies, 1/delta = 12
    SolverConfig config(grid, DepthParameter(1.0 / 12.0), 1e-2, 1.0);
    SpectralField low(grid);
    low[3] = 1.0;
    low[grid.conjugate_index(3)] = 1.0; // support {|xi| <= 4 = 12/3}
    const SystemState rhs = nonlinear_rhs(EquationKind::coupled_low_residual,
                                          SystemState(low, SpectralField(grid)), config);
    // The square stays inside the low band; what survives the complementary
    // projector is pure transform rounding noise, far below the low forcing.
    CHECK(l2_norm(*rhs.res) < 1e-13 * l2_norm(rhs.low));
    CHECK(l2_norm(rhs.low) > 0.0);
}

TEST_CASE("energy above the retained band is rejected") {
    const RealGrid grid(20.0, 64);
    SolverConfig config(grid, DepthParameter(0.5), 1e-2, 1.0);
    SpectralField bad(grid);
    const int top = 31; // |xi| close to Nyquist, outside the 2/3 band
    bad[top] = 1.0;
    bad[grid.conjugate_index(top)] = 1.0;
    CHECK_THROWS_AS((void)nonlinear_rhs(EquationKind::kdv, SystemState(bad), config),
                    AliasingError);
}

// ============================================================================
// stepper
// ============================================================================

TEST_CASE("with the nonlinearity disabled one step is the exact propagator") {
    const RealGrid grid(40.0, 128);
    SolverConfig config(grid, DepthParameter(0.35), 0.2, 1.0);
    config.linear_only = true;
    const SpectralField phi = project_low(gaussian_profile(grid, 1.0, 1.0),
                                          config.retained_band());
    const EtdStepper stepper(EquationKind::scaled_ilw, config);
    const SystemState stepped = stepper.step(SystemState(phi));

    const MultiplierTable table(grid, config.delta);
    SpectralField exact = phi;
    for (int i = 0; i < exact.size(); ++i) {
        const double phase = config.dt * table.value(i);
        exact[i] *= cplx(std::cos(phase), std::sin(phase));
    }
    CHECK(field_distance(stepped.low, exact) < 1e-14 * l2_norm(phi));
}

TEST_CASE("richardson halving shows fourth-order self-convergence") {
    const RealGrid grid(40.0, 256);
    const SpectralField phi = gaussian_profile(grid, 1.0, 1.0);
    auto final_state = [&](double dt) {
        SolverConfig c(grid, DepthParameter(0.0), dt, 1.0);
        c.record_every = 1 << 20;
        return evolve(EquationKind::kdv, SystemState(phi), c).snapshots.back().low;
    };
    const SpectralField u1 = final_state(0.02);
    const SpectralField u2 = final_state(0.01);
    const SpectralField u3 = final_state(0.005);
    const double order = std::log2(field_distance(u1, u2) / field_distance(u2, u3));
    CHECK(order > 3.8);
    CHECK(order < 4.2);
}

TEST_CASE("small data stay within O(eps^2) of the linear flow") {
    const RealGrid grid(40.0, 256);
    SolverConfig config(grid, DepthParameter(0.4), 5e-3, 1.0);
    config.record_every = 1 << 20;
    const SpectralField shape = gaussian_profile(grid, 1.0, 1.0);
    const EtdStepper stepper(EquationKind::scaled_ilw, config);

    auto nonlinear_residual = [&](double eps) {
        SpectralField data = shape;
        for (int i = 0; i < data.size(); ++i) data[i] *= eps;
        const SpectralField out =
            evolve(EquationKind::scaled_ilw, SystemState(data), config).snapshots.back().low;
        const SpectralField lin =
            stepper.linear_step(SystemState(project_low(data, config.retained_band())),
                                config.horizon)
                .low;
        return field_distance(out, lin);
    };
    const double r2 = nonlinear_residual(1e-2);
    const double r3 = nonlinear_residual(1e-3);
    const double ratio = r2 / r3; // eps^2 scaling: a factor 100 per decade
    CHECK(ratio > 50.0);
    CHECK(ratio < 200.0);
}

// ============================================================================
// evolve
// ============================================================================

TEST_CASE("zero data give the identically zero trajectory") {
    const RealGrid grid(20.0, 64);
    SolverConfig config(grid, DepthParameter(0.5), 1e-2, 0.2);
    const TrajectoryRecord r =
        evolve(EquationKind::coupled_low_residual, SystemState{SpectralField(grid)}, config);
    for (const SystemState& s : r.snapshots) CHECK(l2_norm(s.total()) == 0.0);
}

TEST_CASE("low-frequency runs keep the high band exactly empty and conserve L2") {
    const RealGrid grid(40.0, 256);
    SolverConfig config(grid, DepthParameter(0.5), 2.5e-3, 5.0);
    config.record_every = 100;
    const SpectralField phi = gaussian_profile(grid, 1.0, 1.0);
    const TrajectoryRecord r = evolve(EquationKind::low_frequency, SystemState(phi), config);

    for (const Diagnostics& d : r.diagnostics) CHECK(d.low_high_band_mass == 0.0);
    const DriftResult drift = l2_drift(r);
    CHECK_FALSE(drift.absolute);
    CHECK(drift.value < 1e-8);
}

TEST_CASE("mean coefficient is constant in time for every kind") {
    const RealGrid grid(40.0, 128);
    SolverConfig config(grid, DepthParameter(0.5), 5e-3, 0.5);
    config.record_every = 10;
    const SpectralField phi = gaussian_profile(grid, 1.0, 1.0);
    for (EquationKind kind : {EquationKind::kdv, EquationKind::scaled_ilw,
                              EquationKind::low_frequency, EquationKind::coupled_low_residual}) {
        const TrajectoryRecord r = evolve(kind, SystemState(phi), config);
        for (const Diagnostics& d : r.diagnostics) CHECK(d.mean == r.diagnostics.front().mean);
    }
}

TEST_CASE("the depth-zero branch reproduces KdV bitwise") {
    const RealGrid grid(40.0, 128);
    SolverConfig config(grid, DepthParameter(0.0), 5e-3, 0.5);
    config.record_every = 20;
    const SpectralField phi = gaussian_profile(grid, 1.0, 1.0);
    const TrajectoryRecord kdv = evolve(EquationKind::kdv, SystemState(phi), config);
    const TrajectoryRecord silw = evolve(EquationKind::scaled_ilw, SystemState(phi), config);
    const TrajectoryRecord low = evolve(EquationKind::low_frequency, SystemState(phi), config);
    for (size_t k = 0; k < kdv.snapshots.size(); ++k)
        for (int i = 0; i < grid.mode_count(); ++i) {
            CHECK(kdv.snapshots[k].low[i] == silw.snapshots[k].low[i]);
            CHECK(kdv.snapshots[k].low[i] == low.snapshots[k].low[i]);
        }
}

TEST_CASE("low plus residual reconstructs the full solution") {
    const RealGrid grid(40.0, 256);
    SolverConfig config(grid, DepthParameter(0.5), 2e-3, 1.0);
    config.record_every = 1 << 20;
    const SpectralField phi = gaussian_profile(grid, 1.0, 1.0);
    const TrajectoryRecord full = evolve(EquationKind::scaled_ilw, SystemState(phi), config);
    const TrajectoryRecord pair =
        evolve(EquationKind::coupled_low_residual, SystemState(phi), config);
    CHECK(field_distance(full.snapshots.back().low, pair.snapshots.back().total()) < 1e-6);
}

TEST_CASE("linear flow reverses to the identity") {
    const RealGrid grid(40.0, 128);
    SolverConfig config(grid, DepthParameter(0.7), 0.3, 1.0);
    const SpectralField phi = project_low(gaussian_profile(grid, 1.0, 1.0),
                                          config.retained_band());
    const EtdStepper stepper(EquationKind::scaled_ilw, config);
    const SystemState back =
        stepper.linear_step(stepper.linear_step(SystemState(phi), 0.3), -0.3);
    CHECK(field_distance(back.low, phi) < 1e-13 * l2_norm(phi));
}

TEST_CASE("uniform-in-depth stability: adjacent depths give nearby flows") {
    const RealGrid grid(40.0, 128);
    const SpectralField phi = gaussian_profile(grid, 1.0, 1.0);
    auto final_state = [&](double delta) {
        SolverConfig c(grid, DepthParameter(delta), 5e-3, 0.5);
        c.record_every = 1 << 20;
        return evolve(EquationKind::low_frequency, SystemState(phi), c).snapshots.back().low;
    };
    double prev_gap = 1e300;
    for (int j = 2; j <= 5; ++j) {
        const double gap =
            field_distance(final_state(std::pow(2.0, -j)), final_state(std::pow(2.0, -j - 1)));
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
}

TEST_CASE("blow-up raises an error carrying the offending time and partial data") {
    const RealGrid grid(20.0, 64);
    SolverConfig config(grid, DepthParameter(0.0), 0.5, 10.0);
    config.record_every = 1;
    const SpectralField phi = gaussian_profile(grid, 1e8, 1.0);
    try {
        (void)evolve(EquationKind::kdv, SystemState(phi), config);
        FAIL("expected BlowUpError");
    } catch (const BlowUpError& e) {
        CHECK(e.time > 0.0);
        CHECK(e.partial_trajectory.size() >= 1);
    }
}

TEST_CASE("drift: zero on the linear flow, visible on an under-resolved run") {
    const RealGrid grid(40.0, 256);
    SolverConfig linear(grid, DepthParameter(0.5), 1e-2, 1.0);
    linear.linear_only = true;
    linear.record_every = 10;
    const SpectralField phi = gaussian_profile(grid, 1.0, 1.0);
    CHECK(l2_drift(evolve(EquationKind::scaled_ilw, SystemState(phi), linear)).value < 1e-14);

    SolverConfig coarse(grid, DepthParameter(0.0), 0.25, 2.5); // negative control
    coarse.record_every = 1;
    const SpectralField big = gaussian_profile(grid, 2.0, 1.0);
    CHECK(l2_drift(evolve(EquationKind::kdv, SystemState(big), coarse)).value > 1e-4);
}

TEST_CASE("drift on zero data is reported as a flagged absolute number") {
    const RealGrid grid(20.0, 64);
    SolverConfig config(grid, DepthParameter(0.5), 1e-2, 0.1);
    const TrajectoryRecord r =
        evolve(EquationKind::kdv, SystemState{SpectralField(grid)}, config);
    const DriftResult d = l2_drift(r);
    CHECK(d.absolute);
    CHECK(d.value == 0.0);
}

TEST_CASE("a single overflowing step already raises the blow-up error") {
    const RealGrid grid(20.0, 64);
    SolverConfig config(grid, DepthParameter(0.0), 0.5, 1.0);
    const SpectralField phi = gaussian_profile(grid, 1e8, 1.0);
    CHECK_THROWS_AS((void)step(EquationKind::kdv, SystemState(phi), config), BlowUpError);
}
