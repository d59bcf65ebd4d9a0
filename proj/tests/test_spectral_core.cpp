#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ilw/numerics.hpp"
#include "ilw/spectral_field.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace ilw;

namespace {

constexpr double kPi = 3.14159265358979323846;

SpectralField random_real_field(const RealGrid& grid, uint64_t seed, double decay = 0.0) {
    Rng rng(seed);
    SpectralField f(grid);
    const int n = grid.mode_count();
    for (int i = 1; i < n / 2; ++i) {
        const double w = decay > 0.0 ? std::pow(1.0 + std::abs(grid.frequency(i)), -decay) : 1.0;
        const cplx c(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        f[i] = w * c;
        f[grid.conjugate_index(i)] = std::conj(f[i]);
    }
    f[0] = rng.uniform(-1.0, 1.0);
    f[n / 2] = rng.uniform(-1.0, 1.0); // Nyquist stays real
    return f;
}

std::vector<double> cos_samples(const RealGrid& grid, double k_mult, double shift = 0.0) {
    std::vector<double> s(static_cast<size_t>(grid.mode_count()));
    const double kfreq = 2.0 * kPi * k_mult / grid.box_length();
    for (int j = 0; j < grid.mode_count(); ++j)
        s[static_cast<size_t>(j)] = std::cos(kfreq * (grid.x(j) + shift));
    return s;
}

} // namespace

// ============================================================================
// forward / inverse transforms
// ============================================================================

TEST_CASE("constant field transforms to a single zero-mode coefficient") {
    const RealGrid grid(17.5, 64);
    std::vector<double> ones(64, 1.0);
    const SpectralField f = forward_transform(grid, ones);
    CHECK(std::abs(f[0] - cplx(17.5, 0.0)) < 1e-12 * 17.5);
    for (int i = 1; i < 64; ++i) CHECK(std::abs(f[i]) < 1e-12 * 17.5);
}

TEST_CASE("cosine lands on the +-1 modes with coefficient L/2") {
    const RealGrid grid(10.0, 128);
    const SpectralField f = forward_transform(grid, cos_samples(grid, 1.0));
    CHECK(std::abs(f[1] - cplx(5.0, 0.0)) < 1e-11);
    CHECK(std::abs(f[127] - cplx(5.0, 0.0)) < 1e-11);
    CHECK(std::abs(f[2]) < 1e-11);
}

TEST_CASE("gaussian matches its analytic transform") {
    // f(x) = e^{-x^2/(2 sigma^2)}  =>  f^(xi) = sigma sqrt(2 pi) e^{-sigma^2 xi^2/2}
    const double sigma = 1.0;
    const RealGrid grid(48.0, 256);
    std::vector<double> s(256);
    for (int j = 0; j < 256; ++j) {
        const double x = grid.x(j);
        s[static_cast<size_t>(j)] = std::exp(-x * x / (2.0 * sigma * sigma));
    }
    const SpectralField f = forward_transform(grid, s);
    const double scale = sigma * std::sqrt(2.0 * kPi);
    for (int i = 0; i < 256; ++i) {
        const double xi = grid.frequency(i);
        const double expected = scale * std::exp(-sigma * sigma * xi * xi / 2.0);
        CHECK(std::abs(f[i] - cplx(expected, 0.0)) < 1e-8 * scale);
    }
}

TEST_CASE("sample count mismatch is rejected") {
    const RealGrid grid(10.0, 64);
    std::vector<double> bad(63, 0.0);
    CHECK_THROWS_AS((void)forward_transform(grid, bad), std::invalid_argument);
}

TEST_CASE("zero field inverts to zero samples") {
    const SpectralField f(RealGrid(10.0, 32));
    for (double v : inverse_transform(f)) CHECK(v == 0.0);
}

TEST_CASE("single mode pair inverts to a cosine") {
    const RealGrid grid(10.0, 64);
    SpectralField f(grid);
    f[1] = 5.0;
    f[63] = 5.0;
    const std::vector<double> s = inverse_transform(f);
    const std::vector<double> expected = cos_samples(grid, 1.0);
    for (int j = 0; j < 64; ++j)
        CHECK(std::abs(s[static_cast<size_t>(j)] - expected[static_cast<size_t>(j)]) < 1e-12);
}

TEST_CASE("random conjugate-symmetric fields round-trip below 1e-12") {
    const RealGrid grid(23.0, 128);
    for (uint64_t seed : {7u, 8u, 9u, 10u}) {
        const SpectralField f = random_real_field(grid, seed);
        const SpectralField g = forward_transform(grid, inverse_transform(f));
        double worst = 0.0, scale = 0.0;
        for (int i = 0; i < 128; ++i) {
            worst = std::max(worst, std::abs(g[i] - f[i]));
            scale = std::max(scale, std::abs(f[i]));
        }
        CHECK(worst < 1e-12 * scale);
    }
}

TEST_CASE("broken conjugate symmetry is rejected") {
    const RealGrid grid(10.0, 32);
    SpectralField f(grid);
    f[3] = 1.0; // no conjugate partner
    CHECK_THROWS_AS((void)inverse_transform(f), InvalidFieldError);
}

// ============================================================================
// projectors
// ============================================================================

TEST_CASE("full-band cutoff is the identity, tiny cutoff keeps the mean") {
    const RealGrid grid(20.0, 64);
    const SpectralField f = random_real_field(grid, 3);
    const SpectralField all = project_low(f, grid.max_frequency());
    for (int i = 0; i < 64; ++i) CHECK(all[i] == f[i]);

    const SpectralField mean = project_low(f, 1e-9);
    CHECK(mean[0] == f[0]);
    for (int i = 1; i < 64; ++i) CHECK(mean[i] == cplx(0.0, 0.0));
}

TEST_CASE("projector is idempotent and the partition is coefficientwise exact") {
    const RealGrid grid(20.0, 128);
    const SpectralField f = random_real_field(grid, 17);
    for (double cutoff : {0.5, 3.0, 11.0}) {
        const SpectralField low = project_low(f, cutoff);
        const SpectralField low2 = project_low(low, cutoff);
        const SpectralField high = project_high(f, cutoff);
        for (int i = 0; i < 128; ++i) {
            CHECK(low2[i] == low[i]);
            CHECK(low[i] + high[i] == f[i]); // each coefficient goes to one side
        }
    }
}

TEST_CASE("cutoff ties stay in the low band") {
    const RealGrid grid(2.0 * kPi, 16); // integer frequencies
    SpectralField f(grid);
    f[4] = 1.0;
    f[12] = 1.0;
    const SpectralField low = project_low(f, 4.0);
    CHECK(low[4] == cplx(1.0, 0.0));
    CHECK(project_high(f, 4.0)[4] == cplx(0.0, 0.0));
}

TEST_CASE("parseval splits across the projector partition") {
    const RealGrid grid(20.0, 128);
    const SpectralField f = random_real_field(grid, 23);
    const double total = l2_norm(f);
    for (double cutoff : {1.0, 5.0}) {
        const double lo = l2_norm(project_low(f, cutoff));
        const double hi = l2_norm(project_high(f, cutoff));
        CHECK(std::abs(lo * lo + hi * hi - total * total) < 1e-12 * total * total);
    }
}

// ============================================================================
// norms and translations
// ============================================================================

TEST_CASE("L2 norm of cos on [0, 2 pi) is sqrt(pi)") {
    const RealGrid grid(2.0 * kPi, 64);
    const SpectralField f = forward_transform(grid, cos_samples(grid, 1.0));
    CHECK(sobolev_norm(f, 0.0) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
    CHECK(sobolev_norm(SpectralField(grid), 3.0) == 0.0);
}

TEST_CASE("sobolev norm increases with s when every mode has |xi| >= 1") {
    const RealGrid grid(2.0 * kPi, 64);
    SpectralField f(grid);
    f[2] = 1.0;
    f[62] = 1.0;
    f[5] = cplx(0.0, 2.0);
    f[59] = cplx(0.0, -2.0);
    double prev = sobolev_norm(f, 0.0);
    for (double s : {0.5, 1.0, 2.0}) {
        const double curr = sobolev_norm(f, s);
        CHECK(curr > prev);
        prev = curr;
    }
}

TEST_CASE("spectral norm agrees with the physical-space quadrature") {
    const RealGrid grid(31.0, 128);
    const SpectralField f = random_real_field(grid, 5, 1.5);
    const std::vector<double> s = inverse_transform(f);
    double quad = 0.0;
    for (double v : s) quad += v * v;
    quad = std::sqrt(quad * grid.spacing());
    CHECK(std::abs(sobolev_norm(f, 0.0) - quad) < 1e-10 * quad);
}

TEST_CASE("translate: identity at y = 0 and after a full period") {
    const RealGrid grid(13.0, 64);
    const SpectralField f = random_real_field(grid, 11);
    const SpectralField same = translate(f, 0.0);
    const SpectralField period = translate(f, grid.box_length());
    double scale = 0.0;
    for (int i = 0; i < 64; ++i) scale = std::max(scale, std::abs(f[i]));
    for (int i = 0; i < 64; ++i) {
        CHECK(same[i] == f[i]);
        CHECK(std::abs(period[i] - f[i]) < 1e-12 * scale);
    }
    CHECK(std::abs(l2_norm(translate(f, 0.37)) - l2_norm(f)) < 1e-13 * l2_norm(f));
}

TEST_CASE("translate agrees with a physically shifted cosine") {
    const RealGrid grid(10.0, 64);
    const double y = 0.731;
    const SpectralField f = forward_transform(grid, cos_samples(grid, 1.0));
    const SpectralField shifted_phys = forward_transform(grid, cos_samples(grid, 1.0, y));
    const SpectralField shifted_mult = translate(f, y);
    SpectralField diff = shifted_mult;
    for (int i = 0; i < 64; ++i) diff[i] -= shifted_phys[i];
    for (double s : {0.0, 1.0})
        CHECK(sobolev_norm(diff, s) < 1e-12 * sobolev_norm(f, s));
}

// ============================================================================
// equicontinuity bridge: translation moduli vs frequency tails
// ============================================================================

TEST_CASE("two-sided quantitative equicontinuity bridge") {
    const RealGrid grid(40.0, 256);
    const SpectralField f = random_real_field(grid, 29, 2.0); // algebraic spectrum

    auto shift_distance = [&](double y, double s) {
        SpectralField diff = translate(f, y);
        for (int i = 0; i < diff.size(); ++i) diff[i] -= f[i];
        return sobolev_norm(diff, s);
    };
    const double s = 0.0;

    // Tail controlled by the exponentially weighted translation average:
    //   ||P_N^perp f||^2 <= (5/2) int_0^inf ||f(.+y)-f||^2 2N e^{-2Ny} dy,
    // from 1_{|xi|>N} <= (5/2) 2 xi^2/(4N^2+xi^2) under that kernel.
    for (double N : {1.0, 3.0, 8.0}) {
        const double tail = sobolev_norm(project_high(f, N), s);
        const double integral = gl_integrate(
            [&](double u) {
                const double d = shift_distance(u / (2.0 * N), s);
                return d * d * std::exp(-u);
            },
            0.0, 40.0, 256);
        CHECK(tail * tail <= 2.5 * integral * (1.0 + 1e-10));
    }

    // Translation modulus controlled by the tail: for every N,
    //   ||f(.+y)-f||^2 <= y^2 N^2 ||P_N f||^2 + 4 ||P_N^perp f||^2.
    for (double eps : {0.5, 0.1, 0.02}) {
        const double N = 1.0 / eps;
        const double w = shift_distance(eps, s);
        const double band = sobolev_norm(project_low(f, N), s);
        const double tail = sobolev_norm(project_high(f, N), s);
        CHECK(w * w <= eps * eps * N * N * band * band + 4.0 * tail * tail + 1e-14);
    }

    // Both moduli vanish together along the refinement.
    double prev_w = 1e300, prev_t = 1e300;
    for (double eps : {0.4, 0.1, 0.025}) {
        const double w = shift_distance(eps, s);
        const double t = sobolev_norm(project_high(f, 1.0 / eps), s);
        CHECK(w < prev_w);
        CHECK(t <= prev_t);
        prev_w = w;
        prev_t = t;
    }
}

// ============================================================================
// boundary-mass diagnostics
// ============================================================================

TEST_CASE("narrow data pass the box-truncation check, wide data fail it") {
    const RealGrid grid(40.0, 256);
    std::vector<double> narrow(256), wide(256);
    for (int j = 0; j < 256; ++j) {
        const double x = grid.x(j);
        narrow[static_cast<size_t>(j)] = std::exp(-x * x / 2.0);
        wide[static_cast<size_t>(j)] = std::exp(-x * x / (2.0 * 100.0));
    }
    CHECK(boundary_mass(forward_transform(grid, narrow)).within(1e-10));
    CHECK_FALSE(boundary_mass(forward_transform(grid, wide)).within(1e-10));
}

TEST_CASE("conjugate symmetry defect is zero for real fields") {
    const RealGrid grid(10.0, 64);
    CHECK(conjugate_symmetry_defect(random_real_field(grid, 2)) < 1e-15);
    SpectralField broken(grid);
    broken[5] = 1.0;
    CHECK(conjugate_symmetry_defect(broken) == 1.0);
}
