#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ilw/numerics.hpp"
#include "ilw/resonance.hpp"

#include <cmath>

using namespace ilw;

namespace {

double rel(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

FrequencyTriple random_triple(Rng& rng, double lo, double hi) {
    for (;;) {
        const FrequencyTriple t(rng.sign() * rng.log_uniform(lo, hi),
                                rng.sign() * rng.log_uniform(lo, hi));
        if (std::abs(t.xi()) >= lo) return t;
    }
}

} // namespace

// ============================================================================
// KdV and BO resonance identities
// ============================================================================

TEST_CASE("kdv resonance: collapse at xi = 0 and the (1,2) value") {
    CHECK(xi_kdv({1.0, -1.0}) == 0.0);
    CHECK(xi_kdv({1.0, 2.0}) == doctest::Approx(18.0).epsilon(1e-14)); // 27 - 1 - 8
}

TEST_CASE("cubic difference equals the factored form on random triples") {
    Rng rng(101);
    for (int i = 0; i < 2000; ++i) {
        const FrequencyTriple t = random_triple(rng, 1.0, 32.0);
        const double cubic = std::pow(t.xi(), 3) - std::pow(t.xi1(), 3) - std::pow(t.xi2(), 3);
        CHECK(rel(cubic, xi_kdv(t)) < 1e-12);
    }
}

TEST_CASE("bo resonance magnitude and sign rules") {
    CHECK(std::abs(std::abs(xi_bo({1.0, 3.0})) - 6.0) < 1e-14); // 16 - 1 - 9
    CHECK(xi_bo({2.5, -2.5}) == 0.0);
    const FrequencyTriple t(0.7, 2.1);
    CHECK(xi_bo(t.negated()) == -xi_bo(t));
    Rng rng(102);
    for (int i = 0; i < 2000; ++i) {
        const FrequencyTriple t2 = random_triple(rng, 1.0, 32.0);
        const double literal = std::abs(t2.xi()) * t2.xi() - std::abs(t2.xi1()) * t2.xi1() -
                               std::abs(t2.xi2()) * t2.xi2();
        CHECK(rel(literal, xi_bo(t2)) < 1e-12);
    }
}

TEST_CASE("ordered magnitudes and the xi_max <= 2 xi_med consequence") {
    const FrequencyTriple t(-1.0, 3.5);
    const auto m = t.ordered_magnitudes();
    CHECK(m[0] == 3.5);
    CHECK(m[1] == 2.5);
    CHECK(m[2] == 1.0);
    Rng rng(103);
    for (int i = 0; i < 500; ++i) {
        const auto mm = random_triple(rng, 0.5, 64.0).ordered_magnitudes();
        CHECK(mm[0] <= 2.0 * mm[1] * (1.0 + 1e-12));
    }
}

// ============================================================================
// scaled resonance function: direct, series, stable
// ============================================================================

TEST_CASE("direct difference: KdV branch and oddness zeros") {
    CHECK(xi_tilde_direct(DepthParameter(0.0), {1.0, 2.0}).value == xi_kdv({1.0, 2.0}));
    for (double d : {0.0, 0.2, 1.0})
        CHECK(xi_tilde_direct(DepthParameter(d), {1.0, -1.0}).value == 0.0);
}

TEST_CASE("series requires a positive tolerance and a positive depth") {
    CHECK_THROWS_AS((void)xi_tilde_series(DepthParameter(0.5), {1.0, 2.0}, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)xi_tilde_series(DepthParameter(0.0), {1.0, 2.0}, 1e-8),
                    std::invalid_argument);
}

TEST_CASE("series vanishes with any zero frequency and carries the product sign") {
    const DepthParameter d(0.5);
    CHECK(xi_tilde_series(d, {0.0, 2.0}, 1e-8) == 0.0);
    CHECK(xi_tilde_series(d, {1.0, -1.0}, 1e-8) == 0.0);
    Rng rng(104);
    for (int i = 0; i < 200; ++i) {
        const FrequencyTriple t = random_triple(rng, 0.1, 2.0);
        const double v = xi_tilde_series(d, t, 1e-10);
        const double sign_product = t.xi() * t.xi1() * t.xi2();
        CHECK(v * sign_product >= 0.0);
    }
}

TEST_CASE("series against direct at the worked example (1,2), delta 0.5") {
    const DepthParameter d(0.5);
    CHECK(rel(xi_tilde_series(d, {1.0, 2.0}, 1e-10), xi_tilde_direct(d, {1.0, 2.0}).value) < 1e-8);
}

TEST_CASE("series and direct agree wherever the cancellation diagnostic is quiet") {
    Rng rng(105);
    for (double d : {1.0, 0.125, 1.0 / 1024.0}) {
        const DepthParameter depth(d);
        for (int i = 0; i < 300; ++i) {
            const FrequencyTriple t = random_triple(rng, 1e-3 / d, 1.0 / d);
            if (std::abs(t.xi()) > 1.0 / d) continue;
            const DirectResonance direct = xi_tilde_direct(depth, t);
            if (direct.cancellation_suspect()) continue;
            CHECK(rel(xi_tilde_series(depth, t, 1e-9), direct.value) < 1e-8);
        }
    }
}

TEST_CASE("cancellation diagnostic fires in the high-band regime") {
    // Two nearly equal large symbols differing by an O(1) amount.
    const DepthParameter d(0.1);
    const double alpha = 0.1 * std::pow(1e3, -1.1);
    const DirectResonance direct = xi_tilde_direct(d, {alpha, 1e3});
    CHECK(direct.cancellation_suspect());
}

TEST_CASE("stable evaluator matches the series in every accessible regime") {
    Rng rng(106);
    for (double d : {1.0, 0.3, 0.01}) {
        const DepthParameter depth(d);
        for (int i = 0; i < 200; ++i) {
            // spans in-band, the series/closed switch, and moderately beyond
            const FrequencyTriple t = random_triple(rng, 0.03 / d, 8.0 / d);
            const double series = xi_tilde_series(depth, t, 1e-11);
            CHECK(rel(xi_tilde(depth, t), series) < 1e-8);
        }
    }
}

TEST_CASE("stable evaluator: symmetry in xi1 <-> xi2 and global oddness") {
    Rng rng(107);
    const DepthParameter d(0.25);
    for (int i = 0; i < 300; ++i) {
        const FrequencyTriple t = random_triple(rng, 0.05, 40.0);
        const double v = xi_tilde(d, t);
        CHECK(rel(v, xi_tilde(d, t.swapped())) < 1e-12);
        CHECK(rel(-v, xi_tilde(d, t.negated())) < 1e-12);
    }
}

TEST_CASE("deep-water check: unscaled resonance approaches the BO one") {
    // (delta/3) Xi~ = Xi_delta = Xi_BO + O(delta^-2), uniformly in the triple.
    Rng rng(108);
    for (double d : {10.0, 100.0}) {
        const DepthParameter depth(d);
        for (int i = 0; i < 200; ++i) {
            const FrequencyTriple t = random_triple(rng, 0.5, 50.0);
            const double unscaled = d / 3.0 * xi_tilde(depth, t);
            CHECK(std::abs(unscaled - xi_bo(t)) <= 4.0 / (d * d));
        }
    }
}

// ============================================================================
// comparability ratios (low/high band)
// ============================================================================

TEST_CASE("zero frequencies are rejected as degenerate") {
    CHECK_THROWS_AS((void)comparability_ratio(DepthParameter(0.5), {1.0, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)comparability_ratio(DepthParameter(0.5), {0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("low-band ratio tends to the KdV constant 3 as delta -> 0") {
    const FrequencyTriple t(1.0, 2.0);
    double prev_gap = 1e300;
    for (double d : {0.25, 0.0625, 0.015625, 1e-3}) {
        const ComparabilityResult r = comparability_ratio(DepthParameter(d), t);
        CHECK(r.regime == Band::low);
        const double gap = std::abs(r.ratio - 3.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-4);
}

TEST_CASE("regime classification follows xi_max against 1/delta") {
    const DepthParameter d(0.1);
    CHECK(comparability_ratio(d, {1.0, 2.0}).regime == Band::low);     // xi_max = 3 <= 10
    CHECK(comparability_ratio(d, {1.0, 30.0}).regime == Band::mixed);  // 10 < 31 < 100
    CHECK(comparability_ratio(d, {1.0, 200.0}).regime == Band::high);  // 201 >= 100
}

TEST_CASE("per-delta ratio windows are tight and delta-stable") {
    std::vector<double> deltas;
    for (int j = 0; j <= 10; ++j) deltas.push_back(std::pow(2.0, -j));
    const ComparabilitySweepResult sweep = comparability_sweep(2000, deltas, 1157);
    double low_c_min = 1e300, low_c_max = 0.0, low_C_min = 1e300, low_C_max = 0.0;
    for (size_t i = 0; i < deltas.size(); ++i) {
        CHECK(sweep.low[i].max_ratio / sweep.low[i].min_ratio <= 10.0);
        CHECK(sweep.high[i].max_ratio / sweep.high[i].min_ratio <= 10.0);
        low_c_min = std::min(low_c_min, sweep.low[i].min_ratio);
        low_c_max = std::max(low_c_max, sweep.low[i].min_ratio);
        low_C_min = std::min(low_C_min, sweep.low[i].max_ratio);
        low_C_max = std::max(low_C_max, sweep.low[i].max_ratio);
    }
    // endpoints constant in delta within 20%
    CHECK(low_c_max / low_c_min <= 1.2);
    CHECK(low_C_max / low_C_min <= 1.2);
}

// ============================================================================
// Jacobian of the resonance phase
// ============================================================================

TEST_CASE("symmetric point: leading factor kills the whole Jacobian") {
    const DepthParameter d(0.5);
    CHECK(jacobian_mu(d, 1.0, 0.5) == 0.0);
    CHECK(jacobian_mu(d, -1.2, -0.6) == 0.0);
}

TEST_CASE("finite-difference agreement and sign structure in band") {
    const JacobianSweepResult sweep = jacobian_sweep(5000, DepthParameter(0.25), 2157);
    CHECK(sweep.sign_mismatches == 0);
    CHECK(sweep.max_fd_rel_err < 1e-6);
}

TEST_CASE("transversal lower bound constant is stable across delta") {
    double c_min = 1e300, c_max = 0.0;
    for (double d : {0.5, 0.25, 0.125, 0.0625}) {
        const JacobianSweepResult sweep = jacobian_sweep(3000, DepthParameter(d), 3157);
        c_min = std::min(c_min, sweep.lower_bound_c);
        c_max = std::max(c_max, sweep.lower_bound_c);
        CHECK(sweep.lower_bound_c > 0.5); // |mu'| >= c xi^2 with c O(1)
    }
    CHECK(c_max / c_min <= 1.5);
}

// ============================================================================
// Jacobian correction ratio and KdV-defect bound
// ============================================================================

TEST_CASE("correction ratio: symmetric point, corner supremum, large-k limit") {
    const DepthParameter depth(1.0);
    // xi1 = xi2: middle term contributes -2 pi^2 k^2 delta^2 xi1^2
    const double u = M_PI * M_PI;
    const double xi1 = 0.5;
    const double B_expected =
        5.0 * u * u + u * (-2.0 * xi1 * xi1) - xi1 * xi1 * (2.0 * xi1 * xi1 + 3.0 * xi1 * xi1 + 2.0 * xi1 * xi1);
    const double den = (u + xi1 * xi1) * (u + xi1 * xi1);
    CHECK(jacobian_correction_ratio(depth, {xi1, xi1}, 1) == doctest::Approx(std::abs(B_expected) / den));

    CHECK(jacobian_correction_ratio(depth, {0.0, 0.0}, 3) == doctest::Approx(5.0).epsilon(1e-14));

    double prev = 0.0;
    for (int k : {1, 4, 16, 64, 256}) {
        const double r = jacobian_correction_ratio(depth, {0.9, -0.7}, k);
        CHECK(r <= 5.0);
        CHECK(r >= prev); // climbs toward the k -> infinity limit 5
        prev = r;
    }
    CHECK(prev > 4.999);
}

TEST_CASE("correction ratio rejects out-of-band input") {
    CHECK_THROWS_AS((void)jacobian_correction_ratio(DepthParameter(1.0), {1.0, 1.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)jacobian_correction_ratio(DepthParameter(1.0), {0.5, 0.2}, 0), std::invalid_argument);
}

TEST_CASE("correction-ratio sweep stays inside [5, 5.68] and never reaches 6") {
    const CorrectionRatioSweepResult sweep = correction_ratio_sweep(20000, 4157);
    CHECK(sweep.max_ratio >= 5.0 - 1e-9);
    CHECK(sweep.max_ratio <= 5.68);
    CHECK(sweep.max_ratio < 6.0);
}

TEST_CASE("kdv defect: zero on the KdV branch, bounded by 3 delta^2 xi_max^5") {
    CHECK(kdv_resonance_gap(DepthParameter(0.0), {1.0, 2.0}) == 0.0);
    Rng rng(109);
    for (int i = 0; i < 5000; ++i) {
        const double d = rng.log_uniform(1e-3, 1.0);
        const FrequencyTriple t = random_triple(rng, 0.05 / d, 1.0 / d);
        const double gap = kdv_resonance_gap(DepthParameter(d), t); // throws if bound broken
        const double m = t.max_magnitude();
        CHECK(gap <= 3.0 * d * d * m * m * m * m * m * (1.0 + 1e-9));
    }
}

TEST_CASE("kdv defect on the delta^{-2/5+theta} band scales like delta^{5 theta}") {
    const double theta = 0.1;
    Rng rng(110);
    for (int j = 4; j <= 10; ++j) {
        const double d = std::pow(2.0, -j);
        const double band = std::pow(d, -0.4 + theta);
        for (int i = 0; i < 300; ++i) {
            FrequencyTriple t = random_triple(rng, 1e-2 * band, band);
            if (std::abs(t.xi()) > band) continue;
            CHECK(kdv_resonance_gap(DepthParameter(d), t) <= 3.0 * std::pow(d, 5.0 * theta));
        }
    }
}
