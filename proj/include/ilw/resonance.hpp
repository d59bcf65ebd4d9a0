#pragma once

#include "ilw/symbols.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace ilw {

/// Frequency triple (xi, xi1, xi2) under the convolution constraint
/// xi = xi1 + xi2; stored as (xi1, xi2) so the constraint cannot drift.
class FrequencyTriple {
public:
    FrequencyTriple(double xi1, double xi2) : xi1_(xi1), xi2_(xi2) {}

    double xi() const { return xi1_ + xi2_; }
    double xi1() const { return xi1_; }
    double xi2() const { return xi2_; }

    /// |xi|, |xi1|, |xi2| sorted non-increasing: {max, med, min}.
    std::array<double, 3> ordered_magnitudes() const;
    double max_magnitude() const { return ordered_magnitudes()[0]; }
    double min_magnitude() const { return ordered_magnitudes()[2]; }

    FrequencyTriple swapped() const { return {xi2_, xi1_}; }
    FrequencyTriple negated() const { return {-xi1_, -xi2_}; }

private:
    double xi1_, xi2_;
};

/// KdV resonance function; the factored form 3 xi xi1 xi2 of the cubic
/// difference xi^3 - xi1^3 - xi2^3 (exact under the constraint).
double xi_kdv(const FrequencyTriple& t);

/// BO resonance function |xi|xi - |xi1|xi1 - |xi2|xi2, evaluated through its
/// magnitude identity 2 xi_med xi_min with the sign carried by the
/// largest-magnitude element of {-xi, xi1, xi2} (cancellation-free).
double xi_bo(const FrequencyTriple& t);

/// Literal difference p_tilde(xi) - p_tilde(xi1) - p_tilde(xi2), with the
/// condition number of the subtraction reported so callers can detect
/// catastrophic cancellation and fall back to the series form.
struct DirectResonance {
    double value = 0.0;
    /// max |p_tilde(xi_j)| over |value| (1 when value is 0 and all terms are).
    double cancellation_ratio = 0.0;
    bool cancellation_suspect() const { return cancellation_ratio > 1e6; }
};
DirectResonance xi_tilde_direct(const DepthParameter& depth, const FrequencyTriple& t);

/// Series form of the scaled resonance function,
///   6 xi xi1 xi2 sum_k pi^2 k^2 (3 pi^2 k^2 + delta^2 (xi1^2+xi1 xi2+xi2^2))
///                       / prod_{j=0..2} (pi^2 k^2 + delta^2 xi_j^2),
/// summed with an Euler-Maclaurin tail and refined until doubling the term
/// count moves the value by less than tol relative. Every summand carries the
/// sign of xi xi1 xi2, so partial sums are monotone. Requires delta > 0.
double xi_tilde_series(const DepthParameter& depth, const FrequencyTriple& t, double tol);

/// Production evaluator of the scaled resonance function, stable in every
/// regime: series form while delta * xi_max <= 20, otherwise the exact
/// regrouped closed form
///   (3/delta) (2 xi1 xi2 + 2[xi^2 w(d xi) - xi1^2 w(d xi1) - xi2^2 w(d xi2)])
/// on the sign-canonicalized triple, with w(u) = 1/(e^{2u} - 1) via expm1.
/// The delta = 0 branch returns xi_kdv exactly.
double xi_tilde(const DepthParameter& depth, const FrequencyTriple& t);

enum class Band { low, high, mixed };
std::string band_name(Band b);

/// Comparability ratio of the resonance function against its band-specific
/// comparison scale: |Xi~| / |xi xi1 xi2| in the low band (xi_max <= 1/delta),
/// |Xi~| / (xi_min xi_max / delta) in the high band (xi_max >= 10/delta).
/// The mixed band reports the low-band ratio tagged Band::mixed.
struct ComparabilityResult {
    Band regime = Band::low;
    double ratio = 0.0;
};
ComparabilityResult comparability_ratio(const DepthParameter& depth, const FrequencyTriple& t);

/// d/dxi1 of Xi~(xi, xi1, xi - xi1): the change-of-variables Jacobian of the
/// resonance phase. Sum of two series sharing the factor xi (xi - 2 xi1);
/// its sign therefore agrees with sign(xi (xi - 2 xi1)) on the band
/// |xi_j| <= 1/delta (the correction ratio below stays under 6 there).
/// Requires delta > 0.
double jacobian_mu(const DepthParameter& depth, double xi, double xi1);

/// |B_{delta,k}| / prod_{j=1,2} (pi^2 k^2 + delta^2 xi_j^2) with
/// B = 5 pi^4 k^4 + pi^2 k^2 delta^2 (xi1^2 - 4 xi1 xi2 + xi2^2)
///     - delta^4 xi1 xi2 (2 xi1^2 + 3 xi1 xi2 + 2 xi2^2).
/// Requires |xi|, |xi1|, |xi2| <= 1/delta and k >= 1.
double jacobian_correction_ratio(const DepthParameter& depth, const FrequencyTriple& t, int k);

/// |Xi_KdV - Xi~|, evaluated through the defect identity
/// xi^3 h(xi) - xi1^3 h(xi1) - xi2^3 h(xi2); checked against the rigorous
/// bound 3 delta^2 xi_max^5 before returning.
double kdv_resonance_gap(const DepthParameter& depth, const FrequencyTriple& t);

// ---------------------------------------------------------------------------
// Seeded sweep drivers (used by the CLI and the acceptance suite).
// Reductions run in deterministic index order.
// ---------------------------------------------------------------------------

struct SweepRow {
    std::string regime;
    double delta, xi, xi1, xi2, ratio;
};

struct IdentitySweepResult {
    double max_rel_err_kdv = 0.0; // factored vs cubic form
    double max_rel_err_bo = 0.0;  // sign-resolved vs literal form
    int samples = 0;
};
IdentitySweepResult identity_sweep(int samples, uint64_t seed);

struct SeriesDirectSweepResult {
    double max_rel_disagreement = 0.0;
    int samples = 0;
    int skipped_cancellation = 0;
};
SeriesDirectSweepResult series_direct_sweep(int samples_per_delta,
                                            const std::vector<double>& deltas,
                                            double tol, uint64_t seed);

struct CorrectionRatioSweepResult {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    int samples = 0;
};
/// Random in-band samples plus the degenerate corners xi1 = xi2 = 0 where the
/// ratio attains its supremum 5 exactly.
CorrectionRatioSweepResult correction_ratio_sweep(int samples, uint64_t seed);

struct BandRatioStats {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
};
struct ComparabilitySweepResult {
    std::vector<double> deltas;
    std::vector<BandRatioStats> low;  // per delta
    std::vector<BandRatioStats> high; // per delta
    std::vector<SweepRow> rows;         // subsample for CSV export
};
ComparabilitySweepResult comparability_sweep(int samples_per_delta, const std::vector<double>& deltas,
                                 uint64_t seed, int rows_to_keep = 0);

struct JacobianSweepResult {
    int sign_mismatches = 0;
    double max_fd_rel_err = 0.0; // on the |xi - 2 xi1| >= |xi|/2 subset
    double lower_bound_c = 0.0;  // min |mu'| / xi^2 on that subset
    int samples = 0;
};
JacobianSweepResult jacobian_sweep(int samples, const DepthParameter& depth, uint64_t seed);

} // namespace ilw
