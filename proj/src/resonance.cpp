#include "ilw/resonance.hpp"

#include "ilw/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace ilw {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPiSq = kPi * kPi;

// Below this value of delta * xi_max the series form of the resonance
// function is both fast and perfectly conditioned; above it the regrouped
// closed form takes over (exponential corrections are already < 4e-18).
constexpr double kSeriesSwitch = 20.0;

// 1/(e^{2u} - 1) without overflow for any u > 0.
double boltzmann_weight(double u) {
    const double e = std::exp(-2.0 * u);
    return e / (-std::expm1(-2.0 * u));
}

// Sign-canonical representation: Xi~(xi, xi1, xi2) = sign * Xi~(x; y, z)
// with x = y + z and x >= y, z >= 0. Uses the symmetric form
// Xi~ = -[p(-xi) + p(xi1) + p(xi2)] on the zero-sum triple.
struct CanonicalTriple {
    double x, y, z;
    double sign;
};

CanonicalTriple canonicalize(const FrequencyTriple& t) {
    double a[3] = {-t.xi(), t.xi1(), t.xi2()};
    int im = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(a[i]) > std::abs(a[im])) im = i;
    double sign = -1.0;
    if (a[im] < 0.0) {
        for (double& v : a) v = -v;
        sign = 1.0;
    }
    const double x = a[im];
    const double o1 = a[(im + 1) % 3], o2 = a[(im + 2) % 3];
    // The two remaining elements are <= 0 once the dominant one is positive.
    return {x, -o1, -o2, sign};
}

// Series summand of the resonance-function expansion, divided by the
// 6 xi xi1 xi2 prefactor:
//   f(k) = pi^2 k^2 (3 pi^2 k^2 + Q) / prod_j (pi^2 k^2 + a_j),
// with Q = delta^2 (xi1^2 + xi1 xi2 + xi2^2) >= 0 and a_j = delta^2 xi_j^2.
struct XiSeriesSummand {
    double Q, a0, a1, a2;

    std::pair<double, double> operator()(double x) const {
        const double u = kPiSq * x * x;
        const double n = u * (3.0 * u + Q);
        const double d0 = u + a0, d1 = u + a1, d2 = u + a2;
        const double den = d0 * d1 * d2;
        const double f = n / den;
        const double dn_du = 6.0 * u + Q;
        const double dden_du = den * (1.0 / d0 + 1.0 / d1 + 1.0 / d2);
        const double df = (dn_du * den - n * dden_du) / (den * den) * 2.0 * kPiSq * x;
        return {f, df};
    }
};

double xi_series_sum(const DepthParameter& depth, double xi, double xi1, double xi2, int terms) {
    const double d2 = depth.delta * depth.delta;
    XiSeriesSummand f{d2 * (xi1 * xi1 + xi1 * xi2 + xi2 * xi2), d2 * xi * xi, d2 * xi1 * xi1,
                      d2 * xi2 * xi2};
    return 6.0 * xi * xi1 * xi2 * sum_to_infinity(f, terms);
}

int xi_series_terms(double delta_xi_max) {
    return std::max(128, static_cast<int>(std::ceil(delta_xi_max)));
}

} // namespace

std::array<double, 3> FrequencyTriple::ordered_magnitudes() const {
    std::array<double, 3> m = {std::abs(xi()), std::abs(xi1_), std::abs(xi2_)};
    std::sort(m.begin(), m.end(), std::greater<>());
    return m;
}

double xi_kdv(const FrequencyTriple& t) { return 3.0 * t.xi() * t.xi1() * t.xi2(); }

double xi_bo(const FrequencyTriple& t) {
    const double a[3] = {-t.xi(), t.xi1(), t.xi2()};
    int im = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(a[i]) > std::abs(a[im])) im = i;
    const auto mags = t.ordered_magnitudes();
    // On a zero-sum triple, sum_j x_j |x_j| = sign(dominant) 2 med min; the
    // BO resonance is minus that sum.
    return -((a[im] > 0.0) ? 1.0 : (a[im] < 0.0 ? -1.0 : 0.0)) * 2.0 * mags[1] * mags[2];
}

DirectResonance xi_tilde_direct(const DepthParameter& depth, const FrequencyTriple& t) {
    const double p = p_tilde(depth, t.xi());
    const double p1 = p_tilde(depth, t.xi1());
    const double p2 = p_tilde(depth, t.xi2());
    DirectResonance out;
    out.value = p - p1 - p2;
    const double scale = std::max({std::abs(p), std::abs(p1), std::abs(p2)});
    if (scale == 0.0)
        out.cancellation_ratio = 1.0;
    else
        out.cancellation_ratio = out.value == 0.0 ? 1e300 : scale / std::abs(out.value);
    return out;
}

double xi_tilde_series(const DepthParameter& depth, const FrequencyTriple& t, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("xi_tilde_series: tol > 0 required");
    if (!(depth.delta > 0.0)) throw std::invalid_argument("xi_tilde_series: delta > 0 required");
    if (t.xi() == 0.0 || t.xi1() == 0.0 || t.xi2() == 0.0) return 0.0;

    int terms = xi_series_terms(depth.delta * t.max_magnitude());
    double value = xi_series_sum(depth, t.xi(), t.xi1(), t.xi2(), terms);
    for (int round = 0; round < 6; ++round) {
        const double refined = xi_series_sum(depth, t.xi(), t.xi1(), t.xi2(), 2 * terms);
        if (std::abs(refined - value) <= tol * std::abs(refined)) return refined;
        value = refined;
        terms *= 2;
    }
    return value;
}

double xi_tilde(const DepthParameter& depth, const FrequencyTriple& t) {
    if (depth.is_kdv()) return xi_kdv(t);
    if (t.xi() == 0.0 || t.xi1() == 0.0 || t.xi2() == 0.0) {
        // One frequency vanishing collapses the difference to 0 by oddness.
        return 0.0;
    }

    const CanonicalTriple c = canonicalize(t);
    const double d = depth.delta;
    if (d * c.x <= kSeriesSwitch)
        return c.sign * xi_series_sum(depth, c.x, c.y, c.z, xi_series_terms(d * c.x));

    // Exact regrouping of the coth difference on a positive triple:
    //   Xi~ = (3/d) (2 y z + 2 [x^2 w(dx) - y^2 w(dy) - z^2 w(dz)]),
    // w(u) = 1/(e^{2u} - 1). Every term is well scaled in this regime.
    auto term = [d](double v) { return v > 0.0 ? v * v * boltzmann_weight(d * v) : 0.0; };
    const double core = 2.0 * c.y * c.z + 2.0 * (term(c.x) - term(c.y) - term(c.z));
    return c.sign * 3.0 / d * core;
}

std::string band_name(Band b) {
    switch (b) {
        case Band::low: return "low-band";
        case Band::high: return "high-band";
        case Band::mixed: return "mixed";
    }
    return "?";
}

ComparabilityResult comparability_ratio(const DepthParameter& depth, const FrequencyTriple& t) {
    if (t.xi() == 0.0 || t.xi1() == 0.0 || t.xi2() == 0.0)
        throw std::invalid_argument("comparability_ratio: degenerate input (zero frequency)");

    const auto mags = t.ordered_magnitudes();
    const double value = std::abs(xi_tilde(depth, t));
    ComparabilityResult out;
    const double inv_delta = depth.is_kdv() ? std::numeric_limits<double>::infinity()
                                            : 1.0 / depth.delta;
    if (mags[0] <= inv_delta) {
        out.regime = Band::low;
        out.ratio = value / std::abs(t.xi() * t.xi1() * t.xi2());
    } else if (mags[0] >= 10.0 * inv_delta) {
        out.regime = Band::high;
        out.ratio = value / (inv_delta * mags[2] * mags[0]);
    } else {
        out.regime = Band::mixed;
        out.ratio = value / std::abs(t.xi() * t.xi1() * t.xi2());
    }
    return out;
}

double jacobian_mu(const DepthParameter& depth, double xi, double xi1) {
    if (!(depth.delta > 0.0)) throw std::invalid_argument("jacobian_mu: delta > 0 required");
    const double xi2 = xi - xi1;
    const double d2 = depth.delta * depth.delta;
    const double a0 = d2 * xi * xi, a1 = d2 * xi1 * xi1, a2 = d2 * xi2 * xi2;
    const double Q = d2 * (xi1 * xi1 + xi1 * xi2 + xi2 * xi2);

    const int terms = xi_series_terms(depth.delta * std::max({std::abs(xi), std::abs(xi1),
                                                              std::abs(xi2)}));

    XiSeriesSummand f1{Q, a0, a1, a2};
    const double s1 = 2.0 * sum_to_infinity(f1, terms);

    // Correction series: both pieces of d mu / d xi1 carry the common factor
    // xi (xi - 2 xi1); the correction ratio stays below 6 on the band
    // |xi_j| <= 1/delta, so the bracket keeps the sign of the leading series.
    const double C2 = d2 * (xi1 * xi1 - 4.0 * xi1 * xi2 + xi2 * xi2);
    const double C4 = d2 * d2 * xi1 * xi2 * (2.0 * xi1 * xi1 + 3.0 * xi1 * xi2 + 2.0 * xi2 * xi2);
    auto f2 = [&](double x) {
        const double u = kPiSq * x * x;
        const double n = 2.0 * u * (5.0 * u * u + C2 * u - C4);
        const double d0 = u + a0, dd1 = u + a1, dd2 = u + a2;
        const double den = d0 * dd1 * dd1 * dd2 * dd2;
        const double fval = n / den;
        const double dn_du = 30.0 * u * u + 4.0 * C2 * u - 2.0 * C4;
        const double dden_du = den * (1.0 / d0 + 2.0 / dd1 + 2.0 / dd2);
        const double df = (dn_du * den - n * dden_du) / (den * den) * 2.0 * kPiSq * x;
        return std::pair<double, double>{fval, df};
    };
    const double s2 = sum_to_infinity(f2, terms);

    return 3.0 * xi * (xi - 2.0 * xi1) * (s1 + d2 * xi1 * xi2 * s2);
}

double jacobian_correction_ratio(const DepthParameter& depth, const FrequencyTriple& t, int k) {
    if (!(depth.delta > 0.0)) throw std::invalid_argument("jacobian_correction_ratio: delta > 0 required");
    if (k < 1) throw std::invalid_argument("jacobian_correction_ratio: k >= 1 required");
    const double band = 1.0 / depth.delta;
    if (std::abs(t.xi()) > band || std::abs(t.xi1()) > band || std::abs(t.xi2()) > band)
        throw std::invalid_argument("jacobian_correction_ratio: frequency outside the band |xi| <= 1/delta");

    const double d2 = depth.delta * depth.delta;
    const double xi1 = t.xi1(), xi2 = t.xi2();
    const double u = kPiSq * k * k;
    const double B = 5.0 * u * u + u * d2 * (xi1 * xi1 - 4.0 * xi1 * xi2 + xi2 * xi2) -
                     d2 * d2 * xi1 * xi2 * (2.0 * xi1 * xi1 + 3.0 * xi1 * xi2 + 2.0 * xi2 * xi2);
    const double den = (u + d2 * xi1 * xi1) * (u + d2 * xi2 * xi2);
    return std::abs(B) / den;
}

double kdv_resonance_gap(const DepthParameter& depth, const FrequencyTriple& t) {
    if (depth.is_kdv()) return 0.0;
    auto cube_h = [&](double xi) { return xi * xi * xi * h_delta(depth, xi); };
    const double gap = std::abs(cube_h(t.xi()) - cube_h(t.xi1()) - cube_h(t.xi2()));

    const double m = t.max_magnitude();
    const double bound = 3.0 * depth.delta * depth.delta * m * m * m * m * m;
    if (gap > bound * (1.0 + 1e-9) + 1e-300)
        throw std::logic_error("kdv_resonance_gap: defect bound 3 delta^2 xi_max^5 violated");
    return gap;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

namespace {

// Triples with bounded within-triple dynamic range: the identities are
// homogeneous, so only the magnitude ratio affects the floating-point
// comparison. Rejects |xi| below the common floor.
FrequencyTriple sample_triple(Rng& rng, double lo, double hi) {
    for (;;) {
        const double xi1 = rng.sign() * rng.log_uniform(lo, hi);
        const double xi2 = rng.sign() * rng.log_uniform(lo, hi);
        if (std::abs(xi1 + xi2) >= lo) return {xi1, xi2};
    }
}

// In-band triple for a given delta: magnitudes in [floor, 1] / delta.
FrequencyTriple sample_in_band(Rng& rng, double delta, double floor_frac = 1e-3) {
    const double band = 1.0 / delta;
    for (;;) {
        const double xi1 = rng.sign() * rng.log_uniform(floor_frac * band, band);
        const double xi2 = rng.sign() * rng.log_uniform(floor_frac * band, band);
        const double xi = xi1 + xi2;
        if (std::abs(xi) <= band && std::abs(xi) >= floor_frac * band) return {xi1, xi2};
    }
}

double rel_err(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

} // namespace

IdentitySweepResult identity_sweep(int samples, uint64_t seed) {
    Rng rng(seed);
    IdentitySweepResult out;
    out.samples = samples;
    for (int i = 0; i < samples; ++i) {
        const FrequencyTriple t = sample_triple(rng, 1.0, 32.0);
        const double xi = t.xi(), xi1 = t.xi1(), xi2 = t.xi2();

        const double cubic = xi * xi * xi - xi1 * xi1 * xi1 - xi2 * xi2 * xi2;
        out.max_rel_err_kdv = std::max(out.max_rel_err_kdv, rel_err(cubic, xi_kdv(t)));

        const double literal = std::abs(xi) * xi - std::abs(xi1) * xi1 - std::abs(xi2) * xi2;
        out.max_rel_err_bo = std::max(out.max_rel_err_bo, rel_err(literal, xi_bo(t)));
    }
    return out;
}

SeriesDirectSweepResult series_direct_sweep(int samples_per_delta,
                                            const std::vector<double>& deltas, double tol,
                                            uint64_t seed) {
    Rng rng(seed);
    SeriesDirectSweepResult out;
    for (double d : deltas) {
        const DepthParameter depth(d);
        for (int i = 0; i < samples_per_delta; ++i) {
            const FrequencyTriple t = sample_in_band(rng, d);
            const DirectResonance direct = xi_tilde_direct(depth, t);
            if (direct.cancellation_suspect()) {
                ++out.skipped_cancellation;
                continue;
            }
            const double series = xi_tilde_series(depth, t, tol);
            out.max_rel_disagreement = std::max(out.max_rel_disagreement,
                                                rel_err(series, direct.value));
            ++out.samples;
        }
    }
    return out;
}

CorrectionRatioSweepResult correction_ratio_sweep(int samples, uint64_t seed) {
    Rng rng(seed);
    CorrectionRatioSweepResult out;
    out.min_ratio = std::numeric_limits<double>::infinity();
    out.max_ratio = 0.0;

    auto record = [&](double r) {
        out.min_ratio = std::min(out.min_ratio, r);
        out.max_ratio = std::max(out.max_ratio, r);
        ++out.samples;
    };

    // Degenerate corners xi1 = xi2 = 0: the ratio equals its supremum 5.
    for (int k : {1, 2, 4, 16, 256}) record(jacobian_correction_ratio(DepthParameter(0.5), {0.0, 0.0}, k));

    for (int i = 5; i < samples; ++i) {
        const double d = rng.log_uniform(1.0 / 1024.0, 1.0);
        const DepthParameter depth(d);
        const FrequencyTriple t = sample_in_band(rng, d);
        const int k = static_cast<int>(rng.log_uniform(1.0, 1000.0));
        record(jacobian_correction_ratio(depth, t, std::max(1, k)));
    }
    return out;
}

ComparabilitySweepResult comparability_sweep(int samples_per_delta, const std::vector<double>& deltas,
                                 uint64_t seed, int rows_to_keep) {
    Rng rng(seed);
    ComparabilitySweepResult out;
    out.deltas = deltas;
    for (double d : deltas) {
        const DepthParameter depth(d);
        BandRatioStats low{std::numeric_limits<double>::infinity(), 0.0};
        BandRatioStats high{std::numeric_limits<double>::infinity(), 0.0};

        for (int i = 0; i < samples_per_delta; ++i) {
            const FrequencyTriple t = sample_in_band(rng, d);
            const ComparabilityResult r = comparability_ratio(depth, t);
            low.min_ratio = std::min(low.min_ratio, r.ratio);
            low.max_ratio = std::max(low.max_ratio, r.ratio);
            if (rows_to_keep > 0 && static_cast<int>(out.rows.size()) < rows_to_keep)
                out.rows.push_back({band_name(r.regime), d, t.xi(), t.xi1(), t.xi2(), r.ratio});
        }
        for (int i = 0; i < samples_per_delta; ++i) {
            const double band = 1.0 / d;
            const double xi2 = rng.sign() * rng.log_uniform(10.0 * band, 1e4 * band);
            const double xi1 = rng.sign() * rng.log_uniform(1e-3 * band, std::abs(xi2));
            const FrequencyTriple t(xi1, xi2);
            if (t.xi() == 0.0) continue;
            const ComparabilityResult r = comparability_ratio(depth, t);
            high.min_ratio = std::min(high.min_ratio, r.ratio);
            high.max_ratio = std::max(high.max_ratio, r.ratio);
            if (rows_to_keep > 0 && static_cast<int>(out.rows.size()) < rows_to_keep)
                out.rows.push_back({band_name(r.regime), d, t.xi(), t.xi1(), t.xi2(), r.ratio});
        }
        out.low.push_back(low);
        out.high.push_back(high);
    }
    return out;
}

JacobianSweepResult jacobian_sweep(int samples, const DepthParameter& depth, uint64_t seed) {
    Rng rng(seed);
    JacobianSweepResult out;
    out.lower_bound_c = std::numeric_limits<double>::infinity();
    const double band = 1.0 / depth.delta;

    for (int i = 0; i < samples; ++i) {
        double xi, xi1;
        for (;;) {
            xi = rng.sign() * rng.log_uniform(1e-3 * band, band);
            xi1 = rng.sign() * rng.log_uniform(1e-3 * band, band);
            if (std::abs(xi - xi1) <= band) break;
        }
        const double mu = jacobian_mu(depth, xi, xi1);
        const double lead = xi * (xi - 2.0 * xi1);
        const auto sgn = [](double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); };
        if (sgn(mu) != sgn(lead)) ++out.sign_mismatches;

        if (std::abs(xi - 2.0 * xi1) >= 0.5 * std::abs(xi)) {
            const double h = 3e-5 * std::abs(xi);
            const double fd = (xi_tilde(depth, {xi1 + h, xi - xi1 - h}) -
                               xi_tilde(depth, {xi1 - h, xi - xi1 + h})) /
                              (2.0 * h);
            out.max_fd_rel_err = std::max(out.max_fd_rel_err, rel_err(fd, mu));
            out.lower_bound_c = std::min(out.lower_bound_c, std::abs(mu) / (xi * xi));
        }
        ++out.samples;
    }
    return out;
}

} // namespace ilw
