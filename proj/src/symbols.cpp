#include "ilw/symbols.hpp"

#include "ilw/numerics.hpp"

#include <cmath>

namespace ilw {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPiSq = kPi * kPi;

// Laurent coefficients of coth(x) - 1/x = sum c_j x^{2j+1}; the series
// converges for |x| < pi, and through x^13 the truncation error at the
// switch point 0.25 is below 1e-15 relative.
constexpr double kCmiSwitch = 0.25;
constexpr double kCmiCoeffs[] = {
    1.0 / 3.0,
    -1.0 / 45.0,
    2.0 / 945.0,
    -1.0 / 4725.0,
    2.0 / 93555.0,
    -1382.0 / 638512875.0,
    4.0 / 18243225.0,
};

// Term count for the Mittag-Leffler sums: enough that the Euler-Maclaurin
// remainder is far below the requested tolerances over |delta xi| <= ~1e3.
int series_terms(double delta_xi) {
    const int geometry = static_cast<int>(std::ceil(std::abs(delta_xi)));
    return std::max(64, geometry);
}

} // namespace

double coth_minus_inverse(double x) {
    if (x == 0.0) return 0.0;
    const double ax = std::abs(x);
    double value;
    if (ax < kCmiSwitch) {
        const double x2 = ax * ax;
        double acc = 0.0;
        for (int j = static_cast<int>(std::size(kCmiCoeffs)) - 1; j >= 0; --j)
            acc = acc * x2 + kCmiCoeffs[j];
        value = ax * acc;
    } else {
        // coth(x) = 1 + 2/(e^{2x} - 1) for x > 0.
        value = 1.0 - 1.0 / ax + 2.0 / std::expm1(2.0 * ax);
    }
    return x > 0.0 ? value : -value;
}

double L_delta(const DepthParameter& depth, double xi) {
    if (depth.is_kdv()) return xi * xi;
    if (xi == 0.0) return 0.0;
    return 3.0 * xi / depth.delta * coth_minus_inverse(depth.delta * xi);
}

double h_delta(const DepthParameter& depth, double xi) {
    if (depth.is_kdv() || xi == 0.0) return 0.0;
    double h = 1.0 - L_delta(depth, xi) / (xi * xi);
    if (h < 0.0 && h > -1e-12) h = 0.0;
    if (h > 1.0 && h < 1.0 + 1e-12) h = 1.0;
    return h;
}

double p_tilde(const DepthParameter& depth, double xi) {
    return xi * L_delta(depth, xi);
}

std::complex<double> propagator_phase(const DepthParameter& depth, double t, double xi) {
    const double phase = t * p_tilde(depth, xi);
    return {std::cos(phase), std::sin(phase)};
}

double L_delta_series(const DepthParameter& depth, double xi, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("L_delta_series: tol > 0 required");
    if (!(depth.delta > 0.0)) throw std::invalid_argument("L_delta_series: delta > 0 required");
    if (xi == 0.0) return 0.0;

    const double y2 = depth.delta * depth.delta * xi * xi;
    auto summand = [y2](double x) {
        const double den = kPiSq * x * x + y2;
        const double f = 1.0 / den;
        const double df = -2.0 * kPiSq * x / (den * den);
        return std::pair<double, double>{f, df};
    };

    int terms = series_terms(depth.delta * xi);
    double value = sum_to_infinity(summand, terms);
    for (int round = 0; round < 6; ++round) {
        const double refined = sum_to_infinity(summand, 2 * terms);
        if (std::abs(refined - value) <= tol * std::abs(refined)) {
            value = refined;
            break;
        }
        value = refined;
        terms *= 2;
    }
    return 6.0 * xi * xi * value;
}

double h_delta_series(const DepthParameter& depth, double xi, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("h_delta_series: tol > 0 required");
    if (!(depth.delta > 0.0)) throw std::invalid_argument("h_delta_series: delta > 0 required");
    if (xi == 0.0) return 0.0;

    const double y2 = depth.delta * depth.delta * xi * xi;
    auto summand = [y2](double x) {
        const double u = kPiSq * x * x;
        const double den = u * (u + y2);
        const double f = 1.0 / den;
        // f'/f = -(1/u + 1/(u + y2)) u' with u' = 2 pi^2 x.
        const double df = -f * (1.0 / u + 1.0 / (u + y2)) * 2.0 * kPiSq * x;
        return std::pair<double, double>{f, df};
    };

    int terms = series_terms(depth.delta * xi);
    double value = sum_to_infinity(summand, terms);
    for (int round = 0; round < 6; ++round) {
        const double refined = sum_to_infinity(summand, 2 * terms);
        if (std::abs(refined - value) <= tol * std::abs(refined)) {
            value = refined;
            break;
        }
        value = refined;
        terms *= 2;
    }
    return 6.0 * y2 * value;
}

MultiplierTable::MultiplierTable(const RealGrid& grid, const DepthParameter& depth)
    : grid_(grid), depth_(depth), values_(static_cast<size_t>(grid.mode_count())) {
    for (int i = 0; i < grid.mode_count(); ++i)
        values_[static_cast<size_t>(i)] = p_tilde(depth, grid.frequency(i));
}

} // namespace ilw
