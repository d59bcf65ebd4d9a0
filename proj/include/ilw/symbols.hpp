#pragma once

#include "ilw/grid.hpp"

#include <complex>
#include <stdexcept>
#include <vector>

namespace ilw {

/// Depth parameter of the scaled equation; delta = 0 selects the KdV branch
/// exactly (dispersion xi^3, full-band projector), never a small-delta limit.
struct DepthParameter {
    double delta;

    explicit DepthParameter(double d) : delta(d) {
        if (!(d >= 0.0))
            throw std::invalid_argument("DepthParameter: delta >= 0 required");
    }
    bool is_kdv() const { return delta == 0.0; }
};

/// coth(x) - 1/x, the removable-singularity combination behind the dispersion
/// symbol. Evaluated by its Laurent series for |x| < 0.25 and by
/// 1 - 1/x + 2/(e^{2x} - 1) (via expm1) otherwise; both branches are accurate
/// to ~1e-14 relative and the function is odd by construction.
double coth_minus_inverse(double x);

/// Multiplier of the scaled nonlocal operator composed with d/dx:
/// (3 xi / delta) * coth_minus_inverse(delta xi) for delta > 0, xi^2 at
/// delta = 0. Even, nonnegative, bounded by min(xi^2, 3|xi|/delta).
double L_delta(const DepthParameter& depth, double xi);

/// Relative defect 1 - L_delta(xi)/xi^2, in [0, 1]; 0 at xi = 0 or delta = 0.
/// Tiny rounding excursions outside [0,1] (below 1e-12) are clamped.
double h_delta(const DepthParameter& depth, double xi);

/// Dispersion symbol xi * L_delta(xi); equals xi^3 on the KdV branch. Odd.
double p_tilde(const DepthParameter& depth, double xi);

/// Unit-modulus symbol e^{i t p_tilde(xi)} of the free propagator.
std::complex<double> propagator_phase(const DepthParameter& depth, double t, double xi);

/// Series (Mittag-Leffler) forms of L_delta and h_delta, summed with an
/// Euler-Maclaurin tail and refined until doubling the term count moves the
/// value by less than tol relative. Independent evaluation path used to
/// cross-check the closed forms. Requires delta > 0, tol > 0.
double L_delta_series(const DepthParameter& depth, double xi, double tol);
double h_delta_series(const DepthParameter& depth, double xi, double tol);

/// p_tilde tabulated on a grid; immutable after construction.
class MultiplierTable {
public:
    MultiplierTable(const RealGrid& grid, const DepthParameter& depth);

    const RealGrid& grid() const { return grid_; }
    const DepthParameter& depth() const { return depth_; }
    double value(int i) const { return values_[static_cast<size_t>(i)]; }
    const std::vector<double>& values() const { return values_; }

private:
    RealGrid grid_;
    DepthParameter depth_;
    std::vector<double> values_;
};

} // namespace ilw
