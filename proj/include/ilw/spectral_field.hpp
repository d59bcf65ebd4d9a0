#pragma once

#include "ilw/grid.hpp"

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

namespace ilw {

using cplx = std::complex<double>;

struct InvalidFieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Real-valued periodic function stored as Fourier coefficients.
///
/// Coefficients use the continuum normalization: coeff(xi_k) approximates
/// the integral of f(x) e^{-i xi_k x} over the box, i.e. the discrete sum
/// times the grid spacing. A real field satisfies coeff(-xi) = conj(coeff(xi))
/// with a real Nyquist coefficient.
class SpectralField {
public:
    explicit SpectralField(const RealGrid& grid)
        : grid_(grid), coeffs_(static_cast<size_t>(grid.mode_count()), cplx(0.0, 0.0)) {}

    SpectralField(const RealGrid& grid, std::vector<cplx> coeffs)
        : grid_(grid), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != static_cast<size_t>(grid_.mode_count()))
            throw std::invalid_argument("SpectralField: coefficient count does not match grid");
    }

    const RealGrid& grid() const { return grid_; }
    int size() const { return grid_.mode_count(); }

    std::span<const cplx> coeffs() const { return coeffs_; }
    std::span<cplx> coeffs() { return coeffs_; }
    const cplx& operator[](int i) const { return coeffs_[static_cast<size_t>(i)]; }
    cplx& operator[](int i) { return coeffs_[static_cast<size_t>(i)]; }

private:
    RealGrid grid_;
    std::vector<cplx> coeffs_;
};

/// DFT with continuum normalization; samples live on x_j = -L/2 + j dx.
/// Throws std::invalid_argument when the sample count does not match the grid.
SpectralField forward_transform(const RealGrid& grid, std::span<const double> samples);

/// Inverse of forward_transform. Throws InvalidFieldError when conjugate
/// symmetry is broken beyond 1e-10 (relative to the largest coefficient).
std::vector<double> inverse_transform(const SpectralField& field);

/// Sharp Fourier cutoff onto {|xi| <= cutoff}; ties are kept in the low band.
SpectralField project_low(const SpectralField& field, double cutoff);

/// Complement of project_low; project_low + project_high reproduces the
/// input coefficientwise (each coefficient goes to exactly one side).
SpectralField project_high(const SpectralField& field, double cutoff);

/// ( (1/2pi) sum_k (1+xi_k^2)^s |coeff_k|^2 dxi )^{1/2}  with dxi = 2 pi / L.
double sobolev_norm(const SpectralField& field, double s);

inline double l2_norm(const SpectralField& field) { return sobolev_norm(field, 0.0); }

/// Multiply coefficient at xi by e^{i xi y} (f shifted to f(.+y)).
SpectralField translate(const SpectralField& field, double y);

/// Largest |coeff(-xi) - conj(coeff(xi))| relative to the largest |coeff|.
double conjugate_symmetry_defect(const SpectralField& field);

/// Truncation diagnostics for the periodic-box approximation of the line:
/// physical_fraction is the share of |f|^2 mass in the outer 10% of the box,
/// spectral_fraction the share of coefficient mass in the top octave of
/// frequencies. Both must stay tiny for the box to stand in for the line.
struct BoundaryMassReport {
    double physical_fraction = 0.0;
    double spectral_fraction = 0.0;
    bool within(double tol) const {
        return physical_fraction < tol && spectral_fraction < tol;
    }
};

BoundaryMassReport boundary_mass(const SpectralField& field);

} // namespace ilw
