#include "ilw/spectral_field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

namespace ilw {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// FFTW planning is not thread-safe; execution on caller-owned buffers is.
// Plans are created once per size with FFTW_ESTIMATE (deterministic choice)
// and reused through fftw_execute_dft.
class FftPlans {
public:
    static FftPlans& instance() {
        static FftPlans plans;
        return plans;
    }

    void forward(int n, cplx* data) { execute(n, data, /*forward=*/true); }
    void backward(int n, cplx* data) { execute(n, data, /*forward=*/false); }

private:
    struct Pair {
        fftw_plan fwd = nullptr;
        fftw_plan bwd = nullptr;
    };

    void execute(int n, cplx* data, bool forward) {
        Pair& p = plan_for(n);
        auto* raw = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(forward ? p.fwd : p.bwd, raw, raw);
    }

    Pair& plan_for(int n) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find(n);
        if (it == plans_.end()) {
            // Plan on a scratch buffer; FFTW_ESTIMATE leaves it untouched.
            std::vector<cplx> scratch(static_cast<size_t>(n));
            auto* raw = reinterpret_cast<fftw_complex*>(scratch.data());
            Pair p;
            p.fwd = fftw_plan_dft_1d(n, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
            p.bwd = fftw_plan_dft_1d(n, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
            it = plans_.emplace(n, p).first;
        }
        return it->second;
    }

    std::mutex mutex_;
    std::map<int, Pair> plans_;
};

double coefficient_scale(const SpectralField& field) {
    double m = 0.0;
    for (const cplx& c : field.coeffs()) m = std::max(m, std::abs(c));
    return m;
}

} // namespace

SpectralField forward_transform(const RealGrid& grid, std::span<const double> samples) {
    if (samples.size() != static_cast<size_t>(grid.mode_count()))
        throw std::invalid_argument("forward_transform: sample count does not match grid");

    const int n = grid.mode_count();
    std::vector<cplx> buf(samples.begin(), samples.end());
    FftPlans::instance().forward(n, buf.data());

    // Continuum normalization plus the phase from x_0 = -L/2:
    // coeff_k = dx * e^{i xi_k L / 2} * DFT_k = dx * (-1)^k * DFT_k.
    const double dx = grid.spacing();
    SpectralField field(grid);
    for (int i = 0; i < n; ++i) {
        const int k = grid.wavenumber(i);
        const double sign = (k & 1) ? -1.0 : 1.0;
        field[i] = dx * sign * buf[static_cast<size_t>(i)];
    }
    return field;
}

std::vector<double> inverse_transform(const SpectralField& field) {
    const double defect = conjugate_symmetry_defect(field);
    if (defect > 1e-10)
        throw InvalidFieldError("inverse_transform: conjugate symmetry broken (defect " +
                                std::to_string(defect) + ")");

    const RealGrid& grid = field.grid();
    const int n = grid.mode_count();
    std::vector<cplx> buf(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int k = grid.wavenumber(i);
        const double sign = (k & 1) ? -1.0 : 1.0;
        buf[static_cast<size_t>(i)] = sign * field[i];
    }
    FftPlans::instance().backward(n, buf.data());

    std::vector<double> samples(static_cast<size_t>(n));
    const double scale = 1.0 / grid.box_length(); // 1 / (n dx)
    for (int j = 0; j < n; ++j) samples[static_cast<size_t>(j)] = buf[static_cast<size_t>(j)].real() * scale;
    return samples;
}

SpectralField project_low(const SpectralField& field, double cutoff) {
    if (!(cutoff > 0.0)) throw std::invalid_argument("project_low: cutoff > 0 required");
    SpectralField out = field;
    const RealGrid& grid = field.grid();
    for (int i = 0; i < grid.mode_count(); ++i)
        if (std::abs(grid.frequency(i)) > cutoff) out[i] = 0.0;
    return out;
}

SpectralField project_high(const SpectralField& field, double cutoff) {
    if (!(cutoff > 0.0)) throw std::invalid_argument("project_high: cutoff > 0 required");
    SpectralField out = field;
    const RealGrid& grid = field.grid();
    for (int i = 0; i < grid.mode_count(); ++i)
        if (std::abs(grid.frequency(i)) <= cutoff) out[i] = 0.0;
    return out;
}

double sobolev_norm(const SpectralField& field, double s) {
    const RealGrid& grid = field.grid();
    const double dxi = grid.spectral_spacing();
    double acc = 0.0;
    for (int i = 0; i < grid.mode_count(); ++i) {
        const double xi = grid.frequency(i);
        const double weight = (s == 0.0) ? 1.0 : std::pow(1.0 + xi * xi, s);
        acc += weight * std::norm(field[i]);
    }
    return std::sqrt(acc * dxi / kTwoPi);
}

SpectralField translate(const SpectralField& field, double y) {
    SpectralField out = field;
    const RealGrid& grid = field.grid();
    for (int i = 0; i < grid.mode_count(); ++i) {
        const double xi = grid.frequency(i);
        out[i] *= cplx(std::cos(xi * y), std::sin(xi * y));
    }
    return out;
}

double conjugate_symmetry_defect(const SpectralField& field) {
    const double scale = coefficient_scale(field);
    if (scale == 0.0) return 0.0;
    const RealGrid& grid = field.grid();
    double worst = 0.0;
    for (int i = 0; i < grid.mode_count(); ++i) {
        const int j = grid.conjugate_index(i);
        worst = std::max(worst, std::abs(field[i] - std::conj(field[j])));
    }
    return worst / scale;
}

BoundaryMassReport boundary_mass(const SpectralField& field) {
    BoundaryMassReport report;
    const RealGrid& grid = field.grid();
    const int n = grid.mode_count();

    std::vector<double> samples = inverse_transform(field);
    double total_phys = 0.0, edge_phys = 0.0;
    const int edge = std::max(1, n / 20); // outer 10% of the box: n/20 per side
    for (int j = 0; j < n; ++j) {
        const double m = samples[static_cast<size_t>(j)] * samples[static_cast<size_t>(j)];
        total_phys += m;
        if (j < edge || j >= n - edge) edge_phys += m;
    }
    report.physical_fraction = total_phys > 0.0 ? edge_phys / total_phys : 0.0;

    double total_spec = 0.0, top_spec = 0.0;
    const double half_band = 0.5 * grid.max_frequency();
    for (int i = 0; i < n; ++i) {
        const double m = std::norm(field[i]);
        total_spec += m;
        if (std::abs(grid.frequency(i)) > half_band) top_spec += m;
    }
    report.spectral_fraction = total_spec > 0.0 ? top_spec / total_spec : 0.0;
    return report;
}

} // namespace ilw
