#pragma once

#include <stdexcept>

namespace ilw {

/// Uniform periodic grid on [-L/2, L/2) with an even number of points.
/// Storage order of spectral data follows the usual FFT layout: index i
/// maps to the integer wavenumber k = i for i <= n/2 and k = i - n
/// otherwise, so k runs over {-n/2+1, ..., n/2} with the Nyquist mode
/// k = n/2 appearing once.
class RealGrid {
public:
    RealGrid(double box_length, int mode_count)
        : box_length_(box_length), mode_count_(mode_count) {
        if (!(box_length > 0.0))
            throw std::invalid_argument("RealGrid: box_length must be positive");
        if (mode_count < 2 || mode_count % 2 != 0)
            throw std::invalid_argument("RealGrid: mode_count must be a positive even integer");
    }

    double box_length() const { return box_length_; }
    int mode_count() const { return mode_count_; }

    double spacing() const { return box_length_ / mode_count_; }
    double spectral_spacing() const { return two_pi() / box_length_; }

    /// Physical coordinate of sample j.
    double x(int j) const { return -0.5 * box_length_ + j * spacing(); }

    /// Integer wavenumber of storage index i.
    int wavenumber(int i) const { return i <= mode_count_ / 2 ? i : i - mode_count_; }

    /// Angular frequency xi_k = 2 pi k / L of storage index i.
    double frequency(int i) const { return spectral_spacing() * wavenumber(i); }

    /// Largest representable |xi| (the Nyquist frequency).
    double max_frequency() const { return spectral_spacing() * (mode_count_ / 2); }

    /// Storage index carrying wavenumber -k of index i (conjugate partner).
    int conjugate_index(int i) const { return i == 0 ? 0 : mode_count_ - i; }

    bool operator==(const RealGrid& o) const {
        return box_length_ == o.box_length_ && mode_count_ == o.mode_count_;
    }
    bool operator!=(const RealGrid& o) const { return !(*this == o); }

private:
    static constexpr double two_pi() { return 6.283185307179586476925286766559; }

    double box_length_;
    int mode_count_;
};

} // namespace ilw
