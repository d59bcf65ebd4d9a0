#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace ilw {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
/// Cached per n; thread-safe.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int n);

/// Integrate f over [a, b] with an n-point Gauss-Legendre rule.
template <class F>
double gl_integrate(F&& f, double a, double b, int n) {
    const GaussLegendre& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return acc * half;
}

/// sum_{k=1}^infty f(k) for smooth f decaying at least like 1/k^2.
/// K explicit terms, then the Euler-Maclaurin tail at m = K+1:
///   sum_{k>=m} f(k) = int_m^inf f + f(m)/2 - f'(m)/12 + O(f'''(m))
/// with the integral evaluated in s = 1/x by Gauss-Legendre.
/// `f` returns {f(x), f'(x)}.
template <class F>
double sum_to_infinity(F&& f, int terms) {
    double partial = 0.0;
    for (int k = terms; k >= 1; --k) partial += f(static_cast<double>(k)).first;
    const double m = static_cast<double>(terms + 1);
    const double integral =
        gl_integrate([&](double s) { return f(1.0 / s).first / (s * s); }, 0.0, 1.0 / m, 64);
    auto [fm, dfm] = f(m);
    return partial + integral + 0.5 * fm - dfm / 12.0;
}

/// Least-squares slope/intercept of y against x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Deterministic 64-bit generator (splitmix64) with a portable mapping to
/// doubles in [0,1); standard-library distributions are avoided because their
/// output is implementation-defined.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Log-uniform magnitude in [lo, hi], lo > 0.
    double log_uniform(double lo, double hi);

    /// -1 or +1.
    double sign() { return (next_u64() & 1u) ? 1.0 : -1.0; }

private:
    uint64_t state_;
};

} // namespace ilw
