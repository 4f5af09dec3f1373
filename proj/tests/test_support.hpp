#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "slk/grid.hpp"
#include "slk/wavefunction.hpp"

namespace slk::testing {

/// Random normalized state with smooth-ish random amplitudes and phases.
inline WaveFunction random_state(const Domain& domain, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Complex> amp(domain_size(domain));
    for (auto& z : amp) {
        z = {gauss(rng), gauss(rng)};
    }
    return normalize(WaveFunction(domain, std::move(amp)));
}

/// Smooth Gaussian packet exp(-(x - center)^2 / (4 sigma^2) + i p x), normalized.
inline WaveFunction gaussian_packet(const Grid1D& grid, double center, double sigma, double momentum = 0.0) {
    std::vector<Complex> amp(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double y = grid.x(i) - center;
        amp[i] = std::polar(std::exp(-y * y / (4.0 * sigma * sigma)), momentum * grid.x(i));
    }
    return normalize(WaveFunction(grid, std::move(amp)));
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

}  // namespace slk::testing
