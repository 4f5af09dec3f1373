#include "slk/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "slk/error.hpp"

namespace slk {

namespace {

void require_same_domain(const Domain& a, const Domain& b) {
    if (!(a == b)) {
        throw InvalidArgument("wavefunctions live on different domains");
    }
}

}  // namespace

WaveFunction::WaveFunction(Domain domain, std::vector<Complex> amplitudes)
    : domain_(std::move(domain)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != domain_size(domain_)) {
        throw InvalidArgument("amplitude count " + std::to_string(amplitudes_.size()) +
                              " does not match domain size " + std::to_string(domain_size(domain_)));
    }
}

double norm_squared(const WaveFunction& psi) noexcept {
    double sum = 0.0;
    for (const Complex& z : psi.amplitudes()) {
        sum += std::norm(z);
    }
    return sum * domain_weight(psi.domain());
}

double norm(const WaveFunction& psi) noexcept { return std::sqrt(norm_squared(psi)); }

WaveFunction normalize(const WaveFunction& psi) {
    const double n = norm(psi);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw InvalidArgument("degenerate state");
    }
    std::vector<Complex> out(psi.amplitudes().begin(), psi.amplitudes().end());
    const double scale = 1.0 / n;
    for (Complex& z : out) {
        z *= scale;
    }
    return {psi.domain(), std::move(out)};
}

Complex inner(const WaveFunction& a, const WaveFunction& b) {
    require_same_domain(a.domain(), b.domain());
    Complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += std::conj(a[i]) * b[i];
    }
    return sum * domain_weight(a.domain());
}

double distance(const WaveFunction& a, const WaveFunction& b) {
    require_same_domain(a.domain(), b.domain());
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += std::norm(a[i] - b[i]);
    }
    return std::sqrt(sum * domain_weight(a.domain()));
}

WaveFunction with_global_phase(const WaveFunction& psi, double alpha) {
    const Complex factor = std::polar(1.0, alpha);
    std::vector<Complex> out(psi.amplitudes().begin(), psi.amplitudes().end());
    for (Complex& z : out) {
        z *= factor;
    }
    return {psi.domain(), std::move(out)};
}

void unwrap_phase(std::span<const Complex> amplitudes, double rho_floor, std::span<double> phase_out) {
    const std::size_t n = amplitudes.size();
    double rho_max = 0.0;
    for (const Complex& z : amplitudes) {
        rho_max = std::max(rho_max, std::norm(z));
    }
    const double threshold = rho_floor * rho_max;
    constexpr double two_pi = 2.0 * std::numbers::pi;

    std::size_t leading = 0;  // unreliable points before the first reliable one
    bool have_reliable = false;
    double last_raw = 0.0;
    double last_unwrapped = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rho = std::norm(amplitudes[i]);
        if (rho > threshold && rho > 0.0) {
            const double raw = std::arg(amplitudes[i]);
            if (!have_reliable) {
                last_unwrapped = raw;
                have_reliable = true;
                std::fill_n(phase_out.begin(), leading, raw);
            } else {
                double step = raw - last_raw;
                step -= two_pi * std::round(step / two_pi);
                last_unwrapped += step;
            }
            last_raw = raw;
            phase_out[i] = last_unwrapped;
        } else if (have_reliable) {
            phase_out[i] = last_unwrapped;
        } else {
            ++leading;
        }
    }
    if (!have_reliable) {
        std::fill(phase_out.begin(), phase_out.end(), 0.0);
    }
}

DensityPhase to_density_phase(const WaveFunction& psi, double rho_floor) {
    DensityPhase dp{psi.domain(), std::vector<double>(psi.size()), std::vector<double>(psi.size())};
    for (std::size_t i = 0; i < psi.size(); ++i) {
        dp.rho[i] = std::norm(psi[i]);
    }
    unwrap_phase(psi.amplitudes(), rho_floor, dp.phase);
    return dp;
}

WaveFunction from_density_phase(const DensityPhase& dp) {
    std::vector<Complex> out(dp.rho.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::polar(std::sqrt(dp.rho[i]), dp.phase[i]);
    }
    return {dp.domain, std::move(out)};
}

}  // namespace slk
