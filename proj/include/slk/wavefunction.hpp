#pragma once

#include <complex>
#include <span>
#include <vector>

#include "slk/grid.hpp"

namespace slk {

using Complex = std::complex<double>;

/// Complex amplitudes over a grid or lattice.
///
/// Norms and inner products use the domain weight: dx on a grid (so refinement
/// converges to the L2 value), 1 on a lattice.
class WaveFunction {
public:
    WaveFunction(Domain domain, std::vector<Complex> amplitudes);

    const Domain& domain() const noexcept { return domain_; }
    std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    std::size_t size() const noexcept { return amplitudes_.size(); }
    const Complex& operator[](std::size_t i) const noexcept { return amplitudes_[i]; }

    /// Moves the amplitude buffer out (used by the propagators to avoid copies).
    std::vector<Complex> release() && { return std::move(amplitudes_); }

private:
    Domain domain_;
    std::vector<Complex> amplitudes_;
};

/// Modulus and unwrapped phase of a state: psi = sqrt(rho) * exp(i * phase).
struct DensityPhase {
    Domain domain;
    std::vector<double> rho;
    std::vector<double> phase;
};

double norm_squared(const WaveFunction& psi) noexcept;
double norm(const WaveFunction& psi) noexcept;

/// Rescales to unit norm. Throws InvalidArgument("degenerate state") for a zero or non-finite norm.
WaveFunction normalize(const WaveFunction& psi);

/// <a|b>, conjugate-linear in `a`. Throws InvalidArgument on domain mismatch.
Complex inner(const WaveFunction& a, const WaveFunction& b);

/// Weighted l2 distance ||a - b||.
double distance(const WaveFunction& a, const WaveFunction& b);

WaveFunction with_global_phase(const WaveFunction& psi, double alpha);

/// Default relative density floor for phase reliability.
inline constexpr double kDefaultPhaseFloor = 1e-12;

/// Splits psi into density and phase.
///
/// The phase is unwrapped left to right over the indices with
/// rho > rho_floor * max(rho); elsewhere it holds the last reliable value
/// (leading unreliable points take the first reliable value).
DensityPhase to_density_phase(const WaveFunction& psi, double rho_floor = kDefaultPhaseFloor);

/// Rebuilds sqrt(rho) * exp(i * phase).
WaveFunction from_density_phase(const DensityPhase& dp);

/// Unwrapped phase of raw amplitudes; shared with the continuous propagator.
void unwrap_phase(std::span<const Complex> amplitudes, double rho_floor, std::span<double> phase_out);

}  // namespace slk
