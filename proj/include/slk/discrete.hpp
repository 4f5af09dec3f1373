#pragma once

#include <memory>
#include <span>
#include <vector>

#include "slk/potentials.hpp"
#include "slk/run_result.hpp"
#include "slk/tridiagonal.hpp"
#include "slk/wavefunction.hpp"

namespace slk {

struct DiscreteSlkParams {
    double beta = 0.0;
    double dt = 0.02;
    double t_max = 400.0;
};

/// sqrt(2/(epsilon+1)) sin(k pi x / (epsilon+1)) on sites 1..epsilon, zero elsewhere.
struct SinePacket {
    std::size_t epsilon = 17;
    std::size_t k = 8;
};

/// Kostin potential K(x) = beta * sum_{y=2}^{x} sin(S(y) - S(y-1)); values[0] is site 1.
struct KostinField {
    std::vector<double> values;
};

/// Squared amplitude below which a site's phase is treated as undefined.
inline constexpr double kKostinAmplitudeFloor = 1e-30;

/// Throws InvalidArgument unless 1 <= k <= epsilon < s.
WaveFunction sine_packet(const SinePacket& spec, const Lattice& lattice);

/// Phase differences come from Arg(psi(y) conj(psi(y-1))), so no unwrapping is
/// involved; a term touching a site with rho below kKostinAmplitudeFloor is 0.
KostinField kostin_field(const WaveFunction& psi, double beta);
void kostin_field(std::span<const Complex> psi, double beta, std::span<double> out);

/// <psi|h|psi> / <psi|psi> with h = -(1/2)(nearest-neighbour hopping) + V on the open chain.
double lattice_energy(const WaveFunction& psi, const PotentialField& v);

/// -sum_x sqrt(rho(x+1) rho(x)) (K(x+1) - K(x)) sin(S(x+1) - S(x)), the
/// instantaneous d<h>/dt under the Kostin flow; never positive for beta >= 0.
double dissipation_rate(const WaveFunction& psi, double beta);

namespace detail {
class SplitStepper;
}

/// Stepper for i psi_t = h psi + K[psi] psi on the open chain.
///
/// Same symmetric splitting as the continuous case: half kick with V + K
/// (K evaluated on the state entering the kick), Crank-Nicolson hopping step,
/// half kick with K re-evaluated, renormalization.
class DiscreteSlk {
public:
    DiscreteSlk(PotentialField v, const DiscreteSlkParams& params);
    ~DiscreteSlk();
    DiscreteSlk(DiscreteSlk&&) noexcept;
    DiscreteSlk& operator=(DiscreteSlk&&) noexcept;

    /// Advances psi by one dt in place; returns the norm before renormalization.
    double step(std::span<Complex> psi);

    const Lattice& lattice() const noexcept { return lattice_; }
    const PotentialField& potential() const noexcept { return v_; }
    const SymTridiagonal& hamiltonian() const noexcept { return hamiltonian_; }

private:
    Lattice lattice_;
    PotentialField v_;
    DiscreteSlkParams params_;
    SymTridiagonal hamiltonian_;
    std::unique_ptr<detail::SplitStepper> stepper_;
};

WaveFunction discrete_step(const WaveFunction& psi, const PotentialField& v, const DiscreteSlkParams& params);

struct DiscreteRunOptions {
    std::size_t record_every = 1;
    /// Density-map cadence in steps; 0 disables the map.
    std::size_t map_every = 0;
    /// Width of the arrival window (the delta rightmost sites).
    std::size_t delta = 34;
};

/// Records t, norm (before the step's renormalization), <h>, and the arrival probability.
RunResult run_discrete(const WaveFunction& psi0, const PotentialField& v, const DiscreteSlkParams& params,
                       const DiscreteRunOptions& options);

}  // namespace slk
