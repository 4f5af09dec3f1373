#pragma once

#include <memory>
#include <optional>

#include "slk/potentials.hpp"
#include "slk/run_result.hpp"
#include "slk/tridiagonal.hpp"
#include "slk/wavefunction.hpp"

namespace slk {

/// Parameters of i psi_t = -(nu^2/2) psi_xx + V psi + beta S psi on a grid.
struct SlkParams {
    double nu = 1.0;
    double beta = 0.0;
    double dt = 1e-3;
    double t_max = 50.0;
    /// Relative density floor (fraction of max rho) below which the phase S is held.
    double rho_floor = kDefaultPhaseFloor;
    /// Replace S by S - <S> (density-weighted mean) before applying the friction term.
    /// Only the global phase of psi changes; densities and observables do not.
    bool subtract_mean_phase = true;
};

/// Default relative density floor for W reconstruction.
inline constexpr double kDefaultWFloor = 1e-6;

namespace detail {
class SplitStepper;
}

/// Stepper for the continuous SLK equation.
///
/// Each step: half kick with V + beta S (S unwrapped from the current state),
/// Crank-Nicolson kinetic step with Dirichlet ghosts, half kick with S
/// recomputed, then renormalization. Second order in dt; the kinetic step is
/// unconditionally stable. Construction rejects dt * max|V| > pi, where the
/// potential phase per step would alias.
class ContinuousSlk {
public:
    ContinuousSlk(PotentialField v, const SlkParams& params);
    ~ContinuousSlk();
    ContinuousSlk(ContinuousSlk&&) noexcept;
    ContinuousSlk& operator=(ContinuousSlk&&) noexcept;

    /// Advances psi by one dt in place; returns the norm before renormalization.
    /// Throws RuntimeFailure on non-finite amplitudes.
    double step(std::span<Complex> psi);

    const Grid1D& grid() const noexcept { return grid_; }
    const PotentialField& potential() const noexcept { return v_; }
    const SlkParams& params() const noexcept { return params_; }
    const SymTridiagonal& hamiltonian() const noexcept { return hamiltonian_; }

private:
    bool friction(std::span<const Complex> psi, std::span<double> out);

    Grid1D grid_;
    PotentialField v_;
    SlkParams params_;
    SymTridiagonal hamiltonian_;
    std::unique_ptr<detail::SplitStepper> stepper_;
};

/// One step of the continuous SLK equation on a normalized state.
WaveFunction slk_step(const WaveFunction& psi, const PotentialField& v, const SlkParams& params);

struct ContinuousRunOptions {
    std::size_t record_every = 1;
    /// Snapshot cadence in steps; 0 keeps only the initial and final snapshots.
    std::size_t snapshot_every = 0;
    std::optional<WaveFunction> reference;
    double w_rho_floor = kDefaultWFloor;
};

/// Integrates to t_max (which must be a whole number of steps), recording
/// t, norm (before the step's renormalization), energy, and overlap with the
/// reference when one is given. Snapshots carry density, phase and W.
RunResult run_continuous(const WaveFunction& psi0, const PotentialField& v, const SlkParams& params,
                         const ContinuousRunOptions& options);

/// <psi|H|psi> / <psi|psi> with the propagator's discrete Laplacian.
double energy(const WaveFunction& psi, const PotentialField& v, double nu);

/// W = Re[(nu^2 / 2) (Laplacian psi) / psi] + energy_value wherever rho > rho_floor * max(rho).
ReconstructedPotential reconstruct_w(const WaveFunction& psi, double nu, double energy_value,
                                     double rho_floor = kDefaultWFloor);

/// Number of steps covering t_max; throws InvalidArgument unless t_max is a whole multiple of dt.
std::size_t step_count(double t_max, double dt);

}  // namespace slk
