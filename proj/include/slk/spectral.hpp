#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "slk/potentials.hpp"
#include "slk/tridiagonal.hpp"
#include "slk/wavefunction.hpp"

namespace slk {

/// Nearest-neighbour hopping amplitude of the lattice Hamiltonian h.
inline constexpr double kLatticeHopping = 0.5;

/// Largest dimension accepted by the dense oracle routines.
inline constexpr std::size_t kOracleSizeCap = 4096;

/// Hamiltonian as a symmetric tridiagonal matrix.
///
/// Grid: -(nu^2/2) times the 3-point Laplacian with zero Dirichlet ghosts just
/// outside the grid, plus V; `coefficient` is nu.
/// Lattice: off-diagonal -coefficient (the hopping amplitude, 1/2 for h), diagonal V.
SymTridiagonal build_hamiltonian_matrix(const PotentialField& v, double coefficient);

/// Kinetic part alone (the matrix above with V = 0).
SymTridiagonal build_kinetic_matrix(const Domain& domain, double coefficient);

struct SpectrumResult {
    std::vector<double> eigenvalues;  // ascending
    WaveFunction ground_state;        // normalized, nonnegative at its largest-magnitude entry
    std::size_t n_computed = 0;
    double residual = 0.0;            // ||H phi - E0 phi|| (unweighted)
};

/// All eigenvalues in ascending order.
std::vector<double> eigenvalues(const SymTridiagonal& h);

/// Eigenvalues plus the ground state from inverse iteration at a shift just below E0.
/// Throws RuntimeFailure if the residual does not fall below 1e-8 * ||H||.
SpectrumResult ground_state(const PotentialField& v, double coefficient);

/// Exact linear propagation via a full eigendecomposition, reusable for many times.
class LinearPropagator {
public:
    /// Throws InvalidArgument above kOracleSizeCap.
    LinearPropagator(const PotentialField& v, double coefficient);

    /// exp(-i H t) psi0
    WaveFunction propagate(const WaveFunction& psi0, double t) const;

    const Eigen::VectorXd& eigenvalues() const noexcept { return values_; }

private:
    Domain domain_;
    Eigen::VectorXd values_;
    Eigen::MatrixXd vectors_;
};

WaveFunction propagate_linear(const WaveFunction& psi0, const PotentialField& v, double coefficient, double t);

}  // namespace slk
