#pragma once

#include <span>
#include <vector>

#include "slk/wavefunction.hpp"

namespace slk {

/// Real symmetric tridiagonal matrix: diag has n entries, off has n - 1.
struct SymTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;

    std::size_t size() const noexcept { return diag.size(); }

    /// y = M x
    void apply(std::span<const Complex> x, std::span<Complex> y) const;

    /// Unweighted x^dagger M x (real because M is symmetric).
    double quadratic_form(std::span<const Complex> x) const;

    /// max_i |d_i| + |o_{i-1}| + |o_i|, an upper bound on the spectral radius.
    double gershgorin_bound() const;
};

/// Crank-Nicolson step for a fixed tridiagonal generator K:
///   (I + i dt/2 K) psi_new = (I - i dt/2 K) psi.
/// The Thomas elimination coefficients are computed once at construction.
/// The update is the Cayley transform of a Hermitian matrix, hence unitary.
class CrankNicolson {
public:
    CrankNicolson(const SymTridiagonal& generator, double dt);

    /// In-place step; `scratch` must have the same length as `psi`.
    void step(std::span<Complex> psi, std::span<Complex> scratch) const;

    std::size_t size() const noexcept { return diag_.size(); }

private:
    std::vector<Complex> diag_;   // 1 + i dt/2 K_ii
    std::vector<Complex> off_;    // i dt/2 K_{i,i+1}
    std::vector<Complex> rdiag_;  // 1 - i dt/2 K_ii
    std::vector<Complex> roff_;   // -i dt/2 K_{i,i+1}
    std::vector<Complex> cprime_;
    std::vector<Complex> inv_denom_;
};

}  // namespace slk
