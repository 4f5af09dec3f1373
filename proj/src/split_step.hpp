#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "slk/tridiagonal.hpp"

namespace slk::detail {

/// Symmetric splitting shared by both propagators:
///   half kick exp(-i dt/2 (V + F[psi])), Crank-Nicolson kinetic step,
///   half kick exp(-i dt/2 (V + F[psi])),
/// where F is the state-dependent friction potential, re-evaluated on the
/// state entering each half kick.
class SplitStepper {
public:
    SplitStepper(const SymTridiagonal& kinetic, std::span<const double> potential, double dt)
        : dt_(dt), cn_(kinetic, dt), scratch_(kinetic.size()), friction_(kinetic.size()) {
        half_kick_.reserve(potential.size());
        for (double v : potential) {
            half_kick_.push_back(std::polar(1.0, -0.5 * dt * v));
        }
    }

    /// `friction(psi, out)` fills the friction potential and returns true, or
    /// returns false when it vanishes identically.
    template <class Friction>
    void step(std::span<Complex> psi, Friction&& friction) {
        kick(psi, friction);
        cn_.step(psi, scratch_);
        kick(psi, friction);
    }

    double dt() const noexcept { return dt_; }

private:
    template <class Friction>
    void kick(std::span<Complex> psi, Friction& friction) {
        if (friction(std::span<const Complex>(psi.data(), psi.size()), std::span<double>(friction_))) {
            for (std::size_t i = 0; i < psi.size(); ++i) {
                psi[i] *= half_kick_[i] * std::polar(1.0, -0.5 * dt_ * friction_[i]);
            }
        } else {
            for (std::size_t i = 0; i < psi.size(); ++i) {
                psi[i] *= half_kick_[i];
            }
        }
    }

    double dt_;
    CrankNicolson cn_;
    std::vector<Complex> half_kick_;
    std::vector<Complex> scratch_;
    std::vector<double> friction_;
};

/// Rescales psi to unit weighted norm and returns the norm it had before.
inline double renormalize(std::span<Complex> psi, double weight) {
    double sum = 0.0;
    for (const Complex& z : psi) {
        sum += std::norm(z);
    }
    const double n = std::sqrt(sum * weight);
    if (std::isfinite(n) && n > 0.0) {
        const double inv = 1.0 / n;
        for (Complex& z : psi) {
            z *= inv;
        }
    }
    return n;
}

}  // namespace slk::detail
