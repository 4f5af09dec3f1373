#include "slk/tridiagonal.hpp"

#include <algorithm>
#include <cmath>

#include "slk/error.hpp"

namespace slk {

void SymTridiagonal::apply(std::span<const Complex> x, std::span<Complex> y) const {
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
        Complex acc = diag[i] * x[i];
        if (i > 0) {
            acc += off[i - 1] * x[i - 1];
        }
        if (i + 1 < n) {
            acc += off[i] * x[i + 1];
        }
        y[i] = acc;
    }
}

double SymTridiagonal::quadratic_form(std::span<const Complex> x) const {
    const std::size_t n = diag.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += diag[i] * std::norm(x[i]);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        sum += 2.0 * off[i] * (std::conj(x[i]) * x[i + 1]).real();
    }
    return sum;
}

double SymTridiagonal::gershgorin_bound() const {
    double bound = 0.0;
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
        double r = std::abs(diag[i]);
        if (i > 0) {
            r += std::abs(off[i - 1]);
        }
        if (i + 1 < n) {
            r += std::abs(off[i]);
        }
        bound = std::max(bound, r);
    }
    return bound;
}

CrankNicolson::CrankNicolson(const SymTridiagonal& generator, double dt) {
    const std::size_t n = generator.size();
    if (n == 0 || generator.off.size() + 1 != n) {
        throw InvalidArgument("malformed tridiagonal generator");
    }
    const Complex half_step{0.0, 0.5 * dt};
    diag_.resize(n);
    rdiag_.resize(n);
    off_.resize(n - 1);
    roff_.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        diag_[i] = 1.0 + half_step * generator.diag[i];
        rdiag_[i] = 1.0 - half_step * generator.diag[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        off_[i] = half_step * generator.off[i];
        roff_[i] = -half_step * generator.off[i];
    }
    // Thomas forward elimination for the symmetric complex system; pivots stay
    // away from zero because the real part of every leading minor is dominated by I.
    cprime_.resize(n);
    inv_denom_.resize(n);
    Complex denom = diag_[0];
    inv_denom_[0] = 1.0 / denom;
    cprime_[0] = n > 1 ? off_[0] * inv_denom_[0] : Complex{};
    for (std::size_t i = 1; i < n; ++i) {
        denom = diag_[i] - off_[i - 1] * cprime_[i - 1];
        inv_denom_[i] = 1.0 / denom;
        cprime_[i] = i + 1 < n ? off_[i] * inv_denom_[i] : Complex{};
    }
}

void CrankNicolson::step(std::span<Complex> psi, std::span<Complex> rhs) const {
    const std::size_t n = diag_.size();
    for (std::size_t i = 0; i < n; ++i) {
        Complex acc = rdiag_[i] * psi[i];
        if (i > 0) {
            acc += roff_[i - 1] * psi[i - 1];
        }
        if (i + 1 < n) {
            acc += roff_[i] * psi[i + 1];
        }
        rhs[i] = acc;
    }
    // forward sweep: rhs becomes d'
    rhs[0] *= inv_denom_[0];
    for (std::size_t i = 1; i < n; ++i) {
        rhs[i] = (rhs[i] - off_[i - 1] * rhs[i - 1]) * inv_denom_[i];
    }
    psi[n - 1] = rhs[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        psi[i] = rhs[i] - cprime_[i] * psi[i + 1];
    }
}

}  // namespace slk
