#include "slk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slk/error.hpp"

namespace slk {

SymTridiagonal build_kinetic_matrix(const Domain& domain, double coefficient) {
    const std::size_t n = domain_size(domain);
    SymTridiagonal k;
    if (const auto* grid = std::get_if<Grid1D>(&domain)) {
        if (!(coefficient > 0.0)) {
            throw InvalidArgument("nu must be positive");
        }
        const double c = coefficient * coefficient / (grid->dx() * grid->dx());
        k.diag.assign(n, c);
        k.off.assign(n - 1, -0.5 * c);
    } else {
        k.diag.assign(n, 0.0);
        k.off.assign(n > 0 ? n - 1 : 0, -coefficient);
    }
    return k;
}

SymTridiagonal build_hamiltonian_matrix(const PotentialField& v, double coefficient) {
    SymTridiagonal h = build_kinetic_matrix(v.domain(), coefficient);
    for (std::size_t i = 0; i < h.size(); ++i) {
        h.diag[i] += v[i];
    }
    return h;
}

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve_tridiagonal(const SymTridiagonal& h, int options) {
    const auto n = static_cast<Eigen::Index>(h.size());
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(h.diag.data(), n);
    Eigen::VectorXd off = n > 1 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(h.off.data(), n - 1))
                                : Eigen::VectorXd(0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, options);
    if (solver.info() != Eigen::Success) {
        throw RuntimeFailure("tridiagonal eigensolver did not converge");
    }
    return solver;
}

// Solves (H - shift) x = b by LDL^T elimination; the shift sits below the
// spectrum so the matrix is positive definite.
void shifted_solve(const SymTridiagonal& h, double shift, std::vector<double>& x) {
    const std::size_t n = h.size();
    std::vector<double> d(n);
    std::vector<double> l(n > 0 ? n - 1 : 0);
    d[0] = h.diag[0] - shift;
    for (std::size_t i = 1; i < n; ++i) {
        l[i - 1] = h.off[i - 1] / d[i - 1];
        d[i] = h.diag[i] - shift - l[i - 1] * h.off[i - 1];
    }
    for (std::size_t i = 1; i < n; ++i) {
        x[i] -= l[i - 1] * x[i - 1];
    }
    x[n - 1] /= d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] = x[i] / d[i] - l[i] * x[i + 1];
    }
}

double unweighted_norm(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) {
        s += v * v;
    }
    return std::sqrt(s);
}

}  // namespace

std::vector<double> eigenvalues(const SymTridiagonal& h) {
    const auto solver = solve_tridiagonal(h, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

SpectrumResult ground_state(const PotentialField& v, double coefficient) {
    const SymTridiagonal h = build_hamiltonian_matrix(v, coefficient);
    std::vector<double> values = eigenvalues(h);
    const double e0 = values.front();
    const double scale = std::max(h.gershgorin_bound(), 1e-300);
    const double tolerance = 1e-8 * scale;
    const double shift = e0 - 1e-9 * scale;

    const std::size_t n = h.size();
    std::vector<double> x(n, 1.0);
    std::vector<Complex> xc(n);
    std::vector<Complex> hx(n);
    double residual = INFINITY;
    for (int iter = 0; iter < 100 && residual >= 1e-3 * tolerance; ++iter) {
        shifted_solve(h, shift, x);
        const double nx = unweighted_norm(x);
        for (double& xi : x) {
            xi /= nx;
        }
        std::copy(x.begin(), x.end(), xc.begin());
        h.apply(xc, hx);
        double r2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = hx[i].real() - e0 * x[i];
            r2 += r * r;
        }
        residual = std::sqrt(r2);
    }
    if (!(residual < tolerance)) {
        throw RuntimeFailure("ground state residual " + std::to_string(residual) + " exceeds " +
                             std::to_string(tolerance));
    }

    std::size_t dominant = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(x[i]) > std::abs(x[dominant])) {
            dominant = i;
        }
    }
    const double sign = x[dominant] < 0.0 ? -1.0 : 1.0;
    const double weight_scale = 1.0 / std::sqrt(domain_weight(v.domain()));
    std::vector<Complex> amp(n);
    for (std::size_t i = 0; i < n; ++i) {
        amp[i] = sign * x[i] * weight_scale;
    }
    SpectrumResult result{std::move(values), WaveFunction(v.domain(), std::move(amp)), 0, residual};
    result.n_computed = result.eigenvalues.size();
    return result;
}

LinearPropagator::LinearPropagator(const PotentialField& v, double coefficient) : domain_(v.domain()) {
    if (v.size() > kOracleSizeCap) {
        throw InvalidArgument("dense propagation is limited to " + std::to_string(kOracleSizeCap) + " points, got " +
                              std::to_string(v.size()));
    }
    const auto solver = solve_tridiagonal(build_hamiltonian_matrix(v, coefficient), Eigen::ComputeEigenvectors);
    values_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
}

WaveFunction LinearPropagator::propagate(const WaveFunction& psi0, double t) const {
    if (!(psi0.domain() == domain_)) {
        throw InvalidArgument("initial state and potential live on different domains");
    }
    const auto n = static_cast<Eigen::Index>(psi0.size());
    Eigen::VectorXcd in(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        in(i) = psi0[static_cast<std::size_t>(i)];
    }
    Eigen::VectorXcd coeffs = vectors_.transpose().cast<Complex>() * in;
    for (Eigen::Index k = 0; k < n; ++k) {
        coeffs(k) *= std::polar(1.0, -values_(k) * t);
    }
    const Eigen::VectorXcd out = vectors_.cast<Complex>() * coeffs;
    return {domain_, std::vector<Complex>(out.data(), out.data() + n)};
}

WaveFunction propagate_linear(const WaveFunction& psi0, const PotentialField& v, double coefficient, double t) {
    return LinearPropagator(v, coefficient).propagate(psi0, t);
}

}  // namespace slk
