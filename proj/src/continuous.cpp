#include "slk/continuous.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "slk/error.hpp"
#include "slk/observables.hpp"
#include "slk/spectral.hpp"
#include "split_step.hpp"

namespace slk {

namespace {

const Grid1D& grid_of(const PotentialField& v) {
    const auto* grid = std::get_if<Grid1D>(&v.domain());
    if (grid == nullptr) {
        throw InvalidArgument("continuous SLK requires a grid potential");
    }
    return *grid;
}

void validate(const SlkParams& p, const PotentialField& v) {
    if (!(p.nu > 0.0) || !std::isfinite(p.nu)) {
        throw InvalidArgument("nu must be positive");
    }
    if (!(p.beta >= 0.0) || !std::isfinite(p.beta)) {
        throw InvalidArgument("beta must be nonnegative");
    }
    if (!(p.dt > 0.0) || !std::isfinite(p.dt)) {
        throw InvalidArgument("dt must be positive");
    }
    if (!(p.t_max >= 0.0) || !std::isfinite(p.t_max)) {
        throw InvalidArgument("t_max must be nonnegative");
    }
    if (!(p.rho_floor >= 0.0)) {
        throw InvalidArgument("rho_floor must be nonnegative");
    }
    if (p.dt * v.max_abs() > std::numbers::pi) {
        throw InvalidArgument("dt * max|V| = " + std::to_string(p.dt * v.max_abs()) +
                              " exceeds pi; reduce dt");
    }
}

void require_finite(double norm_before, std::size_t step, double dt) {
    if (!std::isfinite(norm_before) || !(norm_before > 0.0)) {
        throw RuntimeFailure("non-finite or vanishing state at step " + std::to_string(step) + " (t = " +
                             std::to_string(static_cast<double>(step) * dt) + ")");
    }
}

double rayleigh_quotient(const SymTridiagonal& h, std::span<const Complex> amp) {
    double mass = 0.0;
    for (const Complex& z : amp) {
        mass += std::norm(z);
    }
    return h.quadratic_form(amp) / mass;
}

}  // namespace

std::size_t step_count(double t_max, double dt) {
    const double ratio = t_max / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-6) {
        throw InvalidArgument("t_max = " + std::to_string(t_max) + " is not a whole number of steps dt = " +
                              std::to_string(dt));
    }
    return static_cast<std::size_t>(rounded);
}

ContinuousSlk::ContinuousSlk(PotentialField v, const SlkParams& params)
    : grid_(grid_of(v)), v_(std::move(v)), params_(params) {
    validate(params_, v_);
    hamiltonian_ = build_hamiltonian_matrix(v_, params_.nu);
    stepper_ = std::make_unique<detail::SplitStepper>(build_kinetic_matrix(v_.domain(), params_.nu), v_.values(),
                                                      params_.dt);
}

ContinuousSlk::~ContinuousSlk() = default;
ContinuousSlk::ContinuousSlk(ContinuousSlk&&) noexcept = default;
ContinuousSlk& ContinuousSlk::operator=(ContinuousSlk&&) noexcept = default;

bool ContinuousSlk::friction(std::span<const Complex> psi, std::span<double> out) {
    if (params_.beta == 0.0) {
        return false;
    }
    unwrap_phase(psi, params_.rho_floor, out);
    double mean = 0.0;
    if (params_.subtract_mean_phase) {
        double mass = 0.0;
        for (std::size_t i = 0; i < psi.size(); ++i) {
            const double rho = std::norm(psi[i]);
            mean += rho * out[i];
            mass += rho;
        }
        mean = mass > 0.0 ? mean / mass : 0.0;
    }
    for (double& s : out) {
        s = params_.beta * (s - mean);
    }
    return true;
}

double ContinuousSlk::step(std::span<Complex> psi) {
    if (psi.size() != grid_.size()) {
        throw InvalidArgument("state size does not match the grid");
    }
    stepper_->step(psi, [this](std::span<const Complex> p, std::span<double> out) { return friction(p, out); });
    return detail::renormalize(psi, grid_.dx());
}

WaveFunction slk_step(const WaveFunction& psi, const PotentialField& v, const SlkParams& params) {
    if (!(psi.domain() == v.domain())) {
        throw InvalidArgument("state and potential live on different domains");
    }
    ContinuousSlk stepper(v, params);
    std::vector<Complex> amp(psi.amplitudes().begin(), psi.amplitudes().end());
    require_finite(stepper.step(amp), 1, params.dt);
    return {psi.domain(), std::move(amp)};
}

double energy(const WaveFunction& psi, const PotentialField& v, double nu) {
    if (!(psi.domain() == v.domain())) {
        throw InvalidArgument("state and potential live on different domains");
    }
    return rayleigh_quotient(build_hamiltonian_matrix(v, nu), psi.amplitudes());
}

ReconstructedPotential reconstruct_w(const WaveFunction& psi, double nu, double energy_value, double rho_floor) {
    const auto* grid = std::get_if<Grid1D>(&psi.domain());
    if (grid == nullptr) {
        throw InvalidArgument("W reconstruction requires a grid state");
    }
    const std::size_t n = psi.size();
    double rho_max = 0.0;
    for (const Complex& z : psi.amplitudes()) {
        rho_max = std::max(rho_max, std::norm(z));
    }
    const double threshold = rho_floor * rho_max;
    const double coeff = 0.5 * nu * nu / (grid->dx() * grid->dx());
    ReconstructedPotential w{*grid, std::vector<std::optional<double>>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        if (!(std::norm(psi[i]) > threshold) || psi[i] == Complex{}) {
            continue;
        }
        const Complex left = i > 0 ? psi[i - 1] : Complex{};
        const Complex right = i + 1 < n ? psi[i + 1] : Complex{};
        const Complex ratio = coeff * (left + right - 2.0 * psi[i]) / psi[i];
        w.values[i] = ratio.real() + energy_value;
        w.max_imag_residual = std::max(w.max_imag_residual, std::abs(ratio.imag()));
    }
    return w;
}

RunResult run_continuous(const WaveFunction& psi0, const PotentialField& v, const SlkParams& params,
                         const ContinuousRunOptions& options) {
    if (!(psi0.domain() == v.domain())) {
        throw InvalidArgument("initial state and potential live on different domains");
    }
    if (options.record_every == 0) {
        throw InvalidArgument("record_every must be positive");
    }
    if (options.reference && !(options.reference->domain() == v.domain())) {
        throw InvalidArgument("reference state lives on a different domain");
    }
    ContinuousSlk stepper(v, params);
    const std::size_t steps = step_count(params.t_max, params.dt);
    const Domain domain = psi0.domain();

    std::vector<Complex> amp(psi0.amplitudes().begin(), psi0.amplitudes().end());
    ObservableSeries series;

    const auto observe = [&](std::size_t i, double norm_before) {
        WaveFunction state(domain, amp);
        const double e = rayleigh_quotient(stepper.hamiltonian(), amp);
        std::optional<double> ov;
        if (options.reference) {
            ov = vacuum_overlap(state, *options.reference);
        }
        series.record(static_cast<double>(i) * params.dt, norm_before, e, ov, std::nullopt);
    };
    std::vector<Snapshot> snapshots;
    const auto snapshot = [&](std::size_t i) {
        WaveFunction state(domain, amp);
        const double e = rayleigh_quotient(stepper.hamiltonian(), amp);
        snapshots.push_back({static_cast<double>(i) * params.dt, to_density_phase(state, params.rho_floor),
                             reconstruct_w(state, params.nu, e, options.w_rho_floor)});
    };

    observe(0, norm(psi0));
    snapshot(0);
    for (std::size_t i = 1; i <= steps; ++i) {
        const double norm_before = stepper.step(amp);
        require_finite(norm_before, i, params.dt);
        if (i % options.record_every == 0 || i == steps) {
            observe(i, norm_before);
        }
        if ((options.snapshot_every > 0 && i % options.snapshot_every == 0) || i == steps) {
            snapshot(i);
        }
    }
    return {WaveFunction(domain, std::move(amp)), std::move(series), std::move(snapshots), {}};
}

}  // namespace slk
