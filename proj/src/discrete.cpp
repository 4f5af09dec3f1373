#include "slk/discrete.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "slk/continuous.hpp"
#include "slk/error.hpp"
#include "slk/observables.hpp"
#include "slk/spectral.hpp"
#include "split_step.hpp"

namespace slk {

namespace {

const Lattice& lattice_of(const Domain& d) {
    const auto* lattice = std::get_if<Lattice>(&d);
    if (lattice == nullptr) {
        throw InvalidArgument("discrete SLK requires a lattice");
    }
    return *lattice;
}

// sin of the phase difference between neighbours, 0 when either amplitude vanishes.
double sin_phase_step(const Complex& lower, const Complex& upper) {
    const double rho_lower = std::norm(lower);
    const double rho_upper = std::norm(upper);
    if (rho_lower < kKostinAmplitudeFloor || rho_upper < kKostinAmplitudeFloor) {
        return 0.0;
    }
    return (upper * std::conj(lower)).imag() / std::sqrt(rho_lower * rho_upper);
}

}  // namespace

WaveFunction sine_packet(const SinePacket& spec, const Lattice& lattice) {
    if (spec.epsilon == 0 || spec.epsilon >= lattice.size()) {
        throw InvalidArgument("sine packet width epsilon = " + std::to_string(spec.epsilon) +
                              " must satisfy 1 <= epsilon < s = " + std::to_string(lattice.size()));
    }
    if (spec.k == 0 || spec.k > spec.epsilon) {
        throw InvalidArgument("sine packet mode k = " + std::to_string(spec.k) + " must satisfy 1 <= k <= epsilon");
    }
    const double width = static_cast<double>(spec.epsilon + 1);
    const double amplitude = std::sqrt(2.0 / width);
    const double wave = static_cast<double>(spec.k) * std::numbers::pi / width;
    std::vector<Complex> amp(lattice.size());
    for (std::size_t x = 1; x <= spec.epsilon; ++x) {
        amp[x - 1] = amplitude * std::sin(wave * static_cast<double>(x));
    }
    return {lattice, std::move(amp)};
}

void kostin_field(std::span<const Complex> psi, double beta, std::span<double> out) {
    if (psi.empty()) {
        return;
    }
    double sum = 0.0;
    out[0] = 0.0;
    for (std::size_t i = 1; i < psi.size(); ++i) {
        sum += sin_phase_step(psi[i - 1], psi[i]);
        out[i] = beta * sum;
    }
}

KostinField kostin_field(const WaveFunction& psi, double beta) {
    lattice_of(psi.domain());
    KostinField k{std::vector<double>(psi.size())};
    kostin_field(psi.amplitudes(), beta, k.values);
    return k;
}

double lattice_energy(const WaveFunction& psi, const PotentialField& v) {
    if (!(psi.domain() == v.domain())) {
        throw InvalidArgument("state and potential live on different domains");
    }
    lattice_of(psi.domain());
    const SymTridiagonal h = build_hamiltonian_matrix(v, kLatticeHopping);
    double mass = 0.0;
    for (const Complex& z : psi.amplitudes()) {
        mass += std::norm(z);
    }
    return h.quadratic_form(psi.amplitudes()) / mass;
}

double dissipation_rate(const WaveFunction& psi, double beta) {
    const KostinField k = kostin_field(psi, beta);
    double rate = 0.0;
    for (std::size_t i = 0; i + 1 < psi.size(); ++i) {
        const double amp_product = std::sqrt(std::norm(psi[i]) * std::norm(psi[i + 1]));
        rate -= amp_product * (k.values[i + 1] - k.values[i]) * sin_phase_step(psi[i], psi[i + 1]);
    }
    return rate;
}

DiscreteSlk::DiscreteSlk(PotentialField v, const DiscreteSlkParams& params)
    : lattice_(lattice_of(v.domain())), v_(std::move(v)), params_(params) {
    if (!(params_.beta >= 0.0) || !std::isfinite(params_.beta)) {
        throw InvalidArgument("beta must be nonnegative");
    }
    if (!(params_.dt > 0.0) || !std::isfinite(params_.dt)) {
        throw InvalidArgument("dt must be positive");
    }
    if (!(params_.t_max >= 0.0) || !std::isfinite(params_.t_max)) {
        throw InvalidArgument("t_max must be nonnegative");
    }
    hamiltonian_ = build_hamiltonian_matrix(v_, kLatticeHopping);
    stepper_ = std::make_unique<detail::SplitStepper>(build_kinetic_matrix(v_.domain(), kLatticeHopping),
                                                      v_.values(), params_.dt);
}

DiscreteSlk::~DiscreteSlk() = default;
DiscreteSlk::DiscreteSlk(DiscreteSlk&&) noexcept = default;
DiscreteSlk& DiscreteSlk::operator=(DiscreteSlk&&) noexcept = default;

double DiscreteSlk::step(std::span<Complex> psi) {
    if (psi.size() != lattice_.size()) {
        throw InvalidArgument("state size does not match the lattice");
    }
    const double beta = params_.beta;
    stepper_->step(psi, [beta](std::span<const Complex> p, std::span<double> out) {
        if (beta == 0.0) {
            return false;
        }
        kostin_field(p, beta, out);
        return true;
    });
    const double n = detail::renormalize(psi, 1.0);
    if (!std::isfinite(n) || !(n > 0.0)) {
        throw RuntimeFailure("non-finite or vanishing lattice state");
    }
    return n;
}

WaveFunction discrete_step(const WaveFunction& psi, const PotentialField& v, const DiscreteSlkParams& params) {
    if (!(psi.domain() == v.domain())) {
        throw InvalidArgument("state and potential live on different domains");
    }
    DiscreteSlk stepper(v, params);
    std::vector<Complex> amp(psi.amplitudes().begin(), psi.amplitudes().end());
    stepper.step(amp);
    return {psi.domain(), std::move(amp)};
}

RunResult run_discrete(const WaveFunction& psi0, const PotentialField& v, const DiscreteSlkParams& params,
                       const DiscreteRunOptions& options) {
    if (!(psi0.domain() == v.domain())) {
        throw InvalidArgument("initial state and potential live on different domains");
    }
    if (options.record_every == 0) {
        throw InvalidArgument("record_every must be positive");
    }
    const Lattice& lattice = lattice_of(v.domain());
    if (options.delta == 0 || options.delta >= lattice.size()) {
        throw InvalidArgument("arrival window delta = " + std::to_string(options.delta) +
                              " must satisfy 1 <= delta < s");
    }
    DiscreteSlk stepper(v, params);
    const std::size_t steps = step_count(params.t_max, params.dt);
    std::vector<Complex> amp(psi0.amplitudes().begin(), psi0.amplitudes().end());
    ObservableSeries series;
    std::vector<DensityRow> map;

    const auto observe = [&](std::size_t i, double norm_before) {
        double mass = 0.0;
        for (const Complex& z : amp) {
            mass += std::norm(z);
        }
        const double e = stepper.hamiltonian().quadratic_form(amp) / mass;
        series.record(static_cast<double>(i) * params.dt, norm_before, e, std::nullopt,
                      arrival_probability(amp, options.delta) / mass);
    };
    const auto map_row = [&](std::size_t i) {
        DensityRow row{static_cast<double>(i) * params.dt, std::vector<double>(amp.size())};
        for (std::size_t x = 0; x < amp.size(); ++x) {
            row.rho[x] = std::norm(amp[x]);
        }
        map.push_back(std::move(row));
    };

    observe(0, norm(psi0));
    if (options.map_every > 0) {
        map_row(0);
    }
    for (std::size_t i = 1; i <= steps; ++i) {
        double norm_before = 0.0;
        try {
            norm_before = stepper.step(amp);
        } catch (const RuntimeFailure&) {
            throw RuntimeFailure("non-finite lattice state at step " + std::to_string(i) + " (t = " +
                                 std::to_string(static_cast<double>(i) * params.dt) + ")");
        }
        if (i % options.record_every == 0 || i == steps) {
            observe(i, norm_before);
        }
        if (options.map_every > 0 && (i % options.map_every == 0 || i == steps)) {
            map_row(i);
        }
    }
    return {WaveFunction(psi0.domain(), std::move(amp)), std::move(series), {}, std::move(map)};
}

}  // namespace slk
