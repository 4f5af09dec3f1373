#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "slk/discrete.hpp"
#include "slk/error.hpp"
#include "slk/spectral.hpp"
#include "test_support.hpp"

using namespace slk;

namespace {

constexpr double kG0 = 2.0 / 100.0;
const Lattice kChain(100);

WaveFunction packet() { return sine_packet({}, kChain); }

std::vector<double> density(std::span<const Complex> amp) {
    std::vector<double> rho(amp.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        rho[i] = std::norm(amp[i]);
    }
    return rho;
}

double max_arrival(const RunResult& r) { return std::ranges::max(*r.series.arrival_prob); }

}  // namespace

TEST_CASE("sine packet") {
    const auto psi = packet();
    CHECK(std::abs(norm(psi) - 1.0) < 1e-12);
    for (std::size_t i = 0; i < 100; ++i) {
        if (i < 17) {
            CHECK(std::abs(psi[i].real() - std::sqrt(2.0 / 18.0) * std::sin(8.0 * std::numbers::pi * (i + 1) / 18.0)) <
                  1e-15);
        } else {
            CHECK(psi[i] == Complex{});
        }
    }
    const auto single = sine_packet({1, 1}, kChain);
    CHECK(single[0] == Complex{1.0, 0.0});
    CHECK(norm_squared(single) == 1.0);

    CHECK_THROWS_AS(sine_packet({100, 8}, kChain), InvalidArgument);
    CHECK_THROWS_AS(sine_packet({17, 18}, kChain), InvalidArgument);
    CHECK_THROWS_AS(sine_packet({17, 0}, kChain), InvalidArgument);
    CHECK_THROWS_AS(sine_packet({0, 0}, kChain), InvalidArgument);

    SUBCASE("property: unit norm for every admissible pair") {
        for (std::size_t eps = 1; eps < 100; eps += 3) {
            for (std::size_t k = 1; k <= eps; k += 1 + eps / 5) {
                CHECK(std::abs(norm(sine_packet({eps, k}, kChain)) - 1.0) < 1e-13);
            }
        }
    }
}

TEST_CASE("Kostin field") {
    const double beta = 0.08;
    SUBCASE("real positive state gives nothing") {
        std::vector<Complex> amp(50);
        for (std::size_t i = 0; i < 50; ++i) {
            amp[i] = 1.0 + 0.5 * std::sin(0.3 * i);
        }
        const auto k = kostin_field(normalize(WaveFunction(Lattice(50), amp)), beta);
        CHECK(std::ranges::all_of(k.values, [](double v) { return v == 0.0; }));
    }
    SUBCASE("constant phase increment") {
        std::vector<Complex> amp(60);
        for (std::size_t i = 0; i < 60; ++i) {
            const double x = static_cast<double>(i + 1);
            amp[i] = std::polar(std::exp(-(x - 30.0) * (x - 30.0) / 200.0), 0.3 * x);
        }
        const auto k = kostin_field(WaveFunction(Lattice(60), amp), beta);
        for (std::size_t i = 0; i < 60; ++i) {
            CHECK(k.values[i] == doctest::Approx(beta * static_cast<double>(i) * std::sin(0.3)).epsilon(1e-12));
        }
    }
    SUBCASE("zero amplitude sites contribute nothing") {
        const auto k = kostin_field(sine_packet({17, 8}, kChain), beta);
        // the odd mode has real amplitudes of both signs: sin(pi) = 0 on sign flips
        for (double v : k.values) {
            CHECK(std::abs(v) < 1e-15);
        }
        std::vector<Complex> amp(4, 0.0);
        amp[0] = {0.0, 1.0};
        amp[3] = {1.0, 0.0};
        CHECK(kostin_field(WaveFunction(Lattice(4), amp), beta).values == std::vector<double>(4, 0.0));
    }
    SUBCASE("property: gauge invariance") {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> angle(-10.0, 10.0);
        for (int trial = 0; trial < 30; ++trial) {
            const auto psi = testing::random_state(kChain, rng);
            const auto k = kostin_field(psi, beta);
            // multiplication by i and -1 is exact in floating point, so K is bit-identical
            std::vector<Complex> turned(psi.amplitudes().begin(), psi.amplitudes().end());
            for (auto& z : turned) {
                z *= Complex{0.0, 1.0};
            }
            CHECK(kostin_field(WaveFunction(kChain, turned), beta).values == k.values);
            std::vector<Complex> flipped(psi.amplitudes().begin(), psi.amplitudes().end());
            for (auto& z : flipped) {
                z = -z;
            }
            CHECK(kostin_field(WaveFunction(kChain, flipped), beta).values == k.values);
            CHECK(testing::max_abs_diff(kostin_field(with_global_phase(psi, angle(rng)), beta).values, k.values) <
                  1e-13);
        }
    }
    SUBCASE("property: K(1) = 0 and increments bounded by beta") {
        std::mt19937_64 rng(32);
        std::uniform_real_distribution<double> b(0.0, 2.0);
        for (int trial = 0; trial < 50; ++trial) {
            const double bt = b(rng);
            const auto k = kostin_field(testing::random_state(Lattice(3 + trial), rng), bt);
            CHECK(k.values.front() == 0.0);
            for (std::size_t i = 1; i < k.values.size(); ++i) {
                CHECK(std::abs(k.values[i] - k.values[i - 1]) <= bt * (1.0 + 1e-15));
            }
        }
    }
}

TEST_CASE("dissipation rate") {
    std::mt19937_64 rng(33);
    std::vector<Complex> real_amp(30);
    for (auto& z : real_amp) {
        z = 0.1 + std::abs(std::normal_distribution<double>()(rng));
    }
    CHECK(dissipation_rate(normalize(WaveFunction(Lattice(30), real_amp)), 0.5) == 0.0);

    SUBCASE("property: nonpositive and equal to the sin^2 form") {
        std::uniform_real_distribution<double> b(0.0, 1.0);
        for (int trial = 0; trial < 50; ++trial) {
            const auto psi = testing::random_state(kChain, rng);
            const double beta = b(rng);
            const double rate = dissipation_rate(psi, beta);
            double closed = 0.0;
            for (std::size_t i = 0; i + 1 < psi.size(); ++i) {
                const double s = std::arg(psi[i + 1] * std::conj(psi[i]));
                closed -= beta * std::abs(psi[i]) * std::abs(psi[i + 1]) * std::sin(s) * std::sin(s);
            }
            CHECK(rate <= 0.0);
            CHECK(rate == doctest::Approx(closed).epsilon(1e-12));
        }
    }
}

TEST_CASE("two sites: Rabi oscillation") {
    const Lattice pair(2);
    const PotentialField zero(pair, {0.0, 0.0});
    DiscreteSlkParams p;
    p.dt = 1e-3;
    p.t_max = 6.0;
    const auto r = run_discrete(WaveFunction(pair, {1.0, 0.0}), zero, p, {100, 0, 1});
    for (std::size_t i = 0; i < r.series.size(); ++i) {
        const double t = r.series.times[i];
        // arrival window = site 2
        CHECK(1.0 - r.series.arrival_prob->at(i) == doctest::Approx(std::pow(std::cos(t / 2.0), 2)).epsilon(1e-6));
    }
    CHECK(norm_squared(discrete_step(WaveFunction(pair, {1.0, 0.0}), zero, p)) == doctest::Approx(1.0));
}

TEST_CASE("zero friction") {
    DiscreteSlkParams p;
    SUBCASE("energy conserved over the horizon") {
        // splitting error in <h> is a bounded O(dt^2) wobble: ~2e-5 at the default dt
        p.dt = 0.0025;
        for (const auto& v : {linear_tilt(3 * kG0, kChain), anderson_disorder({0.5, 7}, kChain)}) {
            const auto r = run_discrete(packet(), v, p, {});
            const auto& e = r.series.energy;
            const auto [lo, hi] = std::ranges::minmax(e);
            CHECK(hi - lo < 1e-6 * std::max(1.0, std::abs(e.front())));
            for (double n : r.series.norm) {
                CHECK(std::abs(n - 1.0) < 1e-6);
            }
        }
    }
    SUBCASE("matches exact propagation, second order in dt") {
        const auto v = linear_tilt(0.0, kChain);
        const auto exact = propagate_linear(packet(), v, kLatticeHopping, 100.0);
        p.t_max = 100.0;
        std::vector<double> errors;
        for (double dt : {0.02, 0.01, 0.005}) {
            p.dt = dt;
            errors.push_back(distance(run_discrete(packet(), v, p, {1000000, 0, 34}).final_state, exact));
        }
        for (std::size_t i = 1; i < errors.size(); ++i) {
            CHECK(std::abs(std::log2(errors[i - 1] / errors[i]) - 2.0) < 0.3);
        }
        p.dt = 1e-3;
        CHECK(distance(run_discrete(packet(), v, p, {1000000, 0, 34}).final_state, exact) < 1e-5);
    }
}

TEST_CASE("Bloch scenarios") {
    DiscreteSlkParams p;
    DiscreteRunOptions opt;
    SUBCASE("free packet crosses the chain") {
        const auto r = run_discrete(packet(), linear_tilt(0.0, kChain), p, opt);
        double first = -1.0;
        for (std::size_t i = 0; i < r.series.size(); ++i) {
            if (r.series.arrival_prob->at(i) > 0.5) {
                first = r.series.times[i];
                break;
            }
        }
        CHECK(first > 0.0);
        CHECK(first < 200.0);
    }
    SUBCASE("tilt confines, friction releases") {
        const auto tilt = linear_tilt(3 * kG0, kChain);
        const auto confined = run_discrete(packet(), tilt, p, opt);
        CHECK(max_arrival(confined) < 0.05);
        p.beta = 4 * kG0;
        const auto released = run_discrete(packet(), tilt, p, opt);
        const double a0 = confined.series.arrival_prob->back();
        const double a1 = released.series.arrival_prob->back();
        CHECK(a1 > 0.3);
        CHECK(a1 > 5.0 * a0);
        const auto& e = released.series.energy;
        for (std::size_t i = 1; i < e.size(); ++i) {
            CHECK(e[i] <= e[i - 1] + 1e-8);
        }
    }
}

TEST_CASE("friction run: field invariants and the dissipation identity at every step") {
    const auto v = linear_tilt(3 * kG0, kChain);
    const double beta = 4 * kG0;
    DiscreteSlkParams p;
    p.beta = beta;
    DiscreteSlk stepper(v, p);
    const auto start = packet();
    std::vector<Complex> amp(start.amplitudes().begin(), start.amplitudes().end());
    std::vector<double> energies;
    std::vector<double> rates;
    std::vector<double> field(100);
    const auto energy_now = [&] { return stepper.hamiltonian().quadratic_form(amp); };
    energies.push_back(energy_now());
    rates.push_back(dissipation_rate(WaveFunction(kChain, amp), beta));
    for (int i = 0; i < 4000; ++i) {
        CHECK(std::abs(stepper.step(amp) - 1.0) < 1e-12);
        kostin_field(amp, beta, field);
        REQUIRE(field[0] == 0.0);
        for (std::size_t x = 1; x < field.size(); ++x) {
            REQUIRE(std::abs(field[x] - field[x - 1]) <= beta * (1.0 + 1e-15));
        }
        energies.push_back(energy_now());
        rates.push_back(dissipation_rate(WaveFunction(kChain, amp), beta));
    }
    std::mt19937_64 rng(35);
    std::uniform_int_distribution<std::size_t> pick(1, energies.size() - 2);
    for (int sample = 0; sample < 20; ++sample) {
        const std::size_t i = pick(rng);
        const double fd = (energies[i + 1] - energies[i - 1]) / (2.0 * p.dt);
        const double tol = std::max(1e-6, 5.0 * p.dt * p.dt * std::abs(energies[i]));
        CHECK(rates[i] <= 0.0);
        CHECK(std::abs(fd - rates[i]) < tol);
    }
}

TEST_CASE("property: global phase leaves the density trajectory alone") {
    std::mt19937_64 rng(36);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    DiscreteSlkParams p;
    p.beta = 4 * kG0;
    p.t_max = 100.0;
    DiscreteRunOptions opt;
    opt.map_every = 500;
    const auto v = linear_tilt(3 * kG0, kChain);
    const auto base = run_discrete(packet(), v, p, opt);
    for (int trial = 0; trial < 3; ++trial) {
        const auto r = run_discrete(with_global_phase(packet(), angle(rng)), v, p, opt);
        REQUIRE(r.density_map.size() == base.density_map.size());
        for (std::size_t k = 0; k < r.density_map.size(); ++k) {
            CHECK(testing::max_abs_diff(r.density_map[k].rho, base.density_map[k].rho) < 1e-10);
        }
    }
}

TEST_CASE("run bookkeeping") {
    DiscreteSlkParams p;
    p.t_max = 10.0;
    DiscreteRunOptions opt;
    opt.record_every = 50;
    opt.map_every = 100;
    const auto r = run_discrete(packet(), linear_tilt(0.0, kChain), p, opt);
    CHECK_NOTHROW(r.series.validate());
    CHECK(r.series.size() == 11);
    CHECK(r.series.arrival_prob.has_value());
    CHECK_FALSE(r.series.overlap.has_value());
    CHECK(r.density_map.size() == 6);
    CHECK(r.density_map.back().time == doctest::Approx(10.0));
    CHECK(testing::max_abs_diff(r.density_map.back().rho, density(r.final_state.amplitudes())) == 0.0);
    CHECK(r.snapshots.empty());

    opt.delta = 100;
    CHECK_THROWS_AS(run_discrete(packet(), linear_tilt(0.0, kChain), p, opt), InvalidArgument);
    opt.delta = 34;
    p.t_max = 0.0;
    CHECK(distance(run_discrete(packet(), linear_tilt(0.0, kChain), p, opt).final_state, packet()) == 0.0);
    p.beta = -1.0;
    CHECK_THROWS_AS(DiscreteSlk(linear_tilt(0.0, kChain), p), InvalidArgument);
}
