#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "slk/error.hpp"
#include "slk/observables.hpp"
#include "test_support.hpp"

using namespace slk;

namespace {

// Gram-Schmidt partner of `ref` built from a random state.
WaveFunction orthonormal_partner(const WaveFunction& ref, std::mt19937_64& rng) {
    auto other = testing::random_state(ref.domain(), rng);
    const Complex c = inner(ref, other);
    std::vector<Complex> amp(ref.size());
    for (std::size_t i = 0; i < amp.size(); ++i) {
        amp[i] = other[i] - c * ref[i];
    }
    return normalize(WaveFunction(ref.domain(), std::move(amp)));
}

}  // namespace

TEST_CASE("vacuum overlap") {
    std::mt19937_64 rng(11);
    const Grid1D g(-3.0, 3.0, 50);
    const auto ref = testing::random_state(g, rng);
    const auto partner = orthonormal_partner(ref, rng);

    CHECK(vacuum_overlap(ref, ref) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(vacuum_overlap(partner, ref) < 1e-26);

    std::vector<Complex> mix(ref.size());
    for (std::size_t i = 0; i < mix.size(); ++i) {
        mix[i] = (ref[i] + partner[i]) / std::sqrt(2.0);
    }
    CHECK(vacuum_overlap(WaveFunction(g, mix), ref) == doctest::Approx(0.5).epsilon(1e-13));

    CHECK_THROWS_AS(vacuum_overlap(ref, WaveFunction(Lattice(50), std::vector<Complex>(50, 0.1))),
                    InvalidArgument);
}

TEST_CASE("property: overlap is symmetric and phase blind") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Domain d = trial % 2 ? Domain{Lattice(7 + trial)} : Domain{Grid1D(-1.0, 2.0, 9 + trial)};
        const auto a = testing::random_state(d, rng);
        const auto b = testing::random_state(d, rng);
        const double ab = vacuum_overlap(a, b);
        CHECK(std::abs(ab - vacuum_overlap(b, a)) < 1e-12);
        CHECK(std::abs(ab - vacuum_overlap(with_global_phase(a, angle(rng)), b)) < 1e-12);
        CHECK(std::abs(ab - vacuum_overlap(a, with_global_phase(b, angle(rng)))) < 1e-12);
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0 + 1e-12);
    }
}

TEST_CASE("arrival probability") {
    const Lattice l(100);
    std::mt19937_64 rng(13);
    const auto psi = testing::random_state(l, rng);
    CHECK(arrival_probability(psi, 100) == doctest::Approx(1.0).epsilon(1e-13));

    std::vector<Complex> packet(100, 0.0);
    for (std::size_t i = 0; i < 17; ++i) {
        packet[i] = 1.0 / std::sqrt(17.0);
    }
    CHECK(arrival_probability(WaveFunction(l, packet), 34) == 0.0);

    const WaveFunction uniform(l, std::vector<Complex>(100, 0.1));
    CHECK(arrival_probability(uniform, 50) == doctest::Approx(0.5).epsilon(1e-14));

    CHECK_THROWS_AS(arrival_probability(psi, 0), InvalidArgument);
    CHECK_THROWS_AS(arrival_probability(psi, 101), InvalidArgument);
    CHECK_THROWS_AS(arrival_probability(WaveFunction(Grid1D(0.0, 1.0, 100), packet), 10), InvalidArgument);
}

TEST_CASE("property: arrival probability is monotone in delta") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 30; ++trial) {
        const Lattice l(5 + static_cast<std::size_t>(trial) * 3);
        const auto psi = testing::random_state(l, rng);
        double previous = 0.0;
        for (std::size_t delta = 1; delta <= l.size(); ++delta) {
            const double p = arrival_probability(psi, delta);
            CHECK(p >= previous);
            previous = p;
        }
    }
}

TEST_CASE("series recording and validation") {
    ObservableSeries s;
    s.record(0.0, 1.0, -0.5, 0.2, std::nullopt);
    s.record(0.1, 1.0, -0.6, 0.4, std::nullopt);
    CHECK(s.size() == 2);
    CHECK(s.overlap.has_value());
    CHECK_FALSE(s.arrival_prob.has_value());
    CHECK_NOTHROW(s.validate());

    SUBCASE("optional columns must stay consistent") {
        CHECK_THROWS_AS(s.record(0.2, 1.0, -0.7, std::nullopt, std::nullopt), InvalidArgument);
        CHECK_THROWS_AS(s.record(0.2, 1.0, -0.7, 0.5, 0.1), InvalidArgument);
    }
    SUBCASE("times strictly increasing") {
        s.times[1] = 0.0;
        CHECK_THROWS_AS(s.validate(), InvalidArgument);
    }
    SUBCASE("overlap stays in the unit interval") {
        s.overlap->back() = 1.0 + 1e-9;
        CHECK_THROWS_AS(s.validate(), InvalidArgument);
        s.overlap->back() = 1.0 + 1e-11;
        CHECK_NOTHROW(s.validate());
        s.overlap->front() = -1e-3;
        CHECK_THROWS_AS(s.validate(), InvalidArgument);
    }
    SUBCASE("column lengths") {
        s.energy.pop_back();
        CHECK_THROWS_AS(s.validate(), InvalidArgument);
    }
}
