#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "slk/config.hpp"
#include "slk/discrete.hpp"
#include "slk/error.hpp"
#include "slk/experiments.hpp"
#include "test_support.hpp"

using namespace slk;
using nlohmann::json;

namespace {

ExperimentConfig preset(const std::string& name, const json& extra = json::object()) {
    json doc = {{"preset", name}};
    doc.merge_patch(extra);
    return parse_config(doc);
}

std::string field_of(const json& doc) {
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<accepted>";
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("slk_experiments_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("preset defaults") {
    const auto toy1 = preset("toy1");
    CHECK(toy1.kind == ExperimentKind::toy1);
    CHECK(toy1.toy1.nu == 1.0);
    CHECK(toy1.toy1.beta == 0.5);
    CHECK(toy1.grid.t_max == 50.0);
    CHECK(toy1.seed == 42);

    const auto toy2 = preset("toy2");
    CHECK(toy2.toy2.well.a_plus == 2.25);
    CHECK(toy2.toy2.well.a_minus == 1.75);
    CHECK(toy2.toy2.well.v0 == 1.0);
    CHECK(toy2.toy2.well.delta == 0.1);
    CHECK(toy2.toy2.nu == 1.0);
    CHECK(toy2.toy2.beta == 0.3);
    CHECK(toy2.grid.t_max == 50.0);

    const auto bloch = resolve_lattice(parse_config({{"kind", "bloch"}}));
    CHECK(bloch.g0 == 0.02);
    CHECK(bloch.k == 8);
    CHECK(bloch.delta == 34);
    CHECK(bloch.t_max == 400.0);
    CHECK(bloch.g == 0.0);
    CHECK(bloch.beta == 0.0);
    CHECK(bloch.sigma == 0.0);

    const auto anderson = resolve_lattice(parse_config({{"kind", "anderson"}}));
    CHECK(anderson.sigma0 == doctest::Approx(std::pow(0.1, 1.5)).epsilon(1e-15));
    CHECK(anderson.sigma == doctest::Approx(2.0 * std::pow(0.1, 1.5)).epsilon(1e-15));
    CHECK(anderson.t_max == 2000.0);

    SUBCASE("frames") {
        const auto tilt = resolve_lattice(preset("bloch-tilt"));
        CHECK(tilt.g == doctest::Approx(0.06));
        CHECK(tilt.beta == 0.0);
        const auto friction = resolve_lattice(preset("bloch-friction"));
        CHECK(friction.g == doctest::Approx(0.06));
        CHECK(friction.beta == doctest::Approx(0.08));
        const auto af = resolve_lattice(preset("anderson-friction"));
        CHECK(af.g == doctest::Approx(0.06));
        CHECK(af.beta == doctest::Approx(0.08));
        CHECK(af.sigma == doctest::Approx(2.0 * std::pow(0.1, 1.5)));
        CHECK(resolve_lattice(preset("anderson-free")).beta == 0.0);
        CHECK(preset_names().size() == 7);
    }
    SUBCASE("the default k tracks epsilon and s") {
        const auto r = resolve_lattice(parse_config({{"kind", "bloch"}, {"physical", {{"s", 60}, {"epsilon", 9}}}}));
        CHECK(r.k == 4);
        CHECK(r.delta == 18);
        CHECK(r.g0 == doctest::Approx(2.0 / 60.0));
        CHECK(r.t_max == 240.0);
    }
}

TEST_CASE("config errors name the field") {
    CHECK(field_of({{"kind", "bloch"}, {"physical", {{"k", 8.5}}}}) == "physical.k");
    CHECK(field_of({{"kind", "bloch"}, {"physical", {{"epsilon", 16}}}}) == "physical.k");
    CHECK(field_of({{"kind", "bloch"}, {"physical", {{"epsilon", 16}, {"k", 8}}}}) == "<accepted>");
    CHECK(field_of({{"kind", "bloch"}, {"physical", {{"epsilon", 100}}}}) == "physical.epsilon");
    CHECK(field_of({{"kind", "bloch"}, {"physical", {{"arrival_sites", 100}}}}) == "physical.arrival_sites");
    CHECK(field_of({{"kind", "toy1"}, {"numerical", {{"dtt", 0.1}}}}) == "numerical.dtt");
    CHECK(field_of({{"kind", "toy1"}, {"numerical", {{"dt", -1}}}}) == "numerical.dt");
    CHECK(field_of({{"kind", "toy1"}, {"numerical", {{"dt", "fast"}}}}) == "numerical.dt");
    CHECK(field_of({{"kind", "toy1"}, {"numerical", {{"n", 2}}}}) == "numerical.n");
    CHECK(field_of({{"kind", "toy1"}, {"numerical", {{"x_min", 3}, {"x_max", 1}}}}) == "numerical.x_max");
    CHECK(field_of({{"kind", "toy1"}, {"physical", {{"g_factor", 1}}}}) == "physical.g_factor");
    CHECK(field_of({{"kind", "toy1"}, {"physical", 3}}) == "physical");
    CHECK(field_of({{"kind", "toy1"}, {"colour", "red"}}) == "colour");
    CHECK(field_of({{"kind", "toy3"}}) == "kind");
    CHECK(field_of(json::object()) == "kind");
    CHECK(field_of({{"preset", "bloch-sideways"}}) == "preset");
    CHECK(field_of({{"kind", "custom"}}) == "physical.potential_file");
    CHECK(field_of({{"kind", "toy2"}, {"seed", -3}}) == "seed");
    CHECK(field_of({{"kind", "toy2"}, {"numerical", {{"record_every", 0}}}}) == "numerical.record_every");
    CHECK(field_of({{"kind", "toy2"}, {"numerical", {{"subtract_mean_phase", 1}}}}) ==
          "numerical.subtract_mean_phase");
}

TEST_CASE("overrides") {
    json doc = {{"preset", "bloch-tilt"}};
    apply_override(doc, "physical.beta_factor=4");
    apply_override(doc, "numerical.t_max=10");
    apply_override(doc, "output_dir=some/where");
    apply_override(doc, "seed=7");
    const auto cfg = parse_config(doc);
    CHECK(resolve_lattice(cfg).beta == doctest::Approx(0.08));
    CHECK(resolve_lattice(cfg).t_max == 10.0);
    CHECK(cfg.output_dir == "some/where");
    CHECK(cfg.seed == 7);
    CHECK_THROWS_AS(apply_override(doc, "novalue"), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "a..b=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "seed.x=1"), ConfigError);
}

TEST_CASE("property: resolved configs round-trip") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& name : preset_names()) {
        for (int trial = 0; trial < 5; ++trial) {
            json extra = {{"seed", static_cast<int>(rng() % 1000)}};
            if (name.starts_with("toy")) {
                extra["physical"] = {{"beta", u(rng)}};
                extra["numerical"] = {{"dt", 1e-3 * (1 + trial)}, {"record_every", 1 + trial}};
            } else {
                extra["physical"] = {{"g_factor", 4 * u(rng)}, {"sigma_factor", 3 * u(rng)}};
                extra["numerical"] = {{"map_every", 1 + trial}};
            }
            const auto cfg = preset(name, extra);
            const json once = to_json(cfg);
            const json twice = to_json(parse_config(once));
            CHECK(once == twice);
            // a manifest wrapper is accepted as well
            CHECK(to_json(parse_config({{"format", "slk-manifest/1"}, {"config", once}})) == once);
        }
    }
}

TEST_CASE("quantiles interpolate linearly") {
    CHECK(quantile({4.0, 1.0, 3.0, 2.0}, 0.25) == doctest::Approx(1.75));
    CHECK(quantile({4.0, 1.0, 3.0, 2.0}, 0.5) == doctest::Approx(2.5));
    CHECK(quantile({4.0, 1.0, 3.0, 2.0}, 0.75) == doctest::Approx(3.25));
    CHECK(quantile({5.0}, 0.5) == 5.0);
    CHECK(quantile({1.0, 9.0}, 0.0) == 1.0);
    CHECK(quantile({1.0, 9.0}, 1.0) == 9.0);
    CHECK_THROWS_AS(quantile({}, 0.5), InvalidArgument);
}

TEST_CASE("scenarios") {
    SUBCASE("toy1 start sits in the left well, reference is the oracle ground state") {
        const auto sc = build_scenario(preset("toy1"));
        const auto& g = std::get<Grid1D>(sc.potential.domain());
        REQUIRE(sc.reference.has_value());
        CHECK(std::abs(sc.reference->eigenvalues.front()) < 1e-4);
        std::size_t peak = 0;
        for (std::size_t i = 0; i < sc.initial.size(); ++i) {
            if (std::abs(sc.initial[i]) > std::abs(sc.initial[peak])) {
                peak = i;
            }
        }
        CHECK(std::abs(g.x(peak) + TripleGaussianGroundState{}.a) < g.dx());
    }
    SUBCASE("toy2 default width") {
        const auto sc = build_scenario(preset("toy2"));
        const double k = 8.0 / (2.25 * 2.25);
        const double sigma = std::sqrt(1.0 / (2.0 * std::sqrt(k)));
        const auto& g = std::get<Grid1D>(sc.potential.domain());
        const auto expected = testing::gaussian_packet(g, 2.25, sigma);
        CHECK(distance(sc.initial, expected) < 1e-12);
    }
    SUBCASE("lattice scenario equals the hand-built run") {
        const auto cfg = preset("anderson-friction", {{"numerical", {{"t_max", 40}}}});
        const auto outcome = execute(cfg);
        const Lattice l(100);
        const auto v = linear_tilt(0.06, l) + anderson_disorder({2.0 * std::pow(0.1, 1.5), 42}, l);
        DiscreteSlkParams p;
        p.beta = 0.08;
        p.t_max = 40.0;
        const auto direct = run_discrete(sine_packet({}, l), v, p, {5, 25, 34});
        CHECK(outcome.run.series.arrival_prob == direct.series.arrival_prob);
        CHECK(outcome.run.series.energy == direct.series.energy);
    }
    SUBCASE("custom potential tables") {
        const auto dir = scratch_dir("custom");
        std::filesystem::create_directories(dir);
        const Grid1D g(-5.0, 5.0, 128);
        {
            std::ofstream out(dir / "harmonic.csv");
            out << "x,V\n";
            for (std::size_t i = 0; i < g.size(); ++i) {
                out << g.x(i) << "," << 0.5 * g.x(i) * g.x(i) << "\n";
            }
        }
        auto cfg = parse_config({{"kind", "custom"},
                                 {"physical", {{"potential_file", (dir / "harmonic.csv").string()}, {"beta", 0.4},
                                               {"initial_center", 1.0}}},
                                 {"numerical", {{"x_min", -5}, {"x_max", 5}, {"n", 128}, {"t_max", 20}}}});
        const auto outcome = execute(cfg);
        CHECK(outcome.run.series.overlap->back() > 0.99);
        CHECK(outcome.scenario.reference->eigenvalues.front() == doctest::Approx(0.5).epsilon(1e-2));

        cfg.custom.potential_file = (dir / "missing.csv").string();
        CHECK_THROWS_AS(build_scenario(cfg), InvalidArgument);
    }
}

TEST_CASE("disorder ensembles") {
    const auto cfg = preset("anderson-free", {{"numerical", {{"t_max", 60}}}, {"seed", 5}});
    SUBCASE("one realization is the plain run with that seed") {
        const auto ens = disorder_ensemble(cfg, 1, 1);
        CHECK(ens.seeds == std::vector<std::uint64_t>{5});
        CHECK(ens.arrival.front() == *execute(cfg).run.series.arrival_prob);
        CHECK(ens.median == ens.arrival.front());
    }
    SUBCASE("thread count does not change the numbers") {
        const auto a = disorder_ensemble(cfg, 5, 1);
        const auto b = disorder_ensemble(cfg, 5, 3);
        CHECK(a.arrival == b.arrival);
        CHECK(a.median == b.median);
        CHECK(a.seeds == std::vector<std::uint64_t>{5, 6, 7, 8, 9});
        for (std::size_t i = 0; i < a.times.size(); ++i) {
            CHECK(a.q1[i] <= a.median[i]);
            CHECK(a.median[i] <= a.q3[i]);
        }
        CHECK(a.arrival[0] != a.arrival[1]);
    }
    SUBCASE("no disorder, no spread") {
        auto clean = cfg;
        clean.lattice.sigma_factor = 0.0;
        const auto ens = disorder_ensemble(clean, 4, 2);
        for (std::size_t i = 0; i < ens.times.size(); ++i) {
            CHECK(ens.q1[i] == ens.q3[i]);
        }
    }
    SUBCASE("grid kinds are refused") { CHECK_THROWS_AS(disorder_ensemble(preset("toy1"), 2), ConfigError); }
}

TEST_CASE("outputs are reproducible byte for byte") {
    for (const char* name : {"toy2", "bloch-tilt"}) {
        json extra = {{"numerical", {{"t_max", 2}}}};
        if (std::string(name) == "toy2") {
            extra["numerical"]["snapshot_every"] = 500;
        }
        auto cfg = preset(name, extra);
        cfg.output_dir = scratch_dir(std::string(name) + "_a");
        const auto first = run_experiment(cfg);
        cfg.output_dir = scratch_dir(std::string(name) + "_b");
        const auto second = run_experiment(cfg);
        REQUIRE(first.files == second.files);
        for (const auto& f : first.files) {
            if (f == "manifest.json") {
                continue;  // differs only in output_dir
            }
            CHECK_MESSAGE(slurp(first.directory / f) == slurp(second.directory / f), f);
        }
        auto a = json::parse(slurp(first.directory / "manifest.json"));
        auto b = json::parse(slurp(second.directory / "manifest.json"));
        a["config"].erase("output_dir");
        b["config"].erase("output_dir");
        CHECK(a == b);
    }
}

TEST_CASE("manifest completeness") {
    auto cfg = preset("anderson-friction", {{"numerical", {{"t_max", 4}}}});
    cfg.output_dir = scratch_dir("manifest");
    const auto m = run_experiment(cfg);
    const auto& doc = m.document;
    CHECK(doc["format"] == "slk-manifest/1");
    for (const char* key : {"s", "epsilon", "k", "g_factor", "beta_factor", "sigma_factor", "arrival_sites"}) {
        CHECK_MESSAGE(doc["config"]["physical"].contains(key), key);
    }
    for (const char* key : {"dt", "t_max", "record_every", "map_every"}) {
        CHECK_MESSAGE(doc["config"]["numerical"].contains(key), key);
    }
    CHECK(doc["config"]["seed"] == 42);
    CHECK(doc["derived"]["sigma"].get<double>() == doctest::Approx(2.0 * std::pow(0.1, 1.5)));
    CHECK(doc["derived"]["steps"] == 200);
    CHECK(m.files == std::vector<std::string>{"density_map.csv", "manifest.json", "potential.csv", "series.csv"});
    // feeding the manifest back reproduces the run
    const auto again = parse_config(json::parse(slurp(m.directory / "manifest.json")));
    CHECK(to_json(again) == doc["config"]);
}
