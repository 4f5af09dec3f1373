#include "slk/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "slk/error.hpp"

namespace slk {

using nlohmann::json;

namespace {

constexpr const char* kManifestFormat = "slk-manifest/1";

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Reads typed members out of one JSON object and remembers which keys were
// consumed, so that leftovers can be reported as unknown.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : path_(std::move(path)) {
        if (j.is_null()) {
            return;
        }
        if (!j.is_object()) {
            throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
        }
        j_ = &j;
    }

    const json* find(const std::string& key) {
        seen_.insert(key);
        if (j_ == nullptr) {
            return nullptr;
        }
        const auto it = j_->find(key);
        return it == j_->end() ? nullptr : &*it;
    }

    double real(const std::string& key, double fallback) {
        const json* v = find(key);
        if (v == nullptr || v->is_null()) {
            return fallback;
        }
        if (!v->is_number()) {
            throw ConfigError(join(path_, key), "expected a number");
        }
        const double x = v->get<double>();
        if (!std::isfinite(x)) {
            throw ConfigError(join(path_, key), "must be finite");
        }
        return x;
    }

    double positive(const std::string& key, double fallback) {
        const double x = real(key, fallback);
        if (!(x > 0.0)) {
            throw ConfigError(join(path_, key), "must be positive");
        }
        return x;
    }

    double nonnegative(const std::string& key, double fallback) {
        const double x = real(key, fallback);
        if (!(x >= 0.0)) {
            throw ConfigError(join(path_, key), "must be nonnegative");
        }
        return x;
    }

    std::optional<double> optional_real(const std::string& key, std::optional<double> fallback) {
        const json* v = find(key);
        if (v == nullptr) {
            return fallback;
        }
        if (v->is_null()) {
            return std::nullopt;
        }
        return real(key, 0.0);
    }

    std::optional<std::size_t> optional_count(const std::string& key, std::optional<std::size_t> fallback) {
        const json* v = find(key);
        if (v == nullptr) {
            return fallback;
        }
        if (v->is_null()) {
            return std::nullopt;
        }
        return count(key, 0);
    }

    std::size_t count(const std::string& key, std::size_t fallback) {
        const json* v = find(key);
        if (v == nullptr || v->is_null()) {
            return fallback;
        }
        if (v->is_number_unsigned() || v->is_number_integer()) {
            const auto i = v->get<std::int64_t>();
            if (i <= 0) {
                throw ConfigError(join(path_, key), "must be a positive integer");
            }
            return static_cast<std::size_t>(i);
        }
        if (v->is_number_float()) {
            const double x = v->get<double>();
            if (x == std::floor(x) && x >= 1.0 && x < 9.0e15) {
                return static_cast<std::size_t>(x);
            }
            throw ConfigError(join(path_, key), "must be an integer, got " + v->dump());
        }
        throw ConfigError(join(path_, key), "expected a positive integer");
    }

    std::uint64_t seed(const std::string& key, std::uint64_t fallback) {
        const json* v = find(key);
        if (v == nullptr || v->is_null()) {
            return fallback;
        }
        if (v->is_number_unsigned()) {
            return v->get<std::uint64_t>();
        }
        if (v->is_number_integer() && v->get<std::int64_t>() >= 0) {
            return static_cast<std::uint64_t>(v->get<std::int64_t>());
        }
        throw ConfigError(join(path_, key), "expected a nonnegative integer");
    }

    bool flag(const std::string& key, bool fallback) {
        const json* v = find(key);
        if (v == nullptr || v->is_null()) {
            return fallback;
        }
        if (!v->is_boolean()) {
            throw ConfigError(join(path_, key), "expected true or false");
        }
        return v->get<bool>();
    }

    std::string text(const std::string& key, const std::string& fallback) {
        const json* v = find(key);
        if (v == nullptr || v->is_null()) {
            return fallback;
        }
        if (!v->is_string()) {
            throw ConfigError(join(path_, key), "expected a string");
        }
        return v->get<std::string>();
    }

    ObjectReader object(const std::string& key) {
        const json* v = find(key);
        static const json null_value;
        return ObjectReader(v == nullptr ? null_value : *v, join(path_, key));
    }

    const std::string& path() const noexcept { return path_; }

    void finish() const {
        if (j_ == nullptr) {
            return;
        }
        for (const auto& item : j_->items()) {
            if (!seen_.contains(item.key())) {
                throw ConfigError(join(path_, item.key()), "unknown key");
            }
        }
    }

private:
    const json* j_ = nullptr;
    std::string path_;
    std::set<std::string> seen_;
};

ExperimentKind parse_kind(const std::string& name) {
    static const std::map<std::string, ExperimentKind> kinds{{"toy1", ExperimentKind::toy1},
                                                             {"toy2", ExperimentKind::toy2},
                                                             {"bloch", ExperimentKind::bloch},
                                                             {"anderson", ExperimentKind::anderson},
                                                             {"custom", ExperimentKind::custom}};
    const auto it = kinds.find(name);
    if (it == kinds.end()) {
        throw ConfigError("kind", "unknown kind '" + name + "' (toy1, toy2, bloch, anderson, custom)");
    }
    return it->second;
}

void read_grid(ObjectReader r, GridNumerics& g) {
    g.x_min = r.real("x_min", g.x_min);
    g.x_max = r.real("x_max", g.x_max);
    if (!(g.x_min < g.x_max)) {
        throw ConfigError(join(r.path(), "x_max"), "must exceed x_min");
    }
    g.n = r.count("n", g.n);
    if (g.n < 3) {
        throw ConfigError(join(r.path(), "n"), "need at least 3 points");
    }
    g.dt = r.positive("dt", g.dt);
    g.t_max = r.nonnegative("t_max", g.t_max);
    g.record_every = r.count("record_every", g.record_every);
    g.snapshot_every = r.count("snapshot_every", g.snapshot_every);
    g.rho_floor = r.nonnegative("rho_floor", g.rho_floor);
    g.w_rho_floor = r.nonnegative("w_rho_floor", g.w_rho_floor);
    g.subtract_mean_phase = r.flag("subtract_mean_phase", g.subtract_mean_phase);
    r.finish();
}

void read_chain(ObjectReader r, LatticeNumerics& c) {
    c.dt = r.positive("dt", c.dt);
    c.t_max = r.optional_real("t_max", c.t_max);
    if (c.t_max && !(*c.t_max >= 0.0)) {
        throw ConfigError(join(r.path(), "t_max"), "must be nonnegative");
    }
    c.record_every = r.count("record_every", c.record_every);
    c.map_every = r.count("map_every", c.map_every);
    r.finish();
}

void read_toy1(ObjectReader r, Toy1Physical& p) {
    p.nu = r.positive("nu", p.nu);
    p.beta = r.nonnegative("beta", p.beta);
    auto& m = p.mixture;
    m.a = r.real("a", m.a);
    m.sigma_plus = r.positive("sigma_plus", m.sigma_plus);
    m.sigma_minus = r.positive("sigma_minus", m.sigma_minus);
    m.sigma_0 = r.positive("sigma_0", m.sigma_0);
    m.c_plus = r.nonnegative("c_plus", m.c_plus);
    m.c_minus = r.nonnegative("c_minus", m.c_minus);
    m.c_0 = r.nonnegative("c_0", m.c_0);
    r.finish();
}

void read_toy2(ObjectReader r, Toy2Physical& p) {
    p.nu = r.positive("nu", p.nu);
    p.beta = r.nonnegative("beta", p.beta);
    p.well.a_plus = r.positive("a_plus", p.well.a_plus);
    p.well.a_minus = r.positive("a_minus", p.well.a_minus);
    p.well.v0 = r.real("v0", p.well.v0);
    p.well.delta = r.real("delta", p.well.delta);
    p.initial_center = r.optional_real("initial_center", p.initial_center);
    p.initial_sigma = r.optional_real("initial_sigma", p.initial_sigma);
    if (p.initial_sigma && !(*p.initial_sigma > 0.0)) {
        throw ConfigError(join(r.path(), "initial_sigma"), "must be positive");
    }
    r.finish();
}

void read_lattice(ObjectReader r, LatticePhysical& p) {
    p.s = r.count("s", p.s);
    p.epsilon = r.count("epsilon", p.epsilon);
    p.k = r.optional_count("k", p.k);
    p.g_factor = r.real("g_factor", p.g_factor);
    p.beta_factor = r.nonnegative("beta_factor", p.beta_factor);
    p.sigma_factor = r.nonnegative("sigma_factor", p.sigma_factor);
    p.arrival_sites = r.optional_count("arrival_sites", p.arrival_sites);
    r.finish();
}

void read_custom(ObjectReader r, CustomPhysical& p) {
    p.domain = r.text("domain", p.domain);
    if (p.domain != "grid" && p.domain != "lattice") {
        throw ConfigError(join(r.path(), "domain"), "must be \"grid\" or \"lattice\"");
    }
    p.potential_file = r.text("potential_file", p.potential_file);
    if (p.potential_file.empty()) {
        throw ConfigError(join(r.path(), "potential_file"), "required for kind custom");
    }
    p.nu = r.positive("nu", p.nu);
    p.beta = r.nonnegative("beta", p.beta);
    p.initial_center = r.real("initial_center", p.initial_center);
    p.initial_sigma = r.positive("initial_sigma", p.initial_sigma);
    p.initial_momentum = r.real("initial_momentum", p.initial_momentum);
    p.s = r.count("s", p.s);
    p.epsilon = r.count("epsilon", p.epsilon);
    p.k = r.count("k", p.k);
    p.arrival_sites = r.optional_count("arrival_sites", p.arrival_sites);
    r.finish();
}

// Lattice checks that need several fields at once.
void check_lattice(const ExperimentConfig& cfg) {
    const auto& p = cfg.lattice;
    if (p.s < 2) {
        throw ConfigError("physical.s", "need at least 2 sites");
    }
    if (p.epsilon >= p.s) {
        throw ConfigError("physical.epsilon", "must be smaller than s");
    }
    if (!p.k && p.epsilon % 2 == 0) {
        throw ConfigError("physical.k", "default k = (epsilon - 1) / 2 is not an integer for epsilon = " +
                                            std::to_string(p.epsilon));
    }
    const std::size_t k = p.k.value_or((p.epsilon - 1) / 2);
    if (k < 1 || k > p.epsilon) {
        throw ConfigError("physical.k", "must satisfy 1 <= k <= epsilon");
    }
    const std::size_t delta = p.arrival_sites.value_or(2 * p.epsilon);
    if (delta >= p.s) {
        throw ConfigError("physical.arrival_sites", "must be smaller than s");
    }
}

void check_custom(const ExperimentConfig& cfg) {
    const auto& p = cfg.custom;
    if (p.domain != "lattice") {
        return;
    }
    if (p.epsilon >= p.s) {
        throw ConfigError("physical.epsilon", "must be smaller than s");
    }
    if (p.k > p.epsilon) {
        throw ConfigError("physical.k", "must satisfy 1 <= k <= epsilon");
    }
    if (p.arrival_sites.value_or(2 * p.epsilon) >= p.s) {
        throw ConfigError("physical.arrival_sites", "must be smaller than s");
    }
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::toy1:
            return "toy1";
        case ExperimentKind::toy2:
            return "toy2";
        case ExperimentKind::bloch:
            return "bloch";
        case ExperimentKind::anderson:
            return "anderson";
        case ExperimentKind::custom:
            return "custom";
    }
    return "?";
}

bool ExperimentConfig::on_lattice() const noexcept {
    return kind == ExperimentKind::bloch || kind == ExperimentKind::anderson ||
           (kind == ExperimentKind::custom && custom.domain == "lattice");
}

ResolvedLattice resolve_lattice(const ExperimentConfig& cfg) {
    if (cfg.kind != ExperimentKind::bloch && cfg.kind != ExperimentKind::anderson) {
        throw InvalidArgument("lattice parameters only exist for bloch and anderson runs");
    }
    const auto& p = cfg.lattice;
    const double s = static_cast<double>(p.s);
    ResolvedLattice r;
    r.g0 = 2.0 / s;
    r.sigma0 = std::pow(10.0 / s, 1.5);
    r.g = p.g_factor * r.g0;
    r.beta = p.beta_factor * r.g0;
    r.sigma = p.sigma_factor * r.sigma0;
    r.k = p.k.value_or((p.epsilon - 1) / 2);
    r.delta = p.arrival_sites.value_or(2 * p.epsilon);
    r.t_max = cfg.chain.t_max.value_or((cfg.kind == ExperimentKind::bloch ? 4.0 : 20.0) * s);
    return r;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"toy1",           "toy2",          "bloch-free",       "bloch-tilt",
                                                "bloch-friction", "anderson-free", "anderson-friction"};
    return names;
}

std::string preset_description(const std::string& name) {
    static const std::map<std::string, std::string> text{
        {"toy1", "triple-Gaussian ground state, nu=1, beta=0.5, t_max=50"},
        {"toy2", "tilted quartic double well, nu=1, beta=0.3, t_max=50"},
        {"bloch-free", "open chain s=100, g=0, beta=0 (ballistic)"},
        {"bloch-tilt", "open chain s=100, g=3 g0, beta=0 (Bloch confinement)"},
        {"bloch-friction", "open chain s=100, g=3 g0, beta=4 g0"},
        {"anderson-free", "disordered chain, sigma=2 sigma0, g=0, beta=0"},
        {"anderson-friction", "disordered chain, sigma=2 sigma0, g=3 g0, beta=4 g0"},
    };
    const auto it = text.find(name);
    if (it == text.end()) {
        throw ConfigError("preset", "unknown preset '" + name + "'");
    }
    return it->second;
}

json preset_patch(const std::string& name) {
    if (name == "toy1") {
        return {{"kind", "toy1"}};
    }
    if (name == "toy2") {
        return {{"kind", "toy2"}};
    }
    if (name == "bloch-free") {
        return {{"kind", "bloch"}, {"physical", {{"g_factor", 0.0}, {"beta_factor", 0.0}}}};
    }
    if (name == "bloch-tilt") {
        return {{"kind", "bloch"}, {"physical", {{"g_factor", 3.0}, {"beta_factor", 0.0}}}};
    }
    if (name == "bloch-friction") {
        return {{"kind", "bloch"}, {"physical", {{"g_factor", 3.0}, {"beta_factor", 4.0}}}};
    }
    if (name == "anderson-free") {
        return {{"kind", "anderson"}, {"physical", {{"g_factor", 0.0}, {"beta_factor", 0.0}, {"sigma_factor", 2.0}}}};
    }
    if (name == "anderson-friction") {
        return {{"kind", "anderson"}, {"physical", {{"g_factor", 3.0}, {"beta_factor", 4.0}, {"sigma_factor", 2.0}}}};
    }
    throw ConfigError("preset", "unknown preset '" + name + "'");
}

ExperimentConfig parse_config(const json& input) {
    if (!input.is_object()) {
        throw ConfigError("<root>", "expected a JSON object");
    }
    // a run manifest carries its resolved config
    const json* doc = &input;
    if (const auto f = input.find("format"); f != input.end() && *f == kManifestFormat) {
        const auto c = input.find("config");
        if (c == input.end()) {
            throw ConfigError("config", "manifest has no config member");
        }
        doc = &*c;
    }

    json merged = json::object();
    std::optional<std::string> preset;
    if (const auto p = doc->find("preset"); p != doc->end() && !p->is_null()) {
        if (!p->is_string()) {
            throw ConfigError("preset", "expected a string");
        }
        preset = p->get<std::string>();
        merged = preset_patch(*preset);
    }
    // a null in the document removes the key, which selects the computed default
    merged.merge_patch(*doc);
    ObjectReader root(merged, "");
    root.find("preset");

    ExperimentConfig cfg;
    cfg.preset = preset;
    const std::string kind = root.text("kind", "");
    if (kind.empty()) {
        throw ConfigError("kind", "missing (or give a preset)");
    }
    cfg.kind = parse_kind(kind);
    cfg.seed = root.seed("seed", cfg.seed);
    cfg.output_dir = root.text("output_dir", cfg.output_dir.string());

    auto physical = root.object("physical");
    auto numerical = root.object("numerical");
    switch (cfg.kind) {
        case ExperimentKind::toy1:
            read_toy1(physical, cfg.toy1);
            read_grid(numerical, cfg.grid);
            break;
        case ExperimentKind::toy2:
            read_toy2(physical, cfg.toy2);
            read_grid(numerical, cfg.grid);
            break;
        case ExperimentKind::bloch:
        case ExperimentKind::anderson:
            if (cfg.kind == ExperimentKind::anderson) {
                cfg.lattice.sigma_factor = 2.0;
                cfg.chain.map_every = 100;
            }
            read_lattice(physical, cfg.lattice);
            read_chain(numerical, cfg.chain);
            check_lattice(cfg);
            break;
        case ExperimentKind::custom:
            read_custom(physical, cfg.custom);
            if (cfg.custom.domain == "grid") {
                read_grid(numerical, cfg.grid);
            } else {
                read_chain(numerical, cfg.chain);
                if (!cfg.chain.t_max) {
                    cfg.chain.t_max = 4.0 * static_cast<double>(cfg.custom.s);
                }
            }
            check_custom(cfg);
            break;
    }
    root.finish();
    return cfg;
}

json read_config_document(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw ConfigError("<file>", "cannot open " + file.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", file.string() + " is not valid JSON: " + e.what());
    }
    if (doc.is_object()) {
        if (const auto f = doc.find("format"); f != doc.end() && *f == kManifestFormat) {
            const auto c = doc.find("config");
            if (c == doc.end()) {
                throw ConfigError("config", "manifest has no config member");
            }
            return *c;
        }
    }
    return doc;
}

ExperimentConfig load_config(const std::filesystem::path& file) { return parse_config(read_config_document(file)); }

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError(assignment, "override must look like key=value");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) {
        value = raw;
    }
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) {
            throw ConfigError(key, "empty path component");
        }
        if (!node->is_object()) {
            if (!node->is_null()) {
                throw ConfigError(key, "cannot descend into a non-object");
            }
            *node = json::object();
        }
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        node = &(*node)[part];
        start = dot + 1;
    }
}

json to_json(const ExperimentConfig& cfg) {
    json j;
    j["kind"] = to_string(cfg.kind);
    j["preset"] = cfg.preset ? json(*cfg.preset) : json(nullptr);
    j["seed"] = cfg.seed;
    j["output_dir"] = cfg.output_dir.generic_string();
    json physical;
    json numerical;
    const auto grid_json = [&] {
        const auto& g = cfg.grid;
        numerical = {{"x_min", g.x_min},
                     {"x_max", g.x_max},
                     {"n", g.n},
                     {"dt", g.dt},
                     {"t_max", g.t_max},
                     {"record_every", g.record_every},
                     {"snapshot_every", g.snapshot_every},
                     {"rho_floor", g.rho_floor},
                     {"w_rho_floor", g.w_rho_floor},
                     {"subtract_mean_phase", g.subtract_mean_phase}};
    };
    const auto chain_json = [&](double t_max) {
        const auto& c = cfg.chain;
        numerical = {{"dt", c.dt}, {"t_max", t_max}, {"record_every", c.record_every}, {"map_every", c.map_every}};
    };
    switch (cfg.kind) {
        case ExperimentKind::toy1: {
            const auto& p = cfg.toy1;
            const auto& m = p.mixture;
            physical = {{"nu", p.nu},           {"beta", p.beta},     {"a", m.a},
                        {"sigma_plus", m.sigma_plus}, {"sigma_minus", m.sigma_minus}, {"sigma_0", m.sigma_0},
                        {"c_plus", m.c_plus},   {"c_minus", m.c_minus}, {"c_0", m.c_0}};
            grid_json();
            break;
        }
        case ExperimentKind::toy2: {
            const auto& p = cfg.toy2;
            physical = {{"nu", p.nu},
                        {"beta", p.beta},
                        {"a_plus", p.well.a_plus},
                        {"a_minus", p.well.a_minus},
                        {"v0", p.well.v0},
                        {"delta", p.well.delta},
                        {"initial_center", optional_json(p.initial_center)},
                        {"initial_sigma", optional_json(p.initial_sigma)}};
            grid_json();
            break;
        }
        case ExperimentKind::bloch:
        case ExperimentKind::anderson: {
            const auto& p = cfg.lattice;
            const auto r = resolve_lattice(cfg);
            physical = {{"s", p.s},
                        {"epsilon", p.epsilon},
                        {"k", r.k},
                        {"g_factor", p.g_factor},
                        {"beta_factor", p.beta_factor},
                        {"sigma_factor", p.sigma_factor},
                        {"arrival_sites", r.delta}};
            chain_json(r.t_max);
            break;
        }
        case ExperimentKind::custom: {
            const auto& p = cfg.custom;
            physical = {{"domain", p.domain},
                        {"potential_file", p.potential_file},
                        {"nu", p.nu},
                        {"beta", p.beta},
                        {"initial_center", p.initial_center},
                        {"initial_sigma", p.initial_sigma},
                        {"initial_momentum", p.initial_momentum},
                        {"s", p.s},
                        {"epsilon", p.epsilon},
                        {"k", p.k},
                        {"arrival_sites", p.arrival_sites ? json(*p.arrival_sites) : json(nullptr)}};
            if (p.domain == "grid") {
                grid_json();
            } else {
                chain_json(cfg.chain.t_max.value_or(4.0 * static_cast<double>(p.s)));
            }
            break;
        }
    }
    j["physical"] = physical;
    j["numerical"] = numerical;
    return j;
}

}  // namespace slk
