#include "slk/cli.hpp"

#include <cstdlib>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slk/config.hpp"
#include "slk/error.hpp"
#include "slk/experiments.hpp"
#include "slk/io.hpp"

namespace slk::cli {

namespace {

using nlohmann::json;

struct ConfigSource {
    std::string preset;
    std::string config_file;
    std::vector<std::string> overrides;
    std::string out;
};

void add_config_options(CLI::App& cmd, ConfigSource& src) {
    cmd.add_option("--preset,-p", src.preset, "named scenario (see list-presets)");
    cmd.add_option("--config,-c", src.config_file, "JSON config or a previous manifest.json");
    cmd.add_option("--set,-s", src.overrides, "override, e.g. physical.beta=0.2 (repeatable)");
    cmd.add_option("--out,-o", src.out, "output directory");
}

// File first, then the preset flag, then --set overrides; the output directory
// falls back to $SLK_OUTPUT_DIR (or ./out) joined with the preset or kind name
// plus a per-command suffix, so spectrum and ensemble never clobber a run.
ExperimentConfig assemble(const ConfigSource& src, const std::string& suffix = "") {
    json doc = json::object();
    if (!src.config_file.empty()) {
        doc = read_config_document(src.config_file);
        if (!doc.is_object()) {
            throw ConfigError("<root>", "expected a JSON object in " + src.config_file);
        }
    }
    if (!src.preset.empty()) {
        preset_patch(src.preset);  // rejects unknown names early
        doc["preset"] = src.preset;
    }
    for (const auto& o : src.overrides) {
        apply_override(doc, o);
    }
    if (doc.empty()) {
        throw ConfigError("preset", "give --preset or --config");
    }
    const bool has_dir = doc.contains("output_dir") && !doc["output_dir"].is_null();
    ExperimentConfig cfg = parse_config(doc);
    if (!src.out.empty()) {
        cfg.output_dir = src.out;
    } else if (!has_dir) {
        const char* env = std::getenv("SLK_OUTPUT_DIR");
        const std::filesystem::path base = env != nullptr && *env != '\0' ? env : "out";
        cfg.output_dir = base / (cfg.preset.value_or(to_string(cfg.kind)) + suffix);
    }
    return cfg;
}

void print_summary(std::ostream& out, const Manifest& m) {
    out << "wrote " << m.files.size() << " files to " << m.directory.string() << "\n";
    if (const auto s = m.document.find("summary"); s != m.document.end()) {
        for (const auto& item : s->items()) {
            if (item.value().is_number()) {
                out << "  " << item.key() << " = " << io::format_real(item.value().get<double>()) << "\n";
            }
        }
    }
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Schroedinger-Langevin-Kostin friction dynamics: toy models, Bloch and Anderson chains"};
    app.require_subcommand(1);

    ConfigSource run_src;
    auto* run = app.add_subcommand("run", "run a scenario and write series, snapshots and a manifest");
    add_config_options(*run, run_src);

    ConfigSource spec_src;
    auto* spectrum = app.add_subcommand("spectrum", "exact spectrum and ground state of the scenario Hamiltonian");
    add_config_options(*spectrum, spec_src);

    ConfigSource ens_src;
    std::size_t realizations = 20;
    std::size_t threads = 0;
    auto* ensemble = app.add_subcommand("ensemble", "disorder ensemble over seeds seed, seed+1, ...");
    add_config_options(*ensemble, ens_src);
    ensemble->add_option("--realizations,-n", realizations, "number of disorder draws")->check(CLI::PositiveNumber);
    ensemble->add_option("--threads,-j", threads, "worker threads (0: all cores)");

    ConfigSource val_src;
    auto* validate = app.add_subcommand("validate-config", "check a config file and print it fully resolved");
    validate->add_option("file", val_src.config_file, "config file")->required();
    validate->add_option("--set,-s", val_src.overrides, "override (repeatable)");

    auto* list = app.add_subcommand("list-presets", "show the named scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (list->parsed()) {
            for (const auto& name : preset_names()) {
                out << name << "  " << preset_description(name) << "\n";
            }
            return kExitOk;
        }
        if (validate->parsed()) {
            const auto cfg = assemble(val_src);
            build_scenario(cfg);  // catches problems only visible with the domain in hand
            out << to_json(cfg).dump(2) << "\n";
            return kExitOk;
        }
        if (run->parsed()) {
            print_summary(out, run_experiment(assemble(run_src)));
            return kExitOk;
        }
        if (spectrum->parsed()) {
            print_summary(out, write_spectrum(assemble(spec_src, "-spectrum")));
            return kExitOk;
        }
        if (ensemble->parsed()) {
            const auto cfg = assemble(ens_src, "-ensemble");
            print_summary(out, emit_ensemble(cfg, disorder_ensemble(cfg, realizations, threads)));
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidArgument& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "runtime failure: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}

}  // namespace slk::cli
