// wgqed: command-line front end. See README.md for usage and docs/schema.md
// for the artifact layout.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wgqed/cli/commands.hpp"

namespace {

enum ExitCode {
    kOk = 0,
    kInternal = 1,
    kConfig = 2,
    kDomain = 3,
    kConvergence = 4,
    kValidationFailed = 5,
    kNoCrossing = 6,
};

struct Flags {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<int> max_mn;
    std::optional<std::string> dos;
    std::optional<std::string> radicand;
    bool reproducible = false;
    std::string inject_fault;
};

wgqed::cli::RunConfig resolve(const Flags& f) {
    using namespace wgqed::cli;
    RunConfig cfg = load_config(f.config);
    if (f.out) cfg.out = *f.out;
    if (f.format) cfg.format = parse_format(*f.format);
    if (f.max_mn) {
        if (*f.max_mn < 1) throw ConfigError("--max-mn must be >= 1");
        cfg.max_mn = *f.max_mn;
    }
    if (f.dos) cfg.dos = parse_dos(*f.dos);
    if (f.radicand) cfg.radicand = parse_radicand(*f.radicand);
    return cfg;
}

void emit(const wgqed::cli::Artifact& a, const wgqed::cli::RunConfig& cfg, bool reproducible) {
    using namespace wgqed::cli;
    const Json env = make_envelope(a, cfg, reproducible);
    if (cfg.format == Format::Json) {
        write_text(cfg.out, render_json(a, env, cfg.precision));
        return;
    }
    write_text(cfg.out, render_csv(a, env, cfg.precision));
    if (a.sidecar) {
        Json side;
        side["envelope"] = env;
        side["fits"] = *a.sidecar;
        const std::string text = round_numbers(side, cfg.precision).dump(2) + "\n";
        if (cfg.out == "-") {
            std::cerr << text;
        } else {
            write_text(cfg.out + ".fits.json", text);
        }
    }
}

int run(const std::string& command, const Flags& flags) {
    using namespace wgqed::cli;
    const RunConfig cfg = resolve(flags);
    if (command == "modes") {
        emit(cmd_modes(cfg), cfg, flags.reproducible);
    } else if (command == "decay") {
        emit(cmd_decay(cfg), cfg, flags.reproducible);
    } else if (command == "corr") {
        emit(cmd_corr(cfg), cfg, flags.reproducible);
    } else if (command == "omegad") {
        const OmegaDOutcome o = cmd_omegad(cfg);
        emit(o.artifact, cfg, flags.reproducible);
        if (o.no_crossing) return kNoCrossing;
    } else if (command == "validate") {
        if (!flags.inject_fault.empty() && flags.inject_fault != "normalization") {
            throw ConfigError("unknown fault '" + flags.inject_fault + "'");
        }
        ValidateOptions opts;
        opts.corrupt_normalization = flags.inject_fault == "normalization";
        const ValidateOutcome o = cmd_validate(cfg, opts);
        emit(o.artifact, cfg, flags.reproducible);
        if (!o.all_passed) return kValidationFailed;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spontaneous emission and photodetection in a rectangular waveguide"};
    app.require_subcommand(1);
    Flags flags;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"modes", "Mode table sorted by cutoff frequency"},
        {"decay", "Decay rate, level shift and per-mode contributions"},
        {"corr", "First-order correlation function on an (x, z, t) grid"},
        {"omegad", "Crossing of the spatial/temporal decay ratio with sqrt(eps mu)"},
        {"validate", "Run the invariant battery"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", flags.config, "Configuration file")->required();
        sub->add_option("--out", flags.out, "Output path, - for stdout");
        sub->add_option("--format", flags.format, "csv or json");
        sub->add_flag("--reproducible", flags.reproducible, "Omit the timestamp");
        sub->add_option("--max-mn", flags.max_mn, "Largest m and n scanned");
        sub->add_option("--dos", flags.dos, "paper or dispersion");
        sub->add_option("--radicand", flags.radicand, "paper or consistent");
        if (name == "validate") {
            sub->add_option("--inject-fault", flags.inject_fault)->group("");
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, flags);
    } catch (const wgqed::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const wgqed::NoCrossingError& e) {
        std::cerr << "no crossing: " << e.what() << "\n";
        return kNoCrossing;
    } catch (const wgqed::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return kConvergence;
    } catch (const wgqed::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInternal;
    }
}
