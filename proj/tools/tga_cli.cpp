// tga — command-line front end for the waveguide / topological giant atom simulations.
//
//   tga scatter  --config sweep.cfg [key=value ...]
//   tga spectrum --config fig5.cfg boundary=open
//   tga dynamics --config fig7.cfg
//   tga winding  t1=0.1 t2=0.5
//   tga reproduce fig4a --out-dir data/
//   tga selftest --seed 7

#include "tga/cli.hpp"
#include "tga/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace tga::cli;

    CLI::App app{"Single-photon scattering, bound states and probe dynamics for a waveguide "
                 "coupled to a topological giant atom"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);

    struct Experiment {
        std::string config_file;
        std::vector<std::string> overrides;
        CLI::App* sub = nullptr;
    };
    std::vector<std::pair<Command, Experiment>> experiments;
    for (Command c : {Command::Scatter, Command::Spectrum, Command::Dynamics, Command::Winding}) {
        experiments.emplace_back(c, Experiment{});
    }
    for (auto& [command, ex] : experiments) {
        std::string keys;
        for (const auto& k : accepted_keys(command)) keys += (keys.empty() ? "" : ", ") + k;
        ex.sub = app.add_subcommand(to_string(command), "Run a " + to_string(command) +
                                                            " experiment. Keys: " + keys);
        ex.sub->add_option("-c,--config", ex.config_file, "key = value configuration file");
        ex.sub->add_option("overrides", ex.overrides, "key=value overrides (win over the file)");
        ex.sub->add_option("--set", ex.overrides, "key=value override");
    }

    std::string figure;
    std::string out_dir = ".";
    auto* reproduce = app.add_subcommand("reproduce", "Write the data files for one figure preset");
    reproduce->add_option("figure_id", figure, "fig2c | fig4a | fig4b | fano | fig5a | fig5b | fig7")
        ->required();
    reproduce->add_option("-o,--out-dir", out_dir, "Output directory");

    std::uint64_t seed = 0;
    auto* selftest = app.add_subcommand("selftest", "Run the fast invariant suite");
    selftest->add_option("--seed", seed, "Seed for the random parameter draws");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    if (*reproduce) {
        return reproduce_figure(figure, out_dir, std::cout, std::cerr);
    }
    if (*selftest) {
        return run_selftest(seed, std::cout) ? kExitOk : kExitNumericalError;
    }
    for (auto& [command, ex] : experiments) {
        if (!*ex.sub) continue;
        try {
            KeyValues file_entries;
            if (!ex.config_file.empty()) file_entries = read_config_file(ex.config_file);
            KeyValues overrides;
            for (const auto& o : ex.overrides) overrides.push_back(parse_override(o));
            const ExperimentConfig config = resolve_config(command, file_entries, overrides);
            return run(config, std::cerr);
        } catch (const tga::InvalidParameter& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return kExitConfigError;
        }
    }
    return kExitConfigError;
}
