// starprune command-line interface.
//
// Subcommands: generate | ablate | spectrum | bench.
// Exit codes: 0 success, 2 validation error, 3 I/O error, 4 state error,
// 1 internal error.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "starprune/commands.hpp"
#include "starprune/config.hpp"
#include "starprune/errors.hpp"
#include "starprune/rng.hpp"

namespace {

starprune::RunConfig resolve_config(const std::string& config_path, uint64_t seed,
                                    bool seed_set) {
    starprune::RunConfig config;
    if (!config_path.empty())
        config = starprune::load_config(config_path);
    if (seed_set) {
        config.target_seed = seed;
        config.backbone_seed = seed;
        config.codebook_seed = starprune::derive_seed(seed, {1});
        config.reducer_seed = starprune::derive_seed(seed, {2});
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"starprune: coarse-to-fine video-feature generation with "
                 "similarity-based token pruning and partial updates"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    uint64_t seed = 0;
    bool seed_set = false;
    app.add_option("--config", config_path, "run configuration file (key = value lines)");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", seed, "override all seeds from one master seed")
        ->each([&seed_set](const std::string&) { seed_set = true; });

    CLI::App* generate = app.add_subcommand(
        "generate", "run the pipeline twice (reference + reducer) and emit artifacts");
    generate->fallthrough();
    std::string axis = "ratio";
    bool study = false;
    CLI::App* ablate = app.add_subcommand("ablate", "sweep one axis: ratio, p or method");
    ablate->fallthrough();
    ablate->add_option("--axis", axis, "sweep axis: ratio | p | method")
        ->capture_default_str();
    ablate->add_flag("--study", study,
                     "run the random-pruning vs token-merging error study instead");
    CLI::App* spectrum = app.add_subcommand(
        "spectrum", "per-scale frequency-band analysis of an unpruned run");
    spectrum->fallthrough();
    int repetitions = 0;
    CLI::App* bench = app.add_subcommand("bench", "median-of-R timing comparison");
    bench->fallthrough();
    bench->add_option("--repetitions", repetitions, "timing repetitions (>= 3)");

    CLI11_PARSE(app, argc, argv);

    try {
        starprune::RunConfig config = resolve_config(config_path, seed, seed_set);
        if (generate->parsed()) {
            starprune::cmd_generate(config, out_dir);
        } else if (ablate->parsed()) {
            if (study)
                starprune::cmd_study(config, out_dir);
            else
                starprune::cmd_ablate(config, axis, out_dir);
        } else if (spectrum->parsed()) {
            starprune::cmd_spectrum(config, out_dir);
        } else if (bench->parsed()) {
            if (repetitions > 0)
                config.repetitions = repetitions;
            starprune::cmd_bench(config, out_dir);
        }
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const starprune::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const starprune::StateError& e) {
        std::cerr << "state error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
