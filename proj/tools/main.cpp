#include "sinetune/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using sinetune::cli::Range;
using sinetune::cli::UsageError;

Range parse_range(const std::string& text) {
    std::size_t sep = text.find("..");
    if (sep == std::string::npos)
        throw UsageError("range '" + text + "' must look like lo..hi (lo == hi pins the value)");
    try {
        Range range;
        range.lo = std::stod(text.substr(0, sep));
        range.hi = std::stod(text.substr(sep + 2));
        return range;
    } catch (const std::exception&) {
        throw UsageError("cannot parse range '" + text + "'");
    }
}

std::vector<int> parse_steps(const std::string& text) {
    std::vector<int> steps;
    std::size_t start = 0;
    try {
        while (start <= text.size()) {
            std::size_t comma = text.find(',', start);
            if (comma == std::string::npos) comma = text.size();
            steps.push_back(std::stoi(text.substr(start, comma - start)));
            if (comma == text.size()) break;
            start = comma + 1;
        }
    } catch (const std::exception&) {
        throw UsageError("cannot parse --grid-steps '" + text + "'");
    }
    return steps;
}

// Flags found in the JSON config become argv tokens inserted right after the
// subcommand, so explicitly passed flags win (TakeLast policy).
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    nlohmann::json config;
    try {
        in >> config;
    } catch (const std::exception& e) {
        throw UsageError("cannot parse config file '" + path + "': " + e.what());
    }
    if (!config.is_object()) throw UsageError("config file must hold a JSON object");
    std::vector<std::string> tokens;
    for (const auto& [key, value] : config.items()) {
        tokens.push_back("--" + key);
        if (value.is_string())
            tokens.push_back(value.get<std::string>());
        else if (value.is_number() || value.is_boolean())
            tokens.push_back(value.dump());
        else
            throw UsageError("config key '" + key + "' must be a string, number or boolean");
    }
    return tokens;
}

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            config_path = args[i].substr(9);
    }
    if (config_path.empty()) return args;

    std::vector<std::string> expanded;
    bool injected = false;
    for (const std::string& arg : args) {
        expanded.push_back(arg);
        if (!injected && !arg.empty() && arg.front() != '-') {
            // First positional token is the subcommand.
            for (std::string& token : config_tokens(config_path))
                expanded.push_back(std::move(token));
            injected = true;
        }
    }
    if (!injected) throw UsageError("--config requires a subcommand");
    return expanded;
}

template <typename T>
CLI::Option* opt(CLI::App* app, const std::string& name, T& target,
                 const std::string& description) {
    return app->add_option(name, target, description)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

void add_config_flag(CLI::App* app, std::string& config_path) {
    opt(app, "--config", config_path, "JSON file with defaults for the flags of this command");
}

void add_space_flags(CLI::App* app, std::string& t_range, std::string& g_range,
                     std::string& k_range) {
    opt(app, "--t-range", t_range, "tolerance range lo..hi, lo==hi pins t (default 0..20)");
    opt(app, "--g-range", g_range, "generality range lo..hi, lo==hi pins g (default 1..128)");
    opt(app, "--k-range", k_range, "depth range lo..hi, lo==hi pins k (default 0..256)");
}

sinetune::cli::SpaceOptions build_space(const std::string& t_range, const std::string& g_range,
                                        const std::string& k_range) {
    sinetune::cli::SpaceOptions space;
    space.t = parse_range(t_range);
    space.g = parse_range(g_range);
    space.k = parse_range(k_range);
    return space;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SInE premise-selection tuning: GP-UCB optimisation of (t, g, k) "
                 "with grid and epsilon-greedy baselines"};
    app.require_subcommand(1);

    // select
    auto* select = app.add_subcommand("select", "run selection at fixed parameters and score it");
    sinetune::cli::SelectOptions select_options;
    std::string select_config;
    double select_t = 1.0;
    int select_g = 1, select_k = 1;
    add_config_flag(select, select_config);
    opt(select, "--corpus", select_options.corpus_path, "corpus file")->required();
    opt(select, "--out", select_options.out_dir, "output directory")->required();
    opt(select, "--t", select_t, "tolerance threshold (> 0)");
    opt(select, "--g", select_g, "generality threshold (>= 1)");
    opt(select, "--k", select_k, "selection depth (>= 0)");
    opt(select, "--threads", select_options.threads, "worker threads, 0 = auto");

    // tune
    auto* tune = app.add_subcommand("tune", "GP-UCB tuning of the unpinned parameters");
    sinetune::cli::TuneOptions tune_options;
    std::string tune_config;
    std::string tune_t = "0..20", tune_g = "1..128", tune_k = "0..256";
    add_config_flag(tune, tune_config);
    opt(tune, "--corpus", tune_options.corpus_path, "corpus file")->required();
    opt(tune, "--out", tune_options.out_dir, "output directory")->required();
    add_space_flags(tune, tune_t, tune_g, tune_k);
    opt(tune, "--seed", tune_options.tune.seed, "random seed");
    opt(tune, "--beta", tune_options.tune.beta, "UCB exploration weight (>= 0)");
    opt(tune, "--starts", tune_options.tune.n_random_starts, "random starting points");
    opt(tune, "--iters", tune_options.tune.n_iterations, "optimisation iterations");
    opt(tune, "--candidates", tune_options.tune.candidate_count,
        "acquisition candidate draws per iteration");
    opt(tune, "--threads", tune_options.threads, "worker threads, 0 = auto");

    // baseline
    auto* baseline = app.add_subcommand("baseline", "grid or epsilon-greedy search");
    sinetune::cli::BaselineOptions baseline_options;
    std::string baseline_config;
    std::string baseline_mode = "grid";
    std::string baseline_steps;
    std::string baseline_t = "0..20", baseline_g = "1..128", baseline_k = "0..256";
    int baseline_evals = 20;
    add_config_flag(baseline, baseline_config);
    opt(baseline, "--corpus", baseline_options.corpus_path, "corpus file")->required();
    opt(baseline, "--out", baseline_options.out_dir, "output directory")->required();
    opt(baseline, "--mode", baseline_mode, "grid | epsilon")
        ->check(CLI::IsMember({"grid", "epsilon"}));
    add_space_flags(baseline, baseline_t, baseline_g, baseline_k);
    opt(baseline, "--grid-steps", baseline_steps,
        "grid steps, one value or comma list per searched dimension");
    opt(baseline, "--epsilon", baseline_options.epsilon.epsilon,
        "probability of a random restart step");
    opt(baseline, "--radius", baseline_options.epsilon.neighborhood_radius,
        "neighbourhood half-width in unit-cube units");
    opt(baseline, "--evals", baseline_evals, "evaluation budget for epsilon mode");
    opt(baseline, "--seed", baseline_options.epsilon.seed, "random seed");
    opt(baseline, "--threads", baseline_options.threads, "worker threads, 0 = auto");

    // grid-mixed
    auto* mixed = app.add_subcommand(
        "grid-mixed", "exhaustive grid over g,k crossed with 1-D GP-UCB runs over t");
    sinetune::cli::MixedOptions mixed_options;
    std::string mixed_config;
    std::string mixed_steps;
    std::string mixed_t = "0..20", mixed_g = "1..128", mixed_k = "0..256";
    add_config_flag(mixed, mixed_config);
    opt(mixed, "--corpus", mixed_options.corpus_path, "corpus file")->required();
    opt(mixed, "--out", mixed_options.out_dir, "output directory")->required();
    add_space_flags(mixed, mixed_t, mixed_g, mixed_k);
    opt(mixed, "--grid-steps", mixed_steps, "steps for the integer grid dims");
    opt(mixed, "--seed", mixed_options.tune.seed, "random seed");
    opt(mixed, "--beta", mixed_options.tune.beta, "UCB exploration weight");
    opt(mixed, "--starts", mixed_options.tune.n_random_starts, "random starts per cell");
    opt(mixed, "--iters", mixed_options.tune.n_iterations, "iterations per cell");
    opt(mixed, "--candidates", mixed_options.tune.candidate_count,
        "acquisition candidate draws per iteration");
    opt(mixed, "--threads", mixed_options.threads, "worker threads, 0 = auto");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic corpus");
    sinetune::cli::GenOptions gen_options;
    std::string gen_config;
    add_config_flag(gen, gen_config);
    opt(gen, "--facts", gen_options.gen.n_facts, "number of facts")->required();
    opt(gen, "--symbols", gen_options.gen.n_symbols, "number of symbols")->required();
    opt(gen, "--conjectures", gen_options.gen.n_conjectures, "number of conjectures")
        ->required();
    opt(gen, "--seed", gen_options.gen.seed, "random seed");
    opt(gen, "--out", gen_options.out_path, "corpus file to write")->required();

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(args);
        std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
        app.parse(std::move(args));

        if (select->parsed()) {
            select_options.params = sinetune::SineParams{select_t, select_g, select_k};
            sinetune::cli::run_select(select_options, std::cout);
        } else if (tune->parsed()) {
            tune_options.space = build_space(tune_t, tune_g, tune_k);
            sinetune::cli::run_tune(tune_options, std::cout);
        } else if (baseline->parsed()) {
            baseline_options.space = build_space(baseline_t, baseline_g, baseline_k);
            baseline_options.mode = baseline_mode == "grid"
                                        ? sinetune::cli::BaselineMode::grid
                                        : sinetune::cli::BaselineMode::epsilon;
            if (!baseline_steps.empty()) baseline_options.grid_steps = parse_steps(baseline_steps);
            baseline_options.epsilon.n_evaluations = baseline_evals;
            sinetune::cli::run_baseline(baseline_options, std::cout);
        } else if (mixed->parsed()) {
            mixed_options.space = build_space(mixed_t, mixed_g, mixed_k);
            if (!mixed_steps.empty()) mixed_options.grid_steps = parse_steps(mixed_steps);
            sinetune::cli::run_grid_mixed(mixed_options, std::cout);
        } else if (gen->parsed()) {
            sinetune::cli::run_gen(gen_options, std::cout);
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const sinetune::CorpusError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}
