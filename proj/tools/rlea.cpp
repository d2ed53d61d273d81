// Command-line front end: list-functions, train, evaluate, compare.

#include <rlea/experiment.hpp>

#include <CLI11.hpp>
#include <omp.h>

#include <iostream>

namespace {

rlea::ExperimentConfig load_config(const std::string& path) {
    if (path.empty())
        return {};
    return rlea::ExperimentConfig::load(path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learned parameter adaptation for DE and CMA-ES"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    int jobs = 0;
    std::string adaptation = "policy";
    std::string checkpoint;
    std::string metric;
    std::string function;

    auto* list = app.add_subcommand("list-functions", "Print the benchmark registry as name,dimension");

    auto* train = app.add_subcommand("train", "Train a policy with PPO");
    train->add_option("--config", config_path, "Experiment config (JSON)")->required();
    train->add_option("--seed", seed, "Override the experiment seed");
    train->add_option("--out", out_dir, "Output root (default: config output)");
    train->add_option("--jobs", jobs, "Worker threads");

    auto* evaluate = app.add_subcommand("evaluate", "Run the 50-run test protocol");
    evaluate->add_option("--config", config_path, "Experiment config (JSON)");
    evaluate->add_option("--adaptation", adaptation, "Controller")
        ->check(CLI::IsMember({"csa", "ide", "jde", "policy", "fixed"}));
    evaluate->add_option("--checkpoint", checkpoint, "Policy checkpoint");
    evaluate->add_option("--function", function, "Function as Name_dim (default: training function)");
    evaluate->add_option("--seed", seed, "Override the protocol seed base");
    evaluate->add_option("--out", out_dir, "Output root");
    evaluate->add_option("--jobs", jobs, "Worker threads");

    auto* compare = app.add_subcommand("compare", "Win-probability matrix of variants against a baseline");
    compare->add_option("--config", config_path, "Experiment config (JSON)")->required();
    compare->add_option("--metric", metric, "auc or best")->check(CLI::IsMember({"auc", "best"}));
    compare->add_option("--adaptation", adaptation, "Baseline controller (overrides config)")
        ->check(CLI::IsMember({"csa", "ide", "jde", "policy", "fixed"}));
    compare->add_option("--checkpoint", checkpoint, "Baseline checkpoint when --adaptation policy");
    compare->add_option("--seed", seed, "Override the protocol seed base");
    compare->add_option("--out", out_dir, "Output root");
    compare->add_option("--jobs", jobs, "Worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed())
            return rlea::cmd_list_functions(std::cout);

        rlea::ExperimentConfig config = load_config(config_path);
        const std::string root = out_dir.empty() ? config.output : out_dir;

        if (train->parsed()) {
            if (seed)
                config.seed = *seed;
            if (jobs > 0)
                omp_set_num_threads(jobs);
            return rlea::cmd_train(config, {root}, std::cerr);
        }
        if (evaluate->parsed()) {
            if (seed)
                config.protocol.seed_base = *seed;
            rlea::EvaluateOptions options{root, adaptation, checkpoint, std::nullopt, jobs};
            if (!function.empty())
                options.function = rlea::parse_function_id(function);
            return rlea::cmd_evaluate(config, options, std::cerr);
        }
        if (compare->parsed()) {
            if (seed)
                config.protocol.seed_base = *seed;
            if (compare->count("--adaptation") > 0)
                config.compare.baseline = {adaptation, adaptation, checkpoint, {}};
            const auto m = metric.empty() ? config.compare.metric : rlea::parse_metric(metric);
            return rlea::cmd_compare(config, {root, m, jobs}, std::cerr);
        }
    } catch (const rlea::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return rlea::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return rlea::kExitFailure;
    }
    return rlea::kExitFailure;
}
