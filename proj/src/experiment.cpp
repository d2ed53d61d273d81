#include <rlea/experiment.hpp>

#include <omp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace rlea {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> action_names(const std::string& adaptation, const EpisodeConfig& episode) {
    if (adaptation == "policy")
        return ActionSpec::make(episode.action).names;
    if (episode.algorithm == Algorithm::CMAES)
        return {"sigma"};
    if (adaptation == "ide")
        return {"F_mean", "CR_mean"};
    return {"F", "CR"};
}

void set_jobs(int jobs) {
    if (jobs > 0)
        omp_set_num_threads(jobs);
}

struct LoadedVariant {
    VariantSpec spec;
    ExperimentConfig config;
    std::unique_ptr<Controller> controller;
};

LoadedVariant load_variant(const VariantSpec& spec, const ExperimentConfig& base) {
    LoadedVariant v{spec, base, nullptr};
    std::optional<Checkpoint> checkpoint;
    if (spec.adaptation == "policy") {
        if (spec.checkpoint.empty())
            throw ConfigError("variant " + spec.name + " uses a policy but names no checkpoint");
        checkpoint = Checkpoint::load(spec.checkpoint);
        v.config.episode.algorithm = checkpoint->algorithm;
        v.config.episode.action = checkpoint->action;
        v.config.episode.observation = checkpoint->observation;
    }
    v.controller = make_controller(spec.adaptation, v.config, checkpoint);
    return v;
}

bool evaluates(const VariantSpec& spec, const FunctionId& id) {
    if (spec.functions.empty())
        return true;
    for (const auto& f : spec.functions)
        if (f == id)
            return true;
    return false;
}

} // namespace

std::unique_ptr<Controller> make_controller(const std::string& adaptation, const ExperimentConfig& config,
                                            const std::optional<Checkpoint>& checkpoint) {
    const bool de = config.episode.algorithm == Algorithm::DE;
    if (adaptation == "policy") {
        if (!checkpoint)
            throw ConfigError("policy adaptation needs a checkpoint");
        return std::make_unique<PolicyController>(std::make_shared<const PolicyNet>(checkpoint->policy),
                                                  checkpoint->action, false);
    }
    if (adaptation == "fixed") {
        if (de)
            return std::make_unique<FixedDeController>(config.fixed.F, config.fixed.CR);
        return std::make_unique<FixedSigmaController>(config.fixed.sigma);
    }
    if (adaptation == "csa") {
        if (de)
            throw ConfigError("csa adapts CMA-ES only");
        return std::make_unique<CsaController>();
    }
    if (adaptation == "ide" || adaptation == "jde") {
        if (!de)
            throw ConfigError(adaptation + " adapts DE only");
        if (adaptation == "ide")
            return std::make_unique<IdeController>();
        return std::make_unique<JdeController>();
    }
    throw ConfigError("unknown adaptation '" + adaptation + "'");
}

std::string trace_csv(const RunTrace& trace, const std::vector<std::string>& names) {
    std::ostringstream out;
    out << "generation,best_fitness,reward";
    for (const auto& n : names)
        out << ',' << n;
    out << '\n';
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const auto& g = trace[k];
        out << k << ',' << num(g.best_fitness) << ',' << num(g.reward);
        for (std::size_t i = 0; i < names.size(); ++i) {
            out << ',';
            if (i < g.action.size())
                out << num(g.action[i]);
        }
        out << '\n';
    }
    return out.str();
}

std::string metrics_csv(const ProtocolResult& result) {
    std::ostringstream out;
    out << "run,seed,auc,best_of_run\n";
    for (std::size_t r = 0; r < result.metrics.size(); ++r) {
        const auto& m = result.metrics[r];
        out << r << ',' << m.seed << ',' << num(m.auc) << ',' << num(m.best_of_run) << '\n';
    }
    return out.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
}

int cmd_list_functions(std::ostream& out) {
    for (const auto& id : registry_list())
        out << id.name << ',' << id.dimension << '\n';
    return kExitOk;
}

int cmd_train(const ExperimentConfig& config, const TrainOptions& options, std::ostream& log) {
    try {
        config.validate();
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }
    const fs::path dir = options.out_dir / config.name;
    fs::create_directories(dir / "checkpoints");
    config.save(dir / "config.json");

    const auto functions = config.training_functions();
    std::ofstream attempts(dir / "train_attempts.csv");
    attempts << "attempt,seed,status,iterations\n";

    const std::size_t max_attempts = std::max<std::size_t>(config.training.retries, 1);
    for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
        const std::uint64_t seed = config.seed + attempt - 1;
        PpoConfig ppo = config.ppo;
        if (attempt <= config.training.inject_nan_attempts)
            ppo.inject_nan_iteration = 1;

        EvolutionEnvironment env(config.episode, functions);
        std::ofstream train_log(dir / "train_log.csv");
        train_log << "iteration,episodes_done,mean_return,policy_loss,value_loss,entropy\n";
        std::ofstream episodes(dir / "episodes.csv");
        episodes << "episode,function,dimension,return\n";

        TrainCallbacks callbacks;
        callbacks.on_episode = [&](std::size_t episode, double ret) {
            const FunctionId& id = env.visited().at(episode - 1);
            episodes << episode << ',' << id.name << ',' << id.dimension << ',' << num(ret) << '\n';
        };
        std::size_t iterations = 0;
        callbacks.on_iteration = [&](const IterationStats& s, const PolicyNet& policy) {
            iterations = s.iteration;
            train_log << s.iteration << ',' << s.episodes_done << ',' << num(s.mean_return) << ','
                      << num(s.policy_loss) << ',' << num(s.value_loss) << ',' << num(s.entropy) << '\n';
            train_log.flush();
            log << "attempt " << attempt << " iteration " << s.iteration << " episodes " << s.episodes_done
                << " mean_return " << s.mean_return << '\n';
            if (config.training.checkpoint_every > 0 && s.iteration % config.training.checkpoint_every == 0) {
                char name[32];
                std::snprintf(name, sizeof name, "iter_%04zu.json", s.iteration);
                Checkpoint{policy, config.episode.algorithm, config.episode.action, config.episode.observation}.save(
                    dir / "checkpoints" / name);
            }
        };

        try {
            TrainResult result = train(env, ppo, config.training.episodes, seed, callbacks);
            Checkpoint{result.policy, config.episode.algorithm, config.episode.action, config.episode.observation}.save(
                dir / "checkpoint.json");
            attempts << attempt << ',' << seed << ",ok," << iterations << '\n';
            log << "training finished after " << result.log.size() << " iterations\n";
            return kExitOk;
        } catch (const TrainingInstability& e) {
            attempts << attempt << ',' << seed << ",unstable," << iterations << '\n';
            attempts.flush();
            log << "attempt " << attempt << " unstable: " << e.what() << '\n';
            train_log.close();
            episodes.close();
            fs::rename(dir / "train_log.csv", dir / ("train_log.attempt" + std::to_string(attempt) + ".csv"));
        } catch (const std::invalid_argument& e) {
            attempts << attempt << ',' << seed << ",budget_error,0\n";
            log << "budget error: " << e.what() << '\n';
            return kExitBudgetError;
        }
    }
    log << "training unstable after " << max_attempts << " attempts\n";
    return kExitUnstable;
}

int cmd_evaluate(const ExperimentConfig& config, const EvaluateOptions& options, std::ostream& log) {
    std::unique_ptr<Controller> controller;
    FunctionId id = options.function.value_or(config.training.function);
    try {
        config.validate();
        (void)find_function(id);
        std::optional<Checkpoint> checkpoint;
        if (options.adaptation == "policy") {
            const fs::path path = options.checkpoint.empty() ? fs::path(config.checkpoint) : options.checkpoint;
            if (path.empty())
                throw ConfigError("evaluate with a policy needs --checkpoint");
            checkpoint = Checkpoint::load(path);
            checkpoint->check_compatible(config.episode);
        }
        controller = make_controller(options.adaptation, config, checkpoint);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitConfigError;
    }

    set_jobs(options.jobs);
    const BenchmarkFunction& fn = find_function(id);
    const ProtocolResult result =
        run_test_protocol(config.episode, *controller, fn, {config.protocol.runs, config.protocol.seed_base, true});

    const std::string experiment = options.adaptation == "policy" ? config.name : config.name + "_" + options.adaptation;
    const fs::path dir = options.out_dir / experiment / fn.id().label();
    fs::create_directories(dir);
    const auto names = action_names(options.adaptation, config.episode);
    for (std::size_t r = 0; r < result.runs.size(); ++r)
        write_text(dir / ("run_" + std::to_string(result.metrics[r].seed) + ".csv"), trace_csv(result.runs[r].trace, names));
    write_text(dir / "metrics.csv", metrics_csv(result));
    log << "wrote " << (dir / "metrics.csv").string() << '\n';
    return kExitOk;
}

int cmd_compare(const ExperimentConfig& config, const CompareOptions& options, std::ostream& log) {
    std::vector<LoadedVariant> variants;
    std::optional<LoadedVariant> baseline;
    std::vector<FunctionId> columns;
    try {
        config.validate();
        if (config.compare.variants.empty())
            throw ConfigError("compare needs at least one variant");
        for (const auto& v : config.compare.variants)
            variants.push_back(load_variant(v, config));
        baseline = load_variant(config.compare.baseline, config);
        columns = config.compare_functions();
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitConfigError;
    }
    set_jobs(options.jobs);

    const ProtocolOptions protocol{config.protocol.runs, config.protocol.seed_base, false};
    auto samples_for = [&](const LoadedVariant& v) {
        VariantSamples s{v.spec.name, {}};
        for (const auto& id : columns) {
            if (!evaluates(v.spec, id)) {
                s.samples.emplace_back();
                continue;
            }
            const auto result = run_test_protocol(v.config.episode, *v.controller, find_function(id), protocol);
            s.samples.push_back(result.values(options.metric));
        }
        log << "evaluated " << v.spec.name << '\n';
        return s;
    };

    const VariantSamples opponent = samples_for(*baseline);
    std::vector<VariantSamples> rows;
    for (const auto& v : variants)
        rows.push_back(samples_for(v));

    std::vector<std::string> labels;
    for (const auto& id : columns)
        labels.push_back(id.label());
    const ComparisonMatrix matrix = build_comparison(rows, opponent, labels, options.metric);

    const fs::path dir = options.out_dir / config.name;
    fs::create_directories(dir);
    const std::string stem = "comparison_" + to_string(options.metric);
    write_text(dir / (stem + ".csv"), matrix.to_csv());
    write_text(dir / (stem + ".json"), matrix.to_json());
    log << "wrote " << (dir / (stem + ".csv")).string() << '\n';
    return kExitOk;
}

} // namespace rlea
