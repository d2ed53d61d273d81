#pragma once

#include <rlea/checkpoint.hpp>
#include <rlea/config.hpp>
#include <rlea/protocol.hpp>

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

namespace rlea {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfigError = 2,
    kExitUnstable = 3,
    kExitBudgetError = 4,
};

/// Controller for an adaptation name (csa, ide, jde, fixed, policy) on the configured algorithm.
/// `policy` needs a loaded checkpoint. Throws ConfigError on combinations that make no sense.
std::unique_ptr<Controller> make_controller(const std::string& adaptation, const ExperimentConfig& config,
                                            const std::optional<Checkpoint>& checkpoint);

/// Trace of one run as CSV: generation, best_fitness, reward, one column per action component.
std::string trace_csv(const RunTrace& trace, const std::vector<std::string>& action_names);
/// Per-run metrics as CSV: run, seed, auc, best_of_run.
std::string metrics_csv(const ProtocolResult& result);

void write_text(const std::filesystem::path& path, const std::string& text);

int cmd_list_functions(std::ostream& out);

struct TrainOptions {
    std::filesystem::path out_dir; // experiment directory is out_dir / config.name
};

/// PPO training with retry on instability. Writes config.json, train_log.csv,
/// episodes.csv, train_attempts.csv, checkpoint.json and periodic checkpoints.
int cmd_train(const ExperimentConfig& config, const TrainOptions& options, std::ostream& log);

struct EvaluateOptions {
    std::filesystem::path out_dir;
    std::string adaptation = "policy";
    std::filesystem::path checkpoint;
    std::optional<FunctionId> function;
    int jobs = 0;
};

/// 50-run test protocol for a checkpoint or a baseline. Writes metrics.csv and one trace per run.
int cmd_evaluate(const ExperimentConfig& config, const EvaluateOptions& options, std::ostream& log);

struct CompareOptions {
    std::filesystem::path out_dir;
    Metric metric = Metric::Auc;
    int jobs = 0;
};

/// Win-probability matrix of every configured variant against the configured baseline.
int cmd_compare(const ExperimentConfig& config, const CompareOptions& options, std::ostream& log);

} // namespace rlea
