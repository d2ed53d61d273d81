#pragma once

#include <rlea/policy.hpp>
#include <rlea/rng.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlea {

enum class OptimizerKind { Sgd, Adam };
std::string to_string(OptimizerKind kind);
OptimizerKind parse_optimizer(const std::string& text);

struct PpoConfig {
    std::size_t actors = 1;
    std::size_t sgd_epochs = 200;
    std::size_t horizon = 4000;
    std::size_t minibatch = 128;
    double clip = 0.3;
    double gamma = 0.99;
    double lambda = 1.0;
    double learning_rate = 5e-5;
    double value_coeff = 1.0;
    double entropy_coeff = 0.0;
    /// Global-norm clip applied to each network's gradient; <= 0 disables.
    double grad_clip = 40.0;
    OptimizerKind optimizer = OptimizerKind::Adam;
    std::vector<std::size_t> hidden{50, 50};
    Activation activation = Activation::Relu;
    /// Test hook: poison the policy weights at this iteration (1-based, 0 = never).
    std::size_t inject_nan_iteration = 0;

    /// Throws std::invalid_argument on inconsistent settings.
    void validate() const;
    bool operator==(const PpoConfig&) const = default;
};

/// Episodic environment seen by the trainer. Actions arrive as parameter values.
class Environment {
public:
    struct Step {
        Vector observation;
        double reward = 0.0;
        bool done = false;
    };

    virtual ~Environment() = default;
    virtual std::size_t observation_dim() const = 0;
    virtual const ActionSpec& action_spec() const = 0;
    /// Steps per episode when fixed, 0 otherwise.
    virtual std::size_t episode_length() const { return 0; }
    virtual Vector reset(Rng& rng) = 0;
    virtual Step step(const std::vector<double>& action_values, Rng& rng) = 0;
};

/// T transitions collected with the frozen policy.
struct RolloutBuffer {
    std::vector<Vector> observations;
    std::vector<Vector> actions; // raw network-space draws
    std::vector<double> log_probs;
    std::vector<double> rewards;
    std::vector<double> values;
    /// dones[t]: the episode terminated after step t.
    std::vector<bool> dones;
    /// V(s_T) for an episode still running when the buffer filled (0 if it just ended).
    double bootstrap_value = 0.0;

    std::size_t size() const { return rewards.size(); }
    void clear();
};

struct Advantages {
    std::vector<double> advantages;
    std::vector<double> returns;
};

/// GAE over delta_t = r_t + gamma V(s_{t+1}) - V(s_t), reset at episode ends.
/// returns = advantages + values. Advantages are not normalized here.
Advantages compute_gae(const std::vector<double>& rewards, const std::vector<double>& values,
                       const std::vector<bool>& dones, double bootstrap_value, double gamma, double lambda);

/// Shifts and scales to zero mean, unit variance (population variance).
void normalize_advantages(std::vector<double>& advantages);

/// min(r A, clip(r, 1 - eps, 1 + eps) A).
double clipped_surrogate(double ratio, double advantage, double eps);

struct Batch {
    Matrix observations; // columns
    Matrix actions;      // columns, raw network-space draws
    Vector old_log_probs;
    Vector advantages;
    Vector returns;

    std::size_t size() const { return static_cast<std::size_t>(observations.cols()); }
};

struct LossTerms {
    double total = 0.0;
    /// -mean clipped surrogate.
    double policy_loss = 0.0;
    /// mean (V - R)^2.
    double value_loss = 0.0;
    double entropy = 0.0;
    Vector policy_grad; // d total / d policy flat parameters
    Vector value_grad;  // d total / d value parameters
};

/// total = policy_loss + value_coeff * value_loss - entropy_coeff * entropy, with gradients.
LossTerms ppo_loss(const Batch& batch, const PolicyNet& policy, const Mlp& value_net, const PpoConfig& config);

/// Weights went non-finite during optimization.
class TrainingInstability : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IterationStats {
    std::size_t iteration = 0;
    std::size_t episodes_done = 0;
    double mean_return = 0.0;
    double policy_loss = 0.0;
    double value_loss = 0.0;
    double entropy = 0.0;
};

struct TrainResult {
    PolicyNet policy;
    Mlp value_net;
    std::vector<IterationStats> log;
    std::size_t episodes_done = 0;
};

struct TrainCallbacks {
    std::function<void(const IterationStats&, const PolicyNet&)> on_iteration;
    std::function<void(std::size_t episode, double episode_return)> on_episode;
};

/// Number of optimization rounds a budget allows: floor(episodes * length / horizon).
std::size_t planned_iterations(std::size_t episodes, std::size_t episode_length, std::size_t horizon);

/// Collect T steps, run K epochs of minibatch updates, repeat until the episode
/// budget cannot fill another horizon. Throws TrainingInstability on NaN.
TrainResult train(Environment& env, const PpoConfig& config, std::size_t episode_budget, std::uint64_t seed,
                  const TrainCallbacks& callbacks = {});

} // namespace rlea
