#pragma once

#include <rlea/observe.hpp>
#include <rlea/ppo.hpp>

#include <algorithm>
#include <cmath>

namespace rlea::testing {

/// One-step episodes, constant observation, reward 1 - |a - 0.7| with a in [-1, 1].
class BanditEnvironment : public Environment {
public:
    BanditEnvironment() {
        spec_.kind = ActionKind::DeDirect;
        spec_.lower = Vector::Constant(1, -1.0);
        spec_.upper = Vector::Constant(1, 1.0);
        spec_.names = {"a"};
    }
    std::size_t observation_dim() const override { return 1; }
    const ActionSpec& action_spec() const override { return spec_; }
    std::size_t episode_length() const override { return 1; }
    Vector reset(Rng&) override { return Vector::Ones(1); }
    Step step(const std::vector<double>& a, Rng&) override { return {Vector::Ones(1), 1.0 - std::abs(a[0] - 0.7), true}; }

private:
    ActionSpec spec_;
};

inline PpoConfig bandit_config() {
    PpoConfig c;
    c.horizon = 500;
    c.minibatch = 100;
    c.sgd_epochs = 5;
    c.learning_rate = 3e-3;
    c.hidden = {16};
    c.activation = Activation::Tanh;
    return c;
}

/// Policy mean (parameter units) after training on the bandit.
inline double bandit_policy_mean(const TrainResult& r) { return forward(r.policy, Vector::Ones(1)).mean(0); }

struct GradientCheck {
    double policy_error = 0.0;
    double value_error = 0.0;
    std::size_t weights = 0;
};

inline double relative_error(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

/// Fourth-order central difference of f at 0.
template <class F>
double central_difference(F&& f, double h = 1e-4) {
    return (f(-2 * h) - 8 * f(-h) + 8 * f(h) - f(2 * h)) / (12 * h);
}

/// Compares ppo_loss gradients with central differences on a random toy problem.
/// Ratios are kept away from the clip edges and ReLU units away from their kink so
/// the loss is smooth inside the difference stencil.
inline GradientCheck ppo_gradient_check(std::uint64_t seed) {
    Rng rng = make_rng(seed, 77);
    const std::size_t in = 1 + uniform_index(rng, 3);
    const std::size_t hidden = 1 + uniform_index(rng, 4);
    const std::size_t out = 1 + uniform_index(rng, 2);
    const auto act = uniform01(rng) < 0.5 ? Activation::Tanh : Activation::Relu;
    const std::size_t n = 2 + uniform_index(rng, 6);

    PpoConfig config;
    config.clip = uniform(rng, 0.1, 0.4);
    config.value_coeff = uniform(rng, 0.5, 2.0);
    config.entropy_coeff = uniform01(rng) < 0.5 ? 0.0 : uniform(rng, 0.0, 0.1);

    PolicyNet policy;
    Mlp value_net;
    Batch batch;
    for (int attempt = 0;; ++attempt) {
        policy = PolicyNet::make(in, {hidden}, out, act, rng);
        for (auto& w : policy.mean_net.parameters())
            w = normal(rng);
        for (auto& s : policy.log_std)
            s = uniform(rng, -0.5, 0.5);
        value_net = Mlp({in, hidden, 1}, act);
        for (auto& w : value_net.parameters())
            w = normal(rng);

        batch.observations.resize(static_cast<Eigen::Index>(in), static_cast<Eigen::Index>(n));
        for (auto& v : batch.observations.reshaped())
            v = normal(rng);
        const Matrix mean = policy.mean_net.forward(batch.observations);
        batch.actions = mean;
        for (auto& v : batch.actions.reshaped())
            v += normal(rng);
        batch.old_log_probs.resize(static_cast<Eigen::Index>(n));
        batch.advantages.resize(static_cast<Eigen::Index>(n));
        batch.returns.resize(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
            // Ratios spread over both branches of the clip, never within 0.02 of an edge.
            const double choices[] = {1.0 - config.clip - 0.1, 1.0 - config.clip / 2, 1.0 + config.clip / 2,
                                      1.0 + config.clip + 0.1};
            const double ratio = choices[uniform_index(rng, 4)];
            const double logp = gaussian_log_prob(batch.actions.col(i), mean.col(i), policy.log_std);
            batch.old_log_probs(i) = logp - std::log(ratio);
            batch.advantages(i) = normal(rng);
            batch.returns(i) = normal(rng);
        }
        if (act == Activation::Tanh)
            break;
        const Matrix pre_p = (policy.mean_net.weight(0) * batch.observations).colwise() + Vector(policy.mean_net.bias(0));
        const Matrix pre_v = (value_net.weight(0) * batch.observations).colwise() + Vector(value_net.bias(0));
        if (pre_p.cwiseAbs().minCoeff() > 1e-2 && pre_v.cwiseAbs().minCoeff() > 1e-2)
            break;
    }

    const LossTerms base = ppo_loss(batch, policy, value_net, config);
    GradientCheck result;
    const Vector theta = policy.flat_parameters();
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        const double fd = central_difference([&](double step) {
            PolicyNet p = policy;
            Vector t = theta;
            t(i) += step;
            p.set_flat_parameters(t);
            return ppo_loss(batch, p, value_net, config).total;
        });
        result.policy_error = std::max(result.policy_error, relative_error(base.policy_grad(i), fd));
    }
    for (Eigen::Index i = 0; i < value_net.parameters().size(); ++i) {
        const double fd = central_difference([&](double step) {
            Mlp v = value_net;
            v.parameters()(i) += step;
            return ppo_loss(batch, policy, v, config).total;
        });
        result.value_error = std::max(result.value_error, relative_error(base.value_grad(i), fd));
    }
    result.weights = policy.parameter_count() + value_net.parameter_count();
    return result;
}

// Random trace built from random populations, with fitness magnitudes spread over many decades.
inline RunTrace random_trace(Rng& rng, std::size_t generations, std::size_t dim) {
    RunTrace trace;
    const double scale = std::pow(10.0, uniform(rng, -8.0, 8.0));
    for (std::size_t k = 0; k < generations; ++k) {
        std::vector<Vector> xs;
        std::vector<double> fs;
        for (int i = 0; i < 6; ++i) {
            Vector x(dim);
            for (auto& v : x)
                v = uniform(rng, -5.0, 5.0);
            xs.push_back(x);
            fs.push_back(scale * uniform(rng, -1.0, 1.0));
        }
        trace.generations.push_back(summarize_population(xs, fs));
    }
    return trace;
}

} // namespace rlea::testing
