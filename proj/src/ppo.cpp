#include <rlea/ppo.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rlea {

std::string to_string(OptimizerKind kind) { return kind == OptimizerKind::Adam ? "adam" : "sgd"; }

OptimizerKind parse_optimizer(const std::string& text) {
    if (text == "adam")
        return OptimizerKind::Adam;
    if (text == "sgd")
        return OptimizerKind::Sgd;
    throw std::invalid_argument("unknown optimizer '" + text + "'");
}

void PpoConfig::validate() const {
    if (actors != 1)
        throw std::invalid_argument("only a single actor is supported");
    if (horizon == 0 || minibatch == 0 || sgd_epochs == 0)
        throw std::invalid_argument("horizon, minibatch and epochs must be positive");
    if (minibatch > actors * horizon)
        throw std::invalid_argument("minibatch must not exceed actors x horizon");
    if (!(clip > 0.0) || !(learning_rate > 0.0) || !(gamma > 0.0 && gamma <= 1.0) || !(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("clip, learning rate, gamma and lambda must be positive (gamma, lambda <= 1)");
    if (value_coeff < 0.0 || entropy_coeff < 0.0)
        throw std::invalid_argument("loss coefficients must be non-negative");
    if (hidden.empty())
        throw std::invalid_argument("at least one hidden layer is required");
}

void RolloutBuffer::clear() {
    observations.clear();
    actions.clear();
    log_probs.clear();
    rewards.clear();
    values.clear();
    dones.clear();
    bootstrap_value = 0.0;
}

Advantages compute_gae(const std::vector<double>& rewards, const std::vector<double>& values,
                       const std::vector<bool>& dones, double bootstrap_value, double gamma, double lambda) {
    const std::size_t n = rewards.size();
    if (values.size() != n || dones.size() != n)
        throw std::invalid_argument("compute_gae: rewards, values and dones differ in length");
    Advantages out;
    out.advantages.assign(n, 0.0);
    out.returns.assign(n, 0.0);
    double next_value = bootstrap_value;
    double running = 0.0;
    for (std::size_t t = n; t-- > 0;) {
        if (dones[t]) {
            next_value = 0.0;
            running = 0.0;
        }
        const double delta = rewards[t] + gamma * next_value - values[t];
        running = delta + gamma * lambda * running;
        out.advantages[t] = running;
        out.returns[t] = running + values[t];
        next_value = values[t];
    }
    return out;
}

void normalize_advantages(std::vector<double>& advantages) {
    if (advantages.empty())
        return;
    const double n = static_cast<double>(advantages.size());
    const double mean = std::accumulate(advantages.begin(), advantages.end(), 0.0) / n;
    double var = 0.0;
    for (double a : advantages)
        var += (a - mean) * (a - mean);
    var /= n;
    const double sd = std::sqrt(var);
    const double scale = sd > 0.0 ? 1.0 / sd : 1.0;
    for (double& a : advantages)
        a = (a - mean) * scale;
}

double clipped_surrogate(double ratio, double advantage, double eps) {
    const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps);
    return std::min(ratio * advantage, clipped * advantage);
}

LossTerms ppo_loss(const Batch& batch, const PolicyNet& policy, const Mlp& value_net, const PpoConfig& config) {
    const std::size_t n = batch.size();
    if (n == 0)
        throw std::invalid_argument("ppo_loss: empty batch");
    const double inv_n = 1.0 / static_cast<double>(n);
    const auto act_dim = policy.log_std.size();

    Mlp::Tape policy_tape;
    const Matrix mean = policy.mean_net.forward(batch.observations, policy_tape);
    const Vector inv_var = (-2.0 * policy.log_std).array().exp();

    LossTerms out;
    Matrix mean_grad(act_dim, static_cast<Eigen::Index>(n));
    Vector log_std_grad = Vector::Zero(act_dim);
    double surrogate_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        const Vector action = batch.actions.col(col);
        const Vector mu = mean.col(col);
        const double log_prob = gaussian_log_prob(action, mu, policy.log_std);
        const double ratio = std::exp(log_prob - batch.old_log_probs[col]);
        const double adv = batch.advantages[col];
        const double clipped = std::clamp(ratio, 1.0 - config.clip, 1.0 + config.clip);
        const bool unclipped_active = ratio * adv <= clipped * adv;
        surrogate_sum += std::min(ratio * adv, clipped * adv);

        // d(-surrogate_i / n)/d log_prob
        const double coeff = unclipped_active ? -adv * ratio * inv_n : 0.0;
        const Vector diff = action - mu;
        mean_grad.col(col) = coeff * diff.cwiseProduct(inv_var);
        log_std_grad += coeff * (diff.cwiseAbs2().cwiseProduct(inv_var).array() - 1.0).matrix();
    }
    out.policy_loss = -surrogate_sum * inv_n;
    out.entropy = gaussian_entropy(policy.log_std);
    log_std_grad.array() -= config.entropy_coeff;

    Mlp::Tape value_tape;
    const Matrix values = value_net.forward(batch.observations, value_tape);
    const Eigen::RowVectorXd residual = values.row(0) - batch.returns.transpose();
    out.value_loss = residual.squaredNorm() * inv_n;
    const Matrix value_out_grad = (2.0 * config.value_coeff * inv_n) * residual;

    out.total = out.policy_loss + config.value_coeff * out.value_loss - config.entropy_coeff * out.entropy;
    out.policy_grad.resize(static_cast<Eigen::Index>(policy.parameter_count()));
    out.policy_grad << policy.mean_net.backward(policy_tape, mean_grad), log_std_grad;
    out.value_grad = value_net.backward(value_tape, value_out_grad);
    return out;
}

std::size_t planned_iterations(std::size_t episodes, std::size_t episode_length, std::size_t horizon) {
    return episodes * episode_length / horizon;
}

namespace {

class Optimizer {
public:
    Optimizer(OptimizerKind kind, double lr, std::size_t n)
        : kind_(kind), lr_(lr), m_(Vector::Zero(static_cast<Eigen::Index>(n))), v_(m_) {}

    void step(Vector& params, const Vector& grad) {
        if (kind_ == OptimizerKind::Sgd) {
            params -= lr_ * grad;
            return;
        }
        constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
        ++t_;
        m_ = beta1 * m_ + (1.0 - beta1) * grad;
        v_ = beta2 * v_ + (1.0 - beta2) * grad.cwiseAbs2();
        const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t_));
        params.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps);
    }

private:
    OptimizerKind kind_;
    double lr_;
    Vector m_, v_;
    std::size_t t_ = 0;
};

void clip_norm(Vector& grad, double max_norm) {
    if (max_norm <= 0.0)
        return;
    const double norm = grad.norm();
    if (norm > max_norm)
        grad *= max_norm / norm;
}

Batch gather(const RolloutBuffer& buffer, const Advantages& adv, const std::vector<std::size_t>& idx) {
    const auto n = static_cast<Eigen::Index>(idx.size());
    Batch b;
    b.observations.resize(buffer.observations.front().size(), n);
    b.actions.resize(buffer.actions.front().size(), n);
    b.old_log_probs.resize(n);
    b.advantages.resize(n);
    b.returns.resize(n);
    for (Eigen::Index c = 0; c < n; ++c) {
        const auto t = idx[static_cast<std::size_t>(c)];
        b.observations.col(c) = buffer.observations[t];
        b.actions.col(c) = buffer.actions[t];
        b.old_log_probs[c] = buffer.log_probs[t];
        b.advantages[c] = adv.advantages[t];
        b.returns[c] = adv.returns[t];
    }
    return b;
}

} // namespace

TrainResult train(Environment& env, const PpoConfig& config, std::size_t episode_budget, std::uint64_t seed,
                  const TrainCallbacks& callbacks) {
    config.validate();
    const std::size_t length = env.episode_length();
    if (length > 0 && episode_budget * length < config.horizon)
        throw std::invalid_argument("episode budget too small to fill one horizon");

    Rng init_rng = make_rng(seed, 0);
    Rng rollout_rng = make_rng(seed, 1);
    Rng shuffle_rng = make_rng(seed, 2);

    const auto& spec = env.action_spec();
    TrainResult result;
    result.policy = PolicyNet::make(env.observation_dim(), config.hidden, spec.dimension(), config.activation, init_rng);
    std::vector<std::size_t> value_sizes{env.observation_dim()};
    value_sizes.insert(value_sizes.end(), config.hidden.begin(), config.hidden.end());
    value_sizes.push_back(1);
    result.value_net = Mlp(value_sizes, config.activation);
    result.value_net.initialize(init_rng, 1.0, 0.01);

    Optimizer policy_opt(config.optimizer, config.learning_rate, result.policy.parameter_count());
    Optimizer value_opt(config.optimizer, config.learning_rate, result.value_net.parameter_count());

    RolloutBuffer buffer;
    Vector obs;
    bool need_reset = true;
    std::size_t episodes_started = 0;
    double episode_return = 0.0;
    double last_mean_return = 0.0;

    std::size_t steps_in_episode = 0;
    for (std::size_t iteration = 1;; ++iteration) {
        if (length > 0) {
            const std::size_t carried = need_reset ? 0 : length - steps_in_episode;
            if ((episode_budget - episodes_started) * length + carried < config.horizon)
                break;
        }
        buffer.clear();
        double return_sum = 0.0;
        std::size_t returns_seen = 0;
        bool exhausted = false;

        while (buffer.size() < config.horizon) {
            if (need_reset) {
                if (episodes_started == episode_budget) {
                    exhausted = true;
                    break;
                }
                obs = env.reset(rollout_rng);
                ++episodes_started;
                episode_return = 0.0;
                steps_in_episode = 0;
                need_reset = false;
            }
            const PolicyOutput out = forward(result.policy, obs);
            const Action action = sample_action(out.mean, out.log_std, spec, rollout_rng, true);
            const double value = result.value_net.forward(obs)[0];
            Environment::Step step = env.step(action.values, rollout_rng);

            buffer.observations.push_back(obs);
            buffer.actions.push_back(action.raw);
            buffer.log_probs.push_back(action.log_prob);
            buffer.rewards.push_back(step.reward);
            buffer.values.push_back(value);
            buffer.dones.push_back(step.done);
            episode_return += step.reward;
            ++steps_in_episode;
            obs = std::move(step.observation);

            if (step.done) {
                ++result.episodes_done;
                return_sum += episode_return;
                ++returns_seen;
                if (callbacks.on_episode)
                    callbacks.on_episode(result.episodes_done, episode_return);
                need_reset = true;
            }
        }
        if (exhausted)
            break;

        buffer.bootstrap_value = need_reset ? 0.0 : result.value_net.forward(obs)[0];
        Advantages adv = compute_gae(buffer.rewards, buffer.values, buffer.dones, buffer.bootstrap_value, config.gamma,
                                     config.lambda);
        normalize_advantages(adv.advantages);

        if (config.inject_nan_iteration == iteration)
            result.policy.mean_net.parameters()[0] = std::numeric_limits<double>::quiet_NaN();

        std::vector<std::size_t> order(buffer.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        IterationStats stats;
        stats.iteration = iteration;
        std::size_t last_epoch_batches = 0;
        for (std::size_t epoch = 0; epoch < config.sgd_epochs; ++epoch) {
            for (std::size_t i = order.size(); i > 1; --i)
                std::swap(order[i - 1], order[uniform_index(shuffle_rng, i)]);
            const bool last_epoch = epoch + 1 == config.sgd_epochs;
            for (std::size_t start = 0; start < order.size(); start += config.minibatch) {
                const std::size_t stop = std::min(order.size(), start + config.minibatch);
                const std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(start),
                                                   order.begin() + static_cast<std::ptrdiff_t>(stop));
                LossTerms loss = ppo_loss(gather(buffer, adv, idx), result.policy, result.value_net, config);
                if (!std::isfinite(loss.total) || !loss.policy_grad.allFinite() || !loss.value_grad.allFinite())
                    throw TrainingInstability("non-finite PPO loss at iteration " + std::to_string(iteration));
                clip_norm(loss.policy_grad, config.grad_clip);
                clip_norm(loss.value_grad, config.grad_clip);

                Vector theta = result.policy.flat_parameters();
                policy_opt.step(theta, loss.policy_grad);
                result.policy.set_flat_parameters(theta);
                value_opt.step(result.value_net.parameters(), loss.value_grad);
                if (!result.policy.finite() || !result.value_net.parameters().allFinite())
                    throw TrainingInstability("non-finite weights at iteration " + std::to_string(iteration));

                if (last_epoch) {
                    stats.policy_loss += loss.policy_loss;
                    stats.value_loss += loss.value_loss;
                    stats.entropy += loss.entropy;
                    ++last_epoch_batches;
                }
            }
        }
        const double nb = static_cast<double>(std::max<std::size_t>(last_epoch_batches, 1));
        stats.policy_loss /= nb;
        stats.value_loss /= nb;
        stats.entropy /= nb;
        stats.episodes_done = result.episodes_done;
        if (returns_seen > 0)
            last_mean_return = return_sum / static_cast<double>(returns_seen);
        stats.mean_return = last_mean_return;
        result.log.push_back(stats);
        if (callbacks.on_iteration)
            callbacks.on_iteration(stats, result.policy);
    }
    return result;
}

} // namespace rlea
