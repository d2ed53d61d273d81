#include "fixtures.hpp"

#include <doctest.h>

#include <numeric>

using namespace rlea;
using namespace rlea::testing;

TEST_CASE("gae with gamma = lambda = 1 and zero values is the return-to-go") {
    const std::vector<double> r{1.0, 2.0, 3.0, 4.0, 5.0};
    const std::vector<bool> done{false, false, true, false, true};
    const auto a = compute_gae(r, std::vector<double>(5, 0.0), done, 0.0, 1.0, 1.0);
    CHECK(a.advantages == std::vector<double>{6.0, 5.0, 3.0, 9.0, 5.0});
    CHECK(a.returns == a.advantages);
}

TEST_CASE("gae single step and zero cases") {
    const auto a = compute_gae({2.0}, {0.5}, {true}, 123.0, 0.99, 0.95);
    CHECK(a.advantages[0] == 1.5);
    CHECK(a.returns[0] == 2.0);
    const auto z = compute_gae(std::vector<double>(4, 0.0), std::vector<double>(4, 0.0), {false, true, false, true},
                               0.0, 0.99, 1.0);
    for (double v : z.advantages)
        CHECK(v == 0.0);
}

TEST_CASE("gae matches a direct sum of discounted td errors") {
    Rng rng = make_rng(1);
    const std::size_t n = 30;
    std::vector<double> r(n), v(n);
    std::vector<bool> done(n, false);
    for (std::size_t t = 0; t < n; ++t) {
        r[t] = normal(rng);
        v[t] = normal(rng);
        done[t] = uniform01(rng) < 0.15;
    }
    const double bootstrap = 0.7, gamma = 0.9, lambda = 0.8;
    const auto a = compute_gae(r, v, done, bootstrap, gamma, lambda);
    for (std::size_t t = 0; t < n; ++t) {
        double expected = 0.0, weight = 1.0;
        for (std::size_t k = t; k < n; ++k) {
            const double next = done[k] ? 0.0 : (k + 1 < n ? v[k + 1] : bootstrap);
            expected += weight * (r[k] + gamma * next - v[k]);
            if (done[k])
                break;
            weight *= gamma * lambda;
        }
        CHECK(a.advantages[t] == doctest::Approx(expected).epsilon(1e-12));
        CHECK(a.returns[t] == doctest::Approx(expected + v[t]).epsilon(1e-12));
    }
}

TEST_CASE("advantage normalization") {
    Rng rng = make_rng(2);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> a(4000);
        const double shift = uniform(rng, -100.0, 100.0), scale = std::pow(10.0, uniform(rng, -3.0, 3.0));
        for (auto& x : a)
            x = shift + scale * normal(rng);
        normalize_advantages(a);
        const double mean = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
        double var = 0.0;
        for (double x : a)
            var += (x - mean) * (x - mean);
        var /= a.size();
        CHECK(std::abs(mean) < 1e-10);
        CHECK(std::abs(var - 1.0) < 1e-6);
    }
}

TEST_CASE("clipped surrogate") {
    CHECK(clipped_surrogate(1.0, 0.8, 0.3) == 0.8);
    CHECK(clipped_surrogate(2.0, 1.0, 0.3) == doctest::Approx(1.3).epsilon(1e-15));
    CHECK(clipped_surrogate(2.0, -1.0, 0.3) == -2.0);
    CHECK(clipped_surrogate(0.1, -1.0, 0.3) == doctest::Approx(-0.7).epsilon(1e-15));
    Rng rng = make_rng(3);
    for (int k = 0; k < 10000; ++k) {
        const double r = std::exp(normal(rng)), adv = normal(rng);
        const double s = clipped_surrogate(r, adv, 0.3);
        CHECK(s <= std::max({r * adv, 0.7 * adv, 1.3 * adv}));
        CHECK(s <= r * adv);
    }
}

TEST_CASE("unit ratio gives the mean advantage as surrogate") {
    Rng rng = make_rng(4);
    const PolicyNet policy = PolicyNet::make(3, {5}, 2, Activation::Tanh, rng);
    Mlp value({3, 5, 1}, Activation::Tanh);
    value.initialize(rng);
    Batch b;
    b.observations = Matrix::Random(3, 7);
    b.actions = policy.mean_net.forward(b.observations) + Matrix::Random(2, 7);
    b.old_log_probs.resize(7);
    for (Eigen::Index i = 0; i < 7; ++i)
        b.old_log_probs(i) = gaussian_log_prob(b.actions.col(i), policy.mean_net.forward(b.observations).col(i),
                                               policy.log_std);
    b.advantages = Vector::Random(7);
    b.returns = Vector::Random(7);
    const LossTerms loss = ppo_loss(b, policy, value, PpoConfig{});
    CHECK(-loss.policy_loss == doctest::Approx(b.advantages.mean()).epsilon(1e-14));
}

TEST_CASE("ppo loss gradients match finite differences") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const GradientCheck g = ppo_gradient_check(seed);
        CAPTURE(seed);
        CHECK(g.weights <= 50);
        CHECK(g.policy_error < 1e-4);
        CHECK(g.value_error < 1e-4);
    }
}

TEST_CASE("iteration budget arithmetic") {
    CHECK(planned_iterations(5000, 50, 4000) == 62);
    CHECK(planned_iterations(500, 50, 4000) == 6);
    BanditEnvironment env;
    PpoConfig c = bandit_config();
    c.sgd_epochs = 1;
    const TrainResult r = train(env, c, c.horizon * 3 + 100, 1);
    CHECK(r.log.size() == 3);
    CHECK(r.episodes_done == c.horizon * 3);
}

TEST_CASE("config validation") {
    PpoConfig c;
    CHECK_NOTHROW(c.validate());
    c.minibatch = 5000;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = PpoConfig{};
    c.learning_rate = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    BanditEnvironment env;
    CHECK_THROWS_AS(train(env, PpoConfig{}, 10, 1), std::invalid_argument);
}

TEST_CASE("bandit training converges to 0.7 and is reproducible") {
    BanditEnvironment env;
    const PpoConfig c = bandit_config();
    const TrainResult a = train(env, c, 50 * c.horizon, 11);
    CHECK(std::abs(bandit_policy_mean(a) - 0.7) < 0.1);
    CHECK(a.log.back().mean_return > a.log.front().mean_return);
    const TrainResult b = train(env, c, 50 * c.horizon, 11);
    REQUIRE(a.log.size() == b.log.size());
    for (std::size_t i = 0; i < a.log.size(); ++i) {
        CHECK(a.log[i].mean_return == b.log[i].mean_return);
        CHECK(a.log[i].policy_loss == b.log[i].policy_loss);
    }
    CHECK(a.policy.flat_parameters() == b.policy.flat_parameters());
}

TEST_CASE("bandit mean return improves over a 5-iteration moving average") {
    BanditEnvironment env;
    const PpoConfig c = bandit_config();
    int monotone = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const TrainResult r = train(env, c, 50 * c.horizon, seed);
        std::vector<double> avg;
        for (std::size_t i = 4; i < r.log.size(); ++i) {
            double s = 0.0;
            for (std::size_t k = i - 4; k <= i; ++k)
                s += r.log[k].mean_return;
            avg.push_back(s / 5.0);
        }
        bool ok = true;
        for (std::size_t i = 1; i < avg.size(); ++i)
            ok = ok && avg[i] >= avg[i - 1];
        monotone += ok;
    }
    CHECK(monotone >= 4);
}

TEST_CASE("nan weights raise an instability") {
    BanditEnvironment env;
    PpoConfig c = bandit_config();
    c.inject_nan_iteration = 2;
    CHECK_THROWS_AS(train(env, c, 5 * c.horizon, 1), TrainingInstability);
}

TEST_CASE("sgd optimizer improves the bandit return") {
    BanditEnvironment env;
    PpoConfig c = bandit_config();
    c.optimizer = OptimizerKind::Sgd;
    const TrainResult r = train(env, c, 50 * c.horizon, 3);
    CHECK(r.log.back().mean_return > r.log.front().mean_return + 0.3);
}

TEST_CASE("episodes carry over across iterations with 50-step episodes") {
    // 4 episodes of 50 steps with T = 64 allow 3 iterations.
    class Counter : public Environment {
    public:
        Counter() : spec_(ActionSpec::make(ActionKind::DeDirect)) {}
        std::size_t observation_dim() const override { return 1; }
        const ActionSpec& action_spec() const override { return spec_; }
        std::size_t episode_length() const override { return 50; }
        Vector reset(Rng&) override {
            t_ = 0;
            return Vector::Zero(1);
        }
        Step step(const std::vector<double>&, Rng&) override {
            ++t_;
            return {Vector::Constant(1, t_ / 50.0), 0.1, t_ == 50};
        }

    private:
        ActionSpec spec_;
        int t_ = 0;
    } env;
    PpoConfig c = bandit_config();
    c.horizon = 64;
    c.minibatch = 32;
    c.sgd_epochs = 1;
    std::vector<std::size_t> episodes;
    const TrainResult r = train(env, c, 4, 1, {[&](const IterationStats& s, const PolicyNet&) {
                                                   episodes.push_back(s.episodes_done);
                                               },
                                               {}});
    CHECK(r.log.size() == 3);
    CHECK(episodes == std::vector<std::size_t>{1, 2, 3});
}
