#include <rlea/checkpoint.hpp>
#include <rlea/config.hpp>

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace rlea;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("rlea_test_config_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("defaults") {
    const ExperimentConfig c;
    CHECK(c.ppo.sgd_epochs == 200);
    CHECK(c.ppo.horizon == 4000);
    CHECK(c.ppo.minibatch == 128);
    CHECK(c.ppo.clip == 0.3);
    CHECK(c.ppo.gamma == 0.99);
    CHECK(c.ppo.lambda == 1.0);
    CHECK(c.ppo.learning_rate == 5e-5);
    CHECK(c.ppo.hidden == std::vector<std::size_t>{50, 50});
    CHECK(c.episode.generations == 50);
    CHECK(c.episode.population == 10);
    CHECK(c.episode.observation.history == 40);
    CHECK(c.protocol.runs == 50);
    CHECK(c.training.episodes == 5000);
    CHECK(c.training_functions() == std::vector<FunctionId>{{"Sphere", 10}});
    CHECK(c.compare_functions().size() == 46);
}

TEST_CASE("round trip through json") {
    ExperimentConfig c;
    c.name = "trip";
    c.seed = 99;
    c.episode.algorithm = Algorithm::CMAES;
    c.episode.action = ActionKind::CmaSigma;
    c.episode.observation.intra_delta_x = true;
    c.ppo.hidden = {100, 50, 10};
    c.ppo.activation = Activation::Tanh;
    c.ppo.optimizer = OptimizerKind::Sgd;
    c.training.multi_function = true;
    c.training.functions = {{"Sphere", 10}, {"GG21hi", 5}};
    c.compare.variants.push_back({"mine", "policy", "ckpt.json", {{"Sphere", 10}}});
    c.compare.metric = Metric::BestOfRun;
    const ExperimentConfig back = ExperimentConfig::from_json(c.to_json());
    CHECK(back == c);

    const fs::path dir = temp_dir("trip");
    c.save(dir / "c.json");
    CHECK(ExperimentConfig::load(dir / "c.json") == c);
}

TEST_CASE("function lists accept several spellings") {
    const Json j = Json::parse(R"({"training": {"mode": "multi", "functions": ["Sphere_10", {"name": "GG21hi", "dimension": 20}]},
                                   "compare": {"functions": "all"}})");
    const ExperimentConfig c = ExperimentConfig::from_json(j);
    CHECK(c.training_functions() == std::vector<FunctionId>{{"Sphere", 10}, {"GG21hi", 20}});
    CHECK(c.compare_functions().size() == 46);
}

TEST_CASE("bad configs are rejected") {
    CHECK_THROWS_AS(ExperimentConfig::from_json(Json::parse(R"({"bogus": 1})")), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json(Json::parse(R"({"ppo": {"epochs": 1}})")), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json(Json::parse(R"({"action": "de_weird"})")), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json(Json::parse(R"({"seed": "x"})")), ConfigError);

    ExperimentConfig c;
    c.training.function = {"Sphere", 20};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = ExperimentConfig{};
    c.ppo.minibatch = 10000;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    const fs::path dir = temp_dir("bad");
    std::ofstream(dir / "broken.json") << "{ not json";
    CHECK_THROWS_AS(ExperimentConfig::load(dir / "broken.json"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::load(dir / "missing.json"), ConfigError);
}

TEST_CASE("checkpoint round trip is exact") {
    Rng rng = make_rng(3);
    Checkpoint ck;
    ck.policy = PolicyNet::make(44, {50, 50}, 4, Activation::Relu, rng);
    ck.policy.log_std << -0.1, 0.2, 1.0 / 3.0, -2.5;
    ck.observation.history = 40;
    const fs::path dir = temp_dir("ckpt");
    ck.save(dir / "p.json");
    const Checkpoint back = Checkpoint::load(dir / "p.json");
    CHECK(back.policy.flat_parameters() == ck.policy.flat_parameters());
    CHECK(back.policy.mean_net.layer_sizes() == ck.policy.mean_net.layer_sizes());
    CHECK(back.action == ActionKind::DeUniform);
    CHECK(back.observation == ck.observation);
    CHECK_FALSE(fs::exists(dir / "p.json.tmp"));

    EpisodeConfig ok;
    CHECK_NOTHROW(back.check_compatible(ok));
    EpisodeConfig other = ok;
    other.observation.intra_delta_f = true;
    CHECK_THROWS_AS(back.check_compatible(other), CheckpointError);
    other = ok;
    other.algorithm = Algorithm::CMAES;
    other.action = ActionKind::CmaSigma;
    CHECK_THROWS_AS(back.check_compatible(other), CheckpointError);
}

TEST_CASE("malformed checkpoints are rejected") {
    Rng rng = make_rng(4);
    Checkpoint ck;
    ck.policy = PolicyNet::make(44, {5}, 4, Activation::Tanh, rng);
    const Json good = ck.to_json();

    Json j = good;
    j["format"] = "something";
    CHECK_THROWS_AS(Checkpoint::from_json(j), CheckpointError);
    j = good;
    j["layers"][0]["bias"].erase(0);
    CHECK_THROWS_AS(Checkpoint::from_json(j), CheckpointError);
    j = good;
    j["log_std"] = Json::array({0.0, 0.0});
    CHECK_THROWS_AS(Checkpoint::from_json(j), CheckpointError);
    j = good;
    j["action"] = "cma_sigma";
    CHECK_THROWS_AS(Checkpoint::from_json(j), CheckpointError);

    const fs::path dir = temp_dir("malformed");
    std::ofstream(dir / "nan.json") << good.dump().substr(0, 100);
    CHECK_THROWS_AS(Checkpoint::load(dir / "nan.json"), CheckpointError);
    CHECK_THROWS_AS(Checkpoint::load(dir / "none.json"), CheckpointError);
}
