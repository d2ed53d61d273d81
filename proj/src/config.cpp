#include <rlea/config.hpp>

#include <fstream>
#include <set>

namespace rlea {

namespace {

void reject_unknown(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
    if (!j.is_object())
        throw ConfigError(where + ": expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key))
            throw ConfigError(where + ": unknown key '" + key + "'");
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
    if (j.contains(key))
        out = j.at(key).get<T>();
}

Json function_json(const FunctionId& id) { return Json{{"name", id.name}, {"dimension", id.dimension}}; }

FunctionId function_from_json(const Json& j) {
    if (j.is_string())
        return parse_function_id(j.get<std::string>());
    reject_unknown(j, {"name", "dimension"}, "function");
    return {j.at("name").get<std::string>(), j.at("dimension").get<std::size_t>()};
}

Json functions_json(const std::vector<FunctionId>& ids) {
    Json arr = Json::array();
    for (const auto& id : ids)
        arr.push_back(function_json(id));
    return arr;
}

std::vector<FunctionId> functions_from_json(const Json& j) {
    std::vector<FunctionId> out;
    if (j.is_string() && j.get<std::string>() == "all")
        return out;
    for (const auto& item : j)
        out.push_back(function_from_json(item));
    return out;
}

Json variant_json(const VariantSpec& v) {
    Json j{{"name", v.name}, {"adaptation", v.adaptation}};
    if (!v.checkpoint.empty())
        j["checkpoint"] = v.checkpoint;
    if (!v.functions.empty())
        j["functions"] = functions_json(v.functions);
    return j;
}

VariantSpec variant_from_json(const Json& j) {
    reject_unknown(j, {"name", "adaptation", "checkpoint", "functions"}, "variant");
    VariantSpec v;
    read(j, "adaptation", v.adaptation);
    v.name = v.adaptation;
    read(j, "name", v.name);
    read(j, "checkpoint", v.checkpoint);
    if (j.contains("functions"))
        v.functions = functions_from_json(j.at("functions"));
    return v;
}

} // namespace

Json to_json(const ObservationSpec& spec) {
    return Json{{"history", spec.history},
                {"intra_delta_f", spec.intra_delta_f},
                {"inter_delta_x", spec.inter_delta_x},
                {"intra_delta_x", spec.intra_delta_x}};
}

ObservationSpec observation_from_json(const Json& j) {
    reject_unknown(j, {"history", "intra_delta_f", "inter_delta_x", "intra_delta_x"}, "observation");
    ObservationSpec s;
    read(j, "history", s.history);
    read(j, "intra_delta_f", s.intra_delta_f);
    read(j, "inter_delta_x", s.inter_delta_x);
    read(j, "intra_delta_x", s.intra_delta_x);
    return s;
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
    try {
        reject_unknown(j,
                       {"name", "seed", "output", "adaptation", "checkpoint", "algorithm", "action", "observation",
                        "ppo", "training", "protocol", "fixed", "compare"},
                       "config");
        ExperimentConfig c;
        read(j, "name", c.name);
        read(j, "seed", c.seed);
        read(j, "output", c.output);
        read(j, "adaptation", c.adaptation);
        read(j, "checkpoint", c.checkpoint);
        if (j.contains("algorithm"))
            c.episode.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
        if (j.contains("action"))
            c.episode.action = parse_action_kind(j.at("action").get<std::string>());
        else if (c.episode.algorithm == Algorithm::CMAES)
            c.episode.action = ActionKind::CmaSigma;
        if (j.contains("observation"))
            c.episode.observation = observation_from_json(j.at("observation"));

        if (j.contains("ppo")) {
            const Json& p = j.at("ppo");
            reject_unknown(p,
                           {"sgd_epochs", "horizon", "minibatch", "clip", "gamma", "lambda", "learning_rate",
                            "value_coeff", "entropy_coeff", "grad_clip", "optimizer", "hidden", "activation"},
                           "ppo");
            read(p, "sgd_epochs", c.ppo.sgd_epochs);
            read(p, "horizon", c.ppo.horizon);
            read(p, "minibatch", c.ppo.minibatch);
            read(p, "clip", c.ppo.clip);
            read(p, "gamma", c.ppo.gamma);
            read(p, "lambda", c.ppo.lambda);
            read(p, "learning_rate", c.ppo.learning_rate);
            read(p, "value_coeff", c.ppo.value_coeff);
            read(p, "entropy_coeff", c.ppo.entropy_coeff);
            read(p, "grad_clip", c.ppo.grad_clip);
            read(p, "hidden", c.ppo.hidden);
            if (p.contains("optimizer"))
                c.ppo.optimizer = parse_optimizer(p.at("optimizer").get<std::string>());
            if (p.contains("activation"))
                c.ppo.activation = parse_activation(p.at("activation").get<std::string>());
        }
        if (j.contains("training")) {
            const Json& t = j.at("training");
            reject_unknown(t,
                           {"mode", "function", "functions", "episodes", "retries", "checkpoint_every",
                            "inject_nan_attempts"},
                           "training");
            if (t.contains("mode")) {
                const auto mode = t.at("mode").get<std::string>();
                if (mode != "single" && mode != "multi")
                    throw ConfigError("training.mode must be single or multi");
                c.training.multi_function = mode == "multi";
            }
            if (t.contains("function"))
                c.training.function = function_from_json(t.at("function"));
            if (t.contains("functions"))
                c.training.functions = functions_from_json(t.at("functions"));
            read(t, "episodes", c.training.episodes);
            read(t, "retries", c.training.retries);
            read(t, "checkpoint_every", c.training.checkpoint_every);
            read(t, "inject_nan_attempts", c.training.inject_nan_attempts);
        }
        if (j.contains("protocol")) {
            const Json& p = j.at("protocol");
            reject_unknown(p, {"runs", "generations", "population", "seed_base", "initial_sigma", "clip_cma_evaluation"},
                           "protocol");
            read(p, "runs", c.protocol.runs);
            read(p, "seed_base", c.protocol.seed_base);
            read(p, "generations", c.episode.generations);
            read(p, "population", c.episode.population);
            read(p, "initial_sigma", c.episode.initial_sigma);
            read(p, "clip_cma_evaluation", c.episode.clip_cma_evaluation);
        }
        if (j.contains("fixed")) {
            const Json& f = j.at("fixed");
            reject_unknown(f, {"F", "CR", "sigma"}, "fixed");
            read(f, "F", c.fixed.F);
            read(f, "CR", c.fixed.CR);
            read(f, "sigma", c.fixed.sigma);
        }
        if (j.contains("compare")) {
            const Json& m = j.at("compare");
            reject_unknown(m, {"baseline", "variants", "functions", "metric"}, "compare");
            if (m.contains("baseline"))
                c.compare.baseline = variant_from_json(m.at("baseline"));
            if (m.contains("variants"))
                for (const auto& v : m.at("variants"))
                    c.compare.variants.push_back(variant_from_json(v));
            if (m.contains("functions"))
                c.compare.functions = functions_from_json(m.at("functions"));
            if (m.contains("metric"))
                c.compare.metric = parse_metric(m.at("metric").get<std::string>());
        }
        return c;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

Json ExperimentConfig::to_json() const {
    Json j;
    j["name"] = name;
    j["seed"] = seed;
    j["output"] = output;
    j["adaptation"] = adaptation;
    if (!checkpoint.empty())
        j["checkpoint"] = checkpoint;
    j["algorithm"] = rlea::to_string(episode.algorithm);
    j["action"] = rlea::to_string(episode.action);
    j["observation"] = rlea::to_json(episode.observation);
    j["ppo"] = Json{{"sgd_epochs", ppo.sgd_epochs},
                    {"horizon", ppo.horizon},
                    {"minibatch", ppo.minibatch},
                    {"clip", ppo.clip},
                    {"gamma", ppo.gamma},
                    {"lambda", ppo.lambda},
                    {"learning_rate", ppo.learning_rate},
                    {"value_coeff", ppo.value_coeff},
                    {"entropy_coeff", ppo.entropy_coeff},
                    {"grad_clip", ppo.grad_clip},
                    {"optimizer", rlea::to_string(ppo.optimizer)},
                    {"hidden", ppo.hidden},
                    {"activation", rlea::to_string(ppo.activation)}};
    Json t{{"mode", training.multi_function ? "multi" : "single"},
           {"function", function_json(training.function)},
           {"episodes", training.episodes},
           {"retries", training.retries},
           {"checkpoint_every", training.checkpoint_every}};
    if (!training.functions.empty())
        t["functions"] = functions_json(training.functions);
    if (training.inject_nan_attempts > 0)
        t["inject_nan_attempts"] = training.inject_nan_attempts;
    j["training"] = std::move(t);
    j["protocol"] = Json{{"runs", protocol.runs},
                         {"generations", episode.generations},
                         {"population", episode.population},
                         {"seed_base", protocol.seed_base},
                         {"initial_sigma", episode.initial_sigma},
                         {"clip_cma_evaluation", episode.clip_cma_evaluation}};
    j["fixed"] = Json{{"F", fixed.F}, {"CR", fixed.CR}, {"sigma", fixed.sigma}};
    Json m{{"baseline", variant_json(compare.baseline)}, {"metric", rlea::to_string(compare.metric)}};
    Json variants = Json::array();
    for (const auto& v : compare.variants)
        variants.push_back(variant_json(v));
    m["variants"] = std::move(variants);
    if (!compare.functions.empty())
        m["functions"] = functions_json(compare.functions);
    j["compare"] = std::move(m);
    return j;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config " + path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const std::exception& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    ExperimentConfig c = from_json(j);
    c.validate();
    return c;
}

void ExperimentConfig::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << to_json().dump(2) << '\n';
}

void ExperimentConfig::validate() const {
    try {
        episode.validate();
        ppo.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (training.episodes == 0)
        throw ConfigError("training.episodes must be positive");
    if (protocol.runs == 0)
        throw ConfigError("protocol.runs must be positive");
    auto check = [](const FunctionId& id) {
        try {
            (void)find_function(id);
        } catch (const std::out_of_range& e) {
            throw ConfigError(e.what());
        }
    };
    check(training.function);
    for (const auto& id : training.functions)
        check(id);
    for (const auto& id : compare.functions)
        check(id);
    for (const auto& v : compare.variants)
        for (const auto& id : v.functions)
            check(id);
}

std::vector<FunctionId> ExperimentConfig::training_functions() const {
    if (!training.multi_function)
        return {training.function};
    return training.functions.empty() ? registry_list() : training.functions;
}

std::vector<FunctionId> ExperimentConfig::compare_functions() const {
    return compare.functions.empty() ? registry_list() : compare.functions;
}

} // namespace rlea
