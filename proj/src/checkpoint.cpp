#include <rlea/checkpoint.hpp>

#include <fstream>

namespace rlea {

namespace {

constexpr const char* kFormat = "rlea-policy";
constexpr int kVersion = 1;

std::vector<double> to_vector(const Eigen::Ref<const Vector>& v) { return {v.data(), v.data() + v.size()}; }

} // namespace

Json Checkpoint::to_json() const {
    const Mlp& net = policy.mean_net;
    Json layers = Json::array();
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        const auto w = net.weight(l);
        Json rows = Json::array();
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            rows.push_back(to_vector(w.row(r).transpose()));
        layers.push_back(Json{{"weight", std::move(rows)}, {"bias", to_vector(net.bias(l))}});
    }
    return Json{{"format", kFormat},
                {"version", kVersion},
                {"algorithm", rlea::to_string(algorithm)},
                {"action", rlea::to_string(action)},
                {"observation", rlea::to_json(observation)},
                {"architecture", Json{{"layers", net.layer_sizes()}, {"activation", rlea::to_string(net.activation())}}},
                {"log_std", to_vector(policy.log_std)},
                {"layers", std::move(layers)}};
}

Checkpoint Checkpoint::from_json(const Json& j) {
    try {
        if (j.at("format").get<std::string>() != kFormat || j.at("version").get<int>() != kVersion)
            throw CheckpointError("unsupported checkpoint format");
        Checkpoint c;
        c.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
        c.action = parse_action_kind(j.at("action").get<std::string>());
        c.observation = observation_from_json(j.at("observation"));
        const auto sizes = j.at("architecture").at("layers").get<std::vector<std::size_t>>();
        const auto activation = parse_activation(j.at("architecture").at("activation").get<std::string>());
        c.policy.mean_net = Mlp(sizes, activation);

        const Json& layers = j.at("layers");
        if (layers.size() != c.policy.mean_net.layer_count())
            throw CheckpointError("layer count does not match the architecture");
        Vector theta(static_cast<Eigen::Index>(c.policy.mean_net.parameter_count()));
        Eigen::Index pos = 0;
        for (std::size_t l = 0; l < layers.size(); ++l) {
            const auto rows = layers[l].at("weight").get<std::vector<std::vector<double>>>();
            const auto bias = layers[l].at("bias").get<std::vector<double>>();
            if (rows.size() != sizes[l + 1] || bias.size() != sizes[l + 1])
                throw CheckpointError("layer " + std::to_string(l) + " has the wrong shape");
            for (const auto& row : rows)
                if (row.size() != sizes[l])
                    throw CheckpointError("layer " + std::to_string(l) + " has the wrong shape");
            // column-major, matching Mlp's flat layout
            for (std::size_t col = 0; col < sizes[l]; ++col)
                for (std::size_t r = 0; r < sizes[l + 1]; ++r)
                    theta[pos++] = rows[r][col];
            for (double b : bias)
                theta[pos++] = b;
        }
        c.policy.mean_net.parameters() = theta;
        const auto log_std = j.at("log_std").get<std::vector<double>>();
        if (log_std.size() != c.policy.output_dim())
            throw CheckpointError("log_std has the wrong size");
        c.policy.log_std = Eigen::Map<const Vector>(log_std.data(), static_cast<Eigen::Index>(log_std.size()));

        if (c.policy.output_dim() != ActionSpec::make(c.action).dimension())
            throw CheckpointError("output layer does not match action space " + rlea::to_string(c.action));
        if (c.policy.input_dim() != c.observation.length(c.policy.output_dim()))
            throw CheckpointError("input layer does not match the observation spec");
        if (!c.policy.finite())
            throw CheckpointError("checkpoint contains non-finite weights");
        return c;
    } catch (const CheckpointError&) {
        throw;
    } catch (const std::exception& e) {
        throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
    }
}

void Checkpoint::save(const std::filesystem::path& path) const {
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        out << to_json().dump(1) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint Checkpoint::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw CheckpointError("cannot open checkpoint " + path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const std::exception& e) {
        throw CheckpointError("checkpoint " + path.string() + " is not valid JSON: " + e.what());
    }
    return from_json(j);
}

void Checkpoint::check_compatible(const EpisodeConfig& config) const {
    if (algorithm != config.algorithm)
        throw CheckpointError("checkpoint was trained for " + rlea::to_string(algorithm) + ", config runs " +
                              rlea::to_string(config.algorithm));
    if (action != config.action)
        throw CheckpointError("checkpoint action space " + rlea::to_string(action) + " differs from config " +
                              rlea::to_string(config.action));
    if (!(observation == config.observation))
        throw CheckpointError("checkpoint observation spec differs from config");
}

} // namespace rlea
