#pragma once

#include <rlea/env.hpp>
#include <rlea/ppo.hpp>
#include <rlea/stats.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlea {

using Json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TrainingSettings {
    bool multi_function = false;
    FunctionId function{"Sphere", 10};
    /// Multi-function set; empty means the whole registry.
    std::vector<FunctionId> functions;
    std::size_t episodes = 5000;
    std::size_t retries = 3;
    std::size_t checkpoint_every = 10;
    /// Test hook: the first N attempts get NaN-poisoned weights.
    std::size_t inject_nan_attempts = 0;

    bool operator==(const TrainingSettings&) const = default;
};

struct ProtocolSettings {
    std::size_t runs = 50;
    std::uint64_t seed_base = 1000;

    bool operator==(const ProtocolSettings&) const = default;
};

struct FixedSettings {
    double F = 0.5;
    double CR = 0.9;
    double sigma = 0.5;

    bool operator==(const FixedSettings&) const = default;
};

/// A row (or the opponent) of a comparison.
struct VariantSpec {
    std::string name;
    std::string adaptation = "policy";
    std::string checkpoint;
    /// Columns this variant is evaluated on; empty means all.
    std::vector<FunctionId> functions;

    bool operator==(const VariantSpec&) const = default;
};

struct CompareSettings {
    VariantSpec baseline{"jde", "jde", "", {}};
    std::vector<VariantSpec> variants;
    /// Columns; empty means the whole registry.
    std::vector<FunctionId> functions;
    Metric metric = Metric::Auc;

    bool operator==(const CompareSettings&) const = default;
};

struct ExperimentConfig {
    std::string name = "experiment";
    std::uint64_t seed = 1;
    std::string output = "results";
    std::string adaptation = "policy";
    std::string checkpoint;
    EpisodeConfig episode;
    PpoConfig ppo;
    TrainingSettings training;
    ProtocolSettings protocol;
    FixedSettings fixed;
    CompareSettings compare;

    bool operator==(const ExperimentConfig&) const = default;

    /// Missing keys keep their defaults; unknown keys are rejected.
    static ExperimentConfig from_json(const Json& j);
    Json to_json() const;
    static ExperimentConfig load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
    /// Throws ConfigError when references or budgets are invalid.
    void validate() const;

    /// Training set resolved against the registry.
    std::vector<FunctionId> training_functions() const;
    std::vector<FunctionId> compare_functions() const;
};

Json to_json(const ObservationSpec& spec);
ObservationSpec observation_from_json(const Json& j);

} // namespace rlea
