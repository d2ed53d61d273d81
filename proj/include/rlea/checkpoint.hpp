#pragma once

#include <rlea/config.hpp>
#include <rlea/policy.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

namespace rlea {

class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A trained policy with everything needed to run it again.
struct Checkpoint {
    PolicyNet policy;
    Algorithm algorithm = Algorithm::DE;
    ActionKind action = ActionKind::DeUniform;
    ObservationSpec observation;

    Json to_json() const;
    /// Throws CheckpointError on anything malformed or inconsistent.
    static Checkpoint from_json(const Json& j);

    /// Written through a temporary file, then renamed.
    void save(const std::filesystem::path& path) const;
    static Checkpoint load(const std::filesystem::path& path);

    /// Rejects a checkpoint that cannot drive episodes shaped by `config`.
    void check_compatible(const EpisodeConfig& config) const;
};

} // namespace rlea
