#pragma once

#include <rlea/benchfn.hpp>
#include <rlea/de.hpp>
#include <rlea/rng.hpp>

#include <Eigen/Core>

#include <cstddef>
#include <string>
#include <vector>

namespace rlea {

using Matrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Action spaces

enum class ActionKind { CmaSigma, DeDirect, DeNormal, DeUniform };

std::string to_string(ActionKind kind);
/// Accepts cma_sigma, de_direct, de_normal, de_uniform.
ActionKind parse_action_kind(const std::string& text);

/// Box of the emitted parameters, one interval per output.
struct ActionSpec {
    ActionKind kind = ActionKind::DeDirect;
    Vector lower;
    Vector upper;
    std::vector<std::string> names;

    static ActionSpec make(ActionKind kind);

    std::size_t dimension() const { return static_cast<std::size_t>(lower.size()); }
    bool is_de() const { return kind != ActionKind::CmaSigma; }
    /// Maps parameter values into [0, 1] per dimension.
    std::vector<double> normalize(const std::vector<double>& values) const;
    /// Midpoint of every interval.
    std::vector<double> neutral() const;
};

/// The network works in [-1, 1] per dimension; this maps such a point onto the
/// parameter box after clipping it to [-1, 1].
std::vector<double> to_parameters(const ActionSpec& spec, const Vector& network_action);

struct Action {
    /// Draw in network space before clipping (what the log-probability refers to).
    Vector raw;
    /// Parameter values after clipping into the box.
    std::vector<double> values;
    double log_prob = 0.0;
};

/// Gaussian draw around `mean` with std exp(log_std) when stochastic, the mean otherwise.
Action sample_action(const Vector& mean, const Vector& log_std, const ActionSpec& spec, Rng& rng, bool stochastic);

/// Log-density of a diagonal Gaussian.
double gaussian_log_prob(const Vector& x, const Vector& mean, const Vector& log_std);
double gaussian_entropy(const Vector& log_std);

/// Turns DE action values into per-individual parameters (broadcast, normal or uniform draws).
DeParams decode_de_params(const std::vector<double>& values, const ActionSpec& spec, std::size_t population_size,
                          Rng& rng);

// ---------------------------------------------------------------------------
// Networks

enum class Activation { Relu, Tanh };

std::string to_string(Activation activation);
Activation parse_activation(const std::string& text);

/// Fully connected network with a linear output layer. Parameters live in one
/// flat vector: for each layer the column-major weight matrix then the bias.
class Mlp {
public:
    Mlp() = default;
    Mlp(std::vector<std::size_t> layer_sizes, Activation activation);

    /// Column-normalized Gaussian init (every unit's fan-in vector has norm `scale`),
    /// `output_scale` on the last layer; zero biases.
    void initialize(Rng& rng, double hidden_scale = 1.0, double output_scale = 0.01);

    const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
    Activation activation() const { return activation_; }
    std::size_t input_dim() const { return sizes_.front(); }
    std::size_t output_dim() const { return sizes_.back(); }
    std::size_t layer_count() const { return sizes_.size() - 1; }
    std::size_t parameter_count() const { return static_cast<std::size_t>(params_.size()); }

    Vector& parameters() { return params_; }
    const Vector& parameters() const { return params_; }

    Eigen::Map<const Matrix> weight(std::size_t layer) const;
    Eigen::Map<const Vector> bias(std::size_t layer) const;

    /// Inputs are columns; returns outputs as columns.
    Matrix forward(const Matrix& inputs) const;
    Vector forward(const Vector& input) const;

    /// Forward pass that keeps every layer's activations for backward().
    struct Tape {
        std::vector<Matrix> activations; // activations[0] = inputs, back() = outputs
    };
    Matrix forward(const Matrix& inputs, Tape& tape) const;
    /// Gradient of sum(output_grad .* outputs) w.r.t. the flat parameters.
    Vector backward(const Tape& tape, const Matrix& output_grad) const;

private:
    std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
    std::size_t bias_offset(std::size_t layer) const { return offsets_[layer] + sizes_[layer + 1] * sizes_[layer]; }

    std::vector<std::size_t> sizes_;
    std::vector<std::size_t> offsets_;
    Activation activation_ = Activation::Relu;
    Vector params_;
};

/// Gaussian policy: network mean in [-1, 1]-normalized action units plus a
/// state-independent log standard deviation per action dimension.
struct PolicyNet {
    Mlp mean_net;
    Vector log_std;

    static PolicyNet make(std::size_t input_dim, const std::vector<std::size_t>& hidden, std::size_t output_dim,
                          Activation activation, Rng& rng);

    std::size_t input_dim() const { return mean_net.input_dim(); }
    std::size_t output_dim() const { return mean_net.output_dim(); }
    std::size_t parameter_count() const { return mean_net.parameter_count() + static_cast<std::size_t>(log_std.size()); }

    /// Mean net parameters followed by log_std.
    Vector flat_parameters() const;
    void set_flat_parameters(const Vector& theta);
    bool finite() const { return mean_net.parameters().allFinite() && log_std.allFinite(); }
};

struct PolicyOutput {
    Vector mean;
    Vector log_std;
};

/// Throws std::invalid_argument when obs has the wrong length.
PolicyOutput forward(const PolicyNet& net, const Vector& obs);

} // namespace rlea
