#include <rlea/policy.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rlea {

std::string to_string(ActionKind kind) {
    switch (kind) {
    case ActionKind::CmaSigma: return "cma_sigma";
    case ActionKind::DeDirect: return "de_direct";
    case ActionKind::DeNormal: return "de_normal";
    case ActionKind::DeUniform: return "de_uniform";
    }
    throw std::logic_error("unknown action kind");
}

ActionKind parse_action_kind(const std::string& text) {
    for (auto kind : {ActionKind::CmaSigma, ActionKind::DeDirect, ActionKind::DeNormal, ActionKind::DeUniform})
        if (to_string(kind) == text)
            return kind;
    throw std::invalid_argument("unknown action space '" + text + "'");
}

ActionSpec ActionSpec::make(ActionKind kind) {
    ActionSpec s;
    s.kind = kind;
    auto set = [&](std::vector<double> lo, std::vector<double> hi, std::vector<std::string> names) {
        s.lower = Eigen::Map<Vector>(lo.data(), static_cast<Eigen::Index>(lo.size()));
        s.upper = Eigen::Map<Vector>(hi.data(), static_cast<Eigen::Index>(hi.size()));
        s.names = std::move(names);
    };
    switch (kind) {
    case ActionKind::CmaSigma: set({1e-10}, {3.0}, {"sigma"}); break;
    case ActionKind::DeDirect: set({0.0, 0.0}, {2.0, 1.0}, {"F", "CR"}); break;
    case ActionKind::DeNormal:
        set({0.0, 0.0, 0.0, 0.0}, {2.0, 1.0, 1.0, 1.0}, {"mu_F", "sigma_F", "mu_CR", "sigma_CR"});
        break;
    case ActionKind::DeUniform:
        set({0.0, 0.0, 0.0, 0.0}, {2.0, 2.0, 1.0, 1.0}, {"F_min", "F_max", "CR_min", "CR_max"});
        break;
    }
    return s;
}

std::vector<double> ActionSpec::normalize(const std::vector<double>& values) const {
    if (values.size() != dimension())
        throw std::invalid_argument("action has wrong dimension");
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        out[i] = std::clamp((values[i] - lower[i]) / (upper[i] - lower[i]), 0.0, 1.0);
    return out;
}

std::vector<double> ActionSpec::neutral() const {
    std::vector<double> out(dimension());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = 0.5 * (lower[i] + upper[i]);
    return out;
}

std::vector<double> to_parameters(const ActionSpec& spec, const Vector& network_action) {
    if (static_cast<std::size_t>(network_action.size()) != spec.dimension())
        throw std::invalid_argument("network action has wrong dimension");
    std::vector<double> out(spec.dimension());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double u = std::clamp(network_action[i], -1.0, 1.0);
        out[i] = std::clamp(spec.lower[i] + 0.5 * (u + 1.0) * (spec.upper[i] - spec.lower[i]), spec.lower[i],
                            spec.upper[i]);
    }
    return out;
}

double gaussian_log_prob(const Vector& x, const Vector& mean, const Vector& log_std) {
    constexpr double half_log_two_pi = 0.91893853320467274178;
    double lp = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double z = (x[i] - mean[i]) * std::exp(-log_std[i]);
        lp += -0.5 * z * z - log_std[i] - half_log_two_pi;
    }
    return lp;
}

double gaussian_entropy(const Vector& log_std) {
    constexpr double half_log_two_pi_e = 1.41893853320467274178;
    return log_std.sum() + half_log_two_pi_e * static_cast<double>(log_std.size());
}

Action sample_action(const Vector& mean, const Vector& log_std, const ActionSpec& spec, Rng& rng, bool stochastic) {
    if (static_cast<std::size_t>(mean.size()) != spec.dimension() || log_std.size() != mean.size())
        throw std::invalid_argument("sample_action: dimension mismatch");
    Action a;
    a.raw = mean;
    if (stochastic)
        for (Eigen::Index i = 0; i < mean.size(); ++i)
            a.raw[i] += std::exp(log_std[i]) * normal(rng);
    a.log_prob = gaussian_log_prob(a.raw, mean, log_std);
    a.values = to_parameters(spec, a.raw);
    return a;
}

DeParams decode_de_params(const std::vector<double>& values, const ActionSpec& spec, std::size_t population_size,
                          Rng& rng) {
    if (!spec.is_de())
        throw std::invalid_argument("decode_de_params needs a DE action space");
    if (values.size() != spec.dimension())
        throw std::invalid_argument("decode_de_params: action has wrong dimension");
    switch (spec.kind) {
    case ActionKind::DeDirect:
        return DeParams::broadcast(std::clamp(values[0], 0.0, 2.0), std::clamp(values[1], 0.0, 1.0), population_size);
    case ActionKind::DeNormal: {
        DeParams p;
        p.F.resize(population_size);
        p.CR.resize(population_size);
        for (std::size_t i = 0; i < population_size; ++i) {
            p.F[i] = std::clamp(normal(rng, values[0], values[1]), 0.0, 2.0);
            p.CR[i] = std::clamp(normal(rng, values[2], values[3]), 0.0, 1.0);
        }
        return p;
    }
    case ActionKind::DeUniform: {
        const double f_lo = std::min(values[0], values[1]);
        const double f_hi = std::max(values[0], values[1]);
        const double cr_lo = std::min(values[2], values[3]);
        const double cr_hi = std::max(values[2], values[3]);
        DeParams p;
        p.F.resize(population_size);
        p.CR.resize(population_size);
        for (std::size_t i = 0; i < population_size; ++i) {
            p.F[i] = std::clamp(uniform(rng, f_lo, f_hi), 0.0, 2.0);
            p.CR[i] = std::clamp(uniform(rng, cr_lo, cr_hi), 0.0, 1.0);
        }
        return p;
    }
    case ActionKind::CmaSigma: break;
    }
    throw std::logic_error("unreachable");
}

std::string to_string(Activation activation) { return activation == Activation::Relu ? "relu" : "tanh"; }

Activation parse_activation(const std::string& text) {
    if (text == "relu")
        return Activation::Relu;
    if (text == "tanh")
        return Activation::Tanh;
    throw std::invalid_argument("unknown activation '" + text + "'");
}

Mlp::Mlp(std::vector<std::size_t> layer_sizes, Activation activation)
    : sizes_(std::move(layer_sizes)), activation_(activation) {
    if (sizes_.size() < 2)
        throw std::invalid_argument("a network needs at least an input and an output layer");
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        if (sizes_[l] == 0 || sizes_[l + 1] == 0)
            throw std::invalid_argument("layer sizes must be positive");
        offsets_.push_back(total);
        total += sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
    }
    params_ = Vector::Zero(static_cast<Eigen::Index>(total));
}

void Mlp::initialize(Rng& rng, double hidden_scale, double output_scale) {
    for (std::size_t l = 0; l < layer_count(); ++l) {
        const auto rows = static_cast<Eigen::Index>(sizes_[l + 1]);
        const auto cols = static_cast<Eigen::Index>(sizes_[l]);
        Eigen::Map<Matrix> w(params_.data() + weight_offset(l), rows, cols);
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r)
                w(r, c) = normal(rng);
        const double scale = l + 1 == layer_count() ? output_scale : hidden_scale;
        for (Eigen::Index r = 0; r < rows; ++r) {
            const double norm = w.row(r).norm();
            if (norm > 0)
                w.row(r) *= scale / norm;
        }
        Eigen::Map<Vector>(params_.data() + bias_offset(l), rows).setZero();
    }
}

Eigen::Map<const Matrix> Mlp::weight(std::size_t layer) const {
    return {params_.data() + weight_offset(layer), static_cast<Eigen::Index>(sizes_[layer + 1]),
            static_cast<Eigen::Index>(sizes_[layer])};
}

Eigen::Map<const Vector> Mlp::bias(std::size_t layer) const {
    return {params_.data() + bias_offset(layer), static_cast<Eigen::Index>(sizes_[layer + 1])};
}

Matrix Mlp::forward(const Matrix& inputs, Tape& tape) const {
    if (static_cast<std::size_t>(inputs.rows()) != input_dim())
        throw std::invalid_argument("network input has " + std::to_string(inputs.rows()) + " rows, expected " +
                                    std::to_string(input_dim()));
    tape.activations.clear();
    tape.activations.push_back(inputs);
    for (std::size_t l = 0; l < layer_count(); ++l) {
        Matrix z = weight(l) * tape.activations.back();
        z.colwise() += bias(l);
        if (l + 1 < layer_count()) {
            if (activation_ == Activation::Relu)
                z = z.cwiseMax(0.0);
            else
                z = z.array().tanh().matrix();
        }
        tape.activations.push_back(std::move(z));
    }
    return tape.activations.back();
}

Matrix Mlp::forward(const Matrix& inputs) const {
    Tape tape;
    return forward(inputs, tape);
}

Vector Mlp::forward(const Vector& input) const {
    Matrix in = input;
    return forward(in).col(0);
}

Vector Mlp::backward(const Tape& tape, const Matrix& output_grad) const {
    Vector grad = Vector::Zero(params_.size());
    Matrix g = output_grad;
    for (std::size_t l = layer_count(); l-- > 0;) {
        const Matrix& input = tape.activations[l];
        Eigen::Map<Matrix>(grad.data() + weight_offset(l), static_cast<Eigen::Index>(sizes_[l + 1]),
                           static_cast<Eigen::Index>(sizes_[l])) = g * input.transpose();
        Eigen::Map<Vector>(grad.data() + bias_offset(l), static_cast<Eigen::Index>(sizes_[l + 1])) =
            g.rowwise().sum();
        if (l == 0)
            break;
        g = weight(l).transpose() * g;
        if (activation_ == Activation::Relu)
            g = g.cwiseProduct((input.array() > 0.0).cast<double>().matrix());
        else
            g = g.cwiseProduct((1.0 - input.array().square()).matrix());
    }
    return grad;
}

PolicyNet PolicyNet::make(std::size_t input_dim, const std::vector<std::size_t>& hidden, std::size_t output_dim,
                          Activation activation, Rng& rng) {
    std::vector<std::size_t> sizes{input_dim};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(output_dim);
    PolicyNet net{Mlp(sizes, activation), Vector::Zero(static_cast<Eigen::Index>(output_dim))};
    net.mean_net.initialize(rng);
    return net;
}

Vector PolicyNet::flat_parameters() const {
    Vector theta(static_cast<Eigen::Index>(parameter_count()));
    theta << mean_net.parameters(), log_std;
    return theta;
}

void PolicyNet::set_flat_parameters(const Vector& theta) {
    if (static_cast<std::size_t>(theta.size()) != parameter_count())
        throw std::invalid_argument("policy parameter vector has wrong size");
    const auto n = static_cast<Eigen::Index>(mean_net.parameter_count());
    mean_net.parameters() = theta.head(n);
    log_std = theta.tail(log_std.size());
}

PolicyOutput forward(const PolicyNet& net, const Vector& obs) {
    if (static_cast<std::size_t>(obs.size()) != net.input_dim())
        throw std::invalid_argument("observation length " + std::to_string(obs.size()) + " does not match policy input " +
                                    std::to_string(net.input_dim()));
    return {net.mean_net.forward(obs), net.log_std};
}

} // namespace rlea
