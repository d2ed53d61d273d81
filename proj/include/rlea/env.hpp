#pragma once

#include <rlea/baselines.hpp>
#include <rlea/benchfn.hpp>
#include <rlea/cmaes.hpp>
#include <rlea/de.hpp>
#include <rlea/observe.hpp>
#include <rlea/policy.hpp>
#include <rlea/ppo.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rlea {

enum class Algorithm { DE, CMAES };
std::string to_string(Algorithm algorithm);
Algorithm parse_algorithm(const std::string& text);

/// Shape of one evolutionary run. generations x population evaluations in total;
/// for DE the initial population is generation 0 and counts against the budget.
struct EpisodeConfig {
    Algorithm algorithm = Algorithm::DE;
    std::size_t generations = 50;
    std::size_t population = 10;
    ObservationSpec observation;
    ActionKind action = ActionKind::DeUniform;
    /// CMA-ES starting step-size for controllers that adapt it themselves.
    double initial_sigma = 0.5;
    bool clip_cma_evaluation = true;

    std::size_t evaluation_budget() const { return generations * population; }
    /// Generations whose parameters are chosen by a controller.
    std::size_t controlled_generations() const;
    void validate() const;
    bool operator==(const EpisodeConfig&) const = default;
};

/// Parameters for the next generation, plus what gets written into the trace.
struct ControlDecision {
    DeParams de;
    double sigma = 0.0;
    std::vector<double> recorded_action;
};

struct GenerationReport {
    double reward = 0.0;
    /// DE: which trials replaced their parent.
    std::vector<bool> success;
    /// The run's best-so-far fitness strictly improved.
    bool improved_best = false;
    /// CMA-ES: isotropic direction of the best offspring.
    Vector best_direction;
    double sigma = 0.0;
};

/// State of one evolutionary run driven one generation at a time.
class Episode {
public:
    /// DE evaluates its initial population here; CMA-ES draws its mean uniformly in the box.
    Episode(const EpisodeConfig& config, const BenchmarkFunction& fn, Rng& rng);

    const EpisodeConfig& config() const { return config_; }
    const BenchmarkFunction& function() const { return *fn_; }
    const RunTrace& trace() const { return trace_; }
    bool done() const;
    std::size_t evaluations() const { return eval_.budget().used(); }

    /// DE population (DE runs only).
    const Population& population() const;
    /// CMA-ES state (CMA-ES runs only).
    const CmaState& cma() const;
    const CmaParameters& cma_parameters() const { return cma_params_; }
    double best_so_far() const { return best_so_far_; }

    /// Observation for the next decision; `previous_action` normalized to [0, 1].
    /// An empty trace yields zero history blocks.
    Vector observation(const std::vector<double>& previous_action) const;

    /// Advances one generation. Throws std::logic_error when done.
    GenerationReport advance(const ControlDecision& decision, Rng& rng);

private:
    void record(GenerationRecord record);

    EpisodeConfig config_;
    const BenchmarkFunction* fn_;
    Evaluator eval_;
    RunTrace trace_;
    double best_so_far_;
    std::optional<Population> population_;
    std::optional<CmaState> cma_;
    CmaParameters cma_params_;
};

// ---------------------------------------------------------------------------
// Controllers

class Controller {
public:
    virtual ~Controller() = default;
    virtual std::string name() const = 0;
    virtual std::unique_ptr<Controller> clone() const = 0;
    virtual void reset(const Episode& /*episode*/, Rng& /*rng*/) {}
    virtual ControlDecision decide(const Episode& episode, const Vector& observation, Rng& rng) = 0;
    virtual void feedback(const Episode& /*episode*/, const ControlDecision& /*decision*/,
                          const GenerationReport& /*report*/) {}
    /// Parameter values to feed back as the "previous action" observation block, if any.
    virtual std::optional<std::vector<double>> action_values(const ControlDecision& /*decision*/) const {
        return std::nullopt;
    }
};

class FixedDeController final : public Controller {
public:
    FixedDeController(double F, double CR) : F_(F), CR_(CR) {}
    std::string name() const override { return "fixed"; }
    std::unique_ptr<Controller> clone() const override { return std::make_unique<FixedDeController>(*this); }
    ControlDecision decide(const Episode& episode, const Vector& observation, Rng& rng) override;

private:
    double F_, CR_;
};

class FixedSigmaController final : public Controller {
public:
    explicit FixedSigmaController(double sigma) : sigma_(sigma) {}
    std::string name() const override { return "fixed"; }
    std::unique_ptr<Controller> clone() const override { return std::make_unique<FixedSigmaController>(*this); }
    ControlDecision decide(const Episode& episode, const Vector& observation, Rng& rng) override;

private:
    double sigma_;
};

class CsaController final : public Controller {
public:
    /// c <= 0 selects the default cumulation constant of the run's CMA-ES parameters.
    explicit CsaController(double c = 0.0, double d_sigma = 1.0) : c_(c), d_sigma_(d_sigma) {}
    std::string name() const override { return "csa"; }
    std::unique_ptr<Controller> clone() const override { return std::make_unique<CsaController>(*this); }
    void reset(const Episode& episode, Rng& rng) override;
    ControlDecision decide(const Episode& episode, const Vector& observation, Rng& rng) override;
    void feedback(const Episode& episode, const ControlDecision& decision, const GenerationReport& report) override;

private:
    double c_, d_sigma_;
    CsaState state_;
    double sigma_ = 0.0;
};

class IdeController final : public Controller {
public:
    std::string name() const override { return "ide"; }
    std::unique_ptr<Controller> clone() const override { return std::make_unique<IdeController>(*this); }
    void reset(const Episode& episode, Rng& rng) override;
    ControlDecision decide(const Episode& episode, const Vector& observation, Rng& rng) override;
    void feedback(const Episode& episode, const ControlDecision& decision, const GenerationReport& report) override;

private:
    IdeState state_;
};

class JdeController final : public Controller {
public:
    std::string name() const override { return "jde"; }
    std::unique_ptr<Controller> clone() const override { return std::make_unique<JdeController>(*this); }
    void reset(const Episode& episode, Rng& rng) override;
    ControlDecision decide(const Episode& episode, const Vector& observation, Rng& rng) override;
    void feedback(const Episode& episode, const ControlDecision& decision, const GenerationReport& report) override;

private:
    JdeState state_;
    JdeDraw last_;
};

/// Learned policy. Deterministic mode acts with the network mean.
class PolicyController final : public Controller {
public:
    PolicyController(std::shared_ptr<const PolicyNet> net, ActionKind kind, bool stochastic = false);
    std::string name() const override { return "policy"; }
    std::unique_ptr<Controller> clone() const override { return std::make_unique<PolicyController>(*this); }
    ControlDecision decide(const Episode& episode, const Vector& observation, Rng& rng) override;
    std::optional<std::vector<double>> action_values(const ControlDecision& decision) const override {
        return decision.recorded_action;
    }

private:
    std::shared_ptr<const PolicyNet> net_;
    ActionSpec spec_;
    bool stochastic_;
};

/// Turns parameter values of `spec` into a decision for the episode.
ControlDecision decision_from_action(const std::vector<double>& values, const ActionSpec& spec,
                                     const Episode& episode, Rng& rng);

// ---------------------------------------------------------------------------
// Running episodes

struct StepRecord {
    Vector observation;
    std::vector<double> action;
    double reward = 0.0;
};

struct EpisodeResult {
    RunTrace trace;
    std::vector<StepRecord> steps;
    std::size_t evaluations = 0;
};

/// Full run: observe, decide, advance, until the budget is spent.
EpisodeResult run_episode(const EpisodeConfig& config, const BenchmarkFunction& fn, Controller& controller, Rng& rng);

/// Uniform choice of one function per episode.
const FunctionId& multi_function_sampler(const std::vector<FunctionId>& functions, Rng& rng);

/// Episodes over one function, or over a set sampled uniformly per episode.
class EvolutionEnvironment final : public Environment {
public:
    EvolutionEnvironment(EpisodeConfig config, std::vector<FunctionId> functions);

    std::size_t observation_dim() const override;
    const ActionSpec& action_spec() const override { return spec_; }
    std::size_t episode_length() const override { return config_.controlled_generations(); }
    Vector reset(Rng& rng) override;
    Step step(const std::vector<double>& action_values, Rng& rng) override;

    /// Function of every episode started so far, in order.
    const std::vector<FunctionId>& visited() const { return visited_; }
    const Episode* current() const { return episode_ ? &*episode_ : nullptr; }

private:
    EpisodeConfig config_;
    std::vector<FunctionId> functions_;
    ActionSpec spec_;
    std::optional<Episode> episode_;
    std::vector<FunctionId> visited_;
};

} // namespace rlea
