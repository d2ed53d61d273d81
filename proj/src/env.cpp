#include <rlea/env.hpp>

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rlea {

std::string to_string(Algorithm algorithm) { return algorithm == Algorithm::DE ? "de" : "cmaes"; }

Algorithm parse_algorithm(const std::string& text) {
    if (text == "de")
        return Algorithm::DE;
    if (text == "cmaes" || text == "cma-es" || text == "cma")
        return Algorithm::CMAES;
    throw std::invalid_argument("unknown algorithm '" + text + "'");
}

std::size_t EpisodeConfig::controlled_generations() const {
    return algorithm == Algorithm::DE ? generations - 1 : generations;
}

void EpisodeConfig::validate() const {
    if (generations < 2)
        throw std::invalid_argument("an episode needs at least two generations");
    if (algorithm == Algorithm::DE && population < kMinDePopulation)
        throw std::invalid_argument("DE needs a population of at least 4");
    if (algorithm == Algorithm::CMAES && population < 2)
        throw std::invalid_argument("CMA-ES needs at least 2 offspring");
    if (observation.history == 0)
        throw std::invalid_argument("observation history must be at least 1");
    const bool de_action = ActionSpec::make(action).is_de();
    if (de_action != (algorithm == Algorithm::DE))
        throw std::invalid_argument("action space " + to_string(action) + " does not fit " + to_string(algorithm));
    if (!(initial_sigma > 0.0))
        throw std::invalid_argument("initial sigma must be positive");
}

Episode::Episode(const EpisodeConfig& config, const BenchmarkFunction& fn, Rng& rng)
    : config_(config), fn_(&fn), eval_(fn, config.evaluation_budget()),
      best_so_far_(std::numeric_limits<double>::infinity()),
      cma_params_(CmaParameters::defaults(fn.dimension(), std::max<std::size_t>(config.population, 2))) {
    config_.validate();
    if (config_.algorithm == Algorithm::DE) {
        population_ = init_population(eval_, config_.population, rng);
        GenerationRecord r = summarize_population(population_->genotypes, population_->fitness);
        r.evaluations = eval_.budget().used();
        best_so_far_ = r.min_fitness;
        trace_.generations.push_back(std::move(r));
    } else {
        Vector mean(fn.dimension());
        for (std::size_t j = 0; j < fn.dimension(); ++j)
            mean[j] = uniform(rng, fn.lower()[j], fn.upper()[j]);
        cma_ = CmaState::initial(mean, config_.initial_sigma);
    }
}

bool Episode::done() const { return trace_.size() >= config_.generations || eval_.budget().remaining() == 0; }

const Population& Episode::population() const {
    if (!population_)
        throw std::logic_error("not a DE episode");
    return *population_;
}

const CmaState& Episode::cma() const {
    if (!cma_)
        throw std::logic_error("not a CMA-ES episode");
    return *cma_;
}

Vector Episode::observation(const std::vector<double>& previous_action) const {
    if (!trace_.empty())
        return build_observation(trace_, config_.observation, previous_action, fn_->width());
    const std::size_t n = config_.observation.length(previous_action.size());
    Vector obs = Vector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < previous_action.size(); ++i)
        obs[static_cast<Eigen::Index>(config_.observation.history + i)] = previous_action[i];
    return obs;
}

void Episode::record(GenerationRecord r) {
    r.evaluations = eval_.budget().used();
    trace_.generations.push_back(std::move(r));
    trace_.generations.back().reward = reward(trace_);
}

GenerationReport Episode::advance(const ControlDecision& decision, Rng& rng) {
    if (done())
        throw std::logic_error("episode already finished");
    GenerationReport report;
    const double previous_best = best_so_far_;
    try {
        if (population_) {
            DeStep step = de_generation(*population_, decision.de, eval_, rng);
            population_ = std::move(step.population);
            report.success = std::move(step.success);
            GenerationRecord r = summarize_population(population_->genotypes, population_->fitness);
            r.action = decision.recorded_action;
            record(std::move(r));
        } else {
            CmaOptions options;
            options.clip_for_evaluation = config_.clip_cma_evaluation;
            CmaStep step = cma_generation(*cma_, decision.sigma, eval_, cma_params_, rng, options);
            cma_ = std::move(step.state);
            report.best_direction = std::move(step.best_direction);
            report.sigma = decision.sigma;
            GenerationRecord r = summarize_population(step.evaluated, step.fitness);
            r.action = decision.recorded_action;
            record(std::move(r));
        }
    } catch (const BudgetExhausted&) {
        // Partial generation is dropped; done() now reports true.
        return report;
    }
    best_so_far_ = std::min(best_so_far_, trace_.back().min_fitness);
    report.improved_best = best_so_far_ < previous_best;
    report.reward = trace_.back().reward;
    return report;
}

// ---------------------------------------------------------------------------

ControlDecision FixedDeController::decide(const Episode& episode, const Vector&, Rng&) {
    return {DeParams::broadcast(F_, CR_, episode.config().population), 0.0, {F_, CR_}};
}

ControlDecision FixedSigmaController::decide(const Episode&, const Vector&, Rng&) {
    return {{}, sigma_, {sigma_}};
}

void CsaController::reset(const Episode& episode, Rng&) {
    const double c = c_ > 0.0 ? c_ : episode.cma_parameters().cs;
    state_ = CsaState::initial(episode.function().dimension(), c, d_sigma_);
    sigma_ = episode.config().initial_sigma;
}

ControlDecision CsaController::decide(const Episode&, const Vector&, Rng&) { return {{}, sigma_, {sigma_}}; }

void CsaController::feedback(const Episode&, const ControlDecision& decision, const GenerationReport& report) {
    if (report.best_direction.size() == 0)
        return;
    const CsaUpdate up = csa_update(state_, report.best_direction, decision.sigma);
    state_ = up.state;
    sigma_ = up.sigma;
}

namespace {

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

} // namespace

void IdeController::reset(const Episode& episode, Rng& rng) {
    state_ = IdeState::initial(episode.config().population, rng);
}

ControlDecision IdeController::decide(const Episode& episode, const Vector&, Rng& rng) {
    DeParams params = ide_update(state_, episode.population().best_index(), rng);
    std::vector<double> recorded{mean_of(params.F), mean_of(params.CR)};
    return {std::move(params), 0.0, std::move(recorded)};
}

void IdeController::feedback(const Episode&, const ControlDecision& decision, const GenerationReport& report) {
    ide_record(state_, decision.de, report.success);
}

void JdeController::reset(const Episode&, Rng&) { state_ = JdeState{}; }

ControlDecision JdeController::decide(const Episode& episode, const Vector&, Rng& rng) {
    last_ = jde_update(state_, rng);
    return {DeParams::broadcast(last_.F, last_.CR, episode.config().population), 0.0, {last_.F, last_.CR}};
}

void JdeController::feedback(const Episode&, const ControlDecision&, const GenerationReport& report) {
    jde_record(state_, last_, report.improved_best);
}

PolicyController::PolicyController(std::shared_ptr<const PolicyNet> net, ActionKind kind, bool stochastic)
    : net_(std::move(net)), spec_(ActionSpec::make(kind)), stochastic_(stochastic) {
    if (!net_)
        throw std::invalid_argument("policy controller without a network");
    if (net_->output_dim() != spec_.dimension())
        throw std::invalid_argument("policy output size does not match action space " + to_string(kind));
}

ControlDecision PolicyController::decide(const Episode& episode, const Vector& observation, Rng& rng) {
    const PolicyOutput out = forward(*net_, observation);
    const Action action = sample_action(out.mean, out.log_std, spec_, rng, stochastic_);
    return decision_from_action(action.values, spec_, episode, rng);
}

ControlDecision decision_from_action(const std::vector<double>& values, const ActionSpec& spec,
                                     const Episode& episode, Rng& rng) {
    ControlDecision d;
    d.recorded_action = values;
    if (spec.is_de())
        d.de = decode_de_params(values, spec, episode.config().population, rng);
    else
        d.sigma = std::clamp(values.at(0), spec.lower[0], spec.upper[0]);
    return d;
}

// ---------------------------------------------------------------------------

EpisodeResult run_episode(const EpisodeConfig& config, const BenchmarkFunction& fn, Controller& controller, Rng& rng) {
    Episode episode(config, fn, rng);
    controller.reset(episode, rng);
    const ActionSpec spec = ActionSpec::make(config.action);
    std::vector<double> previous = spec.normalize(spec.neutral());

    EpisodeResult result;
    while (!episode.done()) {
        StepRecord step;
        step.observation = episode.observation(previous);
        const ControlDecision decision = controller.decide(episode, step.observation, rng);
        const std::size_t before = episode.trace().size();
        const GenerationReport report = episode.advance(decision, rng);
        if (episode.trace().size() == before)
            break;
        controller.feedback(episode, decision, report);
        step.action = decision.recorded_action;
        step.reward = report.reward;
        result.steps.push_back(std::move(step));
        if (auto values = controller.action_values(decision); values && values->size() == spec.dimension())
            previous = spec.normalize(*values);
    }
    result.trace = episode.trace();
    result.evaluations = episode.evaluations();
    return result;
}

const FunctionId& multi_function_sampler(const std::vector<FunctionId>& functions, Rng& rng) {
    if (functions.empty())
        throw std::invalid_argument("cannot sample from an empty function set");
    return functions[uniform_index(rng, functions.size())];
}

EvolutionEnvironment::EvolutionEnvironment(EpisodeConfig config, std::vector<FunctionId> functions)
    : config_(std::move(config)), functions_(std::move(functions)), spec_(ActionSpec::make(config_.action)) {
    config_.validate();
    if (functions_.empty())
        throw std::invalid_argument("training needs at least one function");
    for (const auto& id : functions_)
        (void)find_function(id);
}

std::size_t EvolutionEnvironment::observation_dim() const { return config_.observation.length(spec_.dimension()); }

Vector EvolutionEnvironment::reset(Rng& rng) {
    const FunctionId& id = functions_.size() == 1 ? functions_.front() : multi_function_sampler(functions_, rng);
    visited_.push_back(id);
    episode_.emplace(config_, find_function(id), rng);
    return episode_->observation(spec_.normalize(spec_.neutral()));
}

Environment::Step EvolutionEnvironment::step(const std::vector<double>& action_values, Rng& rng) {
    if (!episode_ || episode_->done())
        throw std::logic_error("step() without an active episode");
    const ControlDecision decision = decision_from_action(action_values, spec_, *episode_, rng);
    const GenerationReport report = episode_->advance(decision, rng);
    Step out;
    out.reward = report.reward;
    out.done = episode_->done();
    out.observation = episode_->observation(spec_.normalize(action_values));
    return out;
}

} // namespace rlea
