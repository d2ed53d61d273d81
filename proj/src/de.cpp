#include <rlea/de.hpp>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rlea {

std::size_t Population::best_index() const {
    if (fitness.empty())
        throw std::logic_error("empty population");
    return static_cast<std::size_t>(std::min_element(fitness.begin(), fitness.end()) - fitness.begin());
}

DeParams DeParams::broadcast(double F, double CR, std::size_t population_size) {
    return {std::vector<double>(population_size, F), std::vector<double>(population_size, CR)};
}

void DeParams::validate(std::size_t population_size) const {
    if (F.size() != population_size || CR.size() != population_size)
        throw std::invalid_argument("DE parameters sized " + std::to_string(F.size()) + "/" + std::to_string(CR.size()) +
                                    " for population " + std::to_string(population_size));
    for (std::size_t i = 0; i < population_size; ++i) {
        if (!(F[i] >= 0.0 && F[i] <= 2.0))
            throw std::invalid_argument("F out of [0, 2]: " + std::to_string(F[i]));
        if (!(CR[i] >= 0.0 && CR[i] <= 1.0))
            throw std::invalid_argument("CR out of [0, 1]: " + std::to_string(CR[i]));
    }
}

Population init_population(Evaluator& eval, std::size_t population_size, Rng& rng) {
    if (population_size < kMinDePopulation)
        throw std::invalid_argument("DE needs at least 4 individuals, got " + std::to_string(population_size));
    const auto& fn = eval.function();
    const auto d = fn.dimension();
    Population pop;
    pop.genotypes.reserve(population_size);
    pop.fitness.reserve(population_size);
    for (std::size_t i = 0; i < population_size; ++i) {
        Vector x(d);
        for (std::size_t j = 0; j < d; ++j)
            x[j] = uniform(rng, fn.lower()[j], fn.upper()[j]);
        pop.genotypes.push_back(std::move(x));
    }
    for (const auto& x : pop.genotypes)
        pop.fitness.push_back(eval(x));
    return pop;
}

Vector best1_mutant(const Vector& best, const Vector& a, const Vector& b, double F) { return best + F * (a - b); }

namespace {

// Draws an index outside `taken`.
std::size_t draw_excluding(Rng& rng, std::size_t n, std::initializer_list<std::size_t> taken) {
    std::size_t free_count = n;
    std::vector<std::size_t> sorted(taken);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    free_count -= sorted.size();
    std::size_t k = uniform_index(rng, free_count);
    for (std::size_t t : sorted)
        if (k >= t)
            ++k;
    return k;
}

} // namespace

DeStep de_generation(const Population& pop, const DeParams& params, Evaluator& eval, Rng& rng) {
    const std::size_t np = pop.size();
    if (np < kMinDePopulation)
        throw std::invalid_argument("DE population too small");
    params.validate(np);

    const auto& fn = eval.function();
    const auto d = fn.dimension();
    const std::size_t best = pop.best_index();

    DeStep step;
    step.trials.reserve(np);
    for (std::size_t i = 0; i < np; ++i) {
        const std::size_t a = draw_excluding(rng, np, {i, best});
        const std::size_t b = draw_excluding(rng, np, {i, best, a});
        const Vector mutant = best1_mutant(pop.genotypes[best], pop.genotypes[a], pop.genotypes[b], params.F[i]);

        const std::size_t forced = uniform_index(rng, d);
        Vector trial = pop.genotypes[i];
        for (std::size_t j = 0; j < d; ++j)
            if (j == forced || uniform01(rng) < params.CR[i])
                trial[j] = mutant[j];
        step.trials.push_back(fn.clip(trial));
    }

    std::vector<double> trial_fitness(np);
    for (std::size_t i = 0; i < np; ++i)
        trial_fitness[i] = eval(step.trials[i]);

    step.population = pop;
    step.population.generation = pop.generation + 1;
    step.success.assign(np, false);
    for (std::size_t i = 0; i < np; ++i) {
        if (trial_fitness[i] <= pop.fitness[i]) {
            step.population.genotypes[i] = step.trials[i];
            step.population.fitness[i] = trial_fitness[i];
            step.success[i] = true;
        }
    }
    return step;
}

} // namespace rlea
