#pragma once

#include <rlea/benchfn.hpp>
#include <rlea/rng.hpp>

#include <cstddef>
#include <vector>

namespace rlea {

/// DE population. Genotypes stay inside the function bounds and
/// fitness[i] is the value of genotypes[i].
struct Population {
    std::vector<Vector> genotypes;
    std::vector<double> fitness;
    std::size_t generation = 0;

    std::size_t size() const { return genotypes.size(); }
    std::size_t best_index() const;
    double best_fitness() const { return fitness[best_index()]; }
};

/// Per-individual scale factor and crossover rate, F in [0, 2], CR in [0, 1].
struct DeParams {
    std::vector<double> F;
    std::vector<double> CR;

    static DeParams broadcast(double F, double CR, std::size_t population_size);
    /// Throws std::invalid_argument if sizes or ranges are off.
    void validate(std::size_t population_size) const;
};

/// Result of one generation.
struct DeStep {
    Population population;
    /// success[i]: the trial vector replaced parent i.
    std::vector<bool> success;
    /// Trial vectors after crossover and clipping, before selection.
    std::vector<Vector> trials;
};

inline constexpr std::size_t kMinDePopulation = 4;

/// Uniform initial population; consumes `population_size` evaluations.
Population init_population(Evaluator& eval, std::size_t population_size, Rng& rng);

/// best/1 mutant: best + F (a - b).
Vector best1_mutant(const Vector& best, const Vector& a, const Vector& b, double F);

/// One best/1/bin generation with greedy one-to-one selection (ties go to the child).
/// On BudgetExhausted the exception propagates and `pop` is untouched.
DeStep de_generation(const Population& pop, const DeParams& params, Evaluator& eval, Rng& rng);

} // namespace rlea
