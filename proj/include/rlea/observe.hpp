#pragma once

#include <rlea/benchfn.hpp>

#include <cstddef>
#include <vector>

namespace rlea {

/// What happened in one generation of a run.
struct GenerationRecord {
    /// Best fitness in the population (f*_k) and its genotype.
    double best_fitness = 0.0;
    Vector best_genotype;
    double max_fitness = 0.0;
    double min_fitness = 0.0;
    /// Per-dimension extremes over the population.
    Vector genotype_max;
    Vector genotype_min;
    /// Decoded parameters applied to reach this generation (empty for generation 0).
    std::vector<double> action;
    double reward = 0.0;
    /// Cumulative evaluations after this generation.
    std::size_t evaluations = 0;
};

/// Summarizes a population into a record (action and reward left empty).
GenerationRecord summarize_population(const std::vector<Vector>& genotypes, const std::vector<double>& fitness);

struct RunTrace {
    std::vector<GenerationRecord> generations;

    bool empty() const { return generations.empty(); }
    std::size_t size() const { return generations.size(); }
    const GenerationRecord& back() const { return generations.back(); }
    const GenerationRecord& operator[](std::size_t k) const { return generations[k]; }
    /// f*_k for every generation.
    std::vector<double> best_fitness_curve() const;
};

/// Which state metrics make up the policy input.
struct ObservationSpec {
    std::size_t history = 40;
    bool intra_delta_f = false;
    bool inter_delta_x = false;
    bool intra_delta_x = false;

    bool operator==(const ObservationSpec&) const = default;
    std::size_t length(std::size_t action_dimension) const;
};

/// Delta f^inter_k = (f*_k - f*_{k-1}) / (|f*_k - f*_{k-1}| + |f*_{k-1}| + 1e-5).
double inter_delta_f_value(double current, double previous);
/// Delta f^intra_k = |f^max_k - f^min_k| / (|f^max_k - f^min_k| + |f*_k| + 1e-5).
double intra_delta_f_value(double max_fitness, double min_fitness, double best_fitness);

/// History of the newest `history` values, newest first; generations that do not exist are 0.
std::vector<double> inter_delta_f(const RunTrace& trace, std::size_t history);
std::vector<double> intra_delta_f(const RunTrace& trace, std::size_t history);
/// (min, max) pairs over dimensions of (X*_k - X*_{k-1}) / width, newest first.
std::vector<double> inter_delta_x(const RunTrace& trace, std::size_t history, const Vector& width);
/// (min, max) pairs over dimensions of |X^k_max - X^k_min| / width, newest first.
std::vector<double> intra_delta_x(const RunTrace& trace, std::size_t history, const Vector& width);

/// [inter Delta f | previous action | intra Delta f? | inter Delta X? | intra Delta X?].
/// `previous_action` is already normalized into [0, 1].
Vector build_observation(const RunTrace& trace, const ObservationSpec& spec, const std::vector<double>& previous_action,
                         const Vector& width);

/// -Delta f^inter of the newest generation; 0 at generation 0.
double reward(const RunTrace& trace);

} // namespace rlea
