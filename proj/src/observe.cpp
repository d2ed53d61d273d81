#include <rlea/observe.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rlea {

namespace {

constexpr double kEps = 1e-5;

// Newest-first index of the generation `back` steps before the latest, if it exists.
bool history_index(const RunTrace& trace, std::size_t back, std::size_t& k) {
    if (back >= trace.size())
        return false;
    k = trace.size() - 1 - back;
    return true;
}

void require_non_empty(const RunTrace& trace) {
    if (trace.empty())
        throw std::invalid_argument("observation requested on an empty trace");
}

} // namespace

GenerationRecord summarize_population(const std::vector<Vector>& genotypes, const std::vector<double>& fitness) {
    if (genotypes.empty() || genotypes.size() != fitness.size())
        throw std::invalid_argument("summarize_population: empty or mismatched population");
    GenerationRecord r;
    const auto best = static_cast<std::size_t>(std::min_element(fitness.begin(), fitness.end()) - fitness.begin());
    r.best_fitness = fitness[best];
    r.best_genotype = genotypes[best];
    r.min_fitness = fitness[best];
    r.max_fitness = *std::max_element(fitness.begin(), fitness.end());
    r.genotype_max = genotypes.front();
    r.genotype_min = genotypes.front();
    for (const auto& x : genotypes) {
        r.genotype_max = r.genotype_max.cwiseMax(x);
        r.genotype_min = r.genotype_min.cwiseMin(x);
    }
    return r;
}

std::vector<double> RunTrace::best_fitness_curve() const {
    std::vector<double> curve;
    curve.reserve(generations.size());
    for (const auto& g : generations)
        curve.push_back(g.best_fitness);
    return curve;
}

std::size_t ObservationSpec::length(std::size_t action_dimension) const {
    std::size_t n = history + action_dimension;
    if (intra_delta_f)
        n += history;
    if (inter_delta_x)
        n += 2 * history;
    if (intra_delta_x)
        n += 2 * history;
    return n;
}

double inter_delta_f_value(double current, double previous) {
    const double diff = current - previous;
    return diff / (std::abs(diff) + std::abs(previous) + kEps);
}

double intra_delta_f_value(double max_fitness, double min_fitness, double best_fitness) {
    const double spread = std::abs(max_fitness - min_fitness);
    return spread / (spread + std::abs(best_fitness) + kEps);
}

std::vector<double> inter_delta_f(const RunTrace& trace, std::size_t history) {
    require_non_empty(trace);
    std::vector<double> out(history, 0.0);
    for (std::size_t back = 0; back < history; ++back) {
        std::size_t k;
        if (!history_index(trace, back, k) || k == 0)
            break;
        out[back] = inter_delta_f_value(trace[k].best_fitness, trace[k - 1].best_fitness);
    }
    return out;
}

std::vector<double> intra_delta_f(const RunTrace& trace, std::size_t history) {
    require_non_empty(trace);
    std::vector<double> out(history, 0.0);
    for (std::size_t back = 0; back < history; ++back) {
        std::size_t k;
        if (!history_index(trace, back, k))
            break;
        const auto& g = trace[k];
        out[back] = intra_delta_f_value(g.max_fitness, g.min_fitness, g.best_fitness);
    }
    return out;
}

std::vector<double> inter_delta_x(const RunTrace& trace, std::size_t history, const Vector& width) {
    require_non_empty(trace);
    std::vector<double> out(2 * history, 0.0);
    for (std::size_t back = 0; back < history; ++back) {
        std::size_t k;
        if (!history_index(trace, back, k) || k == 0)
            break;
        const Vector step = (trace[k].best_genotype - trace[k - 1].best_genotype).cwiseQuotient(width);
        out[2 * back] = step.minCoeff();
        out[2 * back + 1] = step.maxCoeff();
    }
    return out;
}

std::vector<double> intra_delta_x(const RunTrace& trace, std::size_t history, const Vector& width) {
    require_non_empty(trace);
    std::vector<double> out(2 * history, 0.0);
    for (std::size_t back = 0; back < history; ++back) {
        std::size_t k;
        if (!history_index(trace, back, k))
            break;
        const auto& g = trace[k];
        const Vector spread = (g.genotype_max - g.genotype_min).cwiseAbs().cwiseQuotient(width);
        out[2 * back] = spread.minCoeff();
        out[2 * back + 1] = spread.maxCoeff();
    }
    return out;
}

Vector build_observation(const RunTrace& trace, const ObservationSpec& spec, const std::vector<double>& previous_action,
                         const Vector& width) {
    if (spec.history == 0)
        throw std::invalid_argument("observation history must be at least 1");
    std::vector<double> parts = inter_delta_f(trace, spec.history);
    parts.insert(parts.end(), previous_action.begin(), previous_action.end());
    if (spec.intra_delta_f) {
        const auto block = intra_delta_f(trace, spec.history);
        parts.insert(parts.end(), block.begin(), block.end());
    }
    if (spec.inter_delta_x) {
        const auto block = inter_delta_x(trace, spec.history, width);
        parts.insert(parts.end(), block.begin(), block.end());
    }
    if (spec.intra_delta_x) {
        const auto block = intra_delta_x(trace, spec.history, width);
        parts.insert(parts.end(), block.begin(), block.end());
    }
    return Eigen::Map<const Vector>(parts.data(), static_cast<Eigen::Index>(parts.size()));
}

double reward(const RunTrace& trace) {
    if (trace.size() < 2)
        return 0.0;
    const auto k = trace.size() - 1;
    return -inter_delta_f_value(trace[k].best_fitness, trace[k - 1].best_fitness);
}

} // namespace rlea
