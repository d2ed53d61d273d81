#pragma once

#include <rlea/observe.hpp>

#include <optional>
#include <string>
#include <vector>

namespace rlea {

/// Running minimum of a curve.
std::vector<double> best_so_far(const std::vector<double>& curve);

/// Composite trapezoid area (unit spacing) under the best-so-far envelope of `curve`.
/// A single point has area 0. Throws std::invalid_argument on an empty curve.
double auc(const std::vector<double>& best_fitness_curve);

/// Lowest fitness evaluated anywhere in the run.
double best_of_run(const RunTrace& trace);

/// p(A < B) = (1/n^2) sum_i sum_j [A_i < B_j]. Sorts B once, O(n log n).
double win_probability(const std::vector<double>& a, const std::vector<double>& b);

enum class Metric { Auc, BestOfRun };
std::string to_string(Metric metric);
Metric parse_metric(const std::string& text);

/// Rows are variants, columns are benchmark functions, cells p(row < baseline).
struct ComparisonMatrix {
    std::string baseline;
    Metric metric = Metric::Auc;
    std::vector<std::string> rows;
    std::vector<std::string> columns;
    std::vector<std::vector<std::optional<double>>> cells;
    /// cells > 0.5 over cells != 0.5 (absent cells excluded); empty when nothing is decided.
    std::vector<std::optional<double>> ratios;

    std::string to_csv() const;
    std::string to_json() const;
};

/// Metric samples for one variant; samples[c] empty means "not evaluated".
struct VariantSamples {
    std::string name;
    std::vector<std::vector<double>> samples;
};

ComparisonMatrix build_comparison(const std::vector<VariantSamples>& variants, const VariantSamples& baseline,
                                  const std::vector<std::string>& columns, Metric metric);

/// wins / (wins + losses) with 0.5 as the neutral value.
std::optional<double> win_ratio(const std::vector<std::optional<double>>& cells);

} // namespace rlea
