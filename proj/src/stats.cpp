#include <rlea/stats.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rlea {

std::vector<double> best_so_far(const std::vector<double>& curve) {
    std::vector<double> out(curve.size());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < curve.size(); ++i)
        out[i] = best = std::min(best, curve[i]);
    return out;
}

double auc(const std::vector<double>& best_fitness_curve) {
    if (best_fitness_curve.empty())
        throw std::invalid_argument("auc of an empty curve");
    const std::vector<double> env = best_so_far(best_fitness_curve);
    double area = 0.0;
    for (std::size_t i = 1; i < env.size(); ++i)
        area += 0.5 * (env[i - 1] + env[i]);
    return area;
}

double best_of_run(const RunTrace& trace) {
    if (trace.empty())
        throw std::invalid_argument("best_of_run of an empty trace");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& g : trace.generations)
        best = std::min(best, g.min_fitness);
    return best;
}

double win_probability(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("win_probability needs non-empty samples");
    std::vector<double> sorted = b;
    std::sort(sorted.begin(), sorted.end());
    std::size_t wins = 0;
    for (double x : a)
        wins += static_cast<std::size_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x));
    return static_cast<double>(wins) / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

std::string to_string(Metric metric) { return metric == Metric::Auc ? "auc" : "best"; }

Metric parse_metric(const std::string& text) {
    if (text == "auc")
        return Metric::Auc;
    if (text == "best" || text == "best_of_run")
        return Metric::BestOfRun;
    throw std::invalid_argument("unknown metric '" + text + "'");
}

std::optional<double> win_ratio(const std::vector<std::optional<double>>& cells) {
    std::size_t wins = 0, losses = 0;
    for (const auto& c : cells) {
        if (!c)
            continue;
        if (*c > 0.5)
            ++wins;
        else if (*c < 0.5)
            ++losses;
    }
    if (wins + losses == 0)
        return std::nullopt;
    return static_cast<double>(wins) / static_cast<double>(wins + losses);
}

ComparisonMatrix build_comparison(const std::vector<VariantSamples>& variants, const VariantSamples& baseline,
                                  const std::vector<std::string>& columns, Metric metric) {
    if (baseline.samples.size() != columns.size())
        throw std::invalid_argument("baseline samples do not match the columns");
    ComparisonMatrix m;
    m.baseline = baseline.name;
    m.metric = metric;
    m.columns = columns;
    for (const auto& v : variants) {
        if (v.samples.size() != columns.size())
            throw std::invalid_argument("variant " + v.name + " samples do not match the columns");
        std::vector<std::optional<double>> row(columns.size());
        for (std::size_t c = 0; c < columns.size(); ++c)
            if (!v.samples[c].empty() && !baseline.samples[c].empty())
                row[c] = win_probability(v.samples[c], baseline.samples[c]);
        m.rows.push_back(v.name);
        m.ratios.push_back(win_ratio(row));
        m.cells.push_back(std::move(row));
    }
    return m;
}

namespace {

std::string fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace

std::string ComparisonMatrix::to_csv() const {
    std::ostringstream out;
    out << "variant";
    for (const auto& c : columns)
        out << ',' << c;
    out << ",ratio\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out << rows[r];
        for (const auto& cell : cells[r])
            out << ',' << (cell ? fixed6(*cell) : "n/a");
        out << ',' << (ratios[r] ? fixed6(*ratios[r]) : "n/a") << '\n';
    }
    return out.str();
}

std::string ComparisonMatrix::to_json() const {
    nlohmann::ordered_json j;
    j["baseline"] = baseline;
    j["metric"] = to_string(metric);
    j["columns"] = columns;
    j["rows"] = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        nlohmann::ordered_json row;
        row["variant"] = rows[r];
        auto cells_json = nlohmann::ordered_json::array();
        for (const auto& cell : cells[r])
            cells_json.push_back(cell ? nlohmann::ordered_json(std::stod(fixed6(*cell))) : nlohmann::ordered_json());
        row["cells"] = std::move(cells_json);
        row["ratio"] = ratios[r] ? nlohmann::ordered_json(*ratios[r]) : nlohmann::ordered_json("n/a");
        j["rows"].push_back(std::move(row));
    }
    return j.dump(2) + "\n";
}

} // namespace rlea
