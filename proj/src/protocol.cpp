#include <rlea/protocol.hpp>

#include <omp.h>

#include <exception>

namespace rlea {

namespace {

EpisodeResult single_run(const EpisodeConfig& config, const Controller& prototype, const BenchmarkFunction& fn,
                         std::uint64_t seed) {
    auto controller = prototype.clone();
    Rng rng = make_rng(seed);
    return run_episode(config, fn, *controller, rng);
}

void finish(ProtocolResult& result, std::vector<EpisodeResult>& runs, const ProtocolOptions& options) {
    result.metrics.resize(runs.size());
    for (std::size_t r = 0; r < runs.size(); ++r)
        result.metrics[r] = run_metrics(runs[r], options.seed_base + r);
    if (options.keep_traces)
        result.runs = std::move(runs);
}

} // namespace

std::vector<double> ProtocolResult::values(Metric metric) const {
    std::vector<double> out;
    out.reserve(metrics.size());
    for (const auto& m : metrics)
        out.push_back(metric == Metric::Auc ? m.auc : m.best_of_run);
    return out;
}

RunMetrics run_metrics(const EpisodeResult& run, std::uint64_t seed) {
    return {seed, auc(run.trace.best_fitness_curve()), best_of_run(run.trace), run.evaluations};
}

ProtocolResult run_test_protocol_serial(const EpisodeConfig& config, const Controller& prototype,
                                        const BenchmarkFunction& fn, const ProtocolOptions& options) {
    ProtocolResult result;
    result.function = fn.id();
    std::vector<EpisodeResult> runs;
    runs.reserve(options.runs);
    for (std::size_t r = 0; r < options.runs; ++r)
        runs.push_back(single_run(config, prototype, fn, options.seed_base + r));
    finish(result, runs, options);
    return result;
}

ProtocolResult run_test_protocol(const EpisodeConfig& config, const Controller& prototype,
                                 const BenchmarkFunction& fn, const ProtocolOptions& options) {
    ProtocolResult result;
    result.function = fn.id();
    std::vector<EpisodeResult> runs(options.runs);
    std::exception_ptr failure;
    const auto n = static_cast<std::int64_t>(options.runs);

#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t r = 0; r < n; ++r) {
        try {
            runs[static_cast<std::size_t>(r)] =
                single_run(config, prototype, fn, options.seed_base + static_cast<std::uint64_t>(r));
        } catch (...) {
#pragma omp critical(rlea_protocol_failure)
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    finish(result, runs, options);
    return result;
}

} // namespace rlea
