#pragma once

#include <rlea/env.hpp>
#include <rlea/stats.hpp>

#include <cstdint>
#include <vector>

namespace rlea {

struct RunMetrics {
    std::uint64_t seed = 0;
    double auc = 0.0;
    double best_of_run = 0.0;
    std::size_t evaluations = 0;
};

struct ProtocolOptions {
    std::size_t runs = 50;
    std::uint64_t seed_base = 0;
    /// Keep full traces (needed for trace export).
    bool keep_traces = true;
};

struct ProtocolResult {
    FunctionId function;
    std::vector<RunMetrics> metrics;  // ordered by run index
    std::vector<EpisodeResult> runs;  // empty unless keep_traces

    std::vector<double> values(Metric metric) const;
};

/// Metrics of a single finished run.
RunMetrics run_metrics(const EpisodeResult& run, std::uint64_t seed);

/// `runs` independent runs, run r seeded with seed_base + r. Runs are spread over
/// OpenMP threads, each with its own clone of `prototype`.
ProtocolResult run_test_protocol(const EpisodeConfig& config, const Controller& prototype,
                                 const BenchmarkFunction& fn, const ProtocolOptions& options = {});

/// Same contract, one run after the other. Reference for the parallel version.
ProtocolResult run_test_protocol_serial(const EpisodeConfig& config, const Controller& prototype,
                                        const BenchmarkFunction& fn, const ProtocolOptions& options = {});

} // namespace rlea
