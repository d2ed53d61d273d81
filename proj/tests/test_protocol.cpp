#include <rlea/protocol.hpp>

#include <doctest.h>

#include <omp.h>

using namespace rlea;

namespace {

EpisodeConfig config_for(Algorithm a) {
    EpisodeConfig c;
    c.algorithm = a;
    c.action = a == Algorithm::DE ? ActionKind::DeUniform : ActionKind::CmaSigma;
    return c;
}

void check_same(const ProtocolResult& a, const ProtocolResult& b) {
    REQUIRE(a.metrics.size() == b.metrics.size());
    for (std::size_t r = 0; r < a.metrics.size(); ++r) {
        CHECK(a.metrics[r].seed == b.metrics[r].seed);
        CHECK(a.metrics[r].auc == b.metrics[r].auc);
        CHECK(a.metrics[r].best_of_run == b.metrics[r].best_of_run);
    }
}

} // namespace

TEST_CASE("50 runs of 500 evaluations each") {
    const auto& fn = find_function("Rastrigin", 10);
    ProtocolOptions opts;
    opts.seed_base = 100;
    for (auto alg : {Algorithm::DE, Algorithm::CMAES}) {
        std::unique_ptr<Controller> c;
        if (alg == Algorithm::DE)
            c = std::make_unique<JdeController>();
        else
            c = std::make_unique<CsaController>();
        const ProtocolResult r = run_test_protocol(config_for(alg), *c, fn, opts);
        CHECK(r.function == FunctionId{"Rastrigin", 10});
        REQUIRE(r.metrics.size() == 50);
        REQUIRE(r.runs.size() == 50);
        for (std::size_t i = 0; i < 50; ++i) {
            CHECK(r.metrics[i].evaluations == 500);
            CHECK(r.metrics[i].seed == 100 + i);
            CHECK(r.runs[i].trace.size() == 50);
            CHECK(r.metrics[i].auc == auc(r.runs[i].trace.best_fitness_curve()));
            CHECK(r.metrics[i].best_of_run == best_of_run(r.runs[i].trace));
        }
        CHECK(r.values(Metric::Auc).size() == 50);
    }
}

TEST_CASE("parallel protocol equals the serial reference for any thread count") {
    const auto& fn = find_function("Ellipsoid", 10);
    Rng init = make_rng(1);
    auto net = std::make_shared<PolicyNet>(PolicyNet::make(44, {50, 50}, 4, Activation::Relu, init));
    const PolicyController stochastic(net, ActionKind::DeUniform, true);
    const IdeController ide;
    for (const Controller* c : {static_cast<const Controller*>(&stochastic), static_cast<const Controller*>(&ide)}) {
        const ProtocolResult serial = run_test_protocol_serial(config_for(Algorithm::DE), *c, fn);
        for (int threads : {1, 3, 8}) {
            omp_set_num_threads(threads);
            check_same(serial, run_test_protocol(config_for(Algorithm::DE), *c, fn));
        }
    }
}

TEST_CASE("the same seed base reproduces the metric vectors") {
    const auto& fn = find_function("Katsuura", 10);
    const FixedSigmaController fixed(0.5);
    ProtocolOptions opts;
    opts.seed_base = 7;
    opts.keep_traces = false;
    const ProtocolResult a = run_test_protocol(config_for(Algorithm::CMAES), fixed, fn, opts);
    const ProtocolResult b = run_test_protocol(config_for(Algorithm::CMAES), fixed, fn, opts);
    check_same(a, b);
    CHECK(a.runs.empty());
    opts.seed_base = 8;
    const ProtocolResult c = run_test_protocol(config_for(Algorithm::CMAES), fixed, fn, opts);
    CHECK(c.metrics[0].auc == a.metrics[1].auc);
}
