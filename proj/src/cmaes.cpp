#include <rlea/cmaes.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

namespace rlea {

CmaParameters CmaParameters::defaults(std::size_t dimension, std::size_t lambda) {
    if (lambda < 2)
        throw std::invalid_argument("CMA-ES needs lambda >= 2");
    const auto n = static_cast<double>(dimension);
    CmaParameters p;
    p.lambda = lambda;
    p.mu = lambda / 2;
    p.weights.resize(static_cast<Eigen::Index>(p.mu));
    for (std::size_t i = 0; i < p.mu; ++i)
        p.weights[i] = std::log((static_cast<double>(lambda) + 1.0) / 2.0) - std::log(static_cast<double>(i + 1));
    p.weights /= p.weights.sum();
    p.mueff = 1.0 / p.weights.squaredNorm();
    p.cc = (4.0 + p.mueff / n) / (n + 4.0 + 2.0 * p.mueff / n);
    p.c1 = 2.0 / ((n + 1.3) * (n + 1.3) + p.mueff);
    p.cmu = std::min(1.0 - p.c1, 2.0 * (p.mueff - 2.0 + 1.0 / p.mueff) / ((n + 2.0) * (n + 2.0) + p.mueff));
    p.cs = (p.mueff + 2.0) / (n + p.mueff + 5.0);
    return p;
}

CmaState CmaState::initial(const Vector& mean, double sigma) {
    const auto n = mean.size();
    CmaState s;
    s.mean = mean;
    s.cov = Matrix::Identity(n, n);
    s.sigma = sigma;
    s.pc = Vector::Zero(n);
    s.basis = Matrix::Identity(n, n);
    s.scales = Vector::Ones(n);
    return s;
}

CmaStep cma_generation(const CmaState& state, double sigma, Evaluator& eval, const CmaParameters& params, Rng& rng,
                       const CmaOptions& options) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("CMA-ES step-size must be positive and finite");
    const auto n = static_cast<Eigen::Index>(state.dimension());
    const auto lambda = params.lambda;
    const auto& fn = eval.function();

    std::vector<Vector> z(lambda), y(lambda), x(lambda);
    for (std::size_t k = 0; k < lambda; ++k) {
        z[k].resize(n);
        for (Eigen::Index j = 0; j < n; ++j)
            z[k][j] = normal(rng);
        y[k] = state.basis * state.scales.cwiseProduct(z[k]);
        x[k] = state.mean + sigma * y[k];
    }

    CmaStep step;
    step.evaluated.reserve(lambda);
    step.fitness.reserve(lambda);
    for (std::size_t k = 0; k < lambda; ++k) {
        step.evaluated.push_back(options.clip_for_evaluation ? fn.clip(x[k]) : x[k]);
        step.fitness.push_back(eval(step.evaluated.back()));
    }

    std::vector<std::size_t> order(lambda);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return step.fitness[a] < step.fitness[b]; });
    step.best_index = order.front();
    step.best_direction = z[order.front()];

    CmaState next = state;
    next.mean.setZero();
    Vector y_w = Vector::Zero(n);
    Matrix rank_mu = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < params.mu; ++i) {
        const auto& yi = y[order[i]];
        const double w = params.weights[static_cast<Eigen::Index>(i)];
        y_w += w * yi;
        rank_mu.noalias() += w * yi * yi.transpose();
    }
    next.mean = state.mean + sigma * y_w;
    next.pc = (1.0 - params.cc) * state.pc + std::sqrt(params.cc * (2.0 - params.cc) * params.mueff) * y_w;
    next.cov = (1.0 - params.c1 - params.cmu) * state.cov + params.c1 * next.pc * next.pc.transpose() +
               params.cmu * rank_mu;
    next.cov = 0.5 * (next.cov + next.cov.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Matrix> solver(next.cov);
    Vector eigenvalues = solver.eigenvalues();
    next.basis = solver.eigenvectors();
    if (solver.info() != Eigen::Success || eigenvalues.minCoeff() <= options.eigen_floor ||
        !eigenvalues.allFinite()) {
        step.repaired = true;
        std::cerr << "cma: covariance repaired at generation " << state.generation + 1 << '\n';
        if (!eigenvalues.allFinite() || solver.info() != Eigen::Success) {
            next.basis = state.basis;
            eigenvalues = state.scales.cwiseAbs2();
        }
        eigenvalues = eigenvalues.cwiseMax(options.eigen_floor);
        next.cov = next.basis * eigenvalues.asDiagonal() * next.basis.transpose();
    }
    next.scales = eigenvalues.cwiseSqrt();
    next.sigma = sigma;
    next.generation = state.generation + 1;
    step.state = std::move(next);
    return step;
}

} // namespace rlea
