#pragma once

#include <rlea/benchfn.hpp>
#include <rlea/rng.hpp>

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace rlea {

using Matrix = Eigen::MatrixXd;

/// Recombination weights and learning rates (Hansen's defaults).
struct CmaParameters {
    std::size_t lambda = 10;
    std::size_t mu = 5;
    Vector weights;
    double mueff = 0.0;
    double cc = 0.0;
    double c1 = 0.0;
    double cmu = 0.0;
    /// Default cumulation constant of the step-size path, used by CSA.
    double cs = 0.0;

    static CmaParameters defaults(std::size_t dimension, std::size_t lambda);
};

/// Mean, covariance and the last applied step-size. sigma itself is not adapted here.
struct CmaState {
    Vector mean;
    Matrix cov;
    double sigma = 0.5;
    Vector pc;
    std::size_t generation = 0;
    // cov = basis * diag(scales^2) * basis^T
    Matrix basis;
    Vector scales;

    static CmaState initial(const Vector& mean, double sigma);
    std::size_t dimension() const { return static_cast<std::size_t>(mean.size()); }
};

struct CmaOptions {
    /// Evaluate the box-clipped point while updating with the raw sample.
    bool clip_for_evaluation = true;
    double eigen_floor = 1e-20;
};

struct CmaStep {
    CmaState state;
    /// Points passed to the objective (clipped when the option is on).
    std::vector<Vector> evaluated;
    std::vector<double> fitness;
    std::size_t best_index = 0;
    /// Isotropic N(0, I) direction of the best offspring: C^{-1/2} (x_best - m) / sigma.
    Vector best_direction;
    /// The covariance needed eigenvalue flooring.
    bool repaired = false;
};

/// Samples lambda offspring around state.mean with the supplied sigma, evaluates them,
/// and applies weighted recombination plus rank-one and rank-mu covariance updates.
CmaStep cma_generation(const CmaState& state, double sigma, Evaluator& eval, const CmaParameters& params, Rng& rng,
                       const CmaOptions& options = {});

} // namespace rlea
