#pragma once

#include <rlea/benchfn.hpp>
#include <rlea/de.hpp>
#include <rlea/rng.hpp>

#include <cstddef>
#include <vector>

namespace rlea {

// ---------------------------------------------------------------------------
// Cumulative step-size adaptation

/// E||N(0, I_d)|| ~ sqrt(d) (1 - 1/(4d) + 1/(21 d^2)).
double expected_gaussian_norm(std::size_t dimension);

struct CsaState {
    Vector path;
    /// Cumulation factor in [0, 1]; 1/c is the memory of the path.
    double c = 0.3;
    double d_sigma = 1.0;
    double expected_norm = 1.0;

    static CsaState initial(std::size_t dimension, double c, double d_sigma = 1.0);
};

struct CsaUpdate {
    CsaState state;
    double sigma = 0.0;
};

/// p <- (1 - c) p + sqrt(c (2 - c)) xi,
/// sigma <- sigma exp(c / d_sigma (||p|| / E||N(0, I)|| - 1)).
CsaUpdate csa_update(const CsaState& state, const Vector& xi_star, double sigma);

/// The multiplicative factor csa_update applies to sigma for a given path norm.
double csa_multiplier(double path_norm, double expected_norm, double c, double d_sigma);

// ---------------------------------------------------------------------------
// iDE: per-individual parameters perturbed around the best individual's values.

struct IdeState {
    std::vector<double> F;
    std::vector<double> CR;
    /// Every F / CR that produced a successful trial so far (plus the initial values).
    std::vector<double> F_archive;
    std::vector<double> CR_archive;

    /// F ~ U(0.1, 1), CR ~ U(0, 1) per individual; both archives seeded with them.
    static IdeState initial(std::size_t population_size, Rng& rng);
};

inline constexpr double kIdeNoiseStd = 0.5;

/// F_i = F_best + N(0, 0.5) (F_r1 - F_r2) and likewise for CR, with r1 != r2 drawn
/// from the archives; results clipped into [0, 2] and [0, 1].
DeParams ide_update(const IdeState& state, std::size_t best_index, Rng& rng);

/// Stores the parameters of successful trials on their individuals and in the archives.
void ide_record(IdeState& state, const DeParams& used, const std::vector<bool>& success);

// ---------------------------------------------------------------------------
// jDE: keep the best F / CR so far, resample with probability 0.1.

inline constexpr double kJdeResampleProbability = 0.1;

struct JdeState {
    double best_F = 0.5;
    double best_CR = 0.9;
    double p = kJdeResampleProbability;
};

struct JdeDraw {
    double F = 0.0;
    double CR = 0.0;
    bool resampled_F = false;
    bool resampled_CR = false;
};

/// With probability p, F ~ U(0.1, 1) (else best_F); CR ~ U(0, 1) with its own coin (else best_CR).
JdeDraw jde_update(const JdeState& state, Rng& rng);

/// Adopts the generation's parameters when they improved the run's best fitness.
void jde_record(JdeState& state, const JdeDraw& used, bool improved_best);

} // namespace rlea
