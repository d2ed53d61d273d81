#include <rlea/baselines.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rlea {

double expected_gaussian_norm(std::size_t dimension) {
    const auto d = static_cast<double>(dimension);
    return std::sqrt(d) * (1.0 - 1.0 / (4.0 * d) + 1.0 / (21.0 * d * d));
}

CsaState CsaState::initial(std::size_t dimension, double c, double d_sigma) {
    if (!(c >= 0.0 && c <= 1.0))
        throw std::invalid_argument("CSA cumulation factor must be in [0, 1]");
    if (!(d_sigma > 0.0))
        throw std::invalid_argument("CSA damping must be positive");
    return {Vector::Zero(static_cast<Eigen::Index>(dimension)), c, d_sigma, expected_gaussian_norm(dimension)};
}

double csa_multiplier(double path_norm, double expected_norm, double c, double d_sigma) {
    return std::exp(c / d_sigma * (path_norm / expected_norm - 1.0));
}

CsaUpdate csa_update(const CsaState& state, const Vector& xi_star, double sigma) {
    CsaUpdate out{state, sigma};
    out.state.path = (1.0 - state.c) * state.path + std::sqrt(state.c * (2.0 - state.c)) * xi_star;
    out.sigma = sigma * csa_multiplier(out.state.path.norm(), state.expected_norm, state.c, state.d_sigma);
    return out;
}

IdeState IdeState::initial(std::size_t population_size, Rng& rng) {
    IdeState s;
    s.F.resize(population_size);
    s.CR.resize(population_size);
    for (std::size_t i = 0; i < population_size; ++i) {
        s.F[i] = uniform(rng, 0.1, 1.0);
        s.CR[i] = uniform(rng, 0.0, 1.0);
    }
    s.F_archive = s.F;
    s.CR_archive = s.CR;
    return s;
}

namespace {

// Two distinct archive positions (equal only when the archive holds one value).
std::pair<std::size_t, std::size_t> draw_pair(Rng& rng, std::size_t n) {
    const std::size_t r1 = uniform_index(rng, n);
    if (n < 2)
        return {r1, r1};
    std::size_t r2 = uniform_index(rng, n - 1);
    if (r2 >= r1)
        ++r2;
    return {r1, r2};
}

} // namespace

DeParams ide_update(const IdeState& state, std::size_t best_index, Rng& rng) {
    if (state.F_archive.empty() || state.CR_archive.empty())
        throw std::logic_error("iDE archives are empty");
    const std::size_t np = state.F.size();
    if (best_index >= np)
        throw std::out_of_range("iDE best index");
    DeParams out;
    out.F.resize(np);
    out.CR.resize(np);
    for (std::size_t i = 0; i < np; ++i) {
        const auto [f1, f2] = draw_pair(rng, state.F_archive.size());
        const double f = state.F[best_index] + normal(rng, 0.0, kIdeNoiseStd) * (state.F_archive[f1] - state.F_archive[f2]);
        const auto [c1, c2] = draw_pair(rng, state.CR_archive.size());
        const double cr =
            state.CR[best_index] + normal(rng, 0.0, kIdeNoiseStd) * (state.CR_archive[c1] - state.CR_archive[c2]);
        out.F[i] = std::clamp(f, 0.0, 2.0);
        out.CR[i] = std::clamp(cr, 0.0, 1.0);
    }
    return out;
}

void ide_record(IdeState& state, const DeParams& used, const std::vector<bool>& success) {
    for (std::size_t i = 0; i < success.size(); ++i) {
        if (!success[i])
            continue;
        state.F[i] = used.F[i];
        state.CR[i] = used.CR[i];
        state.F_archive.push_back(used.F[i]);
        state.CR_archive.push_back(used.CR[i]);
    }
}

JdeDraw jde_update(const JdeState& state, Rng& rng) {
    JdeDraw d;
    d.resampled_F = uniform01(rng) < state.p;
    d.F = d.resampled_F ? uniform(rng, 0.1, 1.0) : state.best_F;
    d.resampled_CR = uniform01(rng) < state.p;
    d.CR = d.resampled_CR ? uniform01(rng) : state.best_CR;
    return d;
}

void jde_record(JdeState& state, const JdeDraw& used, bool improved_best) {
    if (!improved_best)
        return;
    state.best_F = used.F;
    state.best_CR = used.CR;
}

} // namespace rlea
