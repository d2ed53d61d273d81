#include <rlea/baselines.hpp>

#include <doctest.h>

#include <cmath>

using namespace rlea;

TEST_CASE("expected gaussian norm approximation") {
    CHECK(expected_gaussian_norm(10) == doctest::Approx(std::sqrt(10.0) * (1 - 1 / 40.0 + 1 / 2100.0)));
    // Exact E||N(0, I_10)|| = sqrt(2) Gamma(5.5) / Gamma(5)
    const double exact = std::sqrt(2.0) * std::exp(std::lgamma(5.5) - std::lgamma(5.0));
    CHECK(expected_gaussian_norm(10) == doctest::Approx(exact).epsilon(1e-4));
}

TEST_CASE("csa keeps sigma when the path norm equals its expectation") {
    CsaState s = CsaState::initial(4, 1.0);
    Vector xi = Vector::Zero(4);
    xi(0) = s.expected_norm; // c = 1: p = xi
    const CsaUpdate u = csa_update(s, xi, 0.7);
    CHECK(u.sigma == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("csa path recurrence from zero") {
    CsaState s = CsaState::initial(3, 0.5);
    Vector v(3);
    v << 1.0, -2.0, 0.5;
    const CsaUpdate u = csa_update(s, v, 1.0);
    CHECK((u.state.path - std::sqrt(0.75) * v).norm() < 1e-15);
    CHECK(std::sqrt(0.75) == doctest::Approx(0.8660254));
}

TEST_CASE("csa doubles the expected norm into exp(c / d)") {
    CsaState s = CsaState::initial(5, 0.5);
    Vector xi = Vector::Zero(5);
    xi(2) = 2.0 * s.expected_norm / std::sqrt(0.75);
    const CsaUpdate u = csa_update(s, xi, 0.4);
    CHECK(u.sigma == doctest::Approx(0.4 * std::exp(0.5)).epsilon(1e-14));
    CHECK(csa_multiplier(2.0 * s.expected_norm, s.expected_norm, 0.5, 1.0) == doctest::Approx(std::exp(0.5)));
}

TEST_CASE("csa multiplier depends only on the norm ratio") {
    Rng rng = make_rng(2);
    for (int k = 0; k < 100; ++k) {
        CsaState s = CsaState::initial(6, uniform(rng, 0.05, 1.0), uniform(rng, 0.5, 2.0));
        for (auto& v : s.path)
            v = normal(rng);
        Vector xi(6);
        for (Eigen::Index j = 0; j < 6; ++j)
            xi(j) = normal(rng);
        const double sigma = uniform(rng, 0.01, 2.0);
        const CsaUpdate u = csa_update(s, xi, sigma);
        const double via_ratio = std::exp(s.c / s.d_sigma * (u.state.path.norm() / s.expected_norm - 1.0));
        CHECK(u.sigma / sigma == doctest::Approx(via_ratio).epsilon(1e-12));
        CHECK(csa_multiplier(u.state.path.norm(), s.expected_norm, s.c, s.d_sigma)
              == doctest::Approx(via_ratio).epsilon(1e-12));
    }
}

TEST_CASE("ide keeps F_best when the archive draws coincide") {
    Rng rng = make_rng(4);
    IdeState s = IdeState::initial(6, rng);
    s.F_archive.assign(5, 0.3);
    s.CR_archive.assign(5, 0.6);
    const DeParams p = ide_update(s, 2, rng);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(p.F[i] == s.F[2]);
        CHECK(p.CR[i] == s.CR[2]);
    }
}

TEST_CASE("ide noise has zero mean") {
    Rng rng = make_rng(5);
    IdeState s = IdeState::initial(1, rng);
    s.F = {1.0};
    s.CR = {0.5};
    s.F_archive = {0.2, 0.4, 0.6, 0.8};
    s.CR_archive = {0.1, 0.2, 0.3};
    const int n = 100000;
    double sum = 0.0, sq = 0.0;
    for (int k = 0; k < n; ++k) {
        const double f = ide_update(s, 0, rng).F[0];
        sum += f;
        sq += f * f;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sq / n - mean * mean) / n);
    CHECK(std::abs(mean - 1.0) < 3.0 * se);
}

TEST_CASE("ide outputs stay inside the parameter box") {
    Rng rng = make_rng(6);
    IdeState s = IdeState::initial(10, rng);
    s.F_archive = {0.0, 2.0};
    s.CR_archive = {0.0, 1.0};
    for (int k = 0; k < 1000; ++k) {
        const DeParams p = ide_update(s, k % 10, rng);
        CHECK_NOTHROW(p.validate(10));
    }
}

TEST_CASE("ide initial state and recording") {
    Rng rng = make_rng(7);
    IdeState s = IdeState::initial(10, rng);
    CHECK(s.F_archive.size() == 10);
    for (double f : s.F) {
        CHECK(f >= 0.1);
        CHECK(f < 1.0);
    }
    DeParams used = DeParams::broadcast(1.7, 0.25, 10);
    std::vector<bool> success(10, false);
    success[3] = true;
    ide_record(s, used, success);
    CHECK(s.F[3] == 1.7);
    CHECK(s.CR[3] == 0.25);
    CHECK(s.F[4] != 1.7);
    CHECK(s.F_archive.size() == 11);
    CHECK(s.F_archive.back() == 1.7);
}

TEST_CASE("jde branches and resample frequency") {
    Rng rng = make_rng(8);
    JdeState s;
    s.best_F = 0.37;
    s.best_CR = 0.81;
    int resampled = 0;
    const int n = 100000;
    for (int k = 0; k < n; ++k) {
        const JdeDraw d = jde_update(s, rng);
        if (d.resampled_F) {
            ++resampled;
            CHECK(d.F >= 0.1);
            CHECK(d.F < 1.0);
        } else {
            CHECK(d.F == 0.37);
        }
        if (d.resampled_CR) {
            CHECK(d.CR >= 0.0);
            CHECK(d.CR < 1.0);
        } else {
            CHECK(d.CR == 0.81);
        }
    }
    CHECK(std::abs(resampled / double(n) - 0.1) <= 0.01);
}

TEST_CASE("jde adopts parameters that improved the best") {
    JdeState s;
    jde_record(s, {0.9, 0.1, true, true}, false);
    CHECK(s.best_F == 0.5);
    jde_record(s, {0.9, 0.1, true, true}, true);
    CHECK(s.best_F == 0.9);
    CHECK(s.best_CR == 0.1);
}

TEST_CASE("baselines are reproducible") {
    auto trajectory = [] {
        Rng rng = make_rng(10);
        IdeState ide = IdeState::initial(10, rng);
        JdeState jde;
        std::vector<double> out;
        for (int g = 0; g < 50; ++g) {
            const DeParams p = ide_update(ide, g % 10, rng);
            std::vector<bool> success(10);
            for (std::size_t i = 0; i < 10; ++i)
                success[i] = uniform01(rng) < 0.3;
            ide_record(ide, p, success);
            const JdeDraw d = jde_update(jde, rng);
            jde_record(jde, d, uniform01(rng) < 0.2);
            out.insert(out.end(), p.F.begin(), p.F.end());
            out.push_back(d.F);
        }
        return out;
    };
    CHECK(trajectory() == trajectory());
}
