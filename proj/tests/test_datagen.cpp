#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "datagen/processes.hpp"

using namespace depsgd;
using namespace depsgd::data;

TEST_CASE("sphere drift direction normalizes and handles zero") {
    const num::Vec dir = sphere_drift_direction({3.0, 4.0});
    CHECK(dir[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(dir[1] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(num::norm2(dir) == doctest::Approx(1.0).epsilon(1e-12));
    const num::Vec zero = sphere_drift_direction({0.0, 0.0});
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 0.0);
}

TEST_CASE("dependent-sign drift arithmetic") {
    // sign(0.5) * min(0.5, 1) * sign(-2) = -0.5; an explicit +1 coin and a
    // zeroed innovation leave exactly the drift
    CHECK(dependent_sign_drift(0.5, -2.0) == -0.5);
    CHECK(dependent_sign_drift(-3.0, 1.5) == -1.0);  // magnitude clipped at 1
    CHECK(dependent_sign_drift(0.5, 0.0) == 0.0);
    // the two coin branches cancel exactly
    const double d = dependent_sign_drift(0.7, 1.0);
    CHECK((+1.0) * d + (-1.0) * d == 0.0);
}

TEST_CASE("iid gaussian covariates have identity covariance") {
    auto proc = CovariateProcess::iid_gaussian(2);
    num::Rng rng(11);
    const int n = 100000;
    double s11 = 0, s22 = 0, s12 = 0;
    for (int i = 0; i < n; ++i) {
        const num::Vec x = proc.next(rng);
        s11 += x[0] * x[0];
        s22 += x[1] * x[1];
        s12 += x[0] * x[1];
    }
    CHECK(std::fabs(s11 / n - 1.0) < 0.05);
    CHECK(std::fabs(s22 / n - 1.0) < 0.05);
    CHECK(std::fabs(s12 / n) < 0.05);
}

TEST_CASE("sphere-ar innovations are conditionally centered") {
    // run a few steps to get a generic history, then resample only the
    // innovation from independent substreams
    auto proc = CovariateProcess::sphere_ar(3);
    num::Rng rng(21);
    for (int i = 0; i < 5; ++i) proc.next(rng);

    num::Rng root(77);
    const int n = 40000;
    double mean[3] = {0, 0, 0};
    for (int i = 0; i < n; ++i) {
        CovariateProcess branch = proc;  // frozen history
        num::Rng sub = root.substream(static_cast<std::uint64_t>(i), "mc");
        const num::Vec x = branch.next(sub);
        for (int j = 0; j < 3; ++j) mean[j] += x[static_cast<std::size_t>(j)];
    }
    for (double m : mean) CHECK(std::fabs(m / n) < 0.03);
}

TEST_CASE("sphere-ar drift norm is one away from the origin") {
    auto proc = CovariateProcess::sphere_ar(4);
    num::Rng rng(3);
    num::Vec prev = proc.next(rng);
    for (int i = 0; i < 50; ++i) {
        CHECK(num::norm2(sphere_drift_direction(prev)) == doctest::Approx(1.0).epsilon(1e-12));
        prev = proc.next(rng);
    }
}

TEST_CASE("unit-sphere initialization draws a unit first covariate") {
    auto proc = CovariateProcess::sphere_ar(6, CovariateProcess::Init::UnitSphere);
    num::Rng rng(44);
    const num::Vec x0 = proc.next(rng);
    CHECK(num::norm2(x0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("weighted-history keeps a bounded window") {
    auto proc = CovariateProcess::weighted_history(2, 8);
    num::Rng rng(5);
    for (int i = 0; i < 100; ++i) proc.next(rng);
    CHECK(proc.history.size() <= 8);
}

TEST_CASE("weighted-history innovations are conditionally centered") {
    auto proc = CovariateProcess::weighted_history(3, 8);
    num::Rng rng(9);
    for (int i = 0; i < 12; ++i) proc.next(rng);

    num::Rng root(31);
    const int n = 40000;
    double mean[3] = {0, 0, 0};
    for (int i = 0; i < n; ++i) {
        CovariateProcess branch = proc;
        num::Rng sub = root.substream(static_cast<std::uint64_t>(i), "mc");
        const num::Vec x = branch.next(sub);
        for (int j = 0; j < 3; ++j) mean[j] += x[static_cast<std::size_t>(j)];
    }
    for (double m : mean) CHECK(std::fabs(m / n) < 0.03);
}

TEST_CASE("correlated gaussian matches the requested equicorrelation") {
    auto proc = CovariateProcess::correlated_gaussian(2, 0.5);
    num::Rng rng(13);
    const int n = 100000;
    double s11 = 0, s22 = 0, s12 = 0;
    for (int i = 0; i < n; ++i) {
        const num::Vec x = proc.next(rng);
        s11 += x[0] * x[0];
        s22 += x[1] * x[1];
        s12 += x[0] * x[1];
    }
    CHECK(std::fabs(s11 / n - 1.0) < 0.05);
    CHECK(std::fabs(s22 / n - 1.0) < 0.05);
    CHECK(std::fabs(s12 / n - 0.5) < 0.05);
}

TEST_CASE("signed-levels covariates take only the level values") {
    auto proc = CovariateProcess::signed_levels(3, {1.0, 2.0});
    num::Rng rng(17);
    double mean = 0, second = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const num::Vec x = proc.next(rng);
        for (double v : x) {
            const double a = std::fabs(v);
            REQUIRE((a == 1.0 || a == 2.0));
            mean += v;
            second += v * v;
        }
    }
    CHECK(std::fabs(mean / (3.0 * n)) < 0.03);
    CHECK(std::fabs(second / (3.0 * n) - 2.5) < 0.05);
}

TEST_CASE("iid gaussian noise has the requested variance") {
    auto noise = NoiseProcess::iid_gaussian(1.0);
    num::Rng rng(23);
    const num::Vec x = {1.0};
    double s2 = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double xi = noise.next(rng, x);
        s2 += xi * xi;
    }
    CHECK(std::fabs(s2 / n - 1.0) < 0.05);
}

TEST_CASE("dependent-sign noise uses the delayed covariate coordinate") {
    auto noise = NoiseProcess::dependent_sign(1.0);
    num::Rng rng(29);
    double s2 = 0;
    const int n = 100000;
    num::Vec x = {1.0, 0.0};
    for (int i = 0; i < n; ++i) {
        const double xi = noise.next(rng, x);
        CHECK(std::isfinite(xi));
        s2 += xi * xi;
    }
    // stationary second moment is sigma^2 + E[min(xi^2,1)] > 1
    CHECK(s2 / n > 1.2);
    CHECK(s2 / n < 2.0);
}

TEST_CASE("covariate and noise streams are reproducible from the seed") {
    for (int variant = 0; variant < 2; ++variant) {
        auto make_cov = [&] {
            return variant == 0 ? CovariateProcess::sphere_ar(3)
                                : CovariateProcess::weighted_history(3, 4);
        };
        auto a = make_cov();
        auto b = make_cov();
        num::Rng ra(101), rb(101);
        auto na = NoiseProcess::dependent_sign(0.7);
        auto nb = NoiseProcess::dependent_sign(0.7);
        for (int i = 0; i < 200; ++i) {
            const num::Vec xa = a.next(ra);
            const num::Vec xb = b.next(rb);
            REQUIRE(xa == xb);
            REQUIRE(na.next(ra, xa) == nb.next(rb, xb));
        }
    }
}

TEST_CASE("regression observation arithmetic") {
    ProblemSpec spec = make_regression_spec({1.0, 0.0}, 1.0);
    CHECK(emit_regression_obs(spec, {2.0, 3.0}, 0.0) == 2.0);

    ProblemSpec zero = make_regression_spec({0.0, 0.0}, 1.0);
    CHECK(emit_regression_obs(zero, {5.0, -1.0}, 0.25) == 0.25);

    ProblemSpec ones = make_regression_spec({1.0, 1.0}, 1.0);
    CHECK(emit_regression_obs(ones, {1.0, -1.0}, 0.5) == 0.5);
}

TEST_CASE("bandit rewards check the arm index and mirror equal arms") {
    ProblemSpec spec;
    spec.d = 2;
    spec.arms = {{1.0, 0.0}, {1.0, 0.0}};
    spec.sigma = 1.0;
    const num::Vec x = {2.0, 3.0};
    CHECK(emit_bandit_reward(spec, x, 0, 0.5) == emit_bandit_reward(spec, x, 1, 0.5));
    CHECK(emit_bandit_reward(spec, x, 0, 0.0) == 2.0);
    CHECK_THROWS_AS(emit_bandit_reward(spec, x, 2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(emit_bandit_reward(spec, x, -1, 0.0), std::invalid_argument);
}

TEST_CASE("problem spec invariants") {
    ProblemSpec spec;
    spec.d = 3;
    spec.arms = {{1.0, 0.0, 0.0}};
    spec.sparsity = 2;
    spec.support = std::vector<int>{0};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);  // |S*| != s
    spec.support = std::vector<int>{0, 2};
    CHECK_NOTHROW(spec.validate());
    spec.h = -1.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
