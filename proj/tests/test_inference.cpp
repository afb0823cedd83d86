#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "inference/inference.hpp"
#include "inference/stats.hpp"

using namespace depsgd;
using namespace depsgd::infer;

TEST_CASE("quantile helpers against reference values") {
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963985).epsilon(1e-8));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(normal_quantile(0.025) == doctest::Approx(-1.959963985).epsilon(1e-8));
    CHECK(chi_squared_quantile(0.95, 2) == doctest::Approx(5.991464547).epsilon(1e-8));
    CHECK(chi_squared_quantile(0.95, 1) == doctest::Approx(3.841458821).epsilon(1e-8));
    CHECK(chi_squared_cdf(chi_squared_quantile(0.9, 5), 5) == doctest::Approx(0.9).epsilon(1e-9));
}

TEST_CASE("accumulators track outer products and residuals") {
    CovAccumulators acc(2, 2);
    accumulate(acc, {1.0, 0.0}, 1.0, 0, false, {1.0, 0.0});  // perfect fit
    CHECK(acc.t == 1);
    CHECK(acc.rss == 0.0);
    const num::Mat sigma = acc.sigma_hat_all();
    CHECK(sigma(0, 0) == 1.0);
    CHECK(sigma(0, 1) == 0.0);
    CHECK(sigma(1, 1) == 0.0);
    CHECK(acc.n_exploit[0] == 1);

    accumulate(acc, {0.0, 1.0}, 2.0, 1, true, {0.0, 0.0});  // explored: arm matrix untouched
    CHECK(acc.n_exploit[1] == 0);
    CHECK(acc.s_arm[1](1, 1) == 0.0);
    CHECK(acc.rss == 4.0);
}

TEST_CASE("combined second-moment weights collapse at the endpoints") {
    CovAccumulators acc(2, 2);
    accumulate(acc, {1.0, 0.0}, 0.5, 0, false, {0.0, 0.0});
    accumulate(acc, {0.0, 2.0}, -1.0, 0, true, {0.0, 0.0});

    const num::Mat full = finalize_sigma_combined(acc, 0, 1.0, 2);  // Sigma_hat / K
    CHECK(full(0, 0) == doctest::Approx(0.25).epsilon(1e-15));      // (1/2)*(1/2)
    CHECK(full(1, 1) == doctest::Approx(1.0).epsilon(1e-15));       // (1/2)*(4/2)

    const num::Mat exploit_only = finalize_sigma_combined(acc, 0, 0.0, 2);  // S_0 / t
    CHECK(exploit_only(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(exploit_only(1, 1) == 0.0);

    CHECK_THROWS_AS(finalize_sigma_combined(acc, 1, 0.0, 2), std::invalid_argument);
}

TEST_CASE("single-arm full-exploration combined moment is the sample moment") {
    CovAccumulators acc(1, 2);
    accumulate(acc, {1.0, 0.0}, 0.0, 0, true, {0.0, 0.0});
    const num::Mat m = finalize_sigma_combined(acc, 0, 1.0, 1);
    CHECK(m(0, 0) == 1.0);
    CHECK(m(0, 1) == 0.0);
    CHECK(m(1, 1) == 0.0);
}

TEST_CASE("limiting variance formula values") {
    CHECK(limiting_variance_diag({1.0}, 2.0, 1.0)[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    // scaled eigenvalue exactly one: value reduces to sigma^2/lambda
    CHECK(limiting_variance_diag({0.5}, 2.0, 1.0)[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(limiting_variance_diag({1.0, 2.0}, 2.0, 0.0) == num::Vec{0.0, 0.0});
    CHECK_THROWS_AS(limiting_variance_diag({0.25}, 2.0, 1.0), DegenerateVarianceError);
}

TEST_CASE("whitening arithmetic, linearity, and round trip") {
    const num::Mat eye = num::Mat::identity(1);
    CHECK(whiten_and_test({1.0}, {1.0}, 100, eye, {2.0})[0] == 0.0);
    CHECK(whiten_and_test({1.0}, {0.0}, 4, eye, {4.0})[0] == doctest::Approx(1.0).epsilon(1e-15));
    const double s4 = whiten_and_test({1.0}, {0.0}, 4, eye, {4.0})[0];
    const double s16 = whiten_and_test({1.0}, {0.0}, 16, eye, {4.0})[0];
    CHECK(s16 == doctest::Approx(2.0 * s4).epsilon(1e-15));
    CHECK_THROWS_AS(whiten_and_test({1.0}, {0.0}, 4, eye, {0.0}), std::invalid_argument);

    // rotate, scale, then invert both steps
    num::Rng rng(55);
    num::Mat sym(3);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) sym(i, j) = sym(j, i) = rng.gaussian();
    const auto eig = num::sym_eigendecompose(sym);
    const num::Vec lambda_c = {0.7, 1.3, 2.9};
    const num::Vec beta_star = {0.1, -0.2, 0.3};
    const num::Vec beta_t = {0.15, -0.22, 0.27};
    const long t = 1000;
    const num::Vec stat = whiten_and_test(beta_t, beta_star, t, eig.u, lambda_c);
    num::Vec scaled(3);
    for (int j = 0; j < 3; ++j)
        scaled[static_cast<std::size_t>(j)] =
            stat[static_cast<std::size_t>(j)] * std::sqrt(lambda_c[static_cast<std::size_t>(j)]) /
            std::sqrt(static_cast<double>(t));
    const num::Vec back = num::matvec(eig.u, scaled);
    for (int j = 0; j < 3; ++j)
        CHECK(std::fabs(back[static_cast<std::size_t>(j)] + beta_star[static_cast<std::size_t>(j)] -
                        beta_t[static_cast<std::size_t>(j)]) < 1e-12);
}

TEST_CASE("sample second moment concentrates on the truth") {
    const int d = 5;
    const long n = 100000;
    CovAccumulators acc(1, d);
    num::Rng rng(314);
    const num::Vec beta_star = {0.5, -0.5, 0.0, 1.0, 0.25};
    for (long i = 0; i < n; ++i) {
        const num::Vec x = num::sample_gaussian_vector(rng, d);
        const double y = num::dot(x, beta_star) + rng.gaussian();
        // converged iterate: residuals carry only the noise
        accumulate(acc, x, y, 0, false, beta_star);
    }
    const num::Mat sigma = acc.sigma_hat_all();
    double frob = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double e = sigma(i, j) - (i == j ? 1.0 : 0.0);
            frob += e * e;
        }
    CHECK(std::sqrt(frob) <= 0.05);
    CHECK(std::fabs(acc.sigma_star_sq() - 1.0) <= 0.05);
}

TEST_CASE("degenerate coverage levels") {
    data::ProblemSpec spec = data::make_regression_spec({0.5, -0.5}, 1.0);
    spec.lambda_min = 1.0;
    spec.lambda_max = 1.5;
    const auto full = coverage_experiment(spec, data::CovariateProcess::iid_gaussian(2),
                                          data::NoiseProcess::iid_gaussian(1.0), 3.0, 20.0,
                                          sched::ExplorationSchedule::constant_pi(1.0), 500, 1.0, 3,
                                          num::Rng(2));
    CHECK(full.coverage_rect == 1.0);
    CHECK(full.coverage_ellipsoid == 1.0);
    const auto none = coverage_experiment(spec, data::CovariateProcess::iid_gaussian(2),
                                          data::NoiseProcess::iid_gaussian(1.0), 3.0, 20.0,
                                          sched::ExplorationSchedule::constant_pi(1.0), 500, 0.0, 3,
                                          num::Rng(2));
    CHECK(none.coverage_rect == 0.0);
    CHECK(none.coverage_ellipsoid == 0.0);
}

TEST_CASE("moderate-horizon coverage lands near the nominal level") {
    data::ProblemSpec spec = data::make_regression_spec({0.7, -0.4}, 1.0);
    spec.lambda_min = 1.0;
    spec.lambda_max = 1.5;
    const auto res = coverage_experiment(spec, data::CovariateProcess::iid_gaussian(2),
                                         data::NoiseProcess::iid_gaussian(1.0), 3.0, 100.0,
                                         sched::ExplorationSchedule::constant_pi(1.0), 20000, 0.95,
                                         60, num::Rng(7), 0, 0.0, 2);
    CHECK(res.coverage_rect > 0.85);
    CHECK(res.coverage_rect <= 1.0);
    CHECK(res.rows.size() == 60 * 2);
    // covered flag matches the recorded whitened value
    const double z = normal_quantile(0.975);
    for (const auto& row : res.rows) CHECK(row.covered == (std::fabs(row.whitened) <= z));
}
