#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sgd/sparse.hpp"

using namespace depsgd;
using namespace depsgd::sgd;

namespace {

data::ProblemSpec sparse_spec(int d, std::vector<int> support, std::vector<double> values,
                              double sigma) {
    num::Vec beta(static_cast<std::size_t>(d), 0.0);
    for (std::size_t i = 0; i < support.size(); ++i)
        beta[static_cast<std::size_t>(support[i])] = values[i];
    data::ProblemSpec spec = data::make_regression_spec(std::move(beta), sigma);
    spec.sparsity = static_cast<int>(support.size());
    spec.support = std::move(support);
    spec.lambda_min = 1.0;
    spec.lambda_max = 1.5;
    return spec;
}

// brute-force scan used as the oracle for the first update time
long smallest_tau(double threshold) {
    long tau = 3;
    while (static_cast<double>(tau) / std::log(static_cast<double>(tau)) < threshold) ++tau;
    return tau;
}

}  // namespace

TEST_CASE("hard threshold keeps exactly the supported coordinates") {
    const num::Vec v = {1.0, 2.0, 3.0};
    CHECK(hard_threshold(v, SupportSet(std::vector<int>{0, 2})) == num::Vec{1.0, 0.0, 3.0});
    CHECK(hard_threshold(v, SupportSet(std::vector<int>{})) == num::Vec{0.0, 0.0, 0.0});
    CHECK(hard_threshold(v, SupportSet(std::vector<int>{0, 1, 2})) == v);
}

TEST_CASE("one projected step matches hand arithmetic and fills G") {
    SparseSgdState state;
    state.beta = {0.0, 0.0, 0.0};
    state.support = SupportSet(std::vector<int>{0});
    state.g_window.assign(3, 0.0);
    state.g_cum.assign(3, 0.0);
    sparse_sgd_step(state, {1.0, 2.0, 3.0}, 1.0, 0.5);
    // residual = -1, g = (-1,-2,-3), projected update keeps coordinate 0
    CHECK(state.beta == num::Vec{0.5, 0.0, 0.0});
    CHECK(state.g_cum == num::Vec{-1.0, -2.0, -3.0});
    CHECK(state.g_window == state.g_cum);
    CHECK(state.t == 1);
}

TEST_CASE("zero stepsize still accumulates the gradient statistic") {
    SparseSgdState state;
    state.beta = {0.0, 0.0};
    state.support = SupportSet(std::vector<int>{0});
    state.g_window.assign(2, 0.0);
    state.g_cum.assign(2, 0.0);
    sparse_sgd_step(state, {1.0, 1.0}, 2.0, 0.0);
    CHECK(state.beta == num::Vec{0.0, 0.0});
    CHECK(state.g_cum == num::Vec{-2.0, -2.0});
}

TEST_CASE("zero residual leaves both the iterate and G untouched") {
    SparseSgdState state;
    state.beta = {1.0, 0.0};
    state.support = SupportSet(std::vector<int>{0});
    state.g_window.assign(2, 0.0);
    state.g_cum.assign(2, 0.0);
    sparse_sgd_step(state, {2.0, 5.0}, 2.0, 0.3);  // x.beta = 2 = y
    CHECK(state.beta == num::Vec{1.0, 0.0});
    CHECK(state.g_cum == num::Vec{0.0, 0.0});
}

TEST_CASE("support addition picks the largest off-support entry") {
    CHECK(select_support_addition({5.0, -7.0, 2.0}, SupportSet(std::vector<int>{0})) == 1);
    CHECK(select_support_addition({0.0, 0.0, 0.0, 0.0}, SupportSet(std::vector<int>{2})) == 0);  // tie-break
    CHECK(select_support_addition({9.0, 1.0, -3.0}, SupportSet(std::vector<int>{0, 1})) == 2);   // singleton
    CHECK_THROWS_AS(select_support_addition({1.0, 2.0}, SupportSet(std::vector<int>{0, 1})), std::invalid_argument);
}

TEST_CASE("gradient statistic is additive across a window split") {
    SparseSgdState state;
    state.beta = {0.1, 0.0, 0.0};
    state.support = SupportSet(std::vector<int>{0});
    state.g_window.assign(3, 0.0);
    state.g_cum.assign(3, 0.0);
    num::Rng rng(12);
    num::Vec first_half;
    for (int t = 0; t < 200; ++t) {
        if (t == 100) {
            first_half = state.g_cum;
            std::fill(state.g_window.begin(), state.g_window.end(), 0.0);
        }
        const num::Vec x = num::sample_gaussian_vector(rng, 3);
        sparse_sgd_step(state, x, rng.gaussian(), 0.01);
    }
    for (int j = 0; j < 3; ++j) {
        const double total = state.g_cum[static_cast<std::size_t>(j)];
        const double split = first_half[static_cast<std::size_t>(j)] +
                             state.g_window[static_cast<std::size_t>(j)];
        CHECK(std::fabs(total - split) <= 1e-9 * std::max(1.0, std::fabs(total)));
    }
}

TEST_CASE("first oracle update time matches the brute-force scan") {
    // d=8, one missing unit coordinate, unit noise scale and curvature
    data::ProblemSpec spec = sparse_spec(8, {0, 3}, {2.0, 1.0}, 1.0);
    const auto times = oracle_update_times(spec, {0}, UpdateWindow::Cumulative, 1.0, 5.0);
    REQUIRE(times.size() == 1);
    const double threshold = std::log(16.0);  // s_plus * log(2d/s_plus) with everything else 1
    CHECK(times[0] == smallest_tau(threshold));
    // the first satisfied point stays satisfied
    const double t0 = static_cast<double>(times[0]);
    CHECK(t0 / std::log(t0) >= threshold);
    if (times[0] > 3) {
        const double tm = static_cast<double>(times[0] - 1);
        CHECK(tm / std::log(tm) < threshold);
    }
}

TEST_CASE("covered support needs no updates") {
    data::ProblemSpec spec = sparse_spec(6, {1, 4}, {1.0, -1.0}, 1.0);
    CHECK(oracle_update_times(spec, {1, 4}, UpdateWindow::Local, 1.0, 5.0).empty());
    CHECK(oracle_update_times(spec, {0, 1, 4}, UpdateWindow::Cumulative, 1.0, 5.0).empty());
}

TEST_CASE("larger schedule constant never shrinks the update times") {
    data::ProblemSpec spec = sparse_spec(16, {2, 5, 9}, {3.0, 1.0, 0.5}, 1.0);
    for (auto window : {UpdateWindow::Local, UpdateWindow::Cumulative}) {
        const auto base = oracle_update_times(spec, {2}, window, 1.0, 5.0);
        const auto doubled = oracle_update_times(spec, {2}, window, 2.0, 5.0);
        REQUIRE(base.size() == doubled.size());
        for (std::size_t i = 0; i < base.size(); ++i) CHECK(doubled[i] >= base[i]);
        for (std::size_t i = 1; i < base.size(); ++i) CHECK(base[i] > base[i - 1]);
    }
}

TEST_CASE("heuristic trigger compares the peak against the median") {
    SparseSgdState state;
    state.beta.assign(5, 0.0);
    state.support = SupportSet(std::vector<int>{0});
    state.g_window.assign(5, 0.0);
    state.g_cum = {0.0, 100.0, 1.0, 1.0, 1.0};
    state.t = 2000;
    state.last_update_t = 0;
    CHECK(heuristic_update_trigger(state, 10.0, 1000, true));

    state.g_cum = {0.0, 1.0, 1.0, 1.0, 1.0};  // all equal
    CHECK_FALSE(heuristic_update_trigger(state, 10.0, 1000, true));

    state.g_cum = {0.0, 100.0, 1.0, 1.0, 1.0};
    state.last_update_t = 1500;  // inside the refractory gap
    CHECK_FALSE(heuristic_update_trigger(state, 10.0, 1000, true));

    state.g_cum.assign(5, 0.0);  // no signal at all
    state.last_update_t = 0;
    CHECK_FALSE(heuristic_update_trigger(state, 10.0, 1000, true));
}

TEST_CASE("fixed support on the truth decays like the parametric rate") {
    data::ProblemSpec spec = sparse_spec(10, {1, 6}, {1.0, -2.0}, 1.0);
    RunSparseOptions opts;
    opts.mode = SparseMode::FixedSupport;
    opts.initial_support = {1, 6};
    const auto res = run_sparse(spec, data::CovariateProcess::iid_gaussian(10),
                                data::NoiseProcess::iid_gaussian(1.0), 3.0, 30.0, 20000,
                                num::Rng(4242), opts);
    const double slope = fit_loglog_slope(res.traj, 500, 20000, "err_sq");
    CHECK(slope < -0.6);
    CHECK(res.final_support == std::vector<int>{1, 6});
    CHECK(res.update_log.empty());
}

TEST_CASE("off-support error is exactly the missing signal mass") {
    data::ProblemSpec spec = sparse_spec(6, {1, 4}, {2.0, 0.75}, 1.0);
    RunSparseOptions opts;
    opts.mode = SparseMode::FixedSupport;
    opts.initial_support = {1};  // coordinate 4 stays missing
    const auto res = run_sparse(spec, data::CovariateProcess::iid_gaussian(6),
                                data::NoiseProcess::iid_gaussian(1.0), 3.0, 30.0, 3000,
                                num::Rng(9), opts);
    const double expected = 0.75 * 0.75;
    for (std::size_t r = 0; r < res.traj.rows.size(); ++r)
        CHECK(res.traj.value(r, "err_sq_off") == expected);
}

TEST_CASE("support only grows and the iterate stays on it") {
    data::ProblemSpec spec = sparse_spec(12, {0, 5, 9}, {3.0, 2.0, 1.0}, 0.5);
    RunSparseOptions opts;
    opts.mode = SparseMode::Heuristic;
    opts.initial_support = {0};
    opts.min_gap = 200;
    opts.rho = 5.0;
    const auto res = run_sparse(spec, data::CovariateProcess::iid_gaussian(12),
                                data::NoiseProcess::iid_gaussian(0.5), 3.0, 30.0, 20000,
                                num::Rng(77), opts);
    double prev_size = 1.0;
    for (std::size_t r = 0; r < res.traj.rows.size(); ++r) {
        const double size = res.traj.value(r, "support_size");
        CHECK(size >= prev_size);
        prev_size = size;
    }
    // every update added exactly one coordinate
    CHECK(res.final_support.size() == 1 + res.update_log.size());
    for (std::size_t i = 0; i < res.final_support.size(); ++i)
        CHECK(res.final_support[i] >= 0);
}

TEST_CASE("heuristic run with a strong missing coordinate recovers it") {
    data::ProblemSpec spec = sparse_spec(16, {2, 8}, {2.0, 1.5}, 0.5);
    RunSparseOptions opts;
    opts.mode = SparseMode::Heuristic;
    opts.initial_support = {2};
    opts.min_gap = 500;
    const auto res = run_sparse(spec, data::CovariateProcess::iid_gaussian(16),
                                data::NoiseProcess::iid_gaussian(0.5), 3.0, 30.0, 20000,
                                num::Rng(31), opts);
    bool has8 = false;
    for (int i : res.final_support) has8 = has8 || i == 8;
    CHECK(has8);
}

TEST_CASE("oracle-scheduled runs update at the planned times") {
    data::ProblemSpec spec = sparse_spec(12, {2, 7}, {2.0, 1.5}, 0.5);
    for (auto mode : {SparseMode::OracleCumulative, SparseMode::OracleLocal}) {
        RunSparseOptions opts;
        opts.mode = mode;
        opts.initial_support = {2};
        opts.c_sched = 200.0;  // enough samples for a reliable first detection
        const auto planned = oracle_update_times(
            spec, opts.initial_support,
            mode == SparseMode::OracleLocal ? UpdateWindow::Local : UpdateWindow::Cumulative,
            opts.c_sched, 3.0);
        REQUIRE(planned.size() == 1);

        const auto res = run_sparse(spec, data::CovariateProcess::iid_gaussian(12),
                                    data::NoiseProcess::iid_gaussian(0.5), 3.0, 30.0, 5000,
                                    num::Rng(88), opts);
        REQUIRE(res.update_log.size() == 1);
        CHECK(res.update_log[0].first == planned[0]);
        CHECK(res.update_log[0].second == 7);
        CHECK(res.final_support == std::vector<int>{2, 7});
    }
}

TEST_CASE("sparse runs are reproducible") {
    data::ProblemSpec spec = sparse_spec(8, {1, 3}, {1.0, 0.5}, 1.0);
    RunSparseOptions opts;
    opts.mode = SparseMode::Heuristic;
    opts.warmup_steps = 500;
    auto once = [&] {
        return run_sparse(spec, data::CovariateProcess::sphere_ar(8),
                          data::NoiseProcess::dependent_sign(1.0), 3.0, 30.0, 5000,
                          num::Rng(2020), opts);
    };
    const auto a = once();
    const auto b = once();
    REQUIRE(a.traj.rows.size() == b.traj.rows.size());
    for (std::size_t i = 0; i < a.traj.rows.size(); ++i) {
        CHECK(a.traj.rows[i].t == b.traj.rows[i].t);
        for (std::size_t c = 0; c < a.traj.rows[i].values.size(); ++c) {
            const double va = a.traj.rows[i].values[c], vb = b.traj.rows[i].values[c];
            CHECK(((std::isnan(va) && std::isnan(vb)) || va == vb));
        }
    }
    CHECK(a.final_support == b.final_support);
}
