#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sgd/dense.hpp"

using namespace depsgd;
using namespace depsgd::sgd;

namespace {

data::ProblemSpec noiseless_spec(num::Vec beta) {
    data::ProblemSpec spec = data::make_regression_spec(std::move(beta), 0.0);
    spec.lambda_min = 1.0;
    spec.lambda_max = 1.5;
    return spec;
}

TrajectoryRecord synthetic_power_law(double c, double exponent) {
    TrajectoryRecord traj;
    traj.columns = {"err_sq"};
    for (long t = 10; t <= 10000; t += 37) traj.add(t, {c * std::pow(static_cast<double>(t), exponent)});
    return traj;
}

}  // namespace

TEST_CASE("one SGD step matches hand arithmetic") {
    DenseSgdState state;
    state.beta = {1.0, 0.0};
    sgd_step(state, {1.0, 1.0}, 0.5, 0.1);
    CHECK(state.beta[0] == doctest::Approx(0.95).epsilon(1e-15));
    CHECK(state.beta[1] == doctest::Approx(-0.05).epsilon(1e-15));
    CHECK(state.t == 1);
}

TEST_CASE("zero stepsize and zero residual leave the iterate untouched") {
    DenseSgdState state;
    state.beta = {1.0, 2.0};
    sgd_step(state, {3.0, -1.0}, 1.0, 0.0);
    CHECK(state.beta == num::Vec{1.0, 2.0});
    // x.beta = 1*1 + 2*2 = 5 = y, so the update is exactly zero
    sgd_step(state, {1.0, 2.0}, 5.0, 0.3);
    CHECK(state.beta == num::Vec{1.0, 2.0});
    CHECK(state.t == 2);
}

TEST_CASE("non-finite inputs are rejected") {
    DenseSgdState state;
    state.beta = {0.0};
    CHECK_THROWS_AS(sgd_step(state, {std::nan("")}, 0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(sgd_step(state, {1.0}, std::numeric_limits<double>::infinity(), 0.1),
                    std::invalid_argument);
}

TEST_CASE("noiseless constant-stepsize run contracts geometrically") {
    data::ProblemSpec spec = noiseless_spec({1.0, -2.0, 0.5, 0.0, 3.0});
    TwoPhasePlan plan;
    plan.eta_const = 0.02;
    plan.oracle_switch = false;
    plan.t1 = 2000;  // never reached: constant phase throughout
    RunDenseOptions opts;
    const TrajectoryRecord traj =
        run_dense(spec, data::CovariateProcess::iid_gaussian(5),
                  data::NoiseProcess::iid_gaussian(0.0), plan, 1000, num::Rng(42), opts);
    const double initial = traj.rows.front().values[0];
    const double final = traj.rows.back().values[0];
    CHECK(traj.rows.front().t == 0);
    CHECK(traj.rows.back().t == 1000);
    CHECK(final <= 1e-6 * initial);
}

TEST_CASE("zero-horizon run logs only the initial error") {
    data::ProblemSpec spec = noiseless_spec({1.0});
    TwoPhasePlan plan;
    plan.eta_const = 0.1;
    plan.oracle_switch = false;
    const TrajectoryRecord traj =
        run_dense(spec, data::CovariateProcess::iid_gaussian(1),
                  data::NoiseProcess::iid_gaussian(0.0), plan, 0, num::Rng(1), {});
    REQUIRE(traj.rows.size() == 1);
    CHECK(traj.rows[0].t == 0);
    CHECK(traj.rows[0].values[0] == 1.0);
}

TEST_CASE("identical seed and config give identical trajectories") {
    data::ProblemSpec spec = data::make_regression_spec({1.0, 2.0, -1.0}, 1.0);
    spec.lambda_max = 1.5;
    TwoPhasePlan plan;
    plan.eta_const = 0.05;
    auto run_once = [&] {
        return run_dense(spec, data::CovariateProcess::sphere_ar(3),
                         data::NoiseProcess::dependent_sign(1.0), plan, 5000, num::Rng(777), {});
    };
    const TrajectoryRecord a = run_once();
    const TrajectoryRecord b = run_once();
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].t == b.rows[i].t);
        CHECK(a.rows[i].values == b.rows[i].values);
    }
}

TEST_CASE("log-log slope recovers synthetic power laws") {
    CHECK(fit_loglog_slope(synthetic_power_law(3.0, -1.0), 10, 10000) ==
          doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(fit_loglog_slope(synthetic_power_law(0.5, 0.0), 10, 10000) ==
          doctest::Approx(0.0).epsilon(1e-6));
    CHECK(fit_loglog_slope(synthetic_power_law(2.0, -2.0), 10, 10000) ==
          doctest::Approx(-2.0).epsilon(1e-6));
}

TEST_CASE("log-log slope rejects bad ranges") {
    TrajectoryRecord traj;
    traj.columns = {"err_sq"};
    for (long t = 1; t <= 20; ++t) traj.add(t, {t == 5 ? 0.0 : 1.0});
    CHECK_THROWS_AS(fit_loglog_slope(traj, 1, 20), std::invalid_argument);
    CHECK_THROWS_AS(fit_loglog_slope(synthetic_power_law(1.0, -1.0), 9990, 10000),
                    std::invalid_argument);  // fewer than 10 points
}

TEST_CASE("expected one-step contraction under isotropic covariates") {
    // frozen iterate, fresh innovations: the averaged squared error after
    // one step must contract by at least (1 - eta)
    const int d = 4;
    const double eta = 1.0 / (2.0 * d);
    data::ProblemSpec spec = noiseless_spec({1.0, 1.0, 1.0, 1.0});
    const num::Vec beta_t = {0.0, 2.0, 1.0, -1.0};
    const double before = num::norm2_sq(num::sub(beta_t, spec.beta_star()));

    num::Rng root(2718);
    double after_sum = 0.0;
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
        num::Rng sub = root.substream(static_cast<std::uint64_t>(i), "mc");
        DenseSgdState state;
        state.beta = beta_t;
        const num::Vec x = num::sample_gaussian_vector(sub, d);
        const double y = data::emit_regression_obs(spec, x, 0.0);
        sgd_step(state, x, y, eta);
        after_sum += num::norm2_sq(num::sub(state.beta, spec.beta_star()));
    }
    CHECK(after_sum / n <= (1.0 - eta) * before);
}

TEST_CASE("two-phase run decays at roughly the parametric rate") {
    data::ProblemSpec spec = data::make_regression_spec({2.0, -1.0, 0.5, 1.0, 0.0}, 1.0);
    spec.lambda_min = 1.0;
    spec.lambda_max = 1.5;
    TwoPhasePlan plan;
    plan.eta_const = 0.02;
    plan.c_a = 3.0;
    plan.c_b = 100.0;

    std::vector<TrajectoryRecord> trajs;
    num::Rng root(555);
    for (int rep = 0; rep < 5; ++rep)
        trajs.push_back(run_dense(spec, data::CovariateProcess::iid_gaussian(5),
                                  data::NoiseProcess::iid_gaussian(1.0), plan, 20000,
                                  root.substream(static_cast<std::uint64_t>(rep), "rep"), {}));

    TrajectoryRecord mean;
    mean.columns = {"err_sq"};
    for (std::size_t r = 0; r < trajs[0].rows.size(); ++r) {
        double s = 0.0;
        for (const auto& traj : trajs) s += traj.rows[r].values[0];
        mean.add(trajs[0].rows[r].t, {s / static_cast<double>(trajs.size())});
    }
    const double slope = fit_loglog_slope(mean, 500, 20000);
    CHECK(slope < -0.7);
    CHECK(slope > -1.3);
}
