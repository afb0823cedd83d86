#pragma once

#include "common/trajectory.hpp"
#include "datagen/processes.hpp"
#include "schedules/schedules.hpp"

namespace depsgd::sgd {

enum class Phase { Constant, Decaying };

struct DenseSgdState {
    num::Vec beta;
    long t = 0;
    Phase phase = Phase::Constant;
    long t1 = 0;
};

/// beta <- beta - eta * (x.beta - y) * x; advances the step counter.
void sgd_step(DenseSgdState& state, const num::Vec& x, double y, double eta);

/// Constant-then-decaying stepsize plan. With oracle_switch the constant
/// phase ends at the first step whose oracle error drops to
/// sigma^2/lambda_max; otherwise at the fixed t1.
struct TwoPhasePlan {
    double eta_const = 0.0;
    double c_a = 3.0;
    double c_b = 100.0;
    double lambda_min = 1.0;
    bool oracle_switch = true;
    long t1 = 0;  // used when oracle_switch is false
};

struct RunDenseOptions {
    long log_stride = 0;  // 0 = geometric grid
    num::Vec beta0;       // empty = zero vector
};

/// Runs T steps of the two-phase recursion against the generating
/// processes, logging the oracle error ||beta_t - beta*||^2 on the log
/// grid. The estimator itself never reads beta*.
TrajectoryRecord run_dense(const data::ProblemSpec& spec, data::CovariateProcess cov,
                           data::NoiseProcess noise, const TwoPhasePlan& plan, long T,
                           num::Rng rng, const RunDenseOptions& opts = {});

/// OLS slope of log(error) vs log(t) over logged rows with t in [t_lo, t_hi].
double fit_loglog_slope(const TrajectoryRecord& traj, long t_lo, long t_hi,
                        const std::string& column = "err_sq");

}  // namespace depsgd::sgd
