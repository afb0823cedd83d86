#include "sgd/dense.hpp"

#include <cmath>
#include <stdexcept>

namespace depsgd::sgd {

void sgd_step(DenseSgdState& state, const num::Vec& x, double y, double eta) {
    if (x.size() != state.beta.size()) throw std::invalid_argument("sgd_step: dimension mismatch");
    if (!num::all_finite(x) || !std::isfinite(y) || !std::isfinite(eta))
        throw std::invalid_argument("sgd_step: non-finite input");
    const double residual = num::dot(x, state.beta) - y;
    num::axpy(-eta * residual, x, state.beta);
    ++state.t;
}

TrajectoryRecord run_dense(const data::ProblemSpec& spec, data::CovariateProcess cov,
                           data::NoiseProcess noise, const TwoPhasePlan& plan, long T,
                           num::Rng rng, const RunDenseOptions& opts) {
    if (spec.num_arms() != 1) throw std::invalid_argument("run_dense: spec must have one arm");
    spec.validate();

    DenseSgdState state;
    state.beta = opts.beta0.empty() ? num::Vec(static_cast<std::size_t>(spec.d), 0.0) : opts.beta0;
    if (static_cast<int>(state.beta.size()) != spec.d)
        throw std::invalid_argument("run_dense: beta0 dimension mismatch");

    double switch_level = -1.0;
    if (plan.oracle_switch) {
        if (!spec.lambda_max)
            throw std::invalid_argument("run_dense: oracle phase switch needs lambda_max");
        switch_level = spec.sigma * spec.sigma / *spec.lambda_max;
    } else {
        state.t1 = plan.t1;
    }

    TrajectoryRecord traj;
    traj.experiment = "regress";
    traj.columns = {"err_sq", "phase"};

    const num::Vec& beta_star = spec.beta_star();
    auto err_sq = [&] { return num::norm2_sq(num::sub(state.beta, beta_star)); };

    LogGrid grid(opts.log_stride);
    traj.add(0, {err_sq(), 0.0});
    grid.advance(0);

    sched::StepsizeSchedule decay;  // built lazily once t1 is known
    bool decay_ready = false;

    for (long t = 0; t < T; ++t) {
        if (state.phase == Phase::Constant) {
            const bool switch_now =
                plan.oracle_switch ? (t > 0 && err_sq() <= switch_level) : (t >= state.t1);
            if (switch_now) {
                state.phase = Phase::Decaying;
                state.t1 = t;
            }
        }
        double eta;
        if (state.phase == Phase::Constant) {
            eta = plan.eta_const;
        } else {
            if (!decay_ready) {
                decay = sched::StepsizeSchedule::decaying(plan.c_a, plan.c_b, plan.lambda_min,
                                                          static_cast<double>(spec.d), state.t1);
                decay_ready = true;
            }
            eta = sched::stepsize_at(decay, t);
        }

        const num::Vec x = cov.next(rng);
        const double xi = noise.next(rng, x);
        const double y = data::emit_regression_obs(spec, x, xi);
        sgd_step(state, x, y, eta);

        const long now = state.t;
        if (grid.should_log(now) || now == T) {
            traj.add(now, {err_sq(), state.phase == Phase::Constant ? 0.0 : 1.0});
            grid.advance(now);
        }
    }
    return traj;
}

double fit_loglog_slope(const TrajectoryRecord& traj, long t_lo, long t_hi,
                        const std::string& column) {
    std::vector<double> lx, ly;
    for (std::size_t r = 0; r < traj.rows.size(); ++r) {
        const long t = traj.rows[r].t;
        if (t < t_lo || t > t_hi || t <= 0) continue;
        const double e = traj.value(r, column);
        if (e <= 0.0)
            throw std::invalid_argument("fit_loglog_slope: non-positive error in range");
        lx.push_back(std::log(static_cast<double>(t)));
        ly.push_back(std::log(e));
    }
    if (lx.size() < 10)
        throw std::invalid_argument("fit_loglog_slope: fewer than 10 logged points in range");

    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_loglog_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / denom;
}

}  // namespace depsgd::sgd
