#pragma once

#include <utility>

#include "common/trajectory.hpp"
#include "datagen/processes.hpp"
#include "schedules/schedules.hpp"

namespace depsgd::bandit {

struct BanditState {
    std::vector<num::Vec> betas;
    long t = 0;
    std::vector<long> pull_counts;
    double regret_cum = 0.0;  // oracle-side accounting
    long explore_count = 0;

    explicit BanditState(int num_arms, int d);
};

/// Normalized margin (x.b_i - max_{j != i} x.b_j) / ||x||. Membership in
/// the level-h conic region is margin >= h; the margin is invariant to
/// positive rescaling of x.
double conic_margin(const num::Vec& x, int i, const std::vector<num::Vec>& betas);

/// Bernoulli(pi_t) coin: explore uniformly, otherwise exploit the argmax
/// of the estimated rewards (ties to the lowest index).
std::pair<int, bool> choose_arm(const num::Vec& x, const std::vector<num::Vec>& betas,
                                double pi_t, num::Rng& rng);

/// SGD update touching only the pulled arm; the other iterates stay
/// bitwise identical.
void bandit_update(BanditState& state, const num::Vec& x, double y, int arm, double eta);

double instantaneous_regret(const data::ProblemSpec& spec, const num::Vec& x, int arm);

struct ComplexityMeasures {
    double com2 = 0.0;      // sum over ordered pairs of ||b_i - b_j||
    double com1 = 0.0;      // sum over j of max_i ||b_i - b_j||
    double com_inf = 0.0;   // max over pairs
};

ComplexityMeasures complexity_measures(const data::ProblemSpec& spec);

/// Samples random covariates against internally perturbed estimates
/// (each within h0 of the truth) and counts violations of the conic
/// region properties: level-set nesting, containment in the oracle
/// argmax region, and the two-sided empirical-region sandwich at 2*h0.
long check_region_properties(const data::ProblemSpec& spec, double h0, long n_samples,
                         num::Rng& rng);

struct RegretLedger {
    std::vector<long> times;
    std::vector<std::vector<double>> per_replication;  // [rep][time index]
    std::vector<double> mean;
    std::vector<double> stddev;
};

struct RunBanditOptions {
    double eta_const = 0.0;   // warm-start constant stepsize (0 = derive)
    long warmstart = 0;       // constant-phase length; decaying joins here
    long log_stride = 0;
    bool record_pulls_after = false;
    long pulls_after_t = 0;   // with record_pulls_after: count pulls of each arm at t >= this
    int jobs = 1;             // replication fan-out
};

struct RunBanditResult {
    TrajectoryRecord aggregate;  // t, regret_cum_mean, regret_cum_std, err_sq_arm_*, explore_frac
    RegretLedger ledger;
    std::vector<std::vector<long>> pulls_after;     // [rep][arm]
    std::vector<std::vector<double>> final_err_sq;  // [rep][arm]
    std::vector<double> max_err_at_switch;          // [rep] max_i ||b_i - b_i*|| at explore t1
};

/// Replicated epsilon-greedy runs sharing one covariate/noise stream per
/// replication; logs per-arm oracle errors and cumulative oracle regret.
RunBanditResult run_bandit(const data::ProblemSpec& spec, const data::CovariateProcess& cov,
                           const data::NoiseProcess& noise, double c_a, double c_b,
                           const sched::ExplorationSchedule& explore, long T, int replications,
                           num::Rng rng, const RunBanditOptions& opts = {});

}  // namespace depsgd::bandit
