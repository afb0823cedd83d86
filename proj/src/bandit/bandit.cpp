#include "bandit/bandit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "common/parallel.hpp"

namespace depsgd::bandit {

BanditState::BanditState(int num_arms, int d)
    : betas(static_cast<std::size_t>(num_arms), num::Vec(static_cast<std::size_t>(d), 0.0)),
      pull_counts(static_cast<std::size_t>(num_arms), 0) {
    if (num_arms < 1) throw std::invalid_argument("bandit: need at least one arm");
}

double conic_margin(const num::Vec& x, int i, const std::vector<num::Vec>& betas) {
    const int k = static_cast<int>(betas.size());
    if (k < 2) throw std::invalid_argument("conic_margin: need at least two arms");
    if (i < 0 || i >= k) throw std::invalid_argument("conic_margin: arm out of range");
    const double norm = num::norm2(x);
    if (norm == 0.0) throw std::invalid_argument("conic_margin: zero covariate");
    const double own = num::dot(x, betas[static_cast<std::size_t>(i)]);
    double best_other = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < k; ++j) {
        if (j == i) continue;
        best_other = std::max(best_other, num::dot(x, betas[static_cast<std::size_t>(j)]));
    }
    return (own - best_other) / norm;
}

std::pair<int, bool> choose_arm(const num::Vec& x, const std::vector<num::Vec>& betas,
                                double pi_t, num::Rng& rng) {
    if (pi_t < 0.0 || pi_t > 1.0) throw std::invalid_argument("choose_arm: pi outside [0,1]");
    const int k = static_cast<int>(betas.size());
    if (rng.bernoulli(pi_t)) return {static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(k))), true};
    int best = 0;
    double best_value = num::dot(x, betas[0]);
    for (int j = 1; j < k; ++j) {
        const double v = num::dot(x, betas[static_cast<std::size_t>(j)]);
        if (v > best_value) {
            best_value = v;
            best = j;
        }
    }
    return {best, false};
}

void bandit_update(BanditState& state, const num::Vec& x, double y, int arm, double eta) {
    const int k = static_cast<int>(state.betas.size());
    if (arm < 0 || arm >= k) throw std::invalid_argument("bandit_update: arm out of range");
    num::Vec& beta = state.betas[static_cast<std::size_t>(arm)];
    const double residual = num::dot(x, beta) - y;
    num::axpy(-eta * residual, x, beta);
    ++state.t;
    ++state.pull_counts[static_cast<std::size_t>(arm)];
}

double instantaneous_regret(const data::ProblemSpec& spec, const num::Vec& x, int arm) {
    const int k = spec.num_arms();
    if (arm < 0 || arm >= k) throw std::invalid_argument("instantaneous_regret: arm out of range");
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < k; ++j) best = std::max(best, num::dot(x, spec.arms[static_cast<std::size_t>(j)]));
    return best - num::dot(x, spec.arms[static_cast<std::size_t>(arm)]);
}

ComplexityMeasures complexity_measures(const data::ProblemSpec& spec) {
    const int k = spec.num_arms();
    ComplexityMeasures m;
    for (int j = 0; j < k; ++j) {
        double row_max = 0.0;
        for (int i = 0; i < k; ++i) {
            const double dist = num::norm2(num::sub(spec.arms[static_cast<std::size_t>(i)],
                                                    spec.arms[static_cast<std::size_t>(j)]));
            m.com2 += dist;
            row_max = std::max(row_max, dist);
            m.com_inf = std::max(m.com_inf, dist);
        }
        m.com1 += row_max;
    }
    return m;
}

long check_region_properties(const data::ProblemSpec& spec, double h0, long n_samples,
                         num::Rng& rng) {
    spec.validate();
    const int k = spec.num_arms();
    if (k < 2) throw std::invalid_argument("check_region_properties: need at least two arms");
    if (h0 < 0.0) throw std::invalid_argument("check_region_properties: h0 must be >= 0");

    // Perturbed estimates, each within h0 of the truth.
    std::vector<num::Vec> est = spec.arms;
    for (auto& b : est) {
        num::Vec u = num::sample_gaussian_vector(rng, spec.d);
        const double norm = num::norm2(u);
        if (norm > 0.0) num::axpy(h0 * rng.uniform01() / norm, u, b);
    }

    long violations = 0;
    for (long s = 0; s < n_samples; ++s) {
        const num::Vec x = num::sample_gaussian_vector(rng, spec.d);
        for (int i = 0; i < k; ++i) {
            const double margin_true = conic_margin(x, i, spec.arms);

            // level-set nesting: h1 > h2 implies containment
            if (margin_true >= h0 && !(margin_true >= h0 / 2.0)) ++violations;
            if (margin_true >= h0 / 2.0 && !(margin_true >= 0.0)) ++violations;

            // positive-level region sits inside the strict oracle region
            if (h0 > 0.0 && margin_true >= h0 && !(margin_true > 0.0)) ++violations;

            // sandwich of the empirical argmax region at levels +-2*h0
            const double own = num::dot(x, est[static_cast<std::size_t>(i)]);
            double best_other = -std::numeric_limits<double>::infinity();
            for (int j = 0; j < k; ++j) {
                if (j == i) continue;
                best_other = std::max(best_other, num::dot(x, est[static_cast<std::size_t>(j)]));
            }
            const bool empirical_win = own > best_other;
            if (margin_true >= 2.0 * h0 && !empirical_win) ++violations;
            if (empirical_win && !(margin_true >= -2.0 * h0)) ++violations;
        }
    }
    return violations;
}

RunBanditResult run_bandit(const data::ProblemSpec& spec, const data::CovariateProcess& cov,
                           const data::NoiseProcess& noise, double c_a, double c_b,
                           const sched::ExplorationSchedule& explore, long T, int replications,
                           num::Rng rng, const RunBanditOptions& opts) {
    spec.validate();
    const int k = spec.num_arms();
    if (k < 2) throw std::invalid_argument("run_bandit: need at least two arms");
    if (replications < 1) throw std::invalid_argument("run_bandit: replications must be >= 1");

    const int d = spec.d;
    const double lambda_min = spec.lambda_min.value_or(1.0);
    double eta_const = opts.eta_const;
    if (eta_const <= 0.0) {
        eta_const = spec.lambda_max ? 0.4 * lambda_min / (d * *spec.lambda_max * *spec.lambda_max)
                                    : 0.5 / static_cast<double>(d);
    }

    // shared logging grid
    std::vector<long> times;
    {
        LogGrid grid(opts.log_stride);
        for (long t = 0; t <= T; ++t) {
            if (grid.should_log(t) || t == T) {
                times.push_back(t);
                grid.advance(t);
            }
        }
    }
    const std::size_t n_times = times.size();

    RunBanditResult result;
    result.ledger.times = times;
    result.ledger.per_replication.assign(static_cast<std::size_t>(replications),
                                         std::vector<double>(n_times, 0.0));
    // [rep][arm][time] error curves, reduced after the parallel section
    std::vector<std::vector<std::vector<double>>> err_curves(
        static_cast<std::size_t>(replications),
        std::vector<std::vector<double>>(static_cast<std::size_t>(k),
                                         std::vector<double>(n_times, 0.0)));
    std::vector<std::vector<double>> explore_frac(static_cast<std::size_t>(replications),
                                                  std::vector<double>(n_times, 0.0));
    result.pulls_after.assign(static_cast<std::size_t>(replications), std::vector<long>(static_cast<std::size_t>(k), 0));
    result.final_err_sq.assign(static_cast<std::size_t>(replications), std::vector<double>(static_cast<std::size_t>(k), 0.0));
    result.max_err_at_switch.assign(static_cast<std::size_t>(replications), 0.0);

    auto run_one = [&](int rep) {
        num::Rng cov_rng = rng.substream(static_cast<std::uint64_t>(rep), "cov");
        num::Rng noise_rng = rng.substream(static_cast<std::uint64_t>(rep), "noise");
        num::Rng decide_rng = rng.substream(static_cast<std::uint64_t>(rep), "decide");
        data::CovariateProcess cov_stream = cov;
        data::NoiseProcess noise_stream = noise;

        BanditState state(k, d);
        std::size_t next_log = 0;

        auto log_point = [&](long t) {
            while (next_log < n_times && times[next_log] <= t) {
                const std::size_t idx = next_log++;
                result.ledger.per_replication[static_cast<std::size_t>(rep)][idx] = state.regret_cum;
                for (int i = 0; i < k; ++i)
                    err_curves[static_cast<std::size_t>(rep)][static_cast<std::size_t>(i)][idx] =
                        num::norm2_sq(num::sub(state.betas[static_cast<std::size_t>(i)],
                                               spec.arms[static_cast<std::size_t>(i)]));
                explore_frac[static_cast<std::size_t>(rep)][idx] =
                    t > 0 ? static_cast<double>(state.explore_count) / static_cast<double>(t) : 0.0;
            }
        };

        log_point(0);
        for (long t = 0; t < T; ++t) {
            if (opts.record_pulls_after && t == opts.pulls_after_t) {
                double worst = 0.0;
                for (int i = 0; i < k; ++i)
                    worst = std::max(worst, num::norm2(num::sub(state.betas[static_cast<std::size_t>(i)],
                                                                spec.arms[static_cast<std::size_t>(i)])));
                result.max_err_at_switch[static_cast<std::size_t>(rep)] = worst;
            }

            const num::Vec x = cov_stream.next(cov_rng);
            const double pi_t = sched::exploration_rate_at(explore, t);
            const auto [arm, explored] = choose_arm(x, state.betas, pi_t, decide_rng);
            const double xi = noise_stream.next(noise_rng, x);
            const double y = data::emit_bandit_reward(spec, x, arm, xi);

            state.regret_cum += instantaneous_regret(spec, x, arm);
            if (explored) ++state.explore_count;
            if (opts.record_pulls_after && t >= opts.pulls_after_t)
                ++result.pulls_after[static_cast<std::size_t>(rep)][static_cast<std::size_t>(arm)];

            const double eta =
                t < opts.warmstart
                    ? eta_const
                    : (c_a / lambda_min) /
                          (static_cast<double>(t - opts.warmstart) + c_b * d);
            bandit_update(state, x, y, arm, eta);
            log_point(t + 1);
        }

        for (int i = 0; i < k; ++i)
            result.final_err_sq[static_cast<std::size_t>(rep)][static_cast<std::size_t>(i)] =
                num::norm2_sq(num::sub(state.betas[static_cast<std::size_t>(i)],
                                       spec.arms[static_cast<std::size_t>(i)]));
    };
    parallel_for(replications, opts.jobs, run_one);

    // aggregate
    result.ledger.mean.assign(n_times, 0.0);
    result.ledger.stddev.assign(n_times, 0.0);
    const double r = static_cast<double>(replications);
    for (std::size_t idx = 0; idx < n_times; ++idx) {
        double m = 0.0;
        for (int rep = 0; rep < replications; ++rep)
            m += result.ledger.per_replication[static_cast<std::size_t>(rep)][idx];
        m /= r;
        double v = 0.0;
        for (int rep = 0; rep < replications; ++rep) {
            const double dlt = result.ledger.per_replication[static_cast<std::size_t>(rep)][idx] - m;
            v += dlt * dlt;
        }
        result.ledger.mean[idx] = m;
        result.ledger.stddev[idx] = replications > 1 ? std::sqrt(v / (r - 1.0)) : 0.0;
    }

    TrajectoryRecord& agg = result.aggregate;
    agg.experiment = "bandit";
    agg.columns = {"regret_cum_mean", "regret_cum_std"};
    for (int i = 0; i < k; ++i) agg.columns.push_back("err_sq_arm_" + std::to_string(i + 1));
    agg.columns.push_back("explore_frac");
    for (std::size_t idx = 0; idx < n_times; ++idx) {
        std::vector<double> row = {result.ledger.mean[idx], result.ledger.stddev[idx]};
        for (int i = 0; i < k; ++i) {
            double s = 0.0;
            for (int rep = 0; rep < replications; ++rep)
                s += err_curves[static_cast<std::size_t>(rep)][static_cast<std::size_t>(i)][idx];
            row.push_back(s / r);
        }
        double ef = 0.0;
        for (int rep = 0; rep < replications; ++rep)
            ef += explore_frac[static_cast<std::size_t>(rep)][idx];
        row.push_back(ef / r);
        agg.add(times[idx], std::move(row));
    }
    return result;
}

}  // namespace depsgd::bandit
