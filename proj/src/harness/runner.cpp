#include "harness/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include "bandit/bandit.hpp"
#include "common/parallel.hpp"
#include "harness/csv.hpp"
#include "harness/svg.hpp"
#include "inference/inference.hpp"
#include "sgd/dense.hpp"
#include "sgd/sparse.hpp"

namespace depsgd::harness {

namespace fs = std::filesystem;

namespace {

std::string version_string() { return "0.1.0"; }

num::Vec embed(std::initializer_list<double> head, int d) {
    num::Vec v(static_cast<std::size_t>(d), 0.0);
    int i = 0;
    for (double x : head) {
        if (i >= d) break;
        v[static_cast<std::size_t>(i++)] = x;
    }
    return v;
}

std::vector<int> draw_support(int d, int s, num::Rng& rng) {
    std::vector<int> pool(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) pool[static_cast<std::size_t>(i)] = i;
    std::vector<int> out;
    for (int i = 0; i < s; ++i) {
        const std::size_t j = rng.uniform_int(pool.size());
        out.push_back(pool[j]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
    }
    std::sort(out.begin(), out.end());
    return out;
}

double derived_eta_const(const data::ProblemSpec& spec) {
    const double lam_min = spec.lambda_min.value_or(1.0);
    if (spec.lambda_max) return 0.4 * lam_min / (spec.d * *spec.lambda_max * *spec.lambda_max);
    return 0.5 / static_cast<double>(spec.d);
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

data::ProblemSpec build_problem(const VariantConfig& v, std::uint64_t seed,
                                const std::string& kind) {
    data::ProblemSpec spec;
    spec.d = v.d;
    spec.sigma = v.sigma;
    spec.lambda_min = v.lambda_min;
    spec.lambda_max = v.lambda_max;
    spec.lambda_max_s_off = v.lambda_max_s_off;
    spec.lambda_max_1_off = v.lambda_max_1_off;
    spec.h = v.h;
    if (!v.optimal_arms.empty()) spec.optimal_arms = v.optimal_arms;

    if (v.arms_gen == "axes5") {
        if (v.d < 2) throw ConfigError("arms generator axes5 needs d >= 2");
        spec.arms = {embed({1.0}, v.d), embed({0.1}, v.d), embed({-1.0}, v.d),
                     embed({0.0, 1.0}, v.d), embed({0.0, -1.0}, v.d)};
    } else if (v.arms_gen == "margin5") {
        if (v.d < 2) throw ConfigError("arms generator margin5 needs d >= 2");
        spec.arms = {embed({2.0}, v.d), embed({0.2}, v.d), embed({-2.0}, v.d),
                     embed({0.0, 2.0}, v.d), embed({0.0, -2.0}, v.d)};
        if (!spec.optimal_arms) spec.optimal_arms = std::vector<int>{0, 2, 3, 4};
    } else if (!v.arms.empty()) {
        spec.arms = v.arms;
        for (const auto& arm : spec.arms)
            if (static_cast<int>(arm.size()) != v.d)
                throw ConfigError("explicit arm length does not match problem.d");
    }

    std::vector<int> support = v.support;
    if (v.support_gen == "random") {
        if (!v.sparsity) throw ConfigError("random support needs problem.sparsity");
        num::Rng sup_rng = num::Rng(seed).substream(0, "support");
        support = draw_support(v.d, *v.sparsity, sup_rng);
    }

    if (!support.empty()) {
        if (!spec.arms.empty())
            throw ConfigError("give either explicit beta/arms or a support profile, not both");
        if (v.support_values.size() != support.size())
            throw ConfigError("problem.support_values must match the support size");
        num::Vec beta(static_cast<std::size_t>(v.d), 0.0);
        for (std::size_t i = 0; i < support.size(); ++i)
            beta[static_cast<std::size_t>(support[i])] = v.support_values[i];
        spec.arms.push_back(std::move(beta));
        spec.support = support;
        spec.sparsity = v.sparsity ? v.sparsity : std::optional<int>(static_cast<int>(support.size()));
    }

    if (spec.arms.empty() && !v.beta_gen.empty()) {
        num::Rng beta_rng = num::Rng(seed).substream(0, "beta");
        num::Vec beta = num::sample_gaussian_vector(beta_rng, v.d);
        const double n = num::norm2(beta);
        if (n > 0.0)
            for (double& x : beta) x *= v.beta_norm / n;
        spec.arms.push_back(std::move(beta));
    }

    if (spec.arms.empty()) {
        if (kind == "regress" || kind == "sparse" || kind == "infer")
            throw ConfigError("no ground-truth parameter: set problem.beta, a support profile, "
                              "or problem.beta_gen");
        throw ConfigError("no arms: set problem.arms or problem.arm_1..arm_K");
    }
    spec.validate();
    return spec;
}

data::CovariateProcess build_covariates(const VariantConfig& v) {
    switch (v.cov_kind) {
        case data::CovariateProcess::Kind::IidGaussian:
            return data::CovariateProcess::iid_gaussian(v.d);
        case data::CovariateProcess::Kind::SphereAR:
            return data::CovariateProcess::sphere_ar(v.d, v.cov_init);
        case data::CovariateProcess::Kind::WeightedHistory:
            return data::CovariateProcess::weighted_history(v.d, v.cov_window, v.cov_init);
        case data::CovariateProcess::Kind::CorrelatedGaussian:
            return data::CovariateProcess::correlated_gaussian(v.d, v.cov_rho);
        case data::CovariateProcess::Kind::SignedLevels:
            return data::CovariateProcess::signed_levels(v.d, v.cov_levels);
    }
    throw ConfigError("unreachable covariate kind");
}

data::NoiseProcess build_noise(const VariantConfig& v) {
    return v.noise_kind == data::NoiseProcess::Kind::IidGaussian
               ? data::NoiseProcess::iid_gaussian(v.sigma)
               : data::NoiseProcess::dependent_sign(v.sigma);
}

sched::ExplorationSchedule build_exploration(const VariantConfig& v,
                                             const data::ProblemSpec& spec) {
    long t1 = v.explore_t1;
    if (v.explore_kind == sched::ExplorationSchedule::Kind::TwoPhaseZero && t1 < 0) {
        // switch step from the error-level condition, with the leading
        // constant exposed as exploration.c_star
        if (!spec.h || !spec.lambda_min)
            throw ConfigError("two_phase_zero oracle switch needs problem.h and problem.lambda_min");
        const double lam = *spec.lambda_min;
        const double raw = 16.0 * v.c_star * spec.d * spec.sigma * spec.sigma / (lam * *spec.h * *spec.h) -
                           v.c_b * spec.d;
        t1 = std::max<long>(0, static_cast<long>(std::ceil(raw)));
    }
    if (t1 < 0) t1 = 0;
    switch (v.explore_kind) {
        case sched::ExplorationSchedule::Kind::ConstantPi:
            return sched::ExplorationSchedule::constant_pi(v.pi_bar);
        case sched::ExplorationSchedule::Kind::Harmonic:
            return sched::ExplorationSchedule::harmonic(v.c_pi, t1, v.pre_rate);
        case sched::ExplorationSchedule::Kind::Power:
            return sched::ExplorationSchedule::power(v.c_pi, v.p, t1, v.pre_rate);
        case sched::ExplorationSchedule::Kind::TwoPhaseZero:
            return sched::ExplorationSchedule::two_phase_zero(t1, v.pre_rate);
        case sched::ExplorationSchedule::Kind::Rational:
            return sched::ExplorationSchedule::rational(v.expl_a, v.expl_b, t1, v.pre_rate);
        case sched::ExplorationSchedule::Kind::RationalSqrt:
            return sched::ExplorationSchedule::rational_sqrt(v.expl_a, v.expl_b, t1, v.pre_rate);
    }
    throw ConfigError("unreachable exploration kind");
}

namespace {

TrajectoryRecord strip_t0(TrajectoryRecord traj, long T) {
    if (T > 0) return traj;
    traj.rows.clear();  // header-only files for empty horizons
    return traj;
}

/// Mean across replications at every time shared by all of them.
TrajectoryRecord aggregate_mean(const std::vector<TrajectoryRecord>& trajs) {
    TrajectoryRecord agg;
    if (trajs.empty()) return agg;
    agg.experiment = trajs.front().experiment;
    for (const auto& c : trajs.front().columns)
        if (c != "event") agg.columns.push_back(c + "_mean");

    std::map<long, std::pair<int, std::vector<double>>> sums;
    for (const auto& traj : trajs) {
        for (const auto& row : traj.rows) {
            auto& slot = sums[row.t];
            if (slot.second.empty()) slot.second.assign(agg.columns.size(), 0.0);
            int out = 0;
            bool counted = false;
            for (std::size_t c = 0; c < traj.columns.size(); ++c) {
                if (traj.columns[c] == "event") continue;
                slot.second[static_cast<std::size_t>(out++)] += row.values[c];
                counted = true;
            }
            if (counted) ++slot.first;
        }
    }
    const int r = static_cast<int>(trajs.size());
    for (const auto& [t, slot] : sums) {
        if (slot.first != r) continue;  // event-forced rows exist in single reps only
        std::vector<double> row = slot.second;
        for (double& v : row) v /= static_cast<double>(r);
        agg.add(t, std::move(row));
    }
    return agg;
}

struct VariantOutput {
    std::string label;
    TrajectoryRecord aggregate;
    std::vector<std::string> notes;
};

}  // namespace

RunOutcome run(const RunConfig& cfg) {
    RunOutcome outcome;
    fs::create_directories(cfg.out);

    // manifest first: a valid config that reproduces this run
    {
        std::ostringstream m;
        m << "# depsgd manifest\n";
        m << "# version = " << version_string() << "\n";
        m << "# config_hash = " << hex64(cfg.config_hash) << "\n";
        m << cfg.canonical_text;
        const std::string path = (fs::path(cfg.out) / "manifest.txt").string();
        write_file(path, m.str());
        outcome.files.push_back(path);
    }

    std::vector<VariantOutput> outputs;

    for (const VariantConfig& v : cfg.variants) {
        const fs::path vdir = fs::path(cfg.out) / v.label;
        fs::create_directories(vdir);
        data::ProblemSpec spec = build_problem(v, cfg.seed, cfg.kind);
        data::CovariateProcess cov = build_covariates(v);
        data::NoiseProcess noise = build_noise(v);
        num::Rng root(cfg.seed);
        VariantOutput out;
        out.label = v.label;

        if (cfg.kind != "verify") {
            // sufficiency checks are advisory: the shipped presets follow
            // experiment protocols that run outside them
            const auto dec = sched::StepsizeSchedule::decaying(
                v.c_a, v.c_b, spec.lambda_min.value_or(1.0), spec.d, 0);
            for (const auto& issue : validate_stepsize(dec, spec.lambda_max))
                out.notes.push_back(v.label + ": stepsize warning: " + issue);
        }

        if (cfg.kind == "regress") {
            sgd::TwoPhasePlan plan;
            plan.eta_const = v.eta_const > 0.0 ? v.eta_const : derived_eta_const(spec);
            plan.c_a = v.c_a;
            plan.c_b = v.c_b;
            plan.lambda_min = spec.lambda_min.value_or(1.0);
            plan.oracle_switch = v.stepsize_t1 < 0;
            plan.t1 = std::max<long>(0, v.stepsize_t1);

            std::vector<TrajectoryRecord> trajs(static_cast<std::size_t>(cfg.replications));
            parallel_for(cfg.replications, cfg.jobs, [&](int rep) {
                sgd::RunDenseOptions opts;
                opts.log_stride = cfg.log_stride;
                trajs[static_cast<std::size_t>(rep)] =
                    run_dense(spec, cov, noise, plan, cfg.T,
                              root.substream(static_cast<std::uint64_t>(rep), "regress"), opts);
            });
            for (int rep = 0; rep < cfg.replications; ++rep) {
                char name[32];
                std::snprintf(name, sizeof(name), "rep_%03d.csv", rep);
                const std::string path = (vdir / name).string();
                write_file(path, to_csv(strip_t0(trajs[static_cast<std::size_t>(rep)], cfg.T)));
                outcome.files.push_back(path);
            }
            out.aggregate = aggregate_mean(trajs);
        } else if (cfg.kind == "sparse") {
            std::vector<sgd::RunSparseResult> results(static_cast<std::size_t>(cfg.replications));
            sgd::RunSparseOptions opts = v.sparse;
            opts.log_stride = cfg.log_stride;
            parallel_for(cfg.replications, cfg.jobs, [&](int rep) {
                results[static_cast<std::size_t>(rep)] =
                    run_sparse(spec, cov, noise, v.c_a, v.c_b, cfg.T,
                               root.substream(static_cast<std::uint64_t>(rep), "sparse"), opts);
            });
            std::vector<TrajectoryRecord> trajs;
            int recovered = 0;
            for (int rep = 0; rep < cfg.replications; ++rep) {
                auto& res = results[static_cast<std::size_t>(rep)];
                char name[32];
                std::snprintf(name, sizeof(name), "rep_%03d.csv", rep);
                const std::string path = (vdir / name).string();
                write_file(path, to_csv(strip_t0(res.traj, cfg.T)));
                outcome.files.push_back(path);
                if (spec.support) {
                    const bool ok = std::includes(res.final_support.begin(), res.final_support.end(),
                                                  spec.support->begin(), spec.support->end());
                    recovered += ok ? 1 : 0;
                }
                trajs.push_back(std::move(res.traj));
            }
            if (spec.support)
                out.notes.push_back(v.label + ": support recovered in " + std::to_string(recovered) +
                                    "/" + std::to_string(cfg.replications) + " replications");
            out.aggregate = aggregate_mean(trajs);
        } else if (cfg.kind == "bandit") {
            sched::ExplorationSchedule explore = build_exploration(v, spec);
            bandit::RunBanditOptions opts;
            opts.eta_const = v.eta_const > 0.0 ? v.eta_const : derived_eta_const(spec);
            opts.warmstart = std::max<long>(0, v.stepsize_t1);
            opts.log_stride = cfg.log_stride;
            opts.jobs = cfg.jobs;
            opts.record_pulls_after =
                explore.kind == sched::ExplorationSchedule::Kind::TwoPhaseZero;
            opts.pulls_after_t = explore.t1;
            bandit::RunBanditResult res = run_bandit(spec, cov, noise, v.c_a, v.c_b, explore,
                                                     cfg.T, cfg.replications, root, opts);
            for (int rep = 0; rep < cfg.replications; ++rep) {
                TrajectoryRecord traj;
                traj.experiment = "bandit";
                traj.columns = {"regret_cum"};
                for (std::size_t i = 0; i < res.ledger.times.size(); ++i)
                    traj.add(res.ledger.times[i],
                             {res.ledger.per_replication[static_cast<std::size_t>(rep)][i]});
                char name[32];
                std::snprintf(name, sizeof(name), "rep_%03d.csv", rep);
                const std::string path = (vdir / name).string();
                write_file(path, to_csv(strip_t0(traj, cfg.T)));
                outcome.files.push_back(path);
            }
            if (opts.record_pulls_after && spec.optimal_arms) {
                long bad = 0;
                for (const auto& pulls : res.pulls_after)
                    for (int arm = 0; arm < spec.num_arms(); ++arm)
                        if (std::find(spec.optimal_arms->begin(), spec.optimal_arms->end(), arm) ==
                            spec.optimal_arms->end())
                            bad += pulls[static_cast<std::size_t>(arm)];
                out.notes.push_back(v.label + ": suboptimal-arm pulls after switch: " +
                                    std::to_string(bad));
            }
            out.aggregate = res.aggregate;
        } else if (cfg.kind == "infer") {
            sched::ExplorationSchedule explore = build_exploration(v, spec);
            infer::CoverageResult res = infer::coverage_experiment(
                spec, cov, noise, v.c_a, v.c_b, explore, v.t_eval, v.level, cfg.replications,
                root, std::max<long>(0, v.stepsize_t1),
                v.eta_const > 0.0 ? v.eta_const : derived_eta_const(spec), cfg.jobs);
            std::string csv = "replication,arm,coordinate,whitened_value,covered\n";
            for (const auto& row : res.rows) {
                csv += std::to_string(row.replication) + "," + std::to_string(row.arm + 1) + "," +
                       std::to_string(row.coordinate + 1) + "," + format_double(row.whitened) +
                       "," + (row.covered ? "true" : "false") + "\n";
            }
            csv += "summary_rect,,," + format_double(res.coverage_rect) + ",\n";
            csv += "summary_ellipsoid,,," + format_double(res.coverage_ellipsoid) + ",\n";
            const std::string path = (vdir / "coverage.csv").string();
            write_file(path, csv);
            outcome.files.push_back(path);
            out.notes.push_back(v.label +
                                ": coverage rect = " + format_double(res.coverage_rect) +
                                ", ellipsoid = " + format_double(res.coverage_ellipsoid));
        } else if (cfg.kind == "verify") {
            std::ostringstream rep;
            int failures = 0;
            sched::StepsizeSchedule dec = sched::StepsizeSchedule::decaying(
                v.c_a, v.c_b, spec.lambda_min.value_or(1.0), spec.d, 0);
            const auto issues = sched::validate_stepsize(dec, spec.lambda_max);
            rep << "stepsize: " << (issues.empty() ? "ok" : issues.front()) << "\n";
            sched::ExplorationSchedule explore = build_exploration(v, spec);
            // default membership window: the warm phase, whose rate the
            // schedule guarantees; the switch step itself already decays
            const long tau = v.verify_tau >= 0 ? v.verify_tau : std::max<long>(0, explore.t1 - 1);
            const auto pi_report = sched::validate_pi_membership(explore, tau, v.verify_pi);
            rep << "exploration membership (tau=" << tau << ", pi=" << format_double(v.verify_pi)
                << "): " << (pi_report.ok ? "ok" : pi_report.reason + " at t=" +
                                                       std::to_string(pi_report.first_violation))
                << "\n";
            if (!pi_report.ok) ++failures;
            if (spec.num_arms() >= 2) {
                num::Rng check_rng = root.substream(0, "verify");
                const long bad =
                    bandit::check_region_properties(spec, v.verify_h0, v.verify_samples, check_rng);
                rep << "decision-region checks: " << bad << " violations over "
                    << v.verify_samples << " samples\n";
                if (bad > 0) ++failures;
            }
            {
                const sched::TailSequence tail =
                    v.tail_kind == sched::TailSequence::Kind::Zero
                        ? sched::TailSequence::zero()
                        : sched::TailSequence::log_t(v.tail_c);
                bool tail_ok = true;
                double prev = -1.0;
                for (long t = 0; t <= 10000; ++t) {
                    const double val = sched::tail_at(tail, t, v.c_b);
                    tail_ok = tail_ok && val >= prev && val <= static_cast<double>(t) / v.c_b + 1e-12;
                    prev = val;
                }
                rep << "tail sequence: " << (tail_ok ? "ok (non-decreasing, capped)" : "violated")
                    << "\n";
                if (!tail_ok) ++failures;
            }
            const std::string path = (vdir / "report.txt").string();
            write_file(path, rep.str());
            outcome.files.push_back(path);
            out.notes.push_back(v.label + ": " + (failures == 0 ? "verify ok" : "verify FAILED"));
            if (failures > 0) outcome.exit_code = 1;
        }

        if (!out.aggregate.columns.empty()) {
            const std::string path = (vdir / "aggregate.csv").string();
            write_file(path, to_csv(strip_t0(out.aggregate, cfg.T)));
            outcome.files.push_back(path);
        }
        outputs.push_back(std::move(out));
    }

    if (cfg.plot && (cfg.kind == "regress" || cfg.kind == "sparse" || cfg.kind == "bandit")) {
        std::vector<SvgSeries> series;
        const bool regret = cfg.kind == "bandit";
        const std::string column = regret ? "regret_cum_mean" : "err_sq_mean";
        for (const auto& out : outputs) {
            SvgSeries s;
            s.label = out.label;
            for (std::size_t r = 0; r < out.aggregate.rows.size(); ++r) {
                const long t = out.aggregate.rows[r].t;
                const double val = out.aggregate.value(r, column);
                if (!regret && (t <= 0 || val <= 0.0)) continue;  // log-log plot
                s.points.emplace_back(static_cast<double>(t), val);
            }
            if (!s.points.empty()) series.push_back(std::move(s));
        }
        if (!series.empty()) {
            SvgAxes axes;
            axes.log_x = !regret;
            axes.log_y = !regret;
            axes.y_label = regret ? "cumulative regret" : "squared error";
            const std::string path = (fs::path(cfg.out) / "plot.svg").string();
            emit_svg(series, axes, path);
            outcome.files.push_back(path);
        }
    }

    std::ostringstream report;
    report << "experiment " << cfg.kind << ", seed " << cfg.seed << ", T " << cfg.T << ", "
           << cfg.replications << " replication(s), " << cfg.variants.size() << " variant(s)\n";
    for (const auto& out : outputs)
        for (const auto& note : out.notes) report << note << "\n";
    report << "config hash " << hex64(cfg.config_hash) << "\n";
    outcome.report = report.str();
    return outcome;
}

}  // namespace depsgd::harness
