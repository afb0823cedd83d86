#include "sgd/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace depsgd::sgd {

SupportSet::SupportSet(std::vector<int> indices) : idx_(std::move(indices)) {
    std::sort(idx_.begin(), idx_.end());
    for (std::size_t i = 1; i < idx_.size(); ++i)
        if (idx_[i] == idx_[i - 1]) throw std::invalid_argument("support: duplicate index");
}

bool SupportSet::contains(int i) const {
    return std::binary_search(idx_.begin(), idx_.end(), i);
}

void SupportSet::add(int i) {
    const auto it = std::lower_bound(idx_.begin(), idx_.end(), i);
    if (it != idx_.end() && *it == i) throw std::invalid_argument("support: index already present");
    idx_.insert(it, i);
}

num::Vec hard_threshold(const num::Vec& v, const SupportSet& s) {
    num::Vec out(v.size(), 0.0);
    for (int i : s.indices())
        if (i >= 0 && i < static_cast<int>(v.size())) out[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)];
    return out;
}

void sparse_sgd_step(SparseSgdState& state, const num::Vec& x, double y, double eta) {
    if (x.size() != state.beta.size()) throw std::invalid_argument("sparse_sgd_step: dimension mismatch");
    if (!num::all_finite(x) || !std::isfinite(y) || !std::isfinite(eta))
        throw std::invalid_argument("sparse_sgd_step: non-finite input");
    const double residual = num::dot(x, state.beta) - y;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double g = residual * x[i];
        state.g_window[i] += g;
        state.g_cum[i] += g;
    }
    for (int i : state.support.indices()) {
        const auto k = static_cast<std::size_t>(i);
        state.beta[k] -= eta * residual * x[k];
    }
    ++state.t;
}

int select_support_addition(const num::Vec& g, const SupportSet& s) {
    const int d = static_cast<int>(g.size());
    if (s.size() >= d) throw std::invalid_argument("select_support_addition: support already full");
    int best = -1;
    double best_abs = -1.0;
    for (int i = 0; i < d; ++i) {
        if (s.contains(i)) continue;
        const double a = std::fabs(g[static_cast<std::size_t>(i)]);
        if (a > best_abs) {
            best_abs = a;
            best = i;
        }
    }
    return best;
}

std::vector<long> oracle_update_times(const data::ProblemSpec& spec,
                                      const std::vector<int>& initial_support,
                                      UpdateWindow window, double c_sched, double c_a) {
    if (!spec.support) throw std::invalid_argument("oracle_update_times: spec has no true support");
    if (!spec.lambda_min) throw std::invalid_argument("oracle_update_times: spec has no lambda_min");
    if (c_sched <= 0.0) throw std::invalid_argument("oracle_update_times: c_sched must be positive");

    const num::Vec& beta = spec.beta_star();
    SupportSet s0(initial_support);
    std::vector<int> missing;
    for (int i : *spec.support)
        if (!s0.contains(i)) missing.push_back(i);
    if (missing.empty()) return {};

    // Planning assumption: each update captures the strongest remaining
    // coordinate, so order the missing set by signal size.
    std::stable_sort(missing.begin(), missing.end(), [&](int a, int b) {
        return std::fabs(beta[static_cast<std::size_t>(a)]) > std::fabs(beta[static_cast<std::size_t>(b)]);
    });

    const double d = static_cast<double>(spec.d);
    const double lam = *spec.lambda_min;
    const double sig_sq = spec.sigma * spec.sigma;
    const int s_plus = static_cast<int>(missing.size());

    auto tail_norm_sq = [&](int from) {
        double v = 0.0;
        for (int i = from; i < s_plus; ++i) {
            const double b = beta[static_cast<std::size_t>(missing[static_cast<std::size_t>(i)])];
            v += b * b;
        }
        return v;
    };

    std::vector<long> times;

    // First update: smallest tau >= 3 with tau/log(tau) above the
    // detection threshold (the map is increasing there, so the first hit
    // persists).
    {
        const double threshold = c_sched * s_plus * std::log(2.0 * d / s_plus) * sig_sq /
                                 (lam * tail_norm_sq(0));
        long tau = 3;
        while (static_cast<double>(tau) / std::log(static_cast<double>(tau)) < threshold) ++tau;
        times.push_back(tau);
    }

    for (int l = 2; l <= s_plus; ++l) {
        const int s_l = s_plus - l + 1;  // still missing before this update
        const double rem_sq = tail_norm_sq(l - 1);
        const double base = c_sched * s_l * std::log(2.0 * d / s_l) * sig_sq / (lam * rem_sq);
        const long prev = times.back();
        double candidate;
        if (window == UpdateWindow::Local) {
            double acc = 0.0;
            for (int i = 1; i <= l - 1; ++i) {
                const double tau_i = static_cast<double>(times[static_cast<std::size_t>(i - 1)]);
                const double added = beta[static_cast<std::size_t>(missing[static_cast<std::size_t>(i - 1)])];
                // tau_i^{c_a-2} / prev^{c_a-4} rearranged to avoid overflow
                acc += tau_i * tau_i * std::pow(tau_i / static_cast<double>(prev), c_a - 4.0) *
                       added * added;
            }
            const double growth = std::sqrt(c_sched * acc / rem_sq);
            candidate = std::max(growth, static_cast<double>(prev) + base);
        } else {
            double acc = 0.0;
            for (int i = 1; i <= l - 1; ++i) {
                const double tau_i = static_cast<double>(times[static_cast<std::size_t>(i - 1)]);
                const double added = beta[static_cast<std::size_t>(missing[static_cast<std::size_t>(i - 1)])];
                acc += tau_i * std::fabs(added);
            }
            const double growth = c_sched * acc / std::sqrt(rem_sq);
            candidate = std::max(growth, base);
        }
        times.push_back(std::max(prev + 1, static_cast<long>(std::ceil(candidate))));
    }
    return times;
}

bool heuristic_update_trigger(const SparseSgdState& state, double rho, long min_gap,
                              bool use_cumulative) {
    if (rho <= 1.0) throw std::invalid_argument("heuristic_update_trigger: rho must exceed 1");
    if (state.t - state.last_update_t < min_gap) return false;
    const num::Vec& g = use_cumulative ? state.g_cum : state.g_window;
    std::vector<double> off;
    off.reserve(g.size());
    for (int i = 0; i < static_cast<int>(g.size()); ++i)
        if (!state.support.contains(i)) off.push_back(std::fabs(g[static_cast<std::size_t>(i)]));
    if (off.empty()) return false;
    const double mx = *std::max_element(off.begin(), off.end());
    if (mx <= 0.0) return false;
    const std::size_t mid = (off.size() - 1) / 2;
    std::nth_element(off.begin(), off.begin() + static_cast<std::ptrdiff_t>(mid), off.end());
    const double median = off[mid];
    return mx >= rho * median;
}

namespace {

std::vector<int> top_abs_indices(const num::Vec& v, int k) {
    std::vector<int> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::fabs(v[static_cast<std::size_t>(a)]) > std::fabs(v[static_cast<std::size_t>(b)]);
    });
    order.resize(static_cast<std::size_t>(std::min<int>(k, static_cast<int>(v.size()))));
    std::sort(order.begin(), order.end());
    return order;
}

struct SplitError {
    double on = 0.0;
    double off = 0.0;
};

// Partial sums are taken in ascending coordinate order on each side so the
// off-support part matches a direct subset sum bit for bit.
SplitError split_error(const num::Vec& beta, const num::Vec& beta_star, const SupportSet& s) {
    SplitError e;
    for (int i = 0; i < static_cast<int>(beta.size()); ++i) {
        const double diff = beta[static_cast<std::size_t>(i)] - beta_star[static_cast<std::size_t>(i)];
        if (s.contains(i))
            e.on += diff * diff;
        else
            e.off += diff * diff;
    }
    return e;
}

}  // namespace

RunSparseResult run_sparse(const data::ProblemSpec& spec, data::CovariateProcess cov,
                           data::NoiseProcess noise, double c_a, double c_b, long T,
                           num::Rng rng, const RunSparseOptions& opts) {
    spec.validate();
    if (spec.num_arms() != 1) throw std::invalid_argument("run_sparse: spec must have one arm");

    const int d = spec.d;
    const double lambda_min = spec.lambda_min.value_or(1.0);
    const bool s_known = spec.sparsity.has_value();
    const double dim_scale =
        s_known ? *spec.sparsity * std::log(2.0 * d / *spec.sparsity) : static_cast<double>(d);
    const int s_max = opts.s_max > 0 ? opts.s_max : (s_known ? 2 * *spec.sparsity : d);

    const bool have_support = !opts.initial_support.empty();
    int keep_top = opts.keep_top;
    if (!have_support && keep_top <= 0) {
        if (!s_known)
            throw std::invalid_argument("run_sparse: warm-up threshold needs sparsity or keep_top");
        keep_top = *spec.sparsity + 2;
    }
    const long warm = have_support ? 0 : std::min(opts.warmup_steps, T);
    double warm_eta = opts.warmup_eta;
    if (warm_eta <= 0.0) {
        warm_eta = spec.lambda_max ? 0.4 * lambda_min / (d * *spec.lambda_max * *spec.lambda_max)
                                   : 0.5 / static_cast<double>(d);
    }

    SparseSgdState sp;
    sp.beta.assign(static_cast<std::size_t>(d), 0.0);
    sp.g_window.assign(static_cast<std::size_t>(d), 0.0);
    sp.g_cum.assign(static_cast<std::size_t>(d), 0.0);
    if (have_support) {
        sp.support = SupportSet(opts.initial_support);
        for (int i : sp.support.indices())
            if (i < 0 || i >= d) throw std::invalid_argument("run_sparse: support index out of range");
    }

    DenseSgdState twin;
    if (opts.compare_dense) twin.beta.assign(static_cast<std::size_t>(d), 0.0);

    const num::Vec& beta_star = spec.beta_star();
    const bool oracle_mode =
        opts.mode == SparseMode::OracleLocal || opts.mode == SparseMode::OracleCumulative;
    std::vector<long> oracle_times;
    std::size_t next_oracle = 0;
    if (oracle_mode && have_support)
        oracle_times = oracle_update_times(
            spec, sp.support.indices(),
            opts.mode == SparseMode::OracleLocal ? UpdateWindow::Local : UpdateWindow::Cumulative,
            opts.c_sched, c_a);

    TrajectoryRecord traj;
    traj.experiment = "sparse";
    traj.columns = {"err_sq", "err_sq_on_support", "support_size", "event", "err_sq_off"};
    if (opts.compare_dense) traj.columns.push_back("dense_err_sq");

    const double nan = std::nan("");
    auto log_row = [&](long t_global, double event) {
        const bool dense_phase = t_global <= warm && !have_support;
        SplitError e;
        if (dense_phase) {
            for (int i = 0; i < d; ++i) {
                const double diff = sp.beta[static_cast<std::size_t>(i)] - beta_star[static_cast<std::size_t>(i)];
                e.on += diff * diff;
            }
        } else {
            e = split_error(sp.beta, beta_star, sp.support);
        }
        std::vector<double> row = {e.on + e.off, e.on,
                                   dense_phase ? static_cast<double>(d)
                                               : static_cast<double>(sp.support.size()),
                                   event, e.off};
        if (opts.compare_dense)
            row.push_back(num::norm2_sq(num::sub(twin.beta, beta_star)));
        traj.add(t_global, std::move(row));
    };

    LogGrid grid(opts.log_stride);
    log_row(0, nan);
    grid.advance(0);

    for (long t_global = 0; t_global < T; ++t_global) {
        // One-shot threshold at the end of the warm-up phase.
        if (!have_support && t_global == warm && sp.support.size() == 0) {
            sp.support = SupportSet(top_abs_indices(sp.beta, keep_top));
            sp.beta = hard_threshold(sp.beta, sp.support);
            if (oracle_mode)
                oracle_times = oracle_update_times(spec, sp.support.indices(),
                                                   opts.mode == SparseMode::OracleLocal
                                                       ? UpdateWindow::Local
                                                       : UpdateWindow::Cumulative,
                                                   opts.c_sched, c_a);
        }

        const bool sparse_phase = t_global >= warm && (have_support || sp.support.size() > 0);
        double event = nan;
        if (sparse_phase) {
            const long t_local = sp.t;
            bool do_update = false;
            bool from_window = false;
            if (oracle_mode && next_oracle < oracle_times.size() &&
                t_local >= oracle_times[next_oracle]) {
                ++next_oracle;
                do_update = true;
                from_window = opts.mode == SparseMode::OracleLocal;
            } else if (opts.mode == SparseMode::Heuristic &&
                       heuristic_update_trigger(sp, opts.rho, opts.min_gap,
                                                opts.heuristic_cumulative)) {
                do_update = true;
                from_window = !opts.heuristic_cumulative;
            }
            if (do_update && sp.support.size() < std::min(s_max, d)) {
                const int added = select_support_addition(from_window ? sp.g_window : sp.g_cum,
                                                          sp.support);
                sp.support.add(added);
                sp.update_log.emplace_back(t_local, added);
                sp.last_update_t = t_local;
                std::fill(sp.g_window.begin(), sp.g_window.end(), 0.0);
                event = static_cast<double>(added + 1);  // 1-based in logs
            }
        }

        const num::Vec x = cov.next(rng);
        const double xi = noise.next(rng, x);
        const double y = data::emit_regression_obs(spec, x, xi);

        if (!sparse_phase) {
            // warm-up: plain dense update, gradient statistics not yet running
            const double residual = num::dot(x, sp.beta) - y;
            num::axpy(-warm_eta * residual, x, sp.beta);
        } else {
            const double eta = (c_a / lambda_min) /
                               (static_cast<double>(sp.t) + c_b * dim_scale);
            sparse_sgd_step(sp, x, y, eta);
        }

        if (opts.compare_dense) {
            const double eta_twin =
                t_global < warm
                    ? warm_eta
                    : (c_a / lambda_min) / (static_cast<double>(t_global - warm) + c_b * d);
            sgd_step(twin, x, y, eta_twin);
        }

        const long now = t_global + 1;
        if (grid.should_log(now) || now == T || !std::isnan(event)) {
            log_row(now, event);
            grid.advance(now);
        }
    }
    return {std::move(traj), sp.support.indices(), std::move(sp.update_log)};
}

}  // namespace depsgd::sgd
