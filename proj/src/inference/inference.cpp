#include "inference/inference.hpp"

#include <cmath>
#include <stdexcept>

#include "bandit/bandit.hpp"
#include "common/parallel.hpp"
#include "inference/stats.hpp"

namespace depsgd::infer {

CovAccumulators::CovAccumulators(int num_arms, int d)
    : s_xx(d),
      s_arm(static_cast<std::size_t>(num_arms), num::Mat(d)),
      n_exploit(static_cast<std::size_t>(num_arms), 0) {
    if (num_arms < 1 || d < 1) throw std::invalid_argument("accumulators: bad shape");
}

double CovAccumulators::sigma_star_sq() const {
    if (t < 1) throw std::invalid_argument("accumulators: no samples");
    return rss / static_cast<double>(t);
}

num::Mat CovAccumulators::sigma_hat_all() const {
    if (t < 1) throw std::invalid_argument("accumulators: no samples");
    num::Mat m = s_xx;
    for (double& v : m.data()) v /= static_cast<double>(t);
    return m;
}

void accumulate(CovAccumulators& acc, const num::Vec& x, double y, int arm, bool explored,
                const num::Vec& beta_arm) {
    if (arm < 0 || arm >= static_cast<int>(acc.s_arm.size()))
        throw std::invalid_argument("accumulate: arm out of range");
    num::add_outer(acc.s_xx, 1.0, x);
    if (!explored) {
        num::add_outer(acc.s_arm[static_cast<std::size_t>(arm)], 1.0, x);
        ++acc.n_exploit[static_cast<std::size_t>(arm)];
    }
    const double residual = y - num::dot(x, beta_arm);
    acc.rss += residual * residual;
    ++acc.t;
}

num::Mat finalize_sigma_combined(const CovAccumulators& acc, int arm, double pi_star, int k) {
    if (acc.t < 1) throw std::invalid_argument("finalize_sigma_combined: no samples");
    if (pi_star < 0.0 || pi_star > 1.0)
        throw std::invalid_argument("finalize_sigma_combined: pi_star outside [0,1]");
    if (arm < 0 || arm >= static_cast<int>(acc.s_arm.size()))
        throw std::invalid_argument("finalize_sigma_combined: arm out of range");
    if (pi_star < 1.0 && acc.n_exploit[static_cast<std::size_t>(arm)] < 1)
        throw std::invalid_argument("finalize_sigma_combined: no exploitation samples for arm");

    const double inv_t = 1.0 / static_cast<double>(acc.t);
    const int d = acc.s_xx.n();
    num::Mat out(d);
    const double w_all = pi_star / static_cast<double>(k) * inv_t;
    const num::Mat& s_i = acc.s_arm[static_cast<std::size_t>(arm)];
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double v = w_all * acc.s_xx(i, j);
            if (pi_star < 1.0) v += s_i(i, j) * inv_t;  // (1-pi*) * S_i/((1-pi*)t)
            out(i, j) = v;
        }
    return out;
}

num::Vec limiting_variance_diag(const num::Vec& lambda_raw, double c_a_prime, double sigma_star) {
    num::Vec out(lambda_raw.size());
    for (std::size_t j = 0; j < lambda_raw.size(); ++j) {
        const double lam = lambda_raw[j];
        const double scaled = c_a_prime * lam;
        if (2.0 * scaled <= 1.0)
            throw DegenerateVarianceError("limiting_variance_diag: 2*c_a'*lambda <= 1 at index " +
                                          std::to_string(j));
        out[j] = sigma_star * sigma_star / lam * scaled * scaled / (2.0 * scaled - 1.0);
    }
    return out;
}

num::Vec whiten_and_test(const num::Vec& beta_t, const num::Vec& beta_star, long t,
                         const num::Mat& u, const num::Vec& lambda_c) {
    if (beta_t.size() != beta_star.size() || beta_t.size() != lambda_c.size())
        throw std::invalid_argument("whiten_and_test: dimension mismatch");
    for (double v : lambda_c)
        if (v <= 0.0) throw std::invalid_argument("whiten_and_test: nonpositive variance entry");
    const num::Vec diff = num::sub(beta_t, beta_star);
    num::Vec rotated = num::matvec_transposed(u, diff);
    const double root_t = std::sqrt(static_cast<double>(t));
    for (std::size_t j = 0; j < rotated.size(); ++j) rotated[j] *= root_t / std::sqrt(lambda_c[j]);
    return rotated;
}

CoverageResult coverage_experiment(const data::ProblemSpec& spec,
                                   const data::CovariateProcess& cov,
                                   const data::NoiseProcess& noise, double c_a, double c_b,
                                   const sched::ExplorationSchedule& explore, long t_eval,
                                   double level, int replications, num::Rng rng, long warmstart,
                                   double eta_const, int jobs) {
    spec.validate();
    if (level < 0.0 || level > 1.0)
        throw std::invalid_argument("coverage_experiment: level outside [0,1]");
    if (replications < 1)
        throw std::invalid_argument("coverage_experiment: replications must be >= 1");

    const int k = spec.num_arms();
    const int d = spec.d;
    const double lambda_min = spec.lambda_min.value_or(1.0);
    const double c_a_prime = c_a / lambda_min;
    const double pi_star = explore.limit();
    if (eta_const <= 0.0) {
        eta_const = spec.lambda_max ? 0.4 * lambda_min / (d * *spec.lambda_max * *spec.lambda_max)
                                    : 0.5 / static_cast<double>(d);
    }

    const bool rect_all = level >= 1.0;
    const bool rect_none = level <= 0.0;
    const double z = rect_all || rect_none ? 0.0 : normal_quantile(0.5 + level / 2.0);
    const double chi_sq = rect_all || rect_none ? 0.0 : chi_squared_quantile(level, d);

    CoverageResult result;
    result.c_a_prime = c_a_prime;

    struct RepOutput {
        std::vector<CoverageRow> rows;
        num::Vec raw_error;
        long covered_rect = 0;
        long covered_ell = 0;
    };
    std::vector<RepOutput> outputs(static_cast<std::size_t>(replications));

    auto run_one = [&](int rep) {
        num::Rng cov_rng = rng.substream(static_cast<std::uint64_t>(rep), "cov");
        num::Rng noise_rng = rng.substream(static_cast<std::uint64_t>(rep), "noise");
        num::Rng decide_rng = rng.substream(static_cast<std::uint64_t>(rep), "decide");
        data::CovariateProcess cov_stream = cov;
        data::NoiseProcess noise_stream = noise;

        bandit::BanditState state(k, d);
        CovAccumulators acc(k, d);

        for (long t = 0; t < t_eval; ++t) {
            const num::Vec x = cov_stream.next(cov_rng);
            int arm = 0;
            bool explored = true;
            if (k > 1) {
                const double pi_t = sched::exploration_rate_at(explore, t);
                std::tie(arm, explored) = bandit::choose_arm(x, state.betas, pi_t, decide_rng);
            } else {
                explored = decide_rng.bernoulli(sched::exploration_rate_at(explore, t));
            }
            const double xi = noise_stream.next(noise_rng, x);
            const double y = data::emit_bandit_reward(spec, x, arm, xi);
            accumulate(acc, x, y, arm, explored, state.betas[static_cast<std::size_t>(arm)]);
            const double eta =
                t < warmstart ? eta_const
                              : (c_a / lambda_min) /
                                    (static_cast<double>(t - warmstart) + c_b * d);
            bandit::bandit_update(state, x, y, arm, eta);
        }

        const double sigma_star = std::sqrt(acc.sigma_star_sq());
        RepOutput& out = outputs[static_cast<std::size_t>(rep)];
        for (int arm = 0; arm < k; ++arm) {
            const num::Mat sigma = finalize_sigma_combined(acc, arm, pi_star, k);
            const num::EigenDecomposition eig = num::sym_eigendecompose(sigma);
            const num::Vec lambda_c = limiting_variance_diag(eig.eigenvalues, c_a_prime, sigma_star);
            const num::Vec stat = whiten_and_test(state.betas[static_cast<std::size_t>(arm)],
                                                  spec.arms[static_cast<std::size_t>(arm)], t_eval,
                                                  eig.u, lambda_c);
            double norm_sq = 0.0;
            for (int j = 0; j < d; ++j) {
                const double s = stat[static_cast<std::size_t>(j)];
                norm_sq += s * s;
                const bool cov_j = rect_all ? true : (rect_none ? false : std::fabs(s) <= z);
                out.rows.push_back({rep, arm, j, s, cov_j});
                out.covered_rect += cov_j ? 1 : 0;
            }
            const bool cov_e = rect_all ? true : (rect_none ? false : norm_sq <= chi_sq);
            out.covered_ell += cov_e ? 1 : 0;
        }
        out.raw_error = num::sub(state.betas[0], spec.arms[0]);
    };
    parallel_for(replications, jobs, run_one);

    long covered_rect = 0, covered_ell = 0;
    for (auto& out : outputs) {
        covered_rect += out.covered_rect;
        covered_ell += out.covered_ell;
        for (auto& row : out.rows) result.rows.push_back(row);
        result.raw_final_error.push_back(std::move(out.raw_error));
    }
    result.coverage_rect =
        static_cast<double>(covered_rect) / static_cast<double>(replications * k * d);
    result.coverage_ellipsoid =
        static_cast<double>(covered_ell) / static_cast<double>(replications * k);
    return result;
}

}  // namespace depsgd::infer
