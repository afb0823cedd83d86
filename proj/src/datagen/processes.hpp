#pragma once

#include <deque>

#include "datagen/problem_spec.hpp"
#include "numerics/rng.hpp"

namespace depsgd::data {

/// Covariate stream generators. All kinds are conditionally mean-zero
/// given the history (the innovations and sign flips are centered).
///
/// IidGaussian        fresh N(0, I_d) each step
/// SphereAR           a_t * X_{t-1}/||X_{t-1}|| + E_t, a_t Rademacher
/// WeightedHistory    sum_i nu_{t,i} X_{t-i} + E_t over a bounded window,
///                    nu_{t,i} ~ U[-1/(2(t+1)), 1/(2(t+1))]
/// CorrelatedGaussian N(0, Sigma) with equicorrelation rho; the one kind
///                    with persistent cross-coordinate correlation
/// SignedLevels       per coordinate, (Rademacher sign) * (level drawn
///                    uniformly from a small set); discrete, isotropic
struct CovariateProcess {
    enum class Kind { IidGaussian, SphereAR, WeightedHistory, CorrelatedGaussian, SignedLevels };
    enum class Init { Gaussian, UnitSphere };

    static CovariateProcess iid_gaussian(int d);
    static CovariateProcess sphere_ar(int d, Init init = Init::Gaussian);
    static CovariateProcess weighted_history(int d, int window = 16, Init init = Init::Gaussian);
    static CovariateProcess correlated_gaussian(int d, double rho);
    static CovariateProcess signed_levels(int d, std::vector<double> levels);

    num::Vec next(num::Rng& rng);

    Kind kind = Kind::IidGaussian;
    int d = 1;
    Init init = Init::Gaussian;
    int window = 16;
    double rho = 0.0;
    std::vector<double> levels;

    // mutable stream state
    long t = 0;
    num::Vec x_prev;
    std::deque<num::Vec> history;
};

/// Noise stream generators.
///
/// IidGaussian     sigma * N(0,1)
/// DependentSign   Rademacher * sign(xi_{t-1}) * min(|xi_{t-1}|,1)
///                 * sign(X_{t-1}(1)) + sigma * N(0,1)
struct NoiseProcess {
    enum class Kind { IidGaussian, DependentSign };

    static NoiseProcess iid_gaussian(double sigma);
    static NoiseProcess dependent_sign(double sigma);

    /// Draws xi_t. x_t is the covariate generated this step; the drift
    /// uses the one from the previous call.
    double next(num::Rng& rng, const num::Vec& x_t);

    Kind kind = Kind::IidGaussian;
    double sigma = 1.0;

    // mutable stream state
    bool started = false;
    double xi_prev = 0.0;
    double x_first_prev = 0.0;
};

/// x/||x||, or the zero vector when ||x|| = 0 (keeps the drift centered
/// and free of NaNs at the degenerate state).
num::Vec sphere_drift_direction(const num::Vec& x_prev);

/// sign(xi_prev) * min(|xi_prev|, 1) * sign(x_first_prev); sign(0) = 0.
double dependent_sign_drift(double xi_prev, double x_first_prev);

double emit_regression_obs(const ProblemSpec& spec, const num::Vec& x, double xi);
double emit_bandit_reward(const ProblemSpec& spec, const num::Vec& x, int arm, double xi);

}  // namespace depsgd::data
