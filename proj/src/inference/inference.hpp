#pragma once

#include "datagen/processes.hpp"
#include "numerics/eigen.hpp"
#include "schedules/schedules.hpp"

namespace depsgd::infer {

/// Streaming second-moment accumulators. S_xx sums all covariate outer
/// products; per-arm matrices pick up exploitation steps only; rss tracks
/// squared residuals against the working iterates.
struct CovAccumulators {
    explicit CovAccumulators(int num_arms, int d);

    long t = 0;
    num::Mat s_xx;
    std::vector<num::Mat> s_arm;
    std::vector<long> n_exploit;
    double rss = 0.0;

    double sigma_star_sq() const;   // rss / t
    num::Mat sigma_hat_all() const; // s_xx / t
};

void accumulate(CovAccumulators& acc, const num::Vec& x, double y, int arm, bool explored,
                const num::Vec& beta_arm);

/// (pi*/K) * Sigma_hat + S_i / t, the plug-in for the exploitation-weighted
/// second moment of arm i. pi* = 1 collapses to Sigma_hat / K; pi* < 1
/// requires at least one exploitation sample of the arm.
num::Mat finalize_sigma_combined(const CovAccumulators& acc, int arm, double pi_star, int k);

struct DegenerateVarianceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Per-eigendirection limiting variances:
/// sigma*^2 / lambda_j * (c' lambda_j)^2 / (2 c' lambda_j - 1).
/// Every 2 c' lambda_j must exceed 1.
num::Vec limiting_variance_diag(const num::Vec& lambda_raw, double c_a_prime, double sigma_star);

/// sqrt(t) * diag(lambda_c^{-1/2}) * U^T * (beta_t - beta*). The rotation
/// comes first; the limit law is Gaussian with covariance U Lambda U^T,
/// so both steps are needed to whiten.
num::Vec whiten_and_test(const num::Vec& beta_t, const num::Vec& beta_star, long t,
                         const num::Mat& u, const num::Vec& lambda_c);

struct CoverageRow {
    int replication;
    int arm;
    int coordinate;
    double whitened;
    bool covered;
};

struct CoverageResult {
    double coverage_rect = 0.0;       // per-coordinate two-sided normal interval
    double coverage_ellipsoid = 0.0;  // chi-square ball on the whole vector
    std::vector<CoverageRow> rows;
    std::vector<num::Vec> raw_final_error;  // per replication: beta_t - beta* (arm 0)
    double c_a_prime = 0.0;
};

/// Monte Carlo coverage of the plug-in confidence regions at t_eval.
/// Each replication runs the epsilon-greedy recursion (regression when
/// K=1) with streaming accumulators, whitens the final error with the
/// estimated rotation and variances, and tests the level-`level` regions.
CoverageResult coverage_experiment(const data::ProblemSpec& spec,
                                   const data::CovariateProcess& cov,
                                   const data::NoiseProcess& noise, double c_a, double c_b,
                                   const sched::ExplorationSchedule& explore, long t_eval,
                                   double level, int replications, num::Rng rng,
                                   long warmstart = 0, double eta_const = 0.0, int jobs = 1);

}  // namespace depsgd::infer
