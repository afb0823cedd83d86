#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "datagen/processes.hpp"
#include "schedules/schedules.hpp"
#include "sgd/sparse.hpp"

namespace depsgd::harness {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One fully resolved experiment variant. Indices in the file format are
/// 1-based; everything here is already 0-based.
struct VariantConfig {
    std::string label;

    // problem
    int d = 1;
    double sigma = 1.0;
    std::string arms_gen;                      // "", "axes5", "margin5"
    std::vector<num::Vec> arms;                // explicit arms when arms_gen empty
    std::string beta_gen;                      // "", "gaussian_norm"
    double beta_norm = 1.0;
    std::optional<int> sparsity;
    std::string support_gen;                   // "", "random"
    std::vector<int> support;                  // explicit S" (0-based)
    std::vector<double> support_values;
    std::optional<double> lambda_min, lambda_max, lambda_max_s_off, lambda_max_1_off;
    std::optional<double> h;
    std::vector<int> optimal_arms;

    // covariates / noise
    data::CovariateProcess::Kind cov_kind = data::CovariateProcess::Kind::IidGaussian;
    data::CovariateProcess::Init cov_init = data::CovariateProcess::Init::Gaussian;
    int cov_window = 16;
    double cov_rho = 0.5;
    std::vector<double> cov_levels = {1.0, 2.0};
    data::NoiseProcess::Kind noise_kind = data::NoiseProcess::Kind::IidGaussian;

    // stepsize
    double eta_const = 0.0;  // 0 = derived
    double c_a = 3.0;
    double c_b = 100.0;
    long stepsize_t1 = -1;   // -1 = oracle switch (regress) / 0 (bandit warm start)

    // exploration
    sched::ExplorationSchedule::Kind explore_kind = sched::ExplorationSchedule::Kind::ConstantPi;
    double pi_bar = 0.5;
    double c_pi = 10.0;
    double p = 0.5;
    double expl_a = 5.0;
    double expl_b = 50.0;
    long explore_t1 = 0;     // -1 = oracle (TwoPhaseZero)
    double pre_rate = 0.5;
    double c_star = 1.0;     // oracle switch-time constant

    // tail-probability sequence (diagnostics only; no runtime effect)
    sched::TailSequence::Kind tail_kind = sched::TailSequence::Kind::LogT;
    double tail_c = 1.0;

    // sparse
    sgd::RunSparseOptions sparse;

    // infer
    long t_eval = 100000;
    double level = 0.95;

    // verify
    long verify_tau = -1;    // -1 = exploration t1
    double verify_pi = 1.0 / 3.0;
    double verify_h0 = 0.05;
    long verify_samples = 10000;
};

struct RunConfig {
    std::string kind;  // regress | sparse | bandit | infer | verify
    std::uint64_t seed = 0;
    long T = 10000;
    int replications = 1;
    long log_stride = 0;  // 0 = geometric
    std::string out = "out";
    bool plot = false;
    int jobs = 1;
    double scale = 1.0;

    std::vector<VariantConfig> variants;  // at least one ("base")

    /// Canonical key-value dump; parsing it back reproduces this config.
    std::string canonical_text;
    std::uint64_t config_hash = 0;
};

/// Parses the `key = value` / [section] format. Unknown keys, missing
/// seed, and malformed values are hard errors naming the offender.
RunConfig parse_config(const std::string& text);

RunConfig parse_config_file(const std::string& path);

/// Applies a dotted-key override (e.g. "run.seed", "problem.d") on top of
/// existing config text and reparses.
std::string override_key(const std::string& text, const std::string& dotted_key,
                         const std::string& value);

/// Named experiment presets; throws ConfigError for unknown names.
std::string preset_text(const std::string& name);

std::vector<std::string> preset_names();

}  // namespace depsgd::harness
