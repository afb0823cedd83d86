#pragma once

#include <optional>
#include <vector>

#include "numerics/linalg.hpp"

namespace depsgd::data {

/// Ground truth owned by the simulator. Estimators never read it; runners
/// use it to emit observations and to log oracle error/regret.
struct ProblemSpec {
    int d = 1;
    std::vector<num::Vec> arms;  // K true parameter vectors; K=1 for regression
    double sigma = 1.0;

    std::optional<int> sparsity;                // s
    std::optional<std::vector<int>> support;    // S*, 0-based sorted
    std::optional<double> lambda_min;
    std::optional<double> lambda_max;
    std::optional<double> lambda_max_s_off;     // declared, never estimated
    std::optional<double> lambda_max_1_off;     // declared, never estimated
    std::optional<double> h;                    // arm-optimality margin
    std::optional<std::vector<int>> optimal_arms;  // A, 0-based

    int num_arms() const { return static_cast<int>(arms.size()); }
    const num::Vec& beta_star() const { return arms.at(0); }

    /// Throws on violated invariants (|S*| == s, h > 0, K >= 1, shapes).
    void validate() const;
};

ProblemSpec make_regression_spec(num::Vec beta_star, double sigma);

}  // namespace depsgd::data
