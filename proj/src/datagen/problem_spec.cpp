#include "datagen/problem_spec.hpp"

#include <stdexcept>

namespace depsgd::data {

void ProblemSpec::validate() const {
    if (d < 1) throw std::invalid_argument("problem: d must be >= 1");
    if (arms.empty()) throw std::invalid_argument("problem: at least one arm required");
    for (const auto& b : arms)
        if (static_cast<int>(b.size()) != d)
            throw std::invalid_argument("problem: arm dimension mismatch");
    if (support) {
        int prev = -1;
        for (int i : *support) {
            if (i < 0 || i >= d) throw std::invalid_argument("problem: support index out of range");
            if (i <= prev) throw std::invalid_argument("problem: support must be sorted, unique");
            prev = i;
        }
        if (sparsity && static_cast<int>(support->size()) != *sparsity)
            throw std::invalid_argument("problem: |support| != sparsity");
    }
    if (h && *h <= 0.0) throw std::invalid_argument("problem: h must be positive");
    if (sigma < 0.0) throw std::invalid_argument("problem: sigma must be >= 0");
    if (optimal_arms) {
        for (int i : *optimal_arms)
            if (i < 0 || i >= num_arms())
                throw std::invalid_argument("problem: optimal arm index out of range");
    }
}

ProblemSpec make_regression_spec(num::Vec beta_star, double sigma) {
    ProblemSpec spec;
    spec.d = static_cast<int>(beta_star.size());
    spec.arms.push_back(std::move(beta_star));
    spec.sigma = sigma;
    spec.validate();
    return spec;
}

}  // namespace depsgd::data
