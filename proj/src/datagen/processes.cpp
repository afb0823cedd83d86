#include "datagen/processes.hpp"

#include <cmath>
#include <stdexcept>

namespace depsgd::data {

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

num::Vec draw_init(CovariateProcess::Init init, int d, num::Rng& rng) {
    num::Vec x = num::sample_gaussian_vector(rng, d);
    if (init == CovariateProcess::Init::UnitSphere) {
        const double n = num::norm2(x);
        if (n > 0.0)
            for (double& v : x) v /= n;
    }
    return x;
}

}  // namespace

CovariateProcess CovariateProcess::iid_gaussian(int d) {
    CovariateProcess p;
    p.kind = Kind::IidGaussian;
    p.d = d;
    return p;
}

CovariateProcess CovariateProcess::sphere_ar(int d, Init init) {
    CovariateProcess p;
    p.kind = Kind::SphereAR;
    p.d = d;
    p.init = init;
    return p;
}

CovariateProcess CovariateProcess::weighted_history(int d, int window, Init init) {
    if (window < 1) throw std::invalid_argument("covariates: window must be >= 1");
    CovariateProcess p;
    p.kind = Kind::WeightedHistory;
    p.d = d;
    p.window = window;
    p.init = init;
    return p;
}

CovariateProcess CovariateProcess::correlated_gaussian(int d, double rho) {
    if (rho < 0.0 || rho >= 1.0)
        throw std::invalid_argument("covariates: rho must be in [0,1)");
    CovariateProcess p;
    p.kind = Kind::CorrelatedGaussian;
    p.d = d;
    p.rho = rho;
    return p;
}

CovariateProcess CovariateProcess::signed_levels(int d, std::vector<double> levels) {
    if (levels.empty()) throw std::invalid_argument("covariates: levels must be non-empty");
    CovariateProcess p;
    p.kind = Kind::SignedLevels;
    p.d = d;
    p.levels = std::move(levels);
    return p;
}

num::Vec CovariateProcess::next(num::Rng& rng) {
    switch (kind) {
        case Kind::IidGaussian: {
            ++t;
            return num::sample_gaussian_vector(rng, d);
        }
        case Kind::SphereAR: {
            if (t == 0) {
                x_prev = draw_init(init, d, rng);
                ++t;
                return x_prev;
            }
            const double a = rng.rademacher();
            num::Vec x = num::sample_gaussian_vector(rng, d);
            num::axpy(a, sphere_drift_direction(x_prev), x);
            x_prev = x;
            ++t;
            return x;
        }
        case Kind::WeightedHistory: {
            if (t == 0) {
                num::Vec x = draw_init(init, d, rng);
                history.push_back(x);
                ++t;
                return x;
            }
            num::Vec x = num::sample_gaussian_vector(rng, d);
            const double half_width = 1.0 / (2.0 * static_cast<double>(t + 1));
            for (const num::Vec& past : history) {
                const double nu = (2.0 * rng.uniform01() - 1.0) * half_width;
                num::axpy(nu, past, x);
            }
            history.push_back(x);
            if (static_cast<int>(history.size()) > window) history.pop_front();
            ++t;
            return x;
        }
        case Kind::CorrelatedGaussian: {
            // X = sqrt(rho) * Z0 * 1 + sqrt(1-rho) * Z, an equicorrelated
            // Gaussian with unit variances and off-diagonal rho.
            ++t;
            const double shared = std::sqrt(rho) * rng.gaussian();
            num::Vec x = num::sample_gaussian_vector(rng, d);
            const double w = std::sqrt(1.0 - rho);
            for (double& v : x) v = shared + w * v;
            return x;
        }
        case Kind::SignedLevels: {
            ++t;
            num::Vec x(static_cast<std::size_t>(d));
            for (double& v : x) {
                const double level = levels[rng.uniform_int(levels.size())];
                v = rng.rademacher() * level;
            }
            return x;
        }
    }
    throw std::logic_error("covariates: unknown kind");
}

NoiseProcess NoiseProcess::iid_gaussian(double sigma) {
    if (sigma < 0.0) throw std::invalid_argument("noise: sigma must be >= 0");
    NoiseProcess p;
    p.kind = Kind::IidGaussian;
    p.sigma = sigma;
    return p;
}

NoiseProcess NoiseProcess::dependent_sign(double sigma) {
    if (sigma < 0.0) throw std::invalid_argument("noise: sigma must be >= 0");
    NoiseProcess p;
    p.kind = Kind::DependentSign;
    p.sigma = sigma;
    return p;
}

double NoiseProcess::next(num::Rng& rng, const num::Vec& x_t) {
    double xi;
    switch (kind) {
        case Kind::IidGaussian:
            xi = sigma * rng.gaussian();
            break;
        case Kind::DependentSign: {
            if (!started) {
                xi = sigma * rng.gaussian();
            } else {
                xi = rng.rademacher() * dependent_sign_drift(xi_prev, x_first_prev) +
                     sigma * rng.gaussian();
            }
            break;
        }
        default:
            throw std::logic_error("noise: unknown kind");
    }
    started = true;
    xi_prev = xi;
    x_first_prev = x_t.empty() ? 0.0 : x_t[0];
    return xi;
}

num::Vec sphere_drift_direction(const num::Vec& x_prev) {
    num::Vec dir(x_prev.size(), 0.0);
    const double n = num::norm2(x_prev);
    if (n > 0.0)
        for (std::size_t i = 0; i < x_prev.size(); ++i) dir[i] = x_prev[i] / n;
    return dir;
}

double dependent_sign_drift(double xi_prev, double x_first_prev) {
    // sign(0) = 0 kills the drift at a degenerate previous state
    return sign(xi_prev) * std::min(std::fabs(xi_prev), 1.0) * sign(x_first_prev);
}

double emit_regression_obs(const ProblemSpec& spec, const num::Vec& x, double xi) {
    if (spec.num_arms() != 1)
        throw std::invalid_argument("emit_regression_obs: spec must have exactly one arm");
    return num::dot(x, spec.beta_star()) + xi;
}

double emit_bandit_reward(const ProblemSpec& spec, const num::Vec& x, int arm, double xi) {
    if (arm < 0 || arm >= spec.num_arms())
        throw std::invalid_argument("emit_bandit_reward: arm index out of range");
    return num::dot(x, spec.arms[static_cast<std::size_t>(arm)]) + xi;
}

}  // namespace depsgd::data
