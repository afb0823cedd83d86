#include "schedules/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace depsgd::sched {

StepsizeSchedule StepsizeSchedule::constant(double eta) {
    if (eta <= 0.0) throw std::invalid_argument("stepsize: eta must be positive");
    StepsizeSchedule s;
    s.kind = Kind::Constant;
    s.eta = eta;
    return s;
}

StepsizeSchedule StepsizeSchedule::decaying(double c_a, double c_b, double lambda_min,
                                            double dim_scale, long t1) {
    if (lambda_min <= 0.0) throw std::invalid_argument("stepsize: lambda_min must be positive");
    if (c_b <= 0.0) throw std::invalid_argument("stepsize: c_b must be positive");
    if (dim_scale <= 0.0) throw std::invalid_argument("stepsize: dim_scale must be positive");
    StepsizeSchedule s;
    s.kind = Kind::Decaying;
    s.c_a = c_a;
    s.c_b = c_b;
    s.lambda_min = lambda_min;
    s.dim_scale = dim_scale;
    s.t1 = t1;
    return s;
}

double stepsize_at(const StepsizeSchedule& s, long t) {
    switch (s.kind) {
        case StepsizeSchedule::Kind::Constant:
            return s.eta;
        case StepsizeSchedule::Kind::Decaying: {
            if (t < s.t1) throw std::invalid_argument("stepsize_at: t before schedule start t1");
            return (s.c_a / s.lambda_min) / (static_cast<double>(t - s.t1) + s.c_b * s.dim_scale);
        }
    }
    return 0.0;
}

std::vector<std::string> validate_stepsize(const StepsizeSchedule& s,
                                           std::optional<double> lambda_max, bool strict) {
    std::vector<std::string> issues;
    if (s.kind == StepsizeSchedule::Kind::Constant) {
        if (lambda_max) {
            const double cap = s.lambda_min / (s.dim_scale * (*lambda_max) * (*lambda_max));
            if (s.lambda_min > 0.0 && s.dim_scale > 0.0 && s.eta > cap)
                issues.push_back("constant stepsize " + std::to_string(s.eta) +
                                 " exceeds lambda_min/(d*lambda_max^2) = " + std::to_string(cap));
        }
    } else {
        if (s.c_a < 2.0) issues.push_back("c_a = " + std::to_string(s.c_a) + " below 2");
        if (lambda_max) {
            const double ratio = *lambda_max / s.lambda_min;
            const double need = 3.0 * s.c_a * s.c_a * ratio * ratio;
            if (s.c_b < need)
                issues.push_back("c_b = " + std::to_string(s.c_b) +
                                 " below 3*c_a^2*(lambda_max/lambda_min)^2 = " + std::to_string(need));
        }
    }
    if (strict && !issues.empty()) throw std::invalid_argument("stepsize validation: " + issues.front());
    return issues;
}

ExplorationSchedule ExplorationSchedule::constant_pi(double pi_bar) {
    if (pi_bar < 0.0 || pi_bar > 1.0) throw std::invalid_argument("exploration: pi_bar outside [0,1]");
    ExplorationSchedule e;
    e.kind = Kind::ConstantPi;
    e.pi_bar = pi_bar;
    return e;
}

ExplorationSchedule ExplorationSchedule::harmonic(double c_pi, long t1, double pre_rate) {
    if (c_pi <= 0.0) throw std::invalid_argument("exploration: c_pi must be positive");
    ExplorationSchedule e;
    e.kind = Kind::Harmonic;
    e.c_pi = c_pi;
    e.t1 = t1;
    e.pre_rate = pre_rate;
    return e;
}

ExplorationSchedule ExplorationSchedule::power(double c_pi, double p, long t1, double pre_rate) {
    if (c_pi <= 0.0) throw std::invalid_argument("exploration: c_pi must be positive");
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("exploration: p must be in (0,1)");
    ExplorationSchedule e;
    e.kind = Kind::Power;
    e.c_pi = c_pi;
    e.p = p;
    e.t1 = t1;
    e.pre_rate = pre_rate;
    return e;
}

ExplorationSchedule ExplorationSchedule::two_phase_zero(long t1, double pre_rate) {
    if (pre_rate < 0.0 || pre_rate > 1.0) throw std::invalid_argument("exploration: pre_rate outside [0,1]");
    ExplorationSchedule e;
    e.kind = Kind::TwoPhaseZero;
    e.t1 = t1;
    e.pre_rate = pre_rate;
    return e;
}

ExplorationSchedule ExplorationSchedule::rational(double a, double b, long t1, double pre_rate) {
    if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("exploration: a, b must be positive");
    ExplorationSchedule e;
    e.kind = Kind::Rational;
    e.a = a;
    e.b = b;
    e.t1 = t1;
    e.pre_rate = pre_rate;
    return e;
}

ExplorationSchedule ExplorationSchedule::rational_sqrt(double a, double b, long t1, double pre_rate) {
    if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("exploration: a, b must be positive");
    ExplorationSchedule e;
    e.kind = Kind::RationalSqrt;
    e.a = a;
    e.b = b;
    e.t1 = t1;
    e.pre_rate = pre_rate;
    return e;
}

double ExplorationSchedule::limit() const {
    return kind == Kind::ConstantPi ? pi_bar : 0.0;
}

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

double base_rate(const ExplorationSchedule& e, double x) {
    switch (e.kind) {
        case ExplorationSchedule::Kind::ConstantPi:
            return e.pi_bar;
        case ExplorationSchedule::Kind::Harmonic:
            return e.c_pi / (x + 2.0 * e.c_pi);
        case ExplorationSchedule::Kind::Power:
            return std::pow(e.c_pi / (x + std::pow(2.0, 1.0 / e.p) * e.c_pi), e.p);
        case ExplorationSchedule::Kind::TwoPhaseZero:
            return 0.0;
        case ExplorationSchedule::Kind::Rational:
            return e.a / (x + e.b);
        case ExplorationSchedule::Kind::RationalSqrt:
            return e.a / std::sqrt(x + e.b);
    }
    return 0.0;
}

}  // namespace

double exploration_rate_at(const ExplorationSchedule& e, long t) {
    if (e.kind == ExplorationSchedule::Kind::ConstantPi) return clamp01(e.pi_bar);
    if (t < e.t1) return clamp01(e.pre_rate);
    const double x = static_cast<double>(t - e.t1);
    // Capping at pre_rate keeps the sequence non-increasing across the
    // phase switch when f(0) exceeds the warm-phase rate.
    return clamp01(std::min(e.pre_rate, base_rate(e, x)));
}

PiMembershipReport validate_pi_membership(const ExplorationSchedule& e, long tau, double pi,
                                          long t_check) {
    if (tau < 0) throw std::invalid_argument("validate_pi_membership: tau must be >= 0");
    if (pi <= 0.0 || pi > 1.0) throw std::invalid_argument("validate_pi_membership: pi outside (0,1]");
    if (t_check < 0) t_check = std::max(2 * tau, tau + 1000);

    PiMembershipReport report;
    double prev = 2.0;
    for (long t = 0; t <= t_check; ++t) {
        const double r = exploration_rate_at(e, t);
        if (r < 0.0 || r > 1.0) {
            report = {false, t, "rate outside [0,1]"};
            return report;
        }
        if (r > prev + 1e-15) {
            report = {false, t, "rate increased"};
            return report;
        }
        if (t <= tau && r < pi - 1e-15) {
            report = {false, t, "rate below pi on [0,tau]"};
            return report;
        }
        prev = r;
    }
    return report;
}

TailSequence TailSequence::zero() { return TailSequence{Kind::Zero, 0.0}; }

TailSequence TailSequence::log_t(double c) {
    if (c <= 0.0) throw std::invalid_argument("tail: c must be positive");
    return TailSequence{Kind::LogT, c};
}

double tail_at(const TailSequence& d, long t, double c_b) {
    if (t < 0) throw std::invalid_argument("tail_at: t must be >= 0");
    switch (d.kind) {
        case TailSequence::Kind::Zero:
            return 0.0;
        case TailSequence::Kind::LogT: {
            // log(1+t) avoids the t=0 singularity; cap enforces delta_t <= t/c_b.
            const double raw = d.c * std::log1p(static_cast<double>(t));
            const double cap = static_cast<double>(t) / c_b;
            return std::min(raw, cap);
        }
    }
    return 0.0;
}

}  // namespace depsgd::sched
