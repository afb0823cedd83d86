#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace depsgd::sched {

/// Learning-rate sequence. Constant keeps eta fixed; Decaying follows
/// (c_a / lambda_min) / (t - t1 + c_b * dim_scale). dim_scale is the
/// ambient dimension for dense estimation and s*log(2d/s) for sparse.
struct StepsizeSchedule {
    enum class Kind { Constant, Decaying };

    Kind kind = Kind::Constant;
    double eta = 0.0;          // Constant only
    double c_a = 2.0;          // Decaying
    double c_b = 1.0;          // Decaying
    double lambda_min = 1.0;   // Decaying
    double dim_scale = 1.0;    // Decaying
    long t1 = 0;               // Decaying: first valid step

    static StepsizeSchedule constant(double eta);
    static StepsizeSchedule decaying(double c_a, double c_b, double lambda_min,
                                     double dim_scale, long t1);
};

double stepsize_at(const StepsizeSchedule& s, long t);

/// Checks the sufficient conditions on the schedule constants given
/// lambda_max. Returns human-readable violations; empty means clean.
/// With strict=true a violation throws instead (simulation/oracle mode).
std::vector<std::string> validate_stepsize(const StepsizeSchedule& s,
                                           std::optional<double> lambda_max,
                                           bool strict = false);

/// Exploration-probability sequence pi_t in [0,1], non-increasing.
/// All kinds support a warm phase: for t < t1 the rate is pre_rate, and
/// afterwards min(pre_rate, f(t - t1)) so the sequence never increases.
struct ExplorationSchedule {
    enum class Kind {
        ConstantPi,    // pi_bar
        Harmonic,      // c_pi / (x + 2 c_pi)
        Power,         // (c_pi / (x + 2^{1/p} c_pi))^p, 0 < p < 1
        TwoPhaseZero,  // pre_rate before t1, zero afterwards
        Rational,      // a / (x + b)
        RationalSqrt,  // a / sqrt(x + b)
    };

    Kind kind = Kind::ConstantPi;
    double pi_bar = 1.0;  // ConstantPi
    double c_pi = 1.0;    // Harmonic / Power
    double p = 0.5;       // Power
    double a = 1.0;       // Rational / RationalSqrt
    double b = 1.0;       // Rational / RationalSqrt
    long t1 = 0;          // warm-phase length (switch step for TwoPhaseZero)
    double pre_rate = 1.0;

    static ExplorationSchedule constant_pi(double pi_bar);
    static ExplorationSchedule harmonic(double c_pi, long t1 = 0, double pre_rate = 1.0);
    static ExplorationSchedule power(double c_pi, double p, long t1 = 0, double pre_rate = 1.0);
    static ExplorationSchedule two_phase_zero(long t1, double pre_rate);
    static ExplorationSchedule rational(double a, double b, long t1 = 0, double pre_rate = 1.0);
    static ExplorationSchedule rational_sqrt(double a, double b, long t1 = 0, double pre_rate = 1.0);

    /// Limit of the rate as t -> infinity (plug-in pi* for inference).
    double limit() const;
};

double exploration_rate_at(const ExplorationSchedule& e, long t);

struct PiMembershipReport {
    bool ok = true;
    long first_violation = -1;
    std::string reason;
};

/// Samples the schedule on {0,...,max(tau,t_check)} and verifies the
/// membership conditions: non-increasing, in [0,1], and >= pi on [0,tau].
PiMembershipReport validate_pi_membership(const ExplorationSchedule& e, long tau, double pi,
                                          long t_check = -1);

/// Tail-probability sequence delta_t: Zero, or c*log(1+t) capped at t/c_b
/// so the growth condition is enforced by construction.
struct TailSequence {
    enum class Kind { Zero, LogT };
    Kind kind = Kind::Zero;
    double c = 1.0;

    static TailSequence zero();
    static TailSequence log_t(double c);
};

double tail_at(const TailSequence& d, long t, double c_b);

}  // namespace depsgd::sched
