#pragma once

#include <utility>

#include "common/trajectory.hpp"
#include "datagen/processes.hpp"
#include "schedules/schedules.hpp"
#include "sgd/dense.hpp"

namespace depsgd::sgd {

/// Sorted index set; supports only grow (one coordinate per update).
class SupportSet {
public:
    SupportSet() = default;
    explicit SupportSet(std::vector<int> indices);

    bool contains(int i) const;
    void add(int i);
    int size() const { return static_cast<int>(idx_.size()); }
    const std::vector<int>& indices() const { return idx_; }

private:
    std::vector<int> idx_;
};

/// Zeroes every coordinate outside S.
num::Vec hard_threshold(const num::Vec& v, const SupportSet& s);

struct SparseSgdState {
    num::Vec beta;       // zero outside support after every step
    SupportSet support;
    num::Vec g_window;   // gradient sum since the last support update
    num::Vec g_cum;      // gradient sum since step 0
    long t = 0;
    long last_update_t = 0;
    std::vector<std::pair<long, int>> update_log;  // (step, added index)
};

/// Projected step: beta <- H_S(beta - eta*g) with g = (x.beta - y) x.
/// Both gradient accumulators pick up the full (unprojected) g.
void sparse_sgd_step(SparseSgdState& state, const num::Vec& x, double y, double eta);

/// argmax over S^c of |G_i|, ties broken by lowest index. Throws when S
/// already covers every coordinate.
int select_support_addition(const num::Vec& g, const SupportSet& s);

enum class UpdateWindow { Local, Cumulative };

/// Planning-only schedule of support-update times, assuming each update
/// captures the strongest still-missing coordinate. All unspecified
/// constants are c_sched. Empty when the initial support already covers
/// the truth.
std::vector<long> oracle_update_times(const data::ProblemSpec& spec,
                                      const std::vector<int>& initial_support,
                                      UpdateWindow window, double c_sched, double c_a);

/// Data-driven trigger: fires when the largest off-support |G| entry
/// dominates the off-support median by factor rho and min_gap steps have
/// passed since the last update.
bool heuristic_update_trigger(const SparseSgdState& state, double rho, long min_gap,
                              bool use_cumulative);

enum class SparseMode { FixedSupport, OracleLocal, OracleCumulative, Heuristic };

struct RunSparseOptions {
    SparseMode mode = SparseMode::Heuristic;
    std::vector<int> initial_support;  // empty = derive from warm-up
    long warmup_steps = 2000;          // dense constant-stepsize phase
    double warmup_eta = 0.0;           // 0 = derive from lambda bounds
    int keep_top = 0;                  // 0 = s + 2
    double rho = 10.0;
    long min_gap = 1000;
    bool heuristic_cumulative = true;
    int s_max = 0;                     // 0 = 2s when s known, else d
    double c_sched = 1.0;
    long log_stride = 0;
    bool compare_dense = false;        // lockstep dense twin on the same stream
};

struct RunSparseResult {
    TrajectoryRecord traj;
    std::vector<int> final_support;
    std::vector<std::pair<long, int>> update_log;  // (sparse-phase step, added index)
};

/// Warm-up dense phase, one-shot hard threshold to the keep_top largest
/// entries, then projected SGD with support updates per mode. Logs total
/// and on-support oracle error, support size, and update events. With
/// compare_dense a dense two-phase run consumes the identical stream and
/// its error goes in the dense_err_sq column.
RunSparseResult run_sparse(const data::ProblemSpec& spec, data::CovariateProcess cov,
                           data::NoiseProcess noise, double c_a, double c_b, long T,
                           num::Rng rng, const RunSparseOptions& opts);

}  // namespace depsgd::sgd
