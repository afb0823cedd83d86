#pragma once

#include <string>
#include <vector>

#include "harness/config.hpp"

namespace depsgd::harness {

struct RunOutcome {
    int exit_code = 0;
    std::vector<std::string> files;
    std::string report;  // one line per notable result, printed by the CLI
};

/// Materializes the ground-truth problem for one variant. Random pieces
/// (support draw, generated beta*) come from dedicated substreams of the
/// run seed, so the whole experiment is a function of (config, seed).
data::ProblemSpec build_problem(const VariantConfig& v, std::uint64_t seed,
                                const std::string& kind);

data::CovariateProcess build_covariates(const VariantConfig& v);
data::NoiseProcess build_noise(const VariantConfig& v);
sched::ExplorationSchedule build_exploration(const VariantConfig& v,
                                             const data::ProblemSpec& spec);

/// Executes every variant of the experiment, writes per-replication and
/// aggregate CSVs, the manifest, and optionally an SVG plot.
RunOutcome run(const RunConfig& cfg);

}  // namespace depsgd::harness
