#pragma once

#include <string>

#include "common/trajectory.hpp"

namespace depsgd::harness {

/// Shortest round-trip decimal rendering of a double; NaN renders empty.
std::string format_double(double v);

std::string to_csv(const TrajectoryRecord& traj);

void write_file(const std::string& path, const std::string& content);

}  // namespace depsgd::harness
