#include "common/trajectory.hpp"

#include <algorithm>
#include <stdexcept>

namespace depsgd {

double TrajectoryRecord::value(std::size_t r, const std::string& column) const {
    const auto it = std::find(columns.begin(), columns.end(), column);
    if (it == columns.end()) throw std::invalid_argument("trajectory: no column " + column);
    return rows.at(r).values.at(static_cast<std::size_t>(it - columns.begin()));
}

long TrajectoryRecord::row_at_or_before(long t) const {
    long best = -1;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].t <= t) best = static_cast<long>(i);
    return best;
}

LogGrid::LogGrid(long stride) : stride_(stride) {
    if (stride < 0) throw std::invalid_argument("log grid: stride must be >= 0");
}

bool LogGrid::should_log(long t) const {
    if (stride_ > 0) return t % stride_ == 0;
    return t >= next_;
}

void LogGrid::advance(long t) {
    if (stride_ > 0) return;
    if (t >= next_) {
        long step = static_cast<long>(static_cast<double>(t) * 0.2);
        next_ = t + std::max<long>(1, step);
    }
}

}  // namespace depsgd
