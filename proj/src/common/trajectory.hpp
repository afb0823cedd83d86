#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace depsgd {

/// Time-indexed experiment log. Column values are doubles; NaN renders as
/// an empty CSV field (used for the sparse "event" column).
struct TrajectoryRecord {
    std::string experiment;
    std::vector<std::string> columns;  // names after the leading "t"
    struct Row {
        long t;
        std::vector<double> values;
    };
    std::vector<Row> rows;

    void add(long t, std::vector<double> values) { rows.push_back({t, std::move(values)}); }

    /// Value of a named column at row index r.
    double value(std::size_t r, const std::string& column) const;

    /// Index of the last row with rows[i].t <= t (-1 if none).
    long row_at_or_before(long t) const;
};

/// Geometric logging grid: 0, 1, 2, ... growing by ~1.2x, always including
/// the final step. Keeps ten-million-step trajectories small.
class LogGrid {
public:
    explicit LogGrid(long stride);  // stride 0 selects the geometric grid

    bool should_log(long t) const;
    void advance(long t);

private:
    long stride_;
    long next_ = 0;
};

}  // namespace depsgd
