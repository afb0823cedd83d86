#include "harness/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace depsgd::harness {

std::string format_double(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string to_csv(const TrajectoryRecord& traj) {
    std::string out = "t";
    for (const auto& c : traj.columns) {
        out += ',';
        out += c;
    }
    out += '\n';
    for (const auto& row : traj.rows) {
        out += std::to_string(row.t);
        for (double v : row.values) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace depsgd::harness
