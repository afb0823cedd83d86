#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace depsgd::num {

/// Deterministic seeded generator. Equal seeds give bitwise-equal draw
/// sequences within one build. Independent substreams are derived per
/// (replication index, stream label) by hashing into a fresh seed, so
/// parallel replications never share state.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    Rng substream(std::uint64_t index, std::string_view label) const;

    std::uint64_t seed() const { return seed_; }

    /// Uniform on [0,1) with 53 random bits.
    double uniform01();

    /// Standard normal via Marsaglia's polar method (one spare cached).
    double gaussian();

    void gaussian_fill(std::vector<double>& out);

    /// +1 or -1 with equal probability.
    double rademacher();

    bool bernoulli(double p);

    /// Uniform integer in [0, n), n >= 1.
    std::uint64_t uniform_int(std::uint64_t n);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Draws d independent standard normals.
std::vector<double> sample_gaussian_vector(Rng& rng, int d);

double sample_rademacher(Rng& rng);

}  // namespace depsgd::num
