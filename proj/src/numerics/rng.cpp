#include "numerics/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace depsgd::num {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::mt19937_64 make_engine(std::uint64_t seed) {
    // Expand the 64-bit seed through splitmix64; seeding mt19937_64 with a
    // raw small seed leaves most of the state word sparse.
    std::uint64_t s = seed;
    std::seed_seq seq{static_cast<unsigned>(splitmix64(s)),
                      static_cast<unsigned>(splitmix64(s)),
                      static_cast<unsigned>(splitmix64(s)),
                      static_cast<unsigned>(splitmix64(s)),
                      static_cast<unsigned>(splitmix64(s)),
                      static_cast<unsigned>(splitmix64(s)),
                      static_cast<unsigned>(splitmix64(s)),
                      static_cast<unsigned>(splitmix64(s))};
    return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(make_engine(seed)) {}

Rng Rng::substream(std::uint64_t index, std::string_view label) const {
    std::uint64_t x = seed_ ^ fnv1a(label);
    std::uint64_t h = splitmix64(x);
    x = h + index;
    return Rng(splitmix64(x));
}

double Rng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
}

void Rng::gaussian_fill(std::vector<double>& out) {
    for (double& x : out) x = gaussian();
}

double Rng::rademacher() {
    return (engine_() & 1ULL) ? 1.0 : -1.0;
}

bool Rng::bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01() < p;
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_int: n must be >= 1");
    // Rejection to avoid modulo bias.
    const std::uint64_t limit = ~0ULL - (~0ULL % n);
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

std::vector<double> sample_gaussian_vector(Rng& rng, int d) {
    if (d < 1) throw std::invalid_argument("sample_gaussian_vector: d must be >= 1");
    std::vector<double> v(static_cast<std::size_t>(d));
    rng.gaussian_fill(v);
    return v;
}

double sample_rademacher(Rng& rng) {
    return rng.rademacher();
}

}  // namespace depsgd::num
