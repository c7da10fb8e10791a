#pragma once
// Deterministic random draws.  mt19937_64 has a standardized sequence and the
// uniform mapping below avoids std::uniform_real_distribution (whose output
// is implementation-defined), so seeded runs are reproducible across
// compilers and platforms.

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace slab {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform in [lo, hi), 53-bit resolution.
    double uniform(double lo, double hi) {
        const double t = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        return lo + t * (hi - lo);
    }

    std::vector<double> uniform_vector(int count, double lo, double hi) {
        std::vector<double> out(count);
        for (auto& v : out) v = uniform(lo, hi);
        return out;
    }

private:
    std::mt19937_64 eng_;
};

// Stable per-(check, index) seed derivation: FNV-1a over the label mixed with
// the base seed and sample index via splitmix64 finalization.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view label, std::uint64_t index) {
    std::uint64_t h = 1469598103934665603ull;
    for (const char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (index + 1) + h;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace slab
