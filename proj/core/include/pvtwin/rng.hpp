#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace pvtwin {

// Deterministic random stream. The engine is std::mt19937_64 (bit-exact
// across platforms by the standard); the real-valued transforms are written
// out here instead of using std::uniform_real_distribution and friends,
// whose output is implementation-defined. Re-running with the same seed must
// reproduce artifact files byte for byte, also across compilers.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1), 53-bit resolution
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    // uniform integer in [0, n), n > 0; unbiased via rejection
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    // standard normal via Box-Muller (no cached spare: keeps the draw count
    // per call fixed, which makes consumption patterns easy to reason about)
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    double normal(double mean, double stddev) {
        return mean + stddev * normal();
    }

private:
    std::mt19937_64 engine_;
};

// splitmix64 finalizer, used to mix seeds and tags into child-stream seeds
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// FNV-1a over the tag text, then mixed with the parent seed. Stage code uses
// this to hand every consumer its own independent deterministic stream, so
// concurrent consumers (CV folds, per-day schedules) never share state.
inline std::uint64_t derive_seed(std::uint64_t parent, std::string_view tag, std::uint64_t index = 0) {
    std::uint64_t h = 1469598103934665603ull;
    for (const char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return mix_seed(parent ^ mix_seed(h) ^ mix_seed(index * 0x9e3779b97f4a7c15ull + 1));
}

}  // namespace pvtwin
