#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace evosample {

// Deterministic random stream. Streams derived from the same master seed but
// different stream ids are independent, so per-task streams give results that
// do not depend on scheduling or worker count.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix(mix(seed) + 1)) {}

    static Rng derive(std::uint64_t master_seed, std::uint64_t stream_id) {
        return Rng(mix(master_seed) ^ mix(stream_id * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL));
    }

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, n); n must be > 0
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

    // uniform in [0, 1), 53-bit resolution
    double real01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in (0, 1)
    double open01() {
        double u = real01();
        while (u == 0.0) u = real01();
        return u;
    }

    // uniform in [lo, hi)
    double range(double lo, double hi) { return lo + (hi - lo) * real01(); }

    bool chance(double p) { return real01() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[index(i)]);
        }
    }

private:
    // splitmix64 finalizer; spreads low-entropy seeds over the full state space
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

}  // namespace evosample
