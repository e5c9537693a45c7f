#pragma once

#include <cmath>
#include <cstdint>

namespace omega {

// splitmix64: counter-based, cheap, passes BigCrush-level smoke tests.
// One independent stream per (seed, path) pair keeps parallel runs
// reproducible regardless of scheduling.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t s = 0) : state(s) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 s(seed ^ (0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL));
    s.next();
    return s.next();
}

struct PathRng {
    SplitMix64 gen;
    double cached = 0.0;
    bool has_cached = false;

    PathRng(std::uint64_t seed, std::uint64_t path) : gen(mix_seed(seed, path)) {}

    // uniform on (0,1); never returns 0 or 1
    double uniform() {
        return (double(gen.next() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Marsaglia polar, one value cached
    double normal() {
        if (has_cached) {
            has_cached = false;
            return cached;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        cached = v * m;
        has_cached = true;
        return u * m;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }
};

} // namespace omega
