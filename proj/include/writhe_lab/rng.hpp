#pragma once

#include <cstdint>

#include "writhe_lab/geometry.hpp"

namespace writhe_lab {

/// SplitMix64. Small, fast, and fully specified, so seeded results are
/// bit-identical across platforms and across serial/parallel schedules
/// (unlike the unspecified std:: distributions).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform direction on the unit sphere (Marsaglia rejection).
    Vec3 unit_direction() {
        for (;;) {
            const double a = 2.0 * uniform01() - 1.0;
            const double b = 2.0 * uniform01() - 1.0;
            const double q = a * a + b * b;
            if (q >= 1.0 || q == 0.0) continue;
            const double s = 2.0 * std::sqrt(1.0 - q);
            return {a * s, b * s, 1.0 - 2.0 * q};
        }
    }

    /// Decorrelated substream for (seed, index) pairs; used to make per-sample
    /// work independent of thread scheduling.
    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        Rng mix(seed ^ (0x632be59bd9b4e019ULL * (index + 1)));
        mix.next_u64();
        return mix;
    }

private:
    std::uint64_t state_;
};

}  // namespace writhe_lab
