#ifndef PACESYNC_RNG_HPP
#define PACESYNC_RNG_HPP

#include <cstdint>

namespace pacesync {

/// SplitMix64 generator (Steele, Lea & Flood). Seedable and splittable:
/// experiment substreams are derived by XOR-ing the run index into the
/// master seed, so adding runs never reshuffles earlier ones.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi). Degenerate intervals return lo.
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::uint64_t state_;
};

} // namespace pacesync

#endif
