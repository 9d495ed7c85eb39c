#pragma once

#include <cstdint>

namespace sldiff {

/**
 * Counter-based random stream: each (seed, path, step) triple maps to one
 * variate through a splitmix64-style avalanche, with no sequential state.
 * Ensembles are therefore reproducible and order-independent; enlarging an
 * ensemble leaves existing paths bit-identical.
 *
 * Normal variates come from the inverse-CDF transform of the uniform stream,
 * so the same stream yields the same normals everywhere.
 */
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Stable per-path stream id (also the per-path mixing key).
    std::uint64_t stream_id(std::uint64_t path) const {
        return mix(mix(seed_ + kGolden) ^ (path + kPathSalt));
    }

    /// Uniform draw in the open interval (0, 1).
    double uniform(std::uint64_t path, std::uint64_t step) const {
        std::uint64_t w = mix(stream_id(path) ^ (step + kStepSalt));
        return (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal draw for the (path, step) counter.
    double normal(std::uint64_t path, std::uint64_t step) const;

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
    static constexpr std::uint64_t kPathSalt = 0xD1B54A32D192ED03ull;
    static constexpr std::uint64_t kStepSalt = 0x8CB92BA72F3D8DD7ull;

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t seed_;
};

}  // namespace sldiff
