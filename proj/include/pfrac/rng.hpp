#pragma once

#include <cstdint>
#include <random>

namespace pfrac {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for sub-stream `index` of `base`. Pure function of both arguments.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

// Stream tags so that distinct consumers of one user seed never share a stream.
namespace stream {
inline constexpr std::uint64_t search = 0x5345415243480000ULL;
inline constexpr std::uint64_t family = 0x46414d494c590000ULL;
inline constexpr std::uint64_t render = 0x52454e4445520000ULL;
inline constexpr std::uint64_t patch = 0x5041544348000000ULL;
inline constexpr std::uint64_t resample = 0x5245534d504c0000ULL;
inline constexpr std::uint64_t pixels = 0x504958454c530000ULL;
inline constexpr std::uint64_t transform = 0x5846524d00000000ULL;
inline constexpr std::uint64_t holdout = 0x484f4c444f555400ULL;
inline constexpr std::uint64_t init = 0x494e495400000000ULL;
inline constexpr std::uint64_t shuffle = 0x5348554646000000ULL;
}  // namespace stream

/// Seeded generator with platform-independent variate conversions.
///
/// The standard distributions are implementation-defined, so the
/// conversions here are spelled out to keep datasets bit-reproducible
/// across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n);

    /// Standard normal via Box-Muller (one variate per call, the pair's twin is cached).
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace pfrac
