#ifndef VCC_RNG_HPP
#define VCC_RNG_HPP

#include <cstdint>
#include <random>

namespace vcc {

// Deterministic random source. The engine is std::mt19937_64 (stable by
// standard), and all distributions are implemented here by hand because the
// std::*_distribution algorithms are implementation-defined and would break
// bit-reproducibility across toolchains.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n) by rejection.
    uint64_t below(uint64_t n);

    // Standard normal via Box-Muller (second value cached).
    double gaussian();

    // Fisher-Yates shuffle driven by below(), so the permutation sequence is
    // stable across platforms.
    template <typename It>
    void shuffle(It first, It last) {
        auto n = static_cast<uint64_t>(last - first);
        for (uint64_t i = n; i > 1; --i) {
            uint64_t j = below(i);
            std::swap(first[i - 1], first[j]);
        }
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Collision-resistant derivation of independent seeds from (seed, stream,
// index). Used to key per-purpose and per-epoch random streams so that
// resuming at an epoch boundary replays the identical sequence.
uint64_t mix_seed(uint64_t seed, uint64_t stream, uint64_t index = 0);

// Stream tags for mix_seed.
enum : uint64_t {
    kStreamInit = 1,     // encoder parameter init
    kStreamCenters = 2,  // center initialization
    kStreamEpoch = 3,    // per-epoch shuffling and pair draws
    kStreamBlobs = 4,    // synthetic dataset generation
};

} // namespace vcc

#endif
