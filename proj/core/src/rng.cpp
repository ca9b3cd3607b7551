#include "vcc/rng.hpp"

#include <cmath>

namespace vcc {

uint64_t Rng::below(uint64_t n) {
    if (n < 2) return 0;
    // Reject the tail that would bias the modulus.
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
        x = eng_();
    } while (x >= limit);
    return x % n;
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // 1 - uniform() keeps u1 in (0, 1] so the log is finite.
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

namespace {
uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}
} // namespace

uint64_t mix_seed(uint64_t seed, uint64_t stream, uint64_t index) {
    uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ (stream * 0xA24BAED4963EE407ull));
    h = splitmix64(h ^ (index * 0x9FB21C651E98DF25ull));
    return h;
}

} // namespace vcc
