#pragma once

#include <cstdint>
#include <random>

namespace blindpol {

// Seeded source of all randomness in the simulator.  Every stochastic step
// draws from one of these, and each party owns an independently derived
// stream, so a whole session replays bit-identically from its master seed.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed);

    // Independent child stream; stable function of (seed, stream_index).
    RandomSource derive(std::uint64_t stream_index) const;

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64();

    // Uniform double in [0, 1) with 53-bit resolution.
    double uniform();

    // Uniform angle in [0, 2*pi).
    double uniform_angle();

    // Fair bit.
    int bit();

    // True with probability p (p clamped to [0, 1]).
    bool bernoulli(double p);

    // Poisson-distributed count with the given mean (mean >= 0).  Uses
    // Knuth's product-of-uniforms method on chunks of the mean small enough
    // that exp(-chunk) stays comfortably inside double range, so large means
    // are exact (if slow) rather than approximated.
    int poisson(double mean);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace blindpol
