#include "blindpol/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace blindpol {

namespace {

// splitmix64 finalizer; used to decorrelate derived stream seeds.
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr double kTwoPiLocal = 6.283185307179586476925286766559;

}  // namespace

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

RandomSource RandomSource::derive(std::uint64_t stream_index) const {
    // Mix the index in golden-ratio steps before finalizing; distinct
    // (seed, index) pairs land on well-separated engine seeds.
    std::uint64_t mixed = seed_ + 0x9E3779B97F4A7C15ULL * (stream_index + 1);
    return RandomSource(splitmix64(mixed));
}

std::uint64_t RandomSource::next_u64() {
    return engine_();
}

double RandomSource::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::uniform_angle() {
    return uniform() * kTwoPiLocal;
}

int RandomSource::bit() {
    return static_cast<int>(next_u64() >> 63);
}

bool RandomSource::bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
}

int RandomSource::poisson(double mean) {
    if (!(mean >= 0.0)) {
        throw std::invalid_argument("poisson: mean must be >= 0");
    }
    // Split the mean into chunks of at most 30 and add independent Poisson
    // draws; exp(-30) ~ 9.4e-14 is still far from double underflow, so the
    // running product in Knuth's method never degenerates.
    int total = 0;
    double remaining = mean;
    while (remaining > 0.0) {
        const double chunk = remaining > 30.0 ? 30.0 : remaining;
        remaining -= chunk;
        const double limit = std::exp(-chunk);
        double product = 1.0;
        int k = -1;
        do {
            ++k;
            product *= uniform();
        } while (product > limit);
        total += k;
    }
    return total;
}

}  // namespace blindpol
