#include "blindpol/angle.hpp"

#include <cmath>

namespace blindpol {

double canonical_angle(double radians) {
    double r = std::fmod(radians, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // fmod can round a tiny negative up to exactly 2*pi after the shift.
    if (r >= kTwoPi) r = 0.0;
    return r;
}

double circular_distance(double a, double b) {
    double d = std::fabs(canonical_angle(a) - canonical_angle(b));
    if (d > kPi) d = kTwoPi - d;
    return d;
}

PolarizationAngle::PolarizationAngle(double radians) : radians_(canonical_angle(radians)) {}

QubitState rotate(QubitState state, PolarizationAngle by) {
    return QubitState{state.angle + by};
}

double overlap(const QubitState& a, const QubitState& b) {
    return std::fabs(std::cos(a.angle.radians() - b.angle.radians()));
}

double overlap_fidelity(const QubitState& a, const QubitState& b) {
    const double c = std::cos(a.angle.radians() - b.angle.radians());
    return c * c;
}

int measure(const QubitState& state, PolarizationAngle basis, RandomSource& rng) {
    const double p0 = overlap_fidelity(state, QubitState{basis});
    if (p0 >= 1.0 - kDeterministicTol) return 0;
    if (p0 <= kDeterministicTol) return 1;
    return rng.uniform() < p0 ? 0 : 1;
}

}  // namespace blindpol
