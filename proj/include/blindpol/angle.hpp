#pragma once

#include "blindpol/rng.hpp"

namespace blindpol {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Offset used to encode a key bit into a rotation: +pi/4 encodes 0,
// -pi/4 encodes 1.
inline constexpr double kKeyOffset = kPi / 4.0;

// Measurement probabilities within this distance of 0 or 1 are treated as
// certain, so algebraically aligned states never consume randomness.
inline constexpr double kDeterministicTol = 1e-12;

// Maps any finite angle onto the canonical representative in [0, 2*pi).
double canonical_angle(double radians);

// Shortest separation between two directions on the circle, in [0, pi].
double circular_distance(double a, double b);

// A linear-polarization direction.  The stored value is always canonical,
// and arithmetic re-canonicalizes, so two angles that differ by full turns
// compare equal through radians().
class PolarizationAngle {
public:
    PolarizationAngle() = default;
    explicit PolarizationAngle(double radians);

    double radians() const { return radians_; }

    friend PolarizationAngle operator+(PolarizationAngle a, PolarizationAngle b) {
        return PolarizationAngle(a.radians_ + b.radians_);
    }
    friend PolarizationAngle operator-(PolarizationAngle a, PolarizationAngle b) {
        return PolarizationAngle(a.radians_ - b.radians_);
    }
    PolarizationAngle operator-() const { return PolarizationAngle(-radians_); }

private:
    double radians_ = 0.0;
};

// Pure polarization qubit cos(a)|0> - sin(a)|1>, identified by its angle.
struct QubitState {
    PolarizationAngle angle;
};

// Applies the y-axis rotation that advances the polarization angle by `by`.
QubitState rotate(QubitState state, PolarizationAngle by);

// |<a|b>| = |cos(a - b)|.
double overlap(const QubitState& a, const QubitState& b);

// Squared overlap cos^2(a - b): the probability that a projective
// measurement along b finds a.
double overlap_fidelity(const QubitState& a, const QubitState& b);

// Projective measurement of `state` in the basis {basis, basis + pi/2}.
// Returns 0 for the basis direction, 1 for its complement.  Probabilities
// within kDeterministicTol of certainty short-circuit without touching rng.
int measure(const QubitState& state, PolarizationAngle basis, RandomSource& rng);

}  // namespace blindpol
