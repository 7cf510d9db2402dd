#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

#include "blindpol/angle.hpp"
#include "blindpol/rng.hpp"

namespace blindpol {

enum class Attack {
    None,
    InterceptResend,
    PnsAttack1,
    PnsAttack2,
    Impersonation,
};

// How a pulse's photon content is modeled.  SinglePhoton carries exactly one
// photon (or none after loss); Coherent carries Poissonian photon numbers
// with mean amplitude^2.
enum class PulseModel {
    SinglePhoton,
    Coherent,
};

// A linearly polarized pulse in flight.  amplitude^2 is the mean photon
// number; amplitude 0 is the vacuum (a lost single-photon pulse).
struct Pulse {
    double amplitude = 0.0;
    PolarizationAngle angle;
};

struct ChannelConfig {
    double eta = 1.0;  // amplitude efficiency per one-way trip, in (0, 1]
    Attack attack = Attack::None;
    PulseModel model = PulseModel::SinglePhoton;
    double alpha = 1.0;  // source amplitude per pulse (Coherent model)
    std::uint64_t seed = 0;
};

// Throws std::invalid_argument when eta or alpha are out of range or the
// attack does not fit the pulse model (photon-number splitting needs
// Coherent pulses; intercept-resend and impersonation act per photon and
// are modeled on SinglePhoton pulses).
void validate(const ChannelConfig& config);

// Amplitude damping of one trip: amplitude *= eta, angle unchanged.
Pulse attenuate(Pulse p, double eta);

// Splits a pulse on a beam splitter of the given transmittivity t in [0, 1]:
// returns {transmitted, reflected} with amplitudes t*a and sqrt(1-t^2)*a.
// Intensity is conserved exactly up to rounding.
std::pair<Pulse, Pulse> beam_split(Pulse p, double transmittivity);

// Photon number actually present in the pulse: Poisson(amplitude^2).
// (For a SinglePhoton pulse the caller tracks loss through the amplitude:
// 1 -> one photon, 0 -> none; this helper is for Coherent pulses.)
int sample_photon_count(const Pulse& p, RandomSource& rng);

// Measures an n-photon pulse in the basis {basis, basis + pi/2}: each photon
// yields an independent Born-rule outcome, and the detector reports the
// majority, breaking exact ties with one extra random bit.  Returns nullopt
// for an empty pulse (n = 0), which the protocol treats as "no detection".
// Aligned pulses (outcome certain within kDeterministicTol) consume no
// randomness.
std::optional<int> measure_pulse(const Pulse& p, PolarizationAngle basis,
                                 int photon_count, RandomSource& rng);

const char* attack_name(Attack a);
std::optional<Attack> parse_attack(std::string_view name);
const char* model_name(PulseModel m);

}  // namespace blindpol
