#include "blindpol/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace blindpol {

void validate(const ChannelConfig& config) {
    if (!(config.eta > 0.0 && config.eta <= 1.0)) {
        throw std::invalid_argument("channel: eta must lie in (0, 1]");
    }
    if (!(config.alpha >= 0.0) || !std::isfinite(config.alpha)) {
        throw std::invalid_argument("channel: alpha must be finite and >= 0");
    }
    const bool coherent = config.model == PulseModel::Coherent;
    switch (config.attack) {
        case Attack::PnsAttack1:
        case Attack::PnsAttack2:
            if (!coherent) {
                throw std::invalid_argument(
                    "channel: photon-number splitting requires the Coherent pulse model");
            }
            break;
        case Attack::InterceptResend:
        case Attack::Impersonation:
            if (coherent) {
                throw std::invalid_argument(
                    "channel: " + std::string(attack_name(config.attack)) +
                    " is modeled on SinglePhoton pulses");
            }
            break;
        case Attack::None:
            break;
    }
}

Pulse attenuate(Pulse p, double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("attenuate: eta must lie in (0, 1]");
    }
    p.amplitude *= eta;
    return p;
}

std::pair<Pulse, Pulse> beam_split(Pulse p, double transmittivity) {
    if (!(transmittivity >= 0.0 && transmittivity <= 1.0)) {
        throw std::invalid_argument("beam_split: transmittivity must lie in [0, 1]");
    }
    Pulse transmitted = p;
    Pulse reflected = p;
    transmitted.amplitude = transmittivity * p.amplitude;
    reflected.amplitude = std::sqrt(1.0 - transmittivity * transmittivity) * p.amplitude;
    return {transmitted, reflected};
}

int sample_photon_count(const Pulse& p, RandomSource& rng) {
    return rng.poisson(p.amplitude * p.amplitude);
}

std::optional<int> measure_pulse(const Pulse& p, PolarizationAngle basis,
                                 int photon_count, RandomSource& rng) {
    if (photon_count < 0) {
        throw std::invalid_argument("measure_pulse: photon_count must be >= 0");
    }
    if (photon_count == 0) return std::nullopt;
    const QubitState state{p.angle};
    const double p0 = overlap_fidelity(state, QubitState{basis});
    if (p0 >= 1.0 - kDeterministicTol) return 0;
    if (p0 <= kDeterministicTol) return 1;
    int zeros = 0;
    for (int i = 0; i < photon_count; ++i) {
        if (rng.uniform() < p0) ++zeros;
    }
    const int ones = photon_count - zeros;
    if (zeros == ones) return rng.bit();
    return zeros > ones ? 0 : 1;
}

const char* attack_name(Attack a) {
    switch (a) {
        case Attack::None: return "none";
        case Attack::InterceptResend: return "intercept-resend";
        case Attack::PnsAttack1: return "pns1";
        case Attack::PnsAttack2: return "pns2";
        case Attack::Impersonation: return "impersonation";
    }
    return "unknown";
}

std::optional<Attack> parse_attack(std::string_view name) {
    if (name == "none") return Attack::None;
    if (name == "intercept-resend") return Attack::InterceptResend;
    if (name == "pns1") return Attack::PnsAttack1;
    if (name == "pns2") return Attack::PnsAttack2;
    if (name == "impersonation") return Attack::Impersonation;
    return std::nullopt;
}

const char* model_name(PulseModel m) {
    switch (m) {
        case PulseModel::SinglePhoton: return "single-photon";
        case PulseModel::Coherent: return "coherent";
    }
    return "unknown";
}

}  // namespace blindpol
