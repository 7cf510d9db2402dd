#include "blindpol/adversary.hpp"

#include <algorithm>
#include <cmath>

#include "blindpol/estimation.hpp"

namespace blindpol {

namespace {

// Stream indices off the master seed; must stay in sync with the protocol
// runner so sessions replay deterministically.
constexpr std::uint64_t kEveStream = 3;

}  // namespace

// ---------------------------------------------------------------------------
// InterceptResendEve

InterceptResendEve::InterceptResendEve(RandomSource rng) : rng_(rng) {}

Pulse InterceptResendEve::intercept(int pass_index, Pulse in_flight) {
    if (pass_index != 0 || in_flight.amplitude == 0.0) return in_flight;
    // Measure the photon in a random equatorial basis and resend the state
    // the outcome points to.
    const PolarizationAngle basis{rng_.uniform_angle()};
    const QubitState original{in_flight.angle};
    const int outcome = measure(original, basis, rng_);
    const PolarizationAngle estimate =
        outcome == 0 ? basis : basis + PolarizationAngle(kPi / 2.0);
    EvePassRecord& rec = current_.passes[0];
    rec.tapped_amplitude = in_flight.amplitude;
    rec.photon_count = 1;
    rec.fidelity_score = overlap_fidelity(QubitState{estimate}, original);
    in_flight.angle = estimate;
    return in_flight;
}

void InterceptResendEve::finish_round() {
    current_.aggregate_score = current_.passes[0].fidelity_score;
    records_.push_back(current_);
    current_ = EveRecord{};
}

// ---------------------------------------------------------------------------
// PnsAttack1Eve

PnsAttack1Eve::PnsAttack1Eve(double eta, RandomSource rng) : eta_(eta), rng_(rng) {}

Pulse PnsAttack1Eve::intercept(int pass_index, Pulse in_flight) {
    auto [transmitted, reflected] = beam_split(in_flight, eta_);
    const int count = sample_photon_count(reflected, rng_);
    EvePassRecord& rec = current_.passes[static_cast<std::size_t>(pass_index)];
    rec.tapped_amplitude = reflected.amplitude;
    rec.photon_count = count;
    rec.fidelity_score = equatorial_fidelity(count);
    return transmitted;
}

void PnsAttack1Eve::finish_round() {
    current_.aggregate_score = std::min({current_.passes[0].fidelity_score,
                                         current_.passes[1].fidelity_score,
                                         current_.passes[2].fidelity_score});
    records_.push_back(current_);
    current_ = EveRecord{};
}

// ---------------------------------------------------------------------------
// PnsAttack2Eve

PnsAttack2Eve::PnsAttack2Eve(double eta, RandomSource rng) : rng_(rng) {
    // Solve for per-pass transmittivities that extract equal intensity
    // (1 - eta^6)/3 * a^2 on every pass while delivering eta^3 * a overall:
    //   t0^2 = (2 + y)/3,  t1^2 = (1 + 2y)/(2 + y),  t2^2 = 3y/(1 + 2y)
    // with y = eta^6; the product t0 t1 t2 telescopes to eta^3.
    const double y = std::pow(eta, 6);
    t_[0] = std::sqrt((2.0 + y) / 3.0);
    t_[1] = std::sqrt((1.0 + 2.0 * y) / (2.0 + y));
    t_[2] = std::sqrt(3.0 * y / (1.0 + 2.0 * y));
}

double PnsAttack2Eve::pass_transmittivity(int pass_index) const {
    return t_[static_cast<std::size_t>(pass_index)];
}

Pulse PnsAttack2Eve::intercept(int pass_index, Pulse in_flight) {
    auto [transmitted, reflected] =
        beam_split(in_flight, t_[static_cast<std::size_t>(pass_index)]);
    const int count = sample_photon_count(reflected, rng_);
    EvePassRecord& rec = current_.passes[static_cast<std::size_t>(pass_index)];
    rec.tapped_amplitude = reflected.amplitude;
    rec.photon_count = count;
    rec.fidelity_score = equatorial_fidelity(count);
    return transmitted;
}

void PnsAttack2Eve::finish_round() {
    current_.aggregate_score = (current_.passes[0].fidelity_score +
                                current_.passes[1].fidelity_score +
                                current_.passes[2].fidelity_score) / 3.0;
    records_.push_back(current_);
    current_ = EveRecord{};
}

// ---------------------------------------------------------------------------

std::unique_ptr<Eavesdropper> make_eavesdropper(const ChannelConfig& config) {
    const RandomSource eve_rng = RandomSource(config.seed).derive(kEveStream);
    switch (config.attack) {
        case Attack::InterceptResend:
            return std::make_unique<InterceptResendEve>(eve_rng);
        case Attack::PnsAttack1:
            return std::make_unique<PnsAttack1Eve>(config.eta, eve_rng);
        case Attack::PnsAttack2:
            return std::make_unique<PnsAttack2Eve>(config.eta, eve_rng);
        case Attack::None:
        case Attack::Impersonation:
            return nullptr;
    }
    return nullptr;
}

// ---------------------------------------------------------------------------
// ImpersonationPair

ImpersonationPair::ImpersonationPair(bool knows_secrets, RandomSource rng)
    : knows_secrets_(knows_secrets), rng_(rng) {}

ImpersonationPair::TwoPulsePlan ImpersonationPair::plan_two_pulse(int alice_b) {
    TwoPulsePlan plan;
    plan.eve1_phi = rng_.uniform_angle();
    plan.eve1_s = rng_.bit();
    plan.eve2_theta1 = rng_.uniform_angle();
    plan.eve2_theta2 = rng_.uniform_angle();
    if (knows_secrets_) {
        plan.parity_guess = alice_b % 2;
        plan.eve2_b = alice_b;
    } else {
        // Blind: the blocking choice is never announced before Eve must act,
        // so she guesses both the decode parity and her own blocking.
        plan.parity_guess = rng_.bit();
        plan.eve2_b = 1 + rng_.bit();
    }
    return plan;
}

double ImpersonationPair::plan_basic_phi() {
    return rng_.uniform_angle();
}

void ImpersonationPair::record_round(std::optional<int> decoded, std::optional<int> relayed) {
    EveRecord rec;
    rec.decoded_bit = decoded;
    rec.relayed_bit = relayed;
    records_.push_back(rec);
}

}  // namespace blindpol
