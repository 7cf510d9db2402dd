#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "blindpol/channel.hpp"
#include "blindpol/rng.hpp"

namespace blindpol {

// Eve's bookkeeping for one pass of one round.
struct EvePassRecord {
    double tapped_amplitude = 0.0;
    int photon_count = 0;
    // Optimal-estimation fidelity achievable from the tapped batch:
    // equatorial_fidelity(photon_count).  0.5 when nothing was caught.
    double fidelity_score = 0.5;
};

// Eve's bookkeeping for one protocol round (three passes).
struct EveRecord {
    std::array<EvePassRecord, 3> passes{};
    // Round-level score: min over passes for the matched-tap attack (Eve
    // must reconstruct all three states, so her weakest pass binds), mean
    // over passes for equal extraction, estimation fidelity of the stolen
    // photon for intercept-resend.
    double aggregate_score = 0.5;
    // Impersonation only: the key bit Eve decoded from Alice's exchange and
    // the bit she encoded toward Bob.
    std::optional<int> decoded_bit;
    std::optional<int> relayed_bit;
};

// A channel-level eavesdropper: sees every pulse in flight, returns what the
// legitimate receiver gets.  Implementations accumulate one EveRecord per
// round; the protocol runner calls finish_round() at round boundaries.
class Eavesdropper {
public:
    virtual ~Eavesdropper() = default;

    // pass_index is 0, 1, 2.  For two-pulse rounds both slots of passes 0/1
    // go through in order (slot 0 then slot 1).
    virtual Pulse intercept(int pass_index, Pulse in_flight) = 0;

    // True when the strategy substitutes its own lossless line for the
    // honest channel, in which case the runner must not attenuate on top.
    virtual bool replaces_channel() const = 0;

    virtual void finish_round() = 0;

    const std::vector<EveRecord>& records() const { return records_; }
    void clear_records() { records_.clear(); }

protected:
    std::vector<EveRecord> records_;
};

// Measures the first-pass pulse in a random equatorial basis and resends its
// estimate; the later passes are untouched.  Single-photon strategy: one
// stolen copy yields estimation fidelity 3/4 on average and disturbs the
// relayed state enough to show up as a 25% error rate downstream.
class InterceptResendEve : public Eavesdropper {
public:
    explicit InterceptResendEve(RandomSource rng);
    Pulse intercept(int pass_index, Pulse in_flight) override;
    bool replaces_channel() const override { return false; }
    void finish_round() override;

private:
    RandomSource rng_;
    EveRecord current_{};
};

// Matched-tap photon-number-splitting attack: replaces the lossy line with a
// perfect one and beam-splits every pass at transmittivity eta, so the
// legitimate parties see exactly the honest intensities while Eve keeps the
// photons the channel would have absorbed.
class PnsAttack1Eve : public Eavesdropper {
public:
    PnsAttack1Eve(double eta, RandomSource rng);
    Pulse intercept(int pass_index, Pulse in_flight) override;
    bool replaces_channel() const override { return true; }
    void finish_round() override;

private:
    double eta_;
    RandomSource rng_;
    EveRecord current_{};
};

// Equal-extraction photon-number-splitting attack: per-pass transmittivities
// are rebalanced so each stolen batch carries the same mean intensity
// (1 - eta^6) * a^2 / 3 while the pulse delivered after pass 3 keeps the
// honest amplitude eta^3 * a.
class PnsAttack2Eve : public Eavesdropper {
public:
    PnsAttack2Eve(double eta, RandomSource rng);
    Pulse intercept(int pass_index, Pulse in_flight) override;
    bool replaces_channel() const override { return true; }
    void finish_round() override;

    // Transmittivity of the beam splitter Eve inserts on the given pass.
    double pass_transmittivity(int pass_index) const;

private:
    std::array<double, 3> t_{};
    RandomSource rng_;
    EveRecord current_{};
};

// Builds the channel eavesdropper for a config, or nullptr when the attack
// is not channel-level (None and Impersonation).  The Eve stream is derived
// from the config seed.
std::unique_ptr<Eavesdropper> make_eavesdropper(const ChannelConfig& config);

// Eve1/Eve2 man-in-the-middle pair: Eve1 plays the receiver toward the real
// sender, Eve2 plays the sender toward the real receiver, and they share
// what Eve1 decoded over a classical wire.  When knows_secrets is set the
// pair is granted the sender's pulse-blocking choice (a full-knowledge
// diagnostic); otherwise they must guess it blind.
class ImpersonationPair {
public:
    ImpersonationPair(bool knows_secrets, RandomSource rng);

    bool knows_secrets() const { return knows_secrets_; }
    RandomSource& rng() { return rng_; }

    // Per-round choices for the two-pulse variant, drawn fresh each round.
    // alice_b is the real sender's blocking factor (1 or 2); a blind pair
    // ignores it.
    struct TwoPulsePlan {
        double eve1_phi = 0.0;   // Eve1's shuffling angle toward Alice
        int eve1_s = 0;          // Eve1's shuffling parameter
        int parity_guess = 0;    // Eve1's guess of (alice_b mod 2) for decoding
        double eve2_theta1 = 0.0;  // Eve2's blind angles toward Bob
        double eve2_theta2 = 0.0;
        int eve2_b = 1;          // Eve2's own blocking factor (1 or 2)
    };
    TwoPulsePlan plan_two_pulse(int alice_b);

    // Basic-variant per-round choice: Eve1's compensation angle phi1.
    double plan_basic_phi();

    void record_round(std::optional<int> decoded, std::optional<int> relayed);
    const std::vector<EveRecord>& records() const { return records_; }

private:
    bool knows_secrets_;
    RandomSource rng_;
    std::vector<EveRecord> records_;
};

}  // namespace blindpol
