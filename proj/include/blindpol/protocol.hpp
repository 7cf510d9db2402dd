#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "blindpol/adversary.hpp"
#include "blindpol/angle.hpp"
#include "blindpol/channel.hpp"
#include "blindpol/rng.hpp"

namespace blindpol {

// Three-pass key agreement with blinded rotation angles.  In the basic
// variant a round is:
//   sender:    prepare |0>, rotate by secret theta        -> pass 1
//   receiver:  rotate by secret phi                       -> pass 2
//   sender:    rotate by -theta + (-1)^k * pi/4           -> pass 3
//   receiver:  rotate by -phi, measure in the pi/4 basis
// so the receiver's outcome equals k without any basis announcement.  The
// two-pulse variant blinds the final exchange as well: the receiver shuffles
// two pulses with opposite pi/4 offsets (parameter s), the sender returns
// only pulse b of the two, and the measurement outcome l relates to the key
// bit through l = s xor k xor (b mod 2).

enum class ProtocolMode {
    Basic,
    TwoPulse,
};

// One basic-variant attempt.  pass_states holds the actual pulse angle at
// the four interesting points: as sent (psi1), after the receiver's blind
// rotation (psi2), after the key encoding (psi3), and after the receiver's
// final compensation (psi4).  outcome is empty when no photon arrived.
struct BasicRound {
    PolarizationAngle theta;
    PolarizationAngle phi;
    int key_bit = 0;
    std::array<PolarizationAngle, 4> pass_states{};
    std::optional<int> outcome;
};

// One two-pulse attempt.  l is the raw measurement outcome; decoded is
// s xor (b mod 2) xor l.  Both are empty when no photon arrived.
// pass_states: the two slot angles as first sent, the two as returned after
// the receiver's shuffle, the surviving pulse as re-sent, and the final
// pre-measurement angle.
struct TwoPulseRound {
    PolarizationAngle theta1;
    PolarizationAngle theta2;
    PolarizationAngle phi;
    int s = 0;
    int k = 0;
    int b = 1;  // which pulse (1 or 2) survives the sender's blocking
    std::array<PolarizationAngle, 6> pass_states{};
    std::optional<int> l;
    std::optional<int> decoded;
};

// Full record of a session: every attempt in order (discarded ones
// included), the per-pass received intensities of each attempt, the accepted
// key bits on both ends and the verification hashes.
struct SessionTranscript {
    ProtocolMode mode = ProtocolMode::Basic;
    ChannelConfig config;
    int n_bits = 0;
    bool knows_secrets = false;
    std::vector<BasicRound> basic_rounds;
    std::vector<TwoPulseRound> two_pulse_rounds;
    // amplitude^2 seen at the receiving end of each pass, one entry per
    // attempt; under impersonation this is the exchange facing the receiver.
    std::vector<std::array<double, 3>> intensity_log;
    std::vector<int> alice_key;
    std::vector<int> bob_key;
    std::vector<std::uint8_t> hash_alice;
    std::vector<std::uint8_t> hash_bob;
    bool verified = false;
    int discard_count = 0;
};

struct SessionSpec {
    int n_bits = 1;
    ProtocolMode mode = ProtocolMode::Basic;
    ChannelConfig channel;
    // Abort when, after at least 100 attempts, more than this fraction of
    // them was discarded.
    double discard_ceiling = 0.999;
    // Impersonation diagnostic: grant the intruder pair the sender's
    // blocking choice (defeats the two-pulse variant by construction).
    bool impersonation_knows_secrets = false;
};

struct SessionResult {
    SessionTranscript transcript;
    std::vector<EveRecord> eve_records;
};

// Thrown by run_session when the discard rate stays above the ceiling.
struct AbortedSession : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Runs one basic round with fixed secrets.  rng drives channel loss and the
// receiver's detector; eve (optional) sees every pass in flight.  When
// intensity is given it receives the three per-pass received intensities.
// The caller is responsible for eve->finish_round().
BasicRound run_basic_round(PolarizationAngle theta, PolarizationAngle phi, int key_bit,
                           const ChannelConfig& channel, RandomSource& rng,
                           Eavesdropper* eve = nullptr,
                           std::array<double, 3>* intensity = nullptr);

// Runs one two-pulse round with fixed secrets; same conventions as
// run_basic_round.  In passes 1 and 2 both pulses cross the channel (slot
// order: pulse 1 then pulse 2); only pulse b crosses in pass 3.
TwoPulseRound run_two_pulse_round(PolarizationAngle theta1, PolarizationAngle theta2,
                                  PolarizationAngle phi, int s, int key_bit, int b,
                                  const ChannelConfig& channel, RandomSource& rng,
                                  Eavesdropper* eve = nullptr,
                                  std::array<double, 3>* intensity = nullptr);

// k = s xor (b mod 2) xor l.
int decode_two_pulse(int s, int b, int l);

struct KeyVerification {
    std::vector<std::uint8_t> hash_a;
    std::vector<std::uint8_t> hash_b;
    bool verified = false;
};

// Hashes both keys (bits packed MSB-first, SHA-256) and compares digests.
KeyVerification verify_keys(std::span<const int> key_a, std::span<const int> key_b);

// Runs a full session: draws secrets from per-party streams derived from the
// channel seed, retries discarded rounds until n_bits accepted bits exist,
// then verifies the keys.  Throws std::invalid_argument for a bad spec and
// AbortedSession when the discard ceiling is exceeded.
SessionResult run_session(const SessionSpec& spec);

// Deterministic key=value transcript (LF line endings, doubles printed with
// 17 significant digits so replays compare byte-identical).
void write_transcript(std::ostream& out, const SessionTranscript& transcript);
std::string transcript_to_string(const SessionTranscript& transcript);

const char* mode_name(ProtocolMode m);
std::optional<ProtocolMode> parse_mode(std::string_view name);

}  // namespace blindpol
