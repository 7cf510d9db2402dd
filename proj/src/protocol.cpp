#include "blindpol/protocol.hpp"

#include <cstdio>
#include <memory>
#include <ostream>
#include <sstream>

#include "blindpol/hash.hpp"

namespace blindpol {

namespace {

// Stream indices off the master seed.  Party secrets, channel noise and the
// adversary never share a stream, so changing one party's consumption cannot
// shift another's draws.
constexpr std::uint64_t kAliceStream = 0;
constexpr std::uint64_t kBobStream = 1;
constexpr std::uint64_t kChannelStream = 2;
constexpr std::uint64_t kEveStream = 3;  // same index make_eavesdropper uses

double source_amplitude(const ChannelConfig& c) {
    return c.model == PulseModel::Coherent ? c.alpha : 1.0;
}

// One channel trip: the eavesdropper touches the pulse first; honest loss
// applies unless she substituted her own line.
Pulse transit(Pulse p, int pass_index, const ChannelConfig& c, RandomSource& rng,
              Eavesdropper* eve) {
    if (eve != nullptr) {
        p = eve->intercept(pass_index, p);
        if (eve->replaces_channel()) return p;
    }
    if (c.model == PulseModel::Coherent) return attenuate(p, c.eta);
    if (p.amplitude > 0.0 && !rng.bernoulli(c.eta * c.eta)) p.amplitude = 0.0;
    return p;
}

int pulse_photons(const Pulse& p, const ChannelConfig& c, RandomSource& rng) {
    if (c.model == PulseModel::Coherent) return sample_photon_count(p, rng);
    return p.amplitude > 0.0 ? 1 : 0;
}

// (-1)^bit * pi/4 as a rotation.
PolarizationAngle quarter_offset(int bit) {
    return PolarizationAngle(bit == 0 ? kKeyOffset : -kKeyOffset);
}

double intensity_of(const Pulse& p) { return p.amplitude * p.amplitude; }

}  // namespace

BasicRound run_basic_round(PolarizationAngle theta, PolarizationAngle phi, int key_bit,
                           const ChannelConfig& channel, RandomSource& rng,
                           Eavesdropper* eve, std::array<double, 3>* intensity) {
    BasicRound round;
    round.theta = theta;
    round.phi = phi;
    round.key_bit = key_bit;

    Pulse pulse{source_amplitude(channel), theta};
    round.pass_states[0] = pulse.angle;
    pulse = transit(pulse, 0, channel, rng, eve);
    if (intensity) (*intensity)[0] = intensity_of(pulse);

    pulse.angle = pulse.angle + phi;
    round.pass_states[1] = pulse.angle;
    pulse = transit(pulse, 1, channel, rng, eve);
    if (intensity) (*intensity)[1] = intensity_of(pulse);

    pulse.angle = pulse.angle + (-theta + quarter_offset(key_bit));
    round.pass_states[2] = pulse.angle;
    pulse = transit(pulse, 2, channel, rng, eve);
    if (intensity) (*intensity)[2] = intensity_of(pulse);

    pulse.angle = pulse.angle - phi;
    round.pass_states[3] = pulse.angle;

    const int photons = pulse_photons(pulse, channel, rng);
    round.outcome = measure_pulse(pulse, PolarizationAngle(kKeyOffset), photons, rng);
    return round;
}

TwoPulseRound run_two_pulse_round(PolarizationAngle theta1, PolarizationAngle theta2,
                                  PolarizationAngle phi, int s, int key_bit, int b,
                                  const ChannelConfig& channel, RandomSource& rng,
                                  Eavesdropper* eve, std::array<double, 3>* intensity) {
    if (b != 1 && b != 2) {
        throw std::invalid_argument("run_two_pulse_round: b must be 1 or 2");
    }
    TwoPulseRound round;
    round.theta1 = theta1;
    round.theta2 = theta2;
    round.phi = phi;
    round.s = s;
    round.k = key_bit;
    round.b = b;

    const double amp = source_amplitude(channel);
    std::array<Pulse, 2> pulses{Pulse{amp, theta1}, Pulse{amp, theta2}};
    const std::array<PolarizationAngle, 2> thetas{theta1, theta2};

    round.pass_states[0] = pulses[0].angle;
    round.pass_states[1] = pulses[1].angle;
    for (auto& p : pulses) p = transit(p, 0, channel, rng, eve);
    if (intensity) (*intensity)[0] = intensity_of(pulses[0]) + intensity_of(pulses[1]);

    // Receiver's blind shuffle: slot i gets phi + (-1)^(s xor i) * pi/4.
    for (int i = 0; i < 2; ++i) pulses[i].angle = pulses[i].angle + phi + quarter_offset(s ^ i);
    round.pass_states[2] = pulses[0].angle;
    round.pass_states[3] = pulses[1].angle;
    for (auto& p : pulses) p = transit(p, 1, channel, rng, eve);
    if (intensity) (*intensity)[1] = intensity_of(pulses[0]) + intensity_of(pulses[1]);

    // Sender unwinds her own angle, encodes the key bit, and blocks all but
    // pulse b.
    for (int i = 0; i < 2; ++i) {
        pulses[i].angle = pulses[i].angle + (-thetas[i] + quarter_offset(key_bit));
    }
    Pulse kept = pulses[b - 1];
    round.pass_states[4] = kept.angle;
    kept = transit(kept, 2, channel, rng, eve);
    if (intensity) (*intensity)[2] = intensity_of(kept);

    kept.angle = kept.angle - phi;
    round.pass_states[5] = kept.angle;
    const int photons = pulse_photons(kept, channel, rng);
    round.l = measure_pulse(kept, PolarizationAngle(0.0), photons, rng);
    if (round.l) round.decoded = decode_two_pulse(s, b, *round.l);
    return round;
}

int decode_two_pulse(int s, int b, int l) {
    if ((s != 0 && s != 1) || (l != 0 && l != 1)) {
        throw std::invalid_argument("decode_two_pulse: s and l must be 0 or 1");
    }
    if (b != 1 && b != 2) {
        throw std::invalid_argument("decode_two_pulse: b must be 1 or 2");
    }
    return s ^ (b % 2) ^ l;
}

KeyVerification verify_keys(std::span<const int> key_a, std::span<const int> key_b) {
    KeyVerification v;
    const auto da = sha256_bits(key_a);
    const auto db = sha256_bits(key_b);
    v.hash_a.assign(da.begin(), da.end());
    v.hash_b.assign(db.begin(), db.end());
    v.verified = v.hash_a == v.hash_b;
    return v;
}

namespace {

// Impersonation choreography.  The pair cuts the line: Eve1 runs the
// receiver's side of a faithful exchange with the real sender, decodes the
// key bit, and wires it to Eve2, who runs the sender's side of a second
// faithful exchange with the real receiver.

BasicRound run_impersonated_basic(PolarizationAngle theta, PolarizationAngle phi,
                                  int key_bit, const ChannelConfig& config,
                                  RandomSource& chan, ImpersonationPair& pair,
                                  std::array<double, 3>& intensity) {
    BasicRound round;
    round.theta = theta;
    round.phi = phi;
    round.key_bit = key_bit;
    const double amp = source_amplitude(config);
    const PolarizationAngle phi1{pair.plan_basic_phi()};

    // Sender-facing exchange (Alice <-> Eve1).  In the basic variant Eve1's
    // own compensation lays the final state on the +-pi/4 axis, so she reads
    // the key bit exactly.
    Pulse a{amp, theta};
    round.pass_states[0] = a.angle;
    a = transit(a, 0, config, chan, nullptr);
    a.angle = a.angle + phi1;
    round.pass_states[1] = a.angle;
    a = transit(a, 1, config, chan, nullptr);
    a.angle = a.angle + (-theta + quarter_offset(key_bit));
    round.pass_states[2] = a.angle;
    a = transit(a, 2, config, chan, nullptr);
    a.angle = a.angle - phi1;
    const int eve_photons = pulse_photons(a, config, chan);
    const std::optional<int> decoded =
        measure_pulse(a, PolarizationAngle(kKeyOffset), eve_photons, pair.rng());
    const int relay = decoded ? *decoded : pair.rng().bit();

    // Receiver-facing exchange (Eve2 <-> Bob), re-encoding the relayed bit
    // under Eve2's own blind angle.  The intensity log records this side:
    // it is what the legitimate receiver's monitoring can observe.
    const PolarizationAngle eve_theta{pair.rng().uniform_angle()};
    Pulse bp{amp, eve_theta};
    bp = transit(bp, 0, config, chan, nullptr);
    intensity[0] = intensity_of(bp);
    bp.angle = bp.angle + phi;
    bp = transit(bp, 1, config, chan, nullptr);
    intensity[1] = intensity_of(bp);
    bp.angle = bp.angle + (-eve_theta + quarter_offset(relay));
    bp = transit(bp, 2, config, chan, nullptr);
    intensity[2] = intensity_of(bp);
    bp.angle = bp.angle - phi;
    round.pass_states[3] = bp.angle;
    const int photons = pulse_photons(bp, config, chan);
    round.outcome = measure_pulse(bp, PolarizationAngle(kKeyOffset), photons, chan);

    pair.record_round(decoded, relay);
    return round;
}

TwoPulseRound run_impersonated_two_pulse(PolarizationAngle theta1, PolarizationAngle theta2,
                                         PolarizationAngle phi, int s, int key_bit, int b,
                                         const ChannelConfig& config, RandomSource& chan,
                                         ImpersonationPair& pair,
                                         std::array<double, 3>& intensity) {
    TwoPulseRound round;
    round.theta1 = theta1;
    round.theta2 = theta2;
    round.phi = phi;
    round.s = s;
    round.k = key_bit;
    round.b = b;

    const double amp = source_amplitude(config);
    const ImpersonationPair::TwoPulsePlan plan = pair.plan_two_pulse(b);

    // Sender-facing exchange (Alice <-> Eve1) with Eve1's own shuffle
    // (phi1, s1).  The outcome obeys l' = s1 xor k xor (b mod 2), but b is
    // only announced after the quantum phase, so a blind Eve1 decodes with a
    // guessed parity.
    const PolarizationAngle phi1{plan.eve1_phi};
    std::array<Pulse, 2> ap{Pulse{amp, theta1}, Pulse{amp, theta2}};
    const std::array<PolarizationAngle, 2> thetas{theta1, theta2};
    round.pass_states[0] = ap[0].angle;
    round.pass_states[1] = ap[1].angle;
    for (auto& p : ap) p = transit(p, 0, config, chan, nullptr);
    for (int i = 0; i < 2; ++i) ap[i].angle = ap[i].angle + phi1 + quarter_offset(plan.eve1_s ^ i);
    round.pass_states[2] = ap[0].angle;
    round.pass_states[3] = ap[1].angle;
    for (auto& p : ap) p = transit(p, 1, config, chan, nullptr);
    for (int i = 0; i < 2; ++i) {
        ap[i].angle = ap[i].angle + (-thetas[i] + quarter_offset(key_bit));
    }
    Pulse eve_kept = ap[b - 1];
    round.pass_states[4] = eve_kept.angle;
    eve_kept = transit(eve_kept, 2, config, chan, nullptr);
    eve_kept.angle = eve_kept.angle - phi1;
    const int eve_photons = pulse_photons(eve_kept, config, chan);
    const std::optional<int> l_prime =
        measure_pulse(eve_kept, PolarizationAngle(0.0), eve_photons, pair.rng());
    std::optional<int> decoded;
    if (l_prime) decoded = plan.eve1_s ^ plan.parity_guess ^ *l_prime;
    const int relay = decoded ? *decoded : pair.rng().bit();

    // Receiver-facing exchange (Eve2 <-> Bob): the real receiver applies his
    // own shuffle (phi, s); Eve2 encodes the relayed bit under her blind
    // angles and blocks by her own choice of pulse.
    std::array<Pulse, 2> bp{Pulse{amp, PolarizationAngle(plan.eve2_theta1)},
                            Pulse{amp, PolarizationAngle(plan.eve2_theta2)}};
    const std::array<PolarizationAngle, 2> eve_thetas{PolarizationAngle(plan.eve2_theta1),
                                                      PolarizationAngle(plan.eve2_theta2)};
    for (auto& p : bp) p = transit(p, 0, config, chan, nullptr);
    intensity[0] = intensity_of(bp[0]) + intensity_of(bp[1]);
    for (int i = 0; i < 2; ++i) bp[i].angle = bp[i].angle + phi + quarter_offset(s ^ i);
    for (auto& p : bp) p = transit(p, 1, config, chan, nullptr);
    intensity[1] = intensity_of(bp[0]) + intensity_of(bp[1]);
    for (int i = 0; i < 2; ++i) {
        bp[i].angle = bp[i].angle + (-eve_thetas[i] + quarter_offset(relay));
    }
    Pulse kept = bp[plan.eve2_b - 1];
    kept = transit(kept, 2, config, chan, nullptr);
    intensity[2] = intensity_of(kept);
    kept.angle = kept.angle - phi;
    round.pass_states[5] = kept.angle;
    const int photons = pulse_photons(kept, config, chan);
    round.l = measure_pulse(kept, PolarizationAngle(0.0), photons, chan);
    // The receiver decodes with the blocking factor the real sender
    // announces, not Eve2's private choice.
    if (round.l) round.decoded = decode_two_pulse(s, b, *round.l);

    pair.record_round(decoded, relay);
    return round;
}

}  // namespace

SessionResult run_session(const SessionSpec& spec) {
    validate(spec.channel);
    if (spec.n_bits < 1) {
        throw std::invalid_argument("run_session: n_bits must be >= 1");
    }
    if (!(spec.discard_ceiling > 0.0 && spec.discard_ceiling <= 1.0)) {
        throw std::invalid_argument("run_session: discard_ceiling must lie in (0, 1]");
    }

    const RandomSource master(spec.channel.seed);
    RandomSource alice = master.derive(kAliceStream);
    RandomSource bob = master.derive(kBobStream);
    RandomSource chan = master.derive(kChannelStream);
    const std::unique_ptr<Eavesdropper> eve = make_eavesdropper(spec.channel);
    std::optional<ImpersonationPair> pair;
    if (spec.channel.attack == Attack::Impersonation) {
        pair.emplace(spec.impersonation_knows_secrets, master.derive(kEveStream));
    }

    SessionResult result;
    SessionTranscript& t = result.transcript;
    t.mode = spec.mode;
    t.config = spec.channel;
    t.n_bits = spec.n_bits;
    t.knows_secrets = spec.impersonation_knows_secrets;

    long attempts = 0;
    int accepted = 0;
    while (accepted < spec.n_bits) {
        ++attempts;
        std::array<double, 3> intensity{};
        const int key_bit = alice.bit();
        std::optional<int> receiver_bit;

        if (spec.mode == ProtocolMode::Basic) {
            const PolarizationAngle theta{alice.uniform_angle()};
            const PolarizationAngle phi{bob.uniform_angle()};
            BasicRound round =
                pair ? run_impersonated_basic(theta, phi, key_bit, spec.channel, chan, *pair,
                                              intensity)
                     : run_basic_round(theta, phi, key_bit, spec.channel, chan, eve.get(),
                                       &intensity);
            receiver_bit = round.outcome;
            t.basic_rounds.push_back(round);
        } else {
            const PolarizationAngle theta1{alice.uniform_angle()};
            const PolarizationAngle theta2{alice.uniform_angle()};
            const int b = 1 + alice.bit();
            const PolarizationAngle phi{bob.uniform_angle()};
            const int s = bob.bit();
            TwoPulseRound round =
                pair ? run_impersonated_two_pulse(theta1, theta2, phi, s, key_bit, b,
                                                  spec.channel, chan, *pair, intensity)
                     : run_two_pulse_round(theta1, theta2, phi, s, key_bit, b, spec.channel,
                                           chan, eve.get(), &intensity);
            receiver_bit = round.decoded;
            t.two_pulse_rounds.push_back(round);
        }

        if (eve) eve->finish_round();
        t.intensity_log.push_back(intensity);

        if (receiver_bit) {
            t.alice_key.push_back(key_bit);
            t.bob_key.push_back(*receiver_bit);
            ++accepted;
        } else {
            ++t.discard_count;
        }

        if (attempts >= 100 &&
            static_cast<double>(t.discard_count) >
                spec.discard_ceiling * static_cast<double>(attempts)) {
            throw AbortedSession("session aborted: discard rate above " +
                                 std::to_string(spec.discard_ceiling) + " after " +
                                 std::to_string(attempts) + " attempts");
        }
    }

    const KeyVerification v = verify_keys(t.alice_key, t.bob_key);
    t.hash_alice = v.hash_a;
    t.hash_bob = v.hash_b;
    t.verified = v.verified;

    if (eve) {
        result.eve_records = eve->records();
    } else if (pair) {
        result.eve_records = pair->records();
    }
    return result;
}

namespace {

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt_opt(const std::optional<int>& v) {
    return v ? std::to_string(*v) : "-";
}

std::string bits_string(const std::vector<int>& bits) {
    std::string s;
    s.reserve(bits.size());
    for (int b : bits) s.push_back(b ? '1' : '0');
    return s;
}

}  // namespace

void write_transcript(std::ostream& out, const SessionTranscript& t) {
    out << "format=blindpol-transcript-1\n";
    out << "mode=" << mode_name(t.mode) << "\n";
    out << "attack=" << attack_name(t.config.attack) << "\n";
    out << "model=" << model_name(t.config.model) << "\n";
    out << "eta=" << fmt_double(t.config.eta) << "\n";
    out << "alpha=" << fmt_double(t.config.alpha) << "\n";
    out << "seed=" << t.config.seed << "\n";
    out << "n_bits=" << t.n_bits << "\n";
    if (t.config.attack == Attack::Impersonation) {
        out << "knows_secrets=" << (t.knows_secrets ? 1 : 0) << "\n";
    }
    const std::size_t attempts =
        t.mode == ProtocolMode::Basic ? t.basic_rounds.size() : t.two_pulse_rounds.size();
    out << "attempts=" << attempts << "\n";
    out << "discards=" << t.discard_count << "\n";

    // One line per attempted round: index, mode, secrets, per-pass angles,
    // outcome, discard flag, received intensities.
    auto intensity_field = [&](std::size_t i) {
        std::string field = " intensity=";
        const auto& v = t.intensity_log[i];
        field += fmt_double(v[0]);
        field += ",";
        field += fmt_double(v[1]);
        field += ",";
        field += fmt_double(v[2]);
        return field;
    };

    if (t.mode == ProtocolMode::Basic) {
        for (std::size_t i = 0; i < t.basic_rounds.size(); ++i) {
            const BasicRound& r = t.basic_rounds[i];
            out << "round " << i << " basic theta=" << fmt_double(r.theta.radians())
                << " phi=" << fmt_double(r.phi.radians()) << " k=" << r.key_bit;
            for (std::size_t j = 0; j < r.pass_states.size(); ++j) {
                out << " psi" << (j + 1) << "=" << fmt_double(r.pass_states[j].radians());
            }
            out << " outcome=" << fmt_opt(r.outcome)
                << " discarded=" << (r.outcome ? 0 : 1) << intensity_field(i) << "\n";
        }
    } else {
        for (std::size_t i = 0; i < t.two_pulse_rounds.size(); ++i) {
            const TwoPulseRound& r = t.two_pulse_rounds[i];
            out << "round " << i << " two-pulse theta1=" << fmt_double(r.theta1.radians())
                << " theta2=" << fmt_double(r.theta2.radians())
                << " phi=" << fmt_double(r.phi.radians()) << " s=" << r.s << " k=" << r.k
                << " b=" << r.b;
            static const char* kPassNames[6] = {"psi1a", "psi1b", "psi2a",
                                                "psi2b", "psi3",  "psi4"};
            for (std::size_t j = 0; j < r.pass_states.size(); ++j) {
                out << " " << kPassNames[j] << "=" << fmt_double(r.pass_states[j].radians());
            }
            out << " l=" << fmt_opt(r.l) << " decoded=" << fmt_opt(r.decoded)
                << " discarded=" << (r.decoded ? 0 : 1) << intensity_field(i) << "\n";
        }
    }

    out << "alice_key=" << bits_string(t.alice_key) << "\n";
    out << "bob_key=" << bits_string(t.bob_key) << "\n";
    out << "hash_alice=" << to_hex(t.hash_alice) << "\n";
    out << "hash_bob=" << to_hex(t.hash_bob) << "\n";
    out << "verified=" << (t.verified ? 1 : 0) << "\n";
}

std::string transcript_to_string(const SessionTranscript& transcript) {
    std::ostringstream out;
    write_transcript(out, transcript);
    return out.str();
}

const char* mode_name(ProtocolMode m) {
    switch (m) {
        case ProtocolMode::Basic: return "basic";
        case ProtocolMode::TwoPulse: return "two-pulse";
    }
    return "unknown";
}

std::optional<ProtocolMode> parse_mode(std::string_view name) {
    if (name == "basic") return ProtocolMode::Basic;
    if (name == "two-pulse") return ProtocolMode::TwoPulse;
    return std::nullopt;
}

}  // namespace blindpol
