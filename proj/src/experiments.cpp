#include "blindpol/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "blindpol/hash.hpp"

namespace blindpol {

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

void validate(const SweepSpec& spec) {
    if (!(spec.alpha_step > 0.0)) {
        throw std::invalid_argument("sweep: alpha_step must be > 0");
    }
    if (!(spec.alpha_start >= 0.0) || !(spec.alpha_stop >= spec.alpha_start)) {
        throw std::invalid_argument("sweep: need 0 <= alpha_start <= alpha_stop");
    }
    if (spec.eta2_values.empty()) {
        throw std::invalid_argument("sweep: eta2_values must not be empty");
    }
    for (double e : spec.eta2_values) {
        if (!(e > 0.0 && e <= 1.0)) {
            throw std::invalid_argument("sweep: eta2 values must lie in (0, 1]");
        }
    }
    if (spec.attacks.empty()) {
        throw std::invalid_argument("sweep: attacks must not be empty");
    }
    for (Attack a : spec.attacks) {
        if (a != Attack::PnsAttack1 && a != Attack::PnsAttack2) {
            throw std::invalid_argument(
                "sweep: analytic bounds exist only for pns1 and pns2");
        }
    }
}

std::vector<double> alpha_grid(const SweepSpec& spec) {
    std::vector<double> grid;
    const long n = std::lround((spec.alpha_stop - spec.alpha_start) / spec.alpha_step);
    for (long i = 0; i <= n; ++i) {
        const double a = spec.alpha_start + static_cast<double>(i) * spec.alpha_step;
        if (a <= spec.alpha_stop + spec.alpha_step * 0.5) grid.push_back(a);
    }
    return grid;
}

std::vector<BoundRow> run_bound_sweep(const SweepSpec& spec) {
    validate(spec);
    std::vector<Attack> attacks = spec.attacks;
    std::sort(attacks.begin(), attacks.end());
    attacks.erase(std::unique(attacks.begin(), attacks.end()), attacks.end());
    std::vector<double> eta2s = spec.eta2_values;
    std::sort(eta2s.begin(), eta2s.end());
    eta2s.erase(std::unique(eta2s.begin(), eta2s.end()), eta2s.end());
    const std::vector<double> alphas = alpha_grid(spec);

    std::vector<BoundRow> rows;
    rows.reserve(attacks.size() * eta2s.size() * alphas.size());
    for (Attack attack : attacks) {
        for (double eta2 : eta2s) {
            for (double alpha : alphas) {
                BoundRow row;
                row.attack = attack;
                row.bound = attack == Attack::PnsAttack1 ? attack1_bound(eta2, alpha)
                                                         : attack2_bound(eta2, alpha);
                rows.push_back(row);
            }
        }
    }
    return rows;
}

void write_bound_csv(std::ostream& out, const std::vector<BoundRow>& rows) {
    out << "attack,eta2,alpha,i_a2,i_a3,i_a4,i_e\n";
    for (const BoundRow& row : rows) {
        const InfoBound& b = row.bound;
        out << attack_name(row.attack) << "," << format_double(b.eta2) << ","
            << format_double(b.alpha) << "," << format_double(b.i_a2) << ","
            << format_double(b.i_a3) << "," << format_double(b.i_a4) << ","
            << format_double(b.i_e) << "\n";
    }
}

PnsMcResult pns_monte_carlo(Attack attack, double eta2, double alpha, long rounds,
                            std::uint64_t seed) {
    if (attack != Attack::PnsAttack1 && attack != Attack::PnsAttack2) {
        throw std::invalid_argument("pns_monte_carlo: attack must be pns1 or pns2");
    }
    if (rounds < 1) throw std::invalid_argument("pns_monte_carlo: rounds must be >= 1");

    PnsMcResult r;
    r.attack = attack;
    r.eta2 = eta2;
    r.alpha = alpha;
    r.rounds = rounds;
    r.seed = seed;
    r.analytic =
        attack == Attack::PnsAttack1 ? attack1_bound(eta2, alpha) : attack2_bound(eta2, alpha);

    ChannelConfig config;
    config.eta = std::sqrt(eta2);
    config.attack = attack;
    config.model = PulseModel::Coherent;
    config.alpha = alpha;
    config.seed = seed;

    const RandomSource master(seed);
    RandomSource alice = master.derive(0);
    RandomSource bob = master.derive(1);
    RandomSource chan = master.derive(2);
    const auto eve = make_eavesdropper(config);

    std::array<double, 3> sums{};
    double aggregate_sum = 0.0;
    for (long i = 0; i < rounds; ++i) {
        const PolarizationAngle theta{alice.uniform_angle()};
        const int key_bit = alice.bit();
        const PolarizationAngle phi{bob.uniform_angle()};
        run_basic_round(theta, phi, key_bit, config, chan, eve.get(), nullptr);
        eve->finish_round();
        const EveRecord& rec = eve->records().back();
        for (std::size_t p = 0; p < 3; ++p) sums[p] += rec.passes[p].fidelity_score;
        aggregate_sum += rec.aggregate_score;
        eve->clear_records();
    }

    r.mean_i_a2 = sums[0] / static_cast<double>(rounds);
    r.mean_i_a3 = sums[1] / static_cast<double>(rounds);
    r.mean_i_a4 = sums[2] / static_cast<double>(rounds);
    r.mean_round_aggregate = aggregate_sum / static_cast<double>(rounds);
    if (attack == Attack::PnsAttack1) {
        r.empirical_i_e = std::min({r.mean_i_a2, r.mean_i_a3, r.mean_i_a4});
    } else {
        r.empirical_i_e = (r.mean_i_a2 + r.mean_i_a3 + r.mean_i_a4) / 3.0;
    }
    r.abs_gap = std::fabs(r.empirical_i_e - r.analytic.i_e);
    return r;
}

void write_pns_mc_csv(std::ostream& out, const PnsMcResult& r) {
    out << "attack,eta2,alpha,rounds,seed,mean_i_a2,mean_i_a3,mean_i_a4,empirical_i_e,"
           "mean_round_aggregate,analytic_i_e,abs_gap\n";
    out << attack_name(r.attack) << "," << format_double(r.eta2) << ","
        << format_double(r.alpha) << "," << r.rounds << "," << r.seed << ","
        << format_double(r.mean_i_a2) << "," << format_double(r.mean_i_a3) << ","
        << format_double(r.mean_i_a4) << "," << format_double(r.empirical_i_e) << ","
        << format_double(r.mean_round_aggregate) << "," << format_double(r.analytic.i_e)
        << "," << format_double(r.abs_gap) << "\n";
}

InterceptResendMcResult intercept_resend_monte_carlo(double eta, long rounds,
                                                     std::uint64_t seed) {
    if (rounds < 1) {
        throw std::invalid_argument("intercept_resend_monte_carlo: rounds must be >= 1");
    }
    ChannelConfig config;
    config.eta = eta;
    config.attack = Attack::InterceptResend;
    config.model = PulseModel::SinglePhoton;
    config.alpha = 1.0;
    config.seed = seed;
    validate(config);

    InterceptResendMcResult r;
    r.eta = eta;
    r.rounds = rounds;
    r.seed = seed;

    const RandomSource master(seed);
    RandomSource alice = master.derive(0);
    RandomSource bob = master.derive(1);
    RandomSource chan = master.derive(2);
    const auto eve = make_eavesdropper(config);

    double fidelity_sum = 0.0;
    long errors = 0;
    for (long i = 0; i < rounds; ++i) {
        const PolarizationAngle theta{alice.uniform_angle()};
        const int key_bit = alice.bit();
        const PolarizationAngle phi{bob.uniform_angle()};
        const BasicRound round =
            run_basic_round(theta, phi, key_bit, config, chan, eve.get(), nullptr);
        eve->finish_round();
        const EveRecord& rec = eve->records().back();
        if (rec.passes[0].photon_count == 1) {
            fidelity_sum += rec.passes[0].fidelity_score;
            ++r.tapped;
        }
        if (round.outcome) {
            ++r.detected;
            if (*round.outcome != key_bit) ++errors;
        }
        eve->clear_records();
    }
    r.mean_fidelity = r.tapped > 0 ? fidelity_sum / static_cast<double>(r.tapped) : 0.5;
    r.qber = r.detected > 0 ? static_cast<double>(errors) / static_cast<double>(r.detected)
                            : 0.0;
    return r;
}

void write_intercept_resend_mc_csv(std::ostream& out, const InterceptResendMcResult& r) {
    out << "attack,eta,rounds,seed,tapped,detected,mean_fidelity,qber\n";
    out << "intercept-resend," << format_double(r.eta) << "," << r.rounds << "," << r.seed
        << "," << r.tapped << "," << r.detected << "," << format_double(r.mean_fidelity)
        << "," << format_double(r.qber) << "\n";
}

SessionSummary summarize(const SessionResult& result) {
    const SessionTranscript& t = result.transcript;
    SessionSummary s;
    s.attempts = static_cast<long>(t.mode == ProtocolMode::Basic ? t.basic_rounds.size()
                                                                 : t.two_pulse_rounds.size());
    s.discards = t.discard_count;
    s.key_length = static_cast<int>(t.alice_key.size());
    long mismatches = 0;
    for (std::size_t i = 0; i < t.alice_key.size(); ++i) {
        if (t.alice_key[i] != t.bob_key[i]) ++mismatches;
    }
    s.qber = s.key_length > 0 ? static_cast<double>(mismatches) / s.key_length : 0.0;
    s.verified = t.verified;

    if (!t.intensity_log.empty()) {
        for (const auto& v : t.intensity_log) {
            for (std::size_t p = 0; p < 3; ++p) s.mean_intensity[p] += v[p];
        }
        for (std::size_t p = 0; p < 3; ++p) {
            s.mean_intensity[p] /= static_cast<double>(t.intensity_log.size());
        }
    }

    const Attack attack = t.config.attack;
    if ((attack == Attack::PnsAttack1 || attack == Attack::PnsAttack2 ||
         attack == Attack::InterceptResend) &&
        !result.eve_records.empty()) {
        double sum = 0.0;
        for (const EveRecord& rec : result.eve_records) sum += rec.aggregate_score;
        s.has_eve_score = true;
        s.eve_mean_aggregate = sum / static_cast<double>(result.eve_records.size());
    }
    if (attack == Attack::Impersonation && !result.eve_records.empty()) {
        long compared = 0;
        long agreed = 0;
        for (std::size_t i = 0; i < result.eve_records.size(); ++i) {
            const EveRecord& rec = result.eve_records[i];
            if (!rec.decoded_bit) continue;
            const int true_bit = t.mode == ProtocolMode::Basic ? t.basic_rounds[i].key_bit
                                                               : t.two_pulse_rounds[i].k;
            ++compared;
            if (*rec.decoded_bit == true_bit) ++agreed;
        }
        if (compared > 0) {
            s.has_eve_agreement = true;
            s.eve_decode_agreement = static_cast<double>(agreed) / compared;
        }
    }
    return s;
}

void print_summary(std::ostream& out, const SessionResult& result) {
    const SessionTranscript& t = result.transcript;
    const SessionSummary s = summarize(result);
    out << "mode=" << mode_name(t.mode) << " attack=" << attack_name(t.config.attack)
        << " model=" << model_name(t.config.model) << " eta=" << format_double(t.config.eta)
        << " alpha=" << format_double(t.config.alpha) << " seed=" << t.config.seed << "\n";
    out << "attempts=" << s.attempts << " discards=" << s.discards
        << " key_length=" << s.key_length << "\n";
    out << "qber=" << format_double(s.qber) << "\n";
    out << "mean_intensity=" << format_double(s.mean_intensity[0]) << ","
        << format_double(s.mean_intensity[1]) << "," << format_double(s.mean_intensity[2])
        << "\n";
    if (s.has_eve_score) {
        out << "eve_mean_aggregate=" << format_double(s.eve_mean_aggregate) << "\n";
    }
    if (s.has_eve_agreement) {
        out << "eve_decode_agreement=" << format_double(s.eve_decode_agreement) << "\n";
    }
    out << "hash_alice=" << to_hex(t.hash_alice) << "\n";
    out << "hash_bob=" << to_hex(t.hash_bob) << "\n";
    out << "verified=" << (t.verified ? 1 : 0) << "\n";
}

}  // namespace blindpol
