// Command-line front end: analytic eavesdropper-bound sweeps, simulated
// key-agreement sessions, and Monte Carlo attack experiments, all with
// deterministic seeded output.
//
// Exit codes: 0 success (session verified), 1 runtime failure (e.g. the
// session aborted on discard rate), 2 usage error, 3 I/O error, 4 key-hash
// mismatch (detected eavesdropping or noise).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "blindpol/experiments.hpp"
#include "blindpol/protocol.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitMismatch = 4;

// Runs fn against stdout or a freshly opened file; maps open/write failures
// to the I/O exit code.
template <typename Fn>
int with_output(const std::string& path, Fn&& fn) {
    if (path.empty()) {
        fn(std::cout);
        std::cout.flush();
        return 0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open '" << path << "' for writing\n";
        return kExitIo;
    }
    fn(out);
    out.flush();
    if (!out) {
        std::cerr << "error: write to '" << path << "' failed\n";
        return kExitIo;
    }
    return 0;
}

bool parse_grid(const std::string& text, blindpol::SweepSpec& spec) {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
    char trailing = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &start, &stop, &step, &trailing) != 3) {
        return false;
    }
    spec.alpha_start = start;
    spec.alpha_stop = stop;
    spec.alpha_step = step;
    return true;
}

struct BoundArgs {
    std::string grid = "0:6:0.05";
    std::optional<double> eta2;
    std::string attack;
    std::string out_path;
};

int cmd_bound(const BoundArgs& args) {
    blindpol::SweepSpec spec;
    if (!parse_grid(args.grid, spec)) {
        std::cerr << "error: --grid expects start:stop:step\n";
        return kExitUsage;
    }
    if (args.eta2) spec.eta2_values = {*args.eta2};
    if (!args.attack.empty()) {
        const auto attack = blindpol::parse_attack(args.attack);
        if (!attack) {
            std::cerr << "error: unknown attack '" << args.attack << "'\n";
            return kExitUsage;
        }
        spec.attacks = {*attack};
    }
    const auto rows = blindpol::run_bound_sweep(spec);
    return with_output(args.out_path,
                       [&](std::ostream& out) { blindpol::write_bound_csv(out, rows); });
}

struct SessionArgs {
    int bits = 128;
    std::string mode = "basic";
    double eta2 = 1.0;
    double alpha = 0.0;
    std::string attack = "none";
    std::uint64_t seed = 12345;
    bool knows_secrets = false;
    std::string out_path;
};

int cmd_session(const SessionArgs& args) {
    const auto mode = blindpol::parse_mode(args.mode);
    if (!mode) {
        std::cerr << "error: unknown mode '" << args.mode << "'\n";
        return kExitUsage;
    }
    const auto attack = blindpol::parse_attack(args.attack);
    if (!attack) {
        std::cerr << "error: unknown attack '" << args.attack << "'\n";
        return kExitUsage;
    }

    blindpol::ChannelConfig config;
    config.eta = std::sqrt(args.eta2);
    config.attack = *attack;
    config.seed = args.seed;
    // --alpha 0 (the default) selects single-photon pulses; a positive alpha
    // selects coherent pulses of that amplitude.  Photon-number splitting
    // only makes sense on coherent pulses, so it requires --alpha > 0.
    if (args.alpha > 0.0) {
        config.model = blindpol::PulseModel::Coherent;
        config.alpha = args.alpha;
    } else {
        config.model = blindpol::PulseModel::SinglePhoton;
        config.alpha = 1.0;
    }
    if ((*attack == blindpol::Attack::PnsAttack1 || *attack == blindpol::Attack::PnsAttack2) &&
        args.alpha <= 0.0) {
        std::cerr << "error: " << blindpol::attack_name(*attack) << " requires --alpha > 0\n";
        return kExitUsage;
    }

    blindpol::SessionSpec spec;
    spec.n_bits = args.bits;
    spec.mode = *mode;
    spec.channel = config;
    spec.impersonation_knows_secrets = args.knows_secrets;

    const blindpol::SessionResult result = blindpol::run_session(spec);
    if (!args.out_path.empty()) {
        const int rc = with_output(args.out_path, [&](std::ostream& out) {
            blindpol::write_transcript(out, result.transcript);
        });
        if (rc != 0) return rc;
    }
    blindpol::print_summary(std::cout, result);
    return result.transcript.verified ? 0 : kExitMismatch;
}

struct AttackMcArgs {
    std::string attack = "pns1";
    double eta2 = 0.5;
    double alpha = 1.0;
    long rounds = 100000;
    std::uint64_t seed = 12345;
    std::string out_path;
};

int cmd_attack_mc(const AttackMcArgs& args) {
    const auto attack = blindpol::parse_attack(args.attack);
    if (!attack || (*attack != blindpol::Attack::PnsAttack1 &&
                    *attack != blindpol::Attack::PnsAttack2)) {
        std::cerr << "error: attack-mc supports --attack pns1 or pns2\n";
        return kExitUsage;
    }
    const blindpol::PnsMcResult result =
        blindpol::pns_monte_carlo(*attack, args.eta2, args.alpha, args.rounds, args.seed);
    return with_output(args.out_path,
                       [&](std::ostream& out) { blindpol::write_pns_mc_csv(out, result); });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "blindpol: simulator and numerical toolkit for three-pass key agreement\n"
        "with blinded polarization rotations"};
    app.require_subcommand(1);

    BoundArgs bound_args;
    CLI::App* bound = app.add_subcommand(
        "bound", "Analytic eavesdropper information bounds over a parameter grid (CSV)");
    bound->add_option("--grid", bound_args.grid, "alpha grid as start:stop:step")
        ->capture_default_str();
    bound->add_option("--eta2", bound_args.eta2,
                      "restrict to one channel efficiency (default: 0.4 0.5 2/3 0.9)");
    bound->add_option("--attack", bound_args.attack,
                      "restrict to one attack, pns1 or pns2 (default: both)");
    bound->add_option("--out", bound_args.out_path, "output CSV path (default: stdout)");

    SessionArgs session_args;
    CLI::App* session = app.add_subcommand(
        "session", "Run a key-agreement session and report the summary");
    session->add_option("--bits", session_args.bits, "accepted key bits to produce")
        ->capture_default_str();
    session->add_option("--mode", session_args.mode, "basic or two-pulse")
        ->capture_default_str();
    session->add_option("--eta2", session_args.eta2, "channel intensity efficiency per trip")
        ->capture_default_str();
    session->add_option("--alpha", session_args.alpha,
                        "coherent pulse amplitude; 0 = single-photon pulses")
        ->capture_default_str();
    session->add_option("--attack", session_args.attack,
                        "none|intercept-resend|pns1|pns2|impersonation")
        ->capture_default_str();
    session->add_option("--seed", session_args.seed, "master seed")->capture_default_str();
    session->add_flag("--knows-secrets", session_args.knows_secrets,
                      "impersonation diagnostic: grant the intruders the blocking choice");
    session->add_option("--out", session_args.out_path, "write the round transcript here");

    AttackMcArgs mc_args;
    CLI::App* attack_mc = app.add_subcommand(
        "attack-mc", "Monte Carlo eavesdropper scores vs the analytic bound (CSV)");
    attack_mc->add_option("--attack", mc_args.attack, "pns1 or pns2")->capture_default_str();
    attack_mc->add_option("--eta2", mc_args.eta2, "channel intensity efficiency per trip")
        ->capture_default_str();
    attack_mc->add_option("--alpha", mc_args.alpha, "coherent pulse amplitude")
        ->capture_default_str();
    attack_mc->add_option("--rounds", mc_args.rounds, "Monte Carlo rounds")
        ->capture_default_str();
    attack_mc->add_option("--seed", mc_args.seed, "master seed")->capture_default_str();
    attack_mc->add_option("--out", mc_args.out_path, "output CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (bound->parsed()) return cmd_bound(bound_args);
        if (session->parsed()) return cmd_session(session_args);
        if (attack_mc->parsed()) return cmd_attack_mc(mc_args);
        std::cerr << "error: no subcommand given\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const blindpol::AbortedSession& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
