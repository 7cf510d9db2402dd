#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "blindpol/channel.hpp"
#include "blindpol/estimation.hpp"
#include "blindpol/protocol.hpp"

namespace blindpol {

// Analytic bound sweep over an (attack, eta2, alpha) grid.  The defaults
// reproduce the standard working grid: alpha from 0 to 6 in steps of 0.05
// and the four channel efficiencies of interest.
struct SweepSpec {
    double alpha_start = 0.0;
    double alpha_stop = 6.0;
    double alpha_step = 0.05;
    std::vector<double> eta2_values{0.4, 0.5, 2.0 / 3.0, 0.9};
    std::vector<Attack> attacks{Attack::PnsAttack1, Attack::PnsAttack2};
};

// Throws std::invalid_argument on an empty or out-of-range grid (step must
// be positive, alphas >= 0, eta2 in (0, 1], attacks limited to pns1/pns2).
void validate(const SweepSpec& spec);

// The alpha grid points of a sweep, computed by index so step rounding can
// never drop or duplicate an endpoint.
std::vector<double> alpha_grid(const SweepSpec& spec);

struct BoundRow {
    Attack attack = Attack::PnsAttack1;
    InfoBound bound;
};

// Rows in deterministic order: attack, then eta2, then alpha, all ascending.
std::vector<BoundRow> run_bound_sweep(const SweepSpec& spec);

// CSV with header attack,eta2,alpha,i_a2,i_a3,i_a4,i_e; numbers use 10
// significant digits, LF line endings.
void write_bound_csv(std::ostream& out, const std::vector<BoundRow>& rows);

// Monte Carlo check of a photon-number-splitting bound: run full rounds
// against the simulated attack and average the per-pass estimation-fidelity
// scores Eve actually achieves.  empirical_i_e uses the estimator matching
// the analytic aggregate: the minimum of the three per-pass means for the
// matched-tap attack, the grand mean for equal extraction.  (The mean of the
// per-round minima is also reported; min and mean do not commute, and since
// E[min] <= min of the means it sits strictly below the analytic value.)
struct PnsMcResult {
    Attack attack = Attack::PnsAttack1;
    double eta2 = 0.0;
    double alpha = 0.0;
    long rounds = 0;
    std::uint64_t seed = 0;
    double mean_i_a2 = 0.5;
    double mean_i_a3 = 0.5;
    double mean_i_a4 = 0.5;
    double empirical_i_e = 0.5;
    double mean_round_aggregate = 0.5;
    InfoBound analytic;
    double abs_gap = 0.0;  // |empirical_i_e - analytic.i_e|
};
PnsMcResult pns_monte_carlo(Attack attack, double eta2, double alpha, long rounds,
                            std::uint64_t seed);
void write_pns_mc_csv(std::ostream& out, const PnsMcResult& r);

// Monte Carlo for the single-photon intercept-resend attack: Eve's mean
// realized estimation fidelity and the error rate she induces on detected
// key bits.
struct InterceptResendMcResult {
    double eta = 1.0;
    long rounds = 0;
    std::uint64_t seed = 0;
    long tapped = 0;
    long detected = 0;
    double mean_fidelity = 0.5;
    double qber = 0.0;
};
InterceptResendMcResult intercept_resend_monte_carlo(double eta, long rounds,
                                                     std::uint64_t seed);
void write_intercept_resend_mc_csv(std::ostream& out, const InterceptResendMcResult& r);

// Scalar roll-up of a finished session.
struct SessionSummary {
    long attempts = 0;
    int discards = 0;
    int key_length = 0;
    double qber = 0.0;  // disagreement rate between the two accepted keys
    bool verified = false;
    std::array<double, 3> mean_intensity{};  // per pass, over all attempts
    bool has_eve_score = false;
    double eve_mean_aggregate = 0.5;
    bool has_eve_agreement = false;
    double eve_decode_agreement = 0.0;  // impersonation: Eve1 decode vs real key
};
SessionSummary summarize(const SessionResult& result);

// Human-readable (and greppable) key=value summary block.
void print_summary(std::ostream& out, const SessionResult& result);

// %.10g — shared numeric policy for CSV output.
std::string format_double(double x);

}  // namespace blindpol
