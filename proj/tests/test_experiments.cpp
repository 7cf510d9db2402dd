#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "blindpol/experiments.hpp"
#include "doctest.h"

using namespace blindpol;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_SUITE("experiments") {

    TEST_CASE("alpha grid is index-computed: exact count, exact endpoints") {
        SweepSpec spec;  // defaults: 0 to 6 step 0.05
        const std::vector<double> grid = alpha_grid(spec);
        REQUIRE(grid.size() == 121);
        CHECK(grid.front() == 0.0);
        CHECK(grid.back() == doctest::Approx(6.0).epsilon(1e-15));
        // step accumulation stays on the lattice even where 0.05 is inexact
        CHECK(grid[57] == doctest::Approx(2.85).epsilon(1e-15));

        SweepSpec single;
        single.alpha_start = 2.83;
        single.alpha_stop = 2.83;
        single.alpha_step = 0.05;
        const std::vector<double> one = alpha_grid(single);
        REQUIRE(one.size() == 1);
        CHECK(one[0] == 2.83);
    }

    TEST_CASE("sweep validation rejects malformed grids") {
        SweepSpec spec;
        spec.alpha_step = 0.0;
        CHECK_THROWS_AS(validate(spec), std::invalid_argument);
        spec = SweepSpec{};
        spec.alpha_start = 3.0;
        spec.alpha_stop = 1.0;
        CHECK_THROWS_AS(validate(spec), std::invalid_argument);
        spec = SweepSpec{};
        spec.eta2_values = {1.2};
        CHECK_THROWS_AS(validate(spec), std::invalid_argument);
        spec = SweepSpec{};
        spec.eta2_values.clear();
        CHECK_THROWS_AS(validate(spec), std::invalid_argument);
        spec = SweepSpec{};
        spec.attacks = {Attack::InterceptResend};
        CHECK_THROWS_AS(validate(spec), std::invalid_argument);
        spec = SweepSpec{};
        spec.attacks.clear();
        CHECK_THROWS_AS(validate(spec), std::invalid_argument);
    }

    TEST_CASE("bound sweep covers the full grid in deterministic order") {
        SweepSpec spec;
        spec.alpha_start = 0.0;
        spec.alpha_stop = 1.0;
        spec.alpha_step = 0.5;
        spec.eta2_values = {0.9, 0.5};  // unsorted on purpose
        spec.attacks = {Attack::PnsAttack2, Attack::PnsAttack1};
        const std::vector<BoundRow> rows = run_bound_sweep(spec);
        REQUIRE(rows.size() == 2 * 2 * 3);
        // attack-major, then eta2 ascending, then alpha ascending
        CHECK(rows[0].attack == Attack::PnsAttack1);
        CHECK(rows[0].bound.eta2 == 0.5);
        CHECK(rows[0].bound.alpha == 0.0);
        CHECK(rows[2].bound.alpha == 1.0);
        CHECK(rows[3].bound.eta2 == 0.9);
        CHECK(rows[6].attack == Attack::PnsAttack2);
        // duplicate entries collapse
        spec.eta2_values = {0.5, 0.5};
        spec.attacks = {Attack::PnsAttack1, Attack::PnsAttack1};
        CHECK(run_bound_sweep(spec).size() == 3);
    }

    TEST_CASE("bound CSV has the documented header and one row per bound") {
        SweepSpec spec;
        spec.alpha_start = 2.83;
        spec.alpha_stop = 2.83;
        spec.alpha_step = 1.0;
        spec.eta2_values = {0.5};
        spec.attacks = {Attack::PnsAttack1};
        std::ostringstream out;
        write_bound_csv(out, run_bound_sweep(spec));
        const auto lines = lines_of(out.str());
        REQUIRE(lines.size() == 2);
        CHECK(lines[0] == "attack,eta2,alpha,i_a2,i_a3,i_a4,i_e");
        CHECK(lines[1].rfind("pns1,0.5,2.83,", 0) == 0);
        // the row ends with i_e at 10 significant digits
        CHECK(lines[1].find(",0.6901826975") != std::string::npos);
    }

    TEST_CASE("pns Monte Carlo is reproducible and bounded by construction") {
        const PnsMcResult a = pns_monte_carlo(Attack::PnsAttack1, 0.4, 1.0, 2000, 7);
        const PnsMcResult b = pns_monte_carlo(Attack::PnsAttack1, 0.4, 1.0, 2000, 7);
        CHECK(a.empirical_i_e == b.empirical_i_e);
        CHECK(a.mean_round_aggregate == b.mean_round_aggregate);
        const PnsMcResult c = pns_monte_carlo(Attack::PnsAttack1, 0.4, 1.0, 2000, 8);
        CHECK(a.empirical_i_e != c.empirical_i_e);
        // fidelities live in [1/2, 1)
        for (const PnsMcResult* r : {&a, &c}) {
            CHECK(r->empirical_i_e >= 0.5);
            CHECK(r->empirical_i_e < 1.0);
            CHECK(r->mean_round_aggregate >= 0.5);
        }
        CHECK_THROWS_AS(pns_monte_carlo(Attack::InterceptResend, 0.5, 1.0, 10, 1),
                        std::invalid_argument);
        CHECK_THROWS_AS(pns_monte_carlo(Attack::PnsAttack1, 0.5, 1.0, 0, 1),
                        std::invalid_argument);
    }

    TEST_CASE("vacuum source pins every empirical score at one half") {
        // alpha = 0: Eve never catches a photon, so all estimation scores
        // collapse to the uninformed value exactly.
        for (Attack attack : {Attack::PnsAttack1, Attack::PnsAttack2}) {
            const PnsMcResult r = pns_monte_carlo(attack, 0.5, 0.0, 500, 3);
            CHECK(r.mean_i_a2 == 0.5);
            CHECK(r.mean_i_a3 == 0.5);
            CHECK(r.mean_i_a4 == 0.5);
            CHECK(r.empirical_i_e == 0.5);
            CHECK(r.mean_round_aggregate == 0.5);
            CHECK(r.analytic.i_e == 0.5);
            CHECK(r.abs_gap == 0.0);
        }
    }

    TEST_CASE("MC CSV writers emit their documented headers") {
        std::ostringstream out;
        write_pns_mc_csv(out, pns_monte_carlo(Attack::PnsAttack2, 0.5, 1.0, 100, 5));
        auto lines = lines_of(out.str());
        REQUIRE(lines.size() == 2);
        CHECK(lines[0] ==
              "attack,eta2,alpha,rounds,seed,mean_i_a2,mean_i_a3,mean_i_a4,"
              "empirical_i_e,mean_round_aggregate,analytic_i_e,abs_gap");
        CHECK(lines[1].rfind("pns2,0.5,1,100,5,", 0) == 0);

        std::ostringstream out2;
        write_intercept_resend_mc_csv(out2, intercept_resend_monte_carlo(1.0, 100, 5));
        auto lines2 = lines_of(out2.str());
        REQUIRE(lines2.size() == 2);
        CHECK(lines2[0] == "attack,eta,rounds,seed,tapped,detected,mean_fidelity,qber");
        CHECK(lines2[1].rfind("intercept-resend,1,100,5,", 0) == 0);
    }

    TEST_CASE("session summary: honest run and intercept-resend run") {
        SessionSpec spec;
        spec.n_bits = 200;
        spec.channel.eta = 1.0;
        spec.channel.seed = 60;
        const SessionResult honest = run_session(spec);
        const SessionSummary hs = summarize(honest);
        CHECK(hs.attempts == 200);
        CHECK(hs.discards == 0);
        CHECK(hs.key_length == 200);
        CHECK(hs.qber == 0.0);
        CHECK(hs.verified);
        CHECK(hs.mean_intensity[0] == 1.0);
        CHECK_FALSE(hs.has_eve_score);
        CHECK_FALSE(hs.has_eve_agreement);

        spec.channel.attack = Attack::InterceptResend;
        spec.n_bits = 2000;
        const SessionResult tapped = run_session(spec);
        const SessionSummary ts = summarize(tapped);
        CHECK_FALSE(ts.verified);
        CHECK(std::fabs(ts.qber - 0.25) <= 4.0 * std::sqrt(0.25 * 0.75 / 2000.0));
        CHECK(ts.has_eve_score);
        CHECK(std::fabs(ts.eve_mean_aggregate - 0.75) <= 0.04);

        std::ostringstream out;
        print_summary(out, tapped);
        const std::string text = out.str();
        CHECK(text.find("attack=intercept-resend") != std::string::npos);
        CHECK(text.find("qber=") != std::string::npos);
        CHECK(text.find("eve_mean_aggregate=") != std::string::npos);
        CHECK(text.find("verified=0") != std::string::npos);
    }

    TEST_CASE("format_double uses 10 significant digits") {
        CHECK(format_double(0.5) == "0.5");
        CHECK(format_double(2.0 / 3.0) == "0.6666666667");
        CHECK(format_double(1.0) == "1");
    }
}
