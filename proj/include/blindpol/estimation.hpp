#pragma once

namespace blindpol {

// Analytic information bounds for an eavesdropper who steals photons from a
// multi-pass polarization exchange and applies the optimal estimation
// strategy to each stolen batch.

// Per-pass fidelity bounds for one attack configuration.  i_a2/i_a3/i_a4 are
// the eavesdropper's maximal mean estimation fidelities for the states of
// passes 1, 2 and 3; i_e aggregates them into the attack's overall bound.
struct InfoBound {
    double eta2 = 0.0;   // channel intensity transmission per one-way trip
    double alpha = 0.0;  // initial pulse amplitude (mean photons = alpha^2)
    double i_a2 = 0.5;
    double i_a3 = 0.5;
    double i_a4 = 0.5;
    double i_e = 0.5;
};

// Maximal mean fidelity for estimating a completely unknown equatorial
// polarization from n identical copies:
//
//   I(n) = 1/2 + 2^-(n+1) * sum_{l=0}^{n-1} sqrt( C(n,l) * C(n,l+1) )
//
// Binomials go through log-gamma, so the bound is evaluable far past
// n = 10^4 without overflow.  I(0) = 1/2 (a blind guess).
double equatorial_fidelity(int n);

// The same bound when the unknown direction ranges over the whole sphere:
// (n+1)/(n+2).  Strictly below equatorial_fidelity(n) for n >= 1.
double full_sphere_fidelity(int n);

// P[N = n] for a Poisson photon-number distribution with the given mean.
// Evaluated in log space; valid for mean >= 0 (mean 0 is the vacuum) and
// n >= 0.
double poisson_pmf(double mean, int n);

// Truncation index used by expected_fidelity: far enough into the Poisson
// tail that the neglected mass is < 1e-12 of the total.
int poisson_truncation(double mean);

// Mean estimation fidelity for a batch whose photon number is Poisson with
// the given mean: sum_n P[N = n] * equatorial_fidelity(n).
double expected_fidelity(double mean_photons);

// Beam-splitting attack that substitutes a lossless line and taps every pass
// with transmittivity matching the honest channel.  The tapped means for the
// three passes are (1 - eta2) * alpha^2 * {1, eta2, eta2^2}; the aggregate
// bound is the minimum of the per-pass fidelities (the attacker must know
// all three states, so the weakest pass limits her).
InfoBound attack1_bound(double eta2, double alpha);

// Equal-extraction attack: the tap is rebalanced per pass so each of the
// three stolen batches has mean (1 - eta2^3) * alpha^2 / 3 while the
// receiver still sees the honest final intensity eta2^3 * alpha^2.  All
// three per-pass bounds coincide, and so does the aggregate.
InfoBound attack2_bound(double eta2, double alpha);

}  // namespace blindpol
