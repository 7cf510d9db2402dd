#include "blindpol/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace blindpol {

namespace {

// ln C(n, l) via log-gamma.
double log_binomial(int n, int l) {
    return std::lgamma(n + 1.0) - std::lgamma(l + 1.0) - std::lgamma(n - l + 1.0);
}

double equatorial_fidelity_direct(int n) {
    if (n <= 0) return 0.5;
    if (n <= 30) {
        // All C(n, l) for n <= 30 are integers below 2^53, so the
        // multiplicative recurrence is exact, and scaling by the power of
        // two is exact; n = 1 really returns 0.75, not 0.75 +- 1 ulp.
        std::vector<double> c(static_cast<std::size_t>(n) + 1);
        c[0] = 1.0;
        for (int l = 0; l < n; ++l) {
            c[static_cast<std::size_t>(l) + 1] =
                c[static_cast<std::size_t>(l)] * (n - l) / (l + 1);
        }
        double sum = 0.0;
        for (int l = 0; l < n; ++l) {
            sum += std::sqrt(c[static_cast<std::size_t>(l)] *
                             c[static_cast<std::size_t>(l) + 1]);
        }
        return 0.5 + std::ldexp(sum, -(n + 1));
    }
    // sum_{l=0}^{n-1} sqrt(C(n,l) C(n,l+1)), each term exponentiated from
    // log space with the 2^-(n+1) prefactor folded in to avoid overflow.
    const double log2 = std::log(2.0);
    double sum = 0.0;
    for (int l = 0; l < n; ++l) {
        const double log_term =
            0.5 * (log_binomial(n, l) + log_binomial(n, l + 1)) - (n + 1) * log2;
        sum += std::exp(log_term);
    }
    return 0.5 + sum;
}

// Memoized values for small n; Monte Carlo scoring hits these in a tight
// loop.  Indices above the cap fall back to the direct O(n) evaluation.
constexpr int kFidelityCacheMax = 4096;
std::vector<double> g_fidelity_cache;
std::mutex g_fidelity_mutex;

}  // namespace

double equatorial_fidelity(int n) {
    if (n < 0) throw std::invalid_argument("equatorial_fidelity: n must be >= 0");
    if (n > kFidelityCacheMax) return equatorial_fidelity_direct(n);
    std::lock_guard<std::mutex> lock(g_fidelity_mutex);
    if (g_fidelity_cache.empty()) g_fidelity_cache.assign(kFidelityCacheMax + 1, -1.0);
    double& slot = g_fidelity_cache[static_cast<std::size_t>(n)];
    if (slot < 0.0) slot = equatorial_fidelity_direct(n);
    return slot;
}

double full_sphere_fidelity(int n) {
    if (n < 0) throw std::invalid_argument("full_sphere_fidelity: n must be >= 0");
    return (n + 1.0) / (n + 2.0);
}

double poisson_pmf(double mean, int n) {
    if (!(mean >= 0.0)) throw std::invalid_argument("poisson_pmf: mean must be >= 0");
    if (n < 0) throw std::invalid_argument("poisson_pmf: n must be >= 0");
    if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
    // exp(n ln mean - mean - ln n!)
    return std::exp(n * std::log(mean) - mean - std::lgamma(n + 1.0));
}

int poisson_truncation(double mean) {
    // Mean plus ~20 standard deviations plus a constant floor; leaves tail
    // mass far below 1e-12 for any mean reached by the sweeps here.
    return static_cast<int>(std::ceil(mean + 20.0 * std::sqrt(mean + 1.0) + 50.0));
}

double expected_fidelity(double mean_photons) {
    if (!(mean_photons >= 0.0)) {
        throw std::invalid_argument("expected_fidelity: mean must be >= 0");
    }
    if (mean_photons == 0.0) return 0.5;
    const int n_max = poisson_truncation(mean_photons);
    double sum = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        sum += poisson_pmf(mean_photons, n) * equatorial_fidelity(n);
    }
    return sum;
}

namespace {

void check_attack_args(double eta2, double alpha) {
    if (!(eta2 > 0.0 && eta2 <= 1.0)) {
        throw std::invalid_argument("attack bound: eta2 must lie in (0, 1]");
    }
    if (!(alpha >= 0.0)) {
        throw std::invalid_argument("attack bound: alpha must be >= 0");
    }
}

}  // namespace

InfoBound attack1_bound(double eta2, double alpha) {
    check_attack_args(eta2, alpha);
    const double stolen = (1.0 - eta2) * alpha * alpha;
    InfoBound b;
    b.eta2 = eta2;
    b.alpha = alpha;
    b.i_a2 = expected_fidelity(stolen);
    b.i_a3 = expected_fidelity(stolen * eta2);
    b.i_a4 = expected_fidelity(stolen * eta2 * eta2);
    // expected_fidelity is monotone in the mean, and the means fall with
    // each pass, so the minimum is the third-pass bound.
    b.i_e = std::min({b.i_a2, b.i_a3, b.i_a4});
    return b;
}

InfoBound attack2_bound(double eta2, double alpha) {
    check_attack_args(eta2, alpha);
    const double eta6 = eta2 * eta2 * eta2;
    const double stolen = (1.0 - eta6) * alpha * alpha / 3.0;
    InfoBound b;
    b.eta2 = eta2;
    b.alpha = alpha;
    b.i_a2 = expected_fidelity(stolen);
    b.i_a3 = b.i_a2;
    b.i_a4 = b.i_a2;
    b.i_e = b.i_a2;
    return b;
}

}  // namespace blindpol
