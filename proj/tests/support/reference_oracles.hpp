#pragma once

// Reference computations kept independent of the library's code paths.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace guardsim::testing {

/// Erlang-B from the normalised truncated Poisson distribution, summed in
/// log space: pi(n) ∝ a^n / n!.
inline double erlang_b_truncated_poisson(int channels, double load) {
    if (load == 0.0) return channels == 0 ? 1.0 : 0.0;
    std::vector<double> logw(static_cast<std::size_t>(channels) + 1);
    double peak = -INFINITY;
    for (int n = 0; n <= channels; ++n) {
        logw[static_cast<std::size_t>(n)] = n * std::log(load) - std::lgamma(n + 1.0);
        peak = std::max(peak, logw[static_cast<std::size_t>(n)]);
    }
    double total = 0.0;
    for (double w : logw) total += std::exp(w - peak);
    return std::exp(logw.back() - peak) / total;
}

/// Stationary distribution of a finite CTMC with generator built from the
/// given transition rates, solved by Gaussian elimination on pi Q = 0 with
/// the normalisation row replacing the last balance equation.
inline std::vector<double> ctmc_stationary(const std::vector<std::vector<double>>& rate) {
    const std::size_t n = rate.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    // Row i of the system: sum_j pi_j Q_{j,i} = 0.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            a[i][j] += rate[j][i];
            a[i][i] -= rate[i][j];
        }
    }
    for (std::size_t j = 0; j < n; ++j) a[n - 1][j] = 1.0;
    a[n - 1][n] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (a[pivot][col] == 0.0) throw std::runtime_error("singular generator");
        std::swap(a[pivot], a[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (std::size_t k = col; k <= n; ++k) a[r][k] -= f * a[col][k];
        }
    }
    std::vector<double> pi(n);
    for (std::size_t i = 0; i < n; ++i) pi[i] = a[i][n] / a[i][i];
    return pi;
}

/// Guard-channel cell as an explicit CTMC.
struct GuardReference {
    std::vector<double> pi;
    double Pb;
    double Ph;
};

inline GuardReference guard_channel_reference(int channels, int guard, double lambda_new, double lambda_handoff,
                                              double mu) {
    const auto n = static_cast<std::size_t>(channels) + 1;
    std::vector<std::vector<double>> q(n, std::vector<double>(n, 0.0));
    for (int s = 0; s < channels; ++s) {
        double up = lambda_handoff;
        if (s < channels - guard) up += lambda_new;
        q[static_cast<std::size_t>(s)][static_cast<std::size_t>(s) + 1] = up;
    }
    for (int s = 1; s <= channels; ++s) q[static_cast<std::size_t>(s)][static_cast<std::size_t>(s) - 1] = s * mu;
    GuardReference r{ctmc_stationary(q), 0.0, 0.0};
    for (int s = channels - guard; s <= channels; ++s) r.Pb += r.pi[static_cast<std::size_t>(s)];
    r.Ph = r.pi.back();
    return r;
}

}  // namespace guardsim::testing
