#include "guardsim/oracle.hpp"

#include <cmath>
#include <numeric>

#include "guardsim/policy.hpp"

namespace guardsim {

double erlang_b(int channels, double offered_load) {
    if (channels < 0) throw ValidationError("C: must be non-negative");
    if (!(offered_load >= 0.0) || !std::isfinite(offered_load))
        throw ValidationError("a: offered load must be a finite non-negative number");
    double b = 1.0;
    for (int k = 1; k <= channels; ++k) b = offered_load * b / (k + offered_load * b);
    return b;
}

OracleResult guard_channel_stationary(int channels, int guard, double lambda_new,
                                      double lambda_handoff, double mu) {
    if (channels < 1) throw ValidationError("C: must be at least 1");
    if (guard < 0 || guard > channels - 1) throw ValidationError("GCh: must lie in [0, C-1]");
    if (!(lambda_new >= 0.0) || !std::isfinite(lambda_new))
        throw ValidationError("lambda_n: must be a finite non-negative rate");
    if (!(lambda_handoff >= 0.0) || !std::isfinite(lambda_handoff))
        throw ValidationError("lambda_h: must be a finite non-negative rate");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw ValidationError("mu: must be a finite positive rate");
    if (lambda_new == 0.0 && lambda_handoff == 0.0)
        throw ValidationError("lambda_n, lambda_h: all arrival rates are zero (degenerate chain)");

    const int open = channels - guard;
    OracleResult r;
    r.state_probs.assign(static_cast<std::size_t>(channels) + 1, 0.0);
    auto& p = r.state_probs;
    p[0] = 1.0;
    for (int n = 1; n <= channels; ++n) {
        const double birth = (n - 1 < open) ? lambda_new + lambda_handoff : lambda_handoff;
        p[n] = p[n - 1] * birth / (n * mu);
        if (p[n] > 1e250) {
            for (int k = 0; k <= n; ++k) p[k] /= p[n];
        }
    }
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& x : p) x /= total;

    r.Ph = p[channels];
    r.Pb = std::accumulate(p.begin() + open, p.end(), 0.0);
    return r;
}

}  // namespace guardsim
