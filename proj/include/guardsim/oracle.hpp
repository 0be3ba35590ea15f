#pragma once

#include <vector>

namespace guardsim {

/// Stationary solution of a single-cell loss system.
struct OracleResult {
    std::vector<double> state_probs;  ///< occupancy 0..C
    double Pb = 0.0;                  ///< new-call blocking probability
    double Ph = 0.0;                  ///< handoff blocking probability
};

/// Erlang-B blocking B(C, a) via B(0) = 1, B(k) = a B(k-1) / (k + a B(k-1)).
/// Throws ValidationError for negative inputs.
double erlang_b(int channels, double offered_load);

/// Birth-death chain of a cell with `guard` channels reserved for handoffs.
/// Below C - guard both streams are admitted, above it only handoffs.
OracleResult guard_channel_stationary(int channels, int guard, double lambda_new,
                                      double lambda_handoff, double mu);

}  // namespace guardsim
