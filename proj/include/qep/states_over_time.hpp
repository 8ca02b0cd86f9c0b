#pragma once

#include <string>

#include "qep/channel.hpp"

namespace qep {

enum class Direction { Forward, Reverse, ReverseVariant };

/// Bipartite two-time operator on H_out (x) H_in describing a process and
/// its input state in a single density operator. `tilde` marks the
/// sandwiched (non-pseudotransposed) form. `label` records provenance for
/// error messages; no identity checks are run at construction (the test
/// suites do that).
struct StateOverTime {
    Matrix matrix;
    Index dim_out = 0;
    Index dim_in = 0;
    Direction direction = Direction::Forward;
    bool tilde = false;
    std::string label;
};

/// Qtilde_F = (1 (x) sqrt(rho^T)) C_E (1 (x) sqrt(rho^T)).
/// Marginals: tracing out the output factor leaves rho^T, tracing out the
/// input factor leaves E(rho).
StateOverTime q_forward_tilde(const QuantumChannel& channel,
                              const DensityMatrix& rho);

/// Q_F = sqrt(C_E) (1 (x) rho^T) sqrt(C_E); linear in rho.
StateOverTime q_forward(const QuantumChannel& channel, const DensityMatrix& rho);

/// Q_R = sqrt(C_E) (E(gamma)^{-1/2} tau E(gamma)^{-1/2} (x) gamma^T) sqrt(C_E);
/// linear in tau.
StateOverTime q_reverse(const QuantumChannel& channel, const DensityMatrix& gamma,
                        const DensityMatrix& tau);

/// Variant reverse built from the minimum-change update instead of the
/// Petz map:
/// Q_R = sqrt(C_E) ([sqrt(tau)(sqrt(tau) E(gamma) sqrt(tau))^{-1/2} sqrt(tau)]^2
///                  (x) gamma^T) sqrt(C_E).
/// Coincides with q_reverse whenever [tau, E(gamma)] = 0.
StateOverTime q_reverse_variant(const QuantumChannel& channel,
                                const DensityMatrix& gamma,
                                const DensityMatrix& tau);

/// Qtilde_R = (sqrt(tau) E(gamma)^{-1/2} (x) sqrt(gamma^T)) C_E
///            (E(gamma)^{-1/2} sqrt(tau) (x) sqrt(gamma^T)).
/// Same spectrum as q_reverse.
StateOverTime q_reverse_tilde(const QuantumChannel& channel,
                              const DensityMatrix& gamma,
                              const DensityMatrix& tau);

}  // namespace qep
