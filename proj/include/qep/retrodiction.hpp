#pragma once

#include "qep/channel.hpp"

namespace qep {

/// Bayesian reverse of a channel with respect to a prior state gamma,
/// via the Petz transpose map
///   R_E^gamma(tau) = sqrt(gamma) E^dag[E(gamma)^{-1/2} tau E(gamma)^{-1/2}] sqrt(gamma).
/// Throws SingularPrior when supp(tau) is not contained in supp(E(gamma)).
DensityMatrix petz_apply(const QuantumChannel& channel,
                         const DensityMatrix& gamma, const DensityMatrix& tau);

struct ReverseChannel {
    QuantumChannel base;     // the forward channel E
    DensityMatrix prior;     // gamma
    QuantumChannel reverse;  // R_E^gamma, with its own Choi operator
};

/// Builds the reverse channel as a CPTP map. Requires gamma and E(gamma)
/// full rank; rank-deficient priors are rejected rather than regularized,
/// since silent regularization would corrupt entropy values.
ReverseChannel petz_reverse_channel(const QuantumChannel& channel,
                                    const DensityMatrix& gamma);

/// Dilation isometry of the reverse process,
///   V = (sqrt(C_E) (x) sqrt(gamma)) (E(gamma)^{-1/2}_{B'<-B} (x) |Phi+>_{A'A}),
/// mapping H_out -> (H_out' (x) H_in') (x) H_in. Its marginals reproduce
/// the Petz map (trace out the environment) and the reverse state-over-time
/// (trace out the final system).
Matrix petz_reverse_isometry(const QuantumChannel& channel,
                             const DensityMatrix& gamma);

}  // namespace qep
