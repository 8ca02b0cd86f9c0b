#pragma once

#include "qep/channel.hpp"

namespace qep {

/// Classical stochastic process: input distribution p, column-stochastic
/// transition matrix phi (column index = input state, so phi(o, i) is the
/// probability of output o given input i), retrodiction prior pi and
/// reverse-process start q.
struct ClassicalProcess {
    RealVector p;
    RealMatrix phi;
    RealVector pi;
    RealVector q;

    void validate() const;
    Index inputs() const { return phi.cols(); }
    Index outputs() const { return phi.rows(); }
};

/// Bayesian reverse transition matrix with entry (i, o) equal to
/// phi_hat(i|o) = phi(o|i) pi(i) / (phi pi)(o). Columns (indexed by o)
/// sum to 1. Throws SingularPrior when (phi pi)(o) = 0 for some o in
/// supp(q); columns outside supp(q) with vanishing (phi pi)(o) are set
/// uniform, since those reverse trajectories carry zero probability.
RealMatrix classical_reverse(const ClassicalProcess& proc);

/// Per-trajectory entropy production sigma(i, o) = log[P_F / P_R]
///   = log[p(i)/pi(i)] + log[(phi pi)(o)/q(o)],
/// returned as an inputs x outputs table. Cells with P_F = 0 are undefined
/// and hold NaN; they are excluded from averages (0 log 0 = 0).
RealMatrix classical_sigma(const ClassicalProcess& proc);

struct ClassicalAverage {
    double avg = 0.0;     // sum_{i,o} P_F sigma = d_in - d_out1 + d_out2
    double d_in = 0.0;    // D(p || pi)
    double d_out1 = 0.0;  // D(phi p || phi pi)
    double d_out2 = 0.0;  // D(phi p || q)
};

ClassicalAverage classical_average(const ClassicalProcess& proc);

/// Two-point-measurement process: prepare rho_i with probability
/// label_dist(i), then measure; phi(j|i) = Tr[rho_i Pi_j]. The prior pi is
/// initialized uniform and the reverse start q to phi p; callers adjust
/// both as needed.
ClassicalProcess tpm_process(const RealVector& label_dist,
                             const std::vector<DensityMatrix>& states,
                             const Povm& povm);

struct ClassicalEmbedding {
    QuantumChannel channel;  // measure-and-prepare on the computational basis
    DensityMatrix rho;       // diag(p)
    DensityMatrix gamma;     // diag(pi)
    DensityMatrix tau;       // diag(q)
};

/// Embeds the process as diagonal states plus the measure-and-prepare
/// channel E(X) = sum_{ij} phi(j|i) <i|X|i> |j><j|. All quantum
/// entropy-production quantities on the embedding match their classical
/// counterparts.
ClassicalEmbedding embed_as_quantum(const ClassicalProcess& proc);

}  // namespace qep
