#pragma once

#include <random>

#include "qep/classical.hpp"

namespace qep {

using Rng = std::mt19937_64;

/// Complex Ginibre matrix (i.i.d. standard complex Gaussian entries).
Matrix random_ginibre(Index rows, Index cols, Rng& rng);

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
Matrix random_unitary(Index d, Rng& rng);

/// Full-rank random state: normalized Wishart blended with the maximally
/// mixed state (blend weight `mix`) so eigenvalues stay away from zero.
DensityMatrix random_density_matrix(Index d, Rng& rng, double mix = 0.15);

/// Random state diagonal in the computational basis.
DensityMatrix random_diagonal_state(Index d, Rng& rng, double floor = 0.05);

/// Full-rank random CPTP map: a Wishart-distributed bipartite operator
/// renormalized on the input marginal to be trace preserving.
QuantumChannel random_channel(Index dim_in, Index dim_out, Rng& rng,
                              double mix = 0.2);

/// Random POVM with `outcomes` full-rank effects.
Povm random_povm(Index d, Index outcomes, Rng& rng);

/// Random unital qubit-or-higher channel: convex mixture of `terms`
/// Haar-random unitary conjugations (full-rank Choi for terms >= d^2,
/// generically).
QuantumChannel random_unital_channel(Index d, Index terms, Rng& rng);

/// Random state commuting with `ref`: random probabilities on the
/// eigenprojectors of ref.
DensityMatrix random_commuting_state(const Matrix& ref, Rng& rng,
                                     double floor = 0.05);

/// Classical-quantum channel sum_i sigma_i <i|.|i> with full-rank random
/// sigma_i. Its Choi operator commutes with 1 (x) D for any diagonal D.
QuantumChannel random_cq_channel(Index d, Rng& rng);

/// Random classical process with entries bounded away from zero.
ClassicalProcess random_classical_process(Index inputs, Index outputs, Rng& rng,
                                          double floor = 0.05);

}  // namespace qep
