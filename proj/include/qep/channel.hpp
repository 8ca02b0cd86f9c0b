#pragma once

#include <functional>
#include <vector>

#include "qep/states.hpp"

namespace qep {

/// CPTP map in Choi form. The Choi operator lives on H_out (x) H_in
/// (output factor first):
///   C_E = sum_{ij} E(|i><j|) (x) |i><j| .
/// All bipartite operators in this library (Q_F, Q_R, Sigma, ...) follow
/// the same ordering. The square root of the Choi operator is computed
/// once at construction and reused by every state-over-time build.
class QuantumChannel {
  public:
    QuantumChannel(Matrix choi, Index dim_in, Index dim_out);

    /// Builds the Choi operator from Kraus operators (each dim_out x dim_in).
    /// Throws NotCPTP unless sum_k K^dag K = 1 within 1e-9.
    static QuantumChannel from_kraus(const std::vector<Matrix>& kraus);

    /// Assembles the Choi operator of a linear map given by its action on
    /// the basis matrix units |i><j|.
    static QuantumChannel from_action(
        Index dim_in, Index dim_out,
        const std::function<Matrix(const Matrix&)>& action);

    static QuantumChannel identity(Index d);
    static QuantumChannel unitary(const Matrix& u);

    Index dim_in() const { return din_; }
    Index dim_out() const { return dout_; }
    const Matrix& choi() const { return choi_; }
    const Matrix& sqrt_choi() const { return sqrt_choi_; }

    /// E(rho) = Tr_in[C_E (1 (x) rho^T)].
    DensityMatrix apply(const DensityMatrix& rho) const;

    /// Linear extension of the action to arbitrary matrices.
    Matrix apply_matrix(const Matrix& x) const;

    /// Adjoint map E^dag(sigma) = Tr_out[C_E (sigma (x) 1)]^T for sigma on
    /// the output space; E^dag(1) = 1.
    Matrix adjoint_apply(const Matrix& sigma) const;

  private:
    Index din_ = 0;
    Index dout_ = 0;
    Matrix choi_;
    Matrix sqrt_choi_;
};

/// Choi operator of second . first.
QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first);

/// Stinespring isometry V : H_in -> H_out (x) H_env with
/// H_env = H_out' (x) H_in', built as
///   V = (1_B (x) sqrt(C_E^T)) (|Phi+>_{BB'} (x) 1_{A'<-A}).
/// Satisfies V^dag V = 1 and Tr_env[V rho V^dag] = E(rho).
Matrix stinespring(const QuantumChannel& channel);

/// Environment marginal of the dilation: Tr_out[V rho V^dag] on
/// H_out' (x) H_in'. Equals the transpose of the forward state-over-time.
DensityMatrix complementary_apply(const QuantumChannel& channel,
                                  const DensityMatrix& rho);

/// M(rho) = sum_i Tr[Pi_i rho] |i><i|.
QuantumChannel measurement_channel(const Povm& povm);

/// Repeated partial-swap interaction with fresh ancilla qubits prepared in
/// xi = diag(xi_population, 1 - xi_population). The unitary per collision is
/// U = cos(phi) 1 + i sin(phi) SWAP. The ancilla state is diagonal in the
/// interaction eigenbasis, so xi_coherence must be zero.
struct CollisionModel {
    double xi_population = 0.5;
    Cplx xi_coherence = 0.0;
    double phi = 0.0;
    int n = 1;
};

/// Channel after n collisions. Uses the closed form
///   <0|N^n(rho)|0> = c^{2n} <0|rho|0> + (1 - c^{2n}) <0|xi|0>,
///   <0|N^n(rho)|1> = k^n <0|rho|1>,
/// with c = cos(phi), k = (1 + cos(2 phi) + i sin(2 phi)(2<0|xi|0> - 1))/2,
/// which is exact for all n and avoids iteration error at large n.
QuantumChannel collision_channel(const CollisionModel& model);

/// Kraus operators of a single collision, from the partial-swap unitary
/// acting on system (x) ancilla. Cross-checks the closed form.
std::vector<Matrix> collision_kraus(const CollisionModel& model);

Cplx collision_coherence_factor(const CollisionModel& model);

struct ChannelRankFlags {
    bool full_rank_choi = false;
    bool unital = false;
    bool unitary = false;
};

ChannelRankFlags channel_rank_flags(const QuantumChannel& channel);

}  // namespace qep
