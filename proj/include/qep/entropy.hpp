#pragma once

#include <optional>
#include <vector>

#include "qep/states_over_time.hpp"

namespace qep {

/// S(rho) = -Tr[rho log rho] in nats. All entropies in this library use
/// the natural logarithm, since the fluctuation identities presume it.
double von_neumann_entropy(const DensityMatrix& rho);

/// Umegaki relative entropy Tr[rho (log rho - log sigma)] in nats.
/// Throws SupportMismatch when supp(rho) is not contained in supp(sigma);
/// never returns +inf.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Belavkin-Staszewski relative entropy
/// Tr[rho log(sqrt(rho) sigma^{-1} sqrt(rho))] in nats. Upper-bounds the
/// Umegaki one, coincides with it for commuting arguments.
double bs_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Hermitian entropy-production operator
///   Sigma = log{ sqrt(Q_F) Q_R^{-1} sqrt(Q_F) }
/// restricted to the support, with its spectral data obtained from the
/// singular value decomposition sqrt(Q_F) Q_R^{-1/2} = U S V^dag:
/// eigenvalues Sigma_k = 2 log s_k, forward eigenvectors |f_k> = U|k>,
/// and reverse eigenvectors |r_k> = V|k> which diagonalize the
/// role-swapped operator with eigenvalues -Sigma_k.
struct EntropyOperator {
    Matrix matrix;
    RealVector eigenvalues;     // Sigma_k, nats, one per kept mode
    Matrix forward_eigvecs;     // columns |f_k>
    Matrix reverse_eigvecs;     // columns |r_k>
    RealVector singular_values; // s_k > 0, Sigma_k = 2 log s_k
    bool full_rank = false;
    bool has_reverse_data = false;
};

/// Throws SupportMismatch unless supp(Q_F) is contained in supp(Q_R).
/// Rank-deficient situations with nested supports (notably unitary
/// channels, where Q_F = Q_R is a pure state) are handled on the common
/// support.
EntropyOperator entropy_production_operator(const StateOverTime& qf,
                                            const StateOverTime& qr);

/// Relative-entropy form of the average:
///   D(rho||gamma) - D(E(rho)||E(gamma)) + D(E(rho)||tau).
double entropy_production_umegaki(const QuantumChannel& channel,
                                  const DensityMatrix& rho,
                                  const DensityMatrix& gamma,
                                  const DensityMatrix& tau);

/// Operator average <Sigma>_F = Tr[Q_F Sigma] = D_BS(Q_F || Q_R),
/// computed through the SVD route (sum of 2 log s_k weighted by
/// <f_k|Q_F|f_k>), which stays stable near rank deficiency.
double entropy_production_average(const StateOverTime& qf,
                                  const StateOverTime& qr);

/// Closed form of the operator average for full-rank channels:
///   D_BS(rho||gamma) - Tr[E(rho) log(E(gamma)^{-1/2} tau E(gamma)^{-1/2})].
/// Throws NotFullRank for rank-deficient Choi operators and SingularPrior
/// for rank-deficient gamma or E(gamma).
double entropy_production_closed_form(const QuantumChannel& channel,
                                      const DensityMatrix& rho,
                                      const DensityMatrix& gamma,
                                      const DensityMatrix& tau);

/// Tr[Q_F e^{-Sigma}]; equals Tr[Q_R] = 1 whenever Q_F and Q_R share the
/// same support.
double jarzynski_average(const StateOverTime& qf, const EntropyOperator& op);

struct CrooksRow {
    double sigma = 0.0;        // nats
    double p_forward = 0.0;    // P_F(Sigma_k)
    double p_reverse = 0.0;    // P_R(-Sigma_k)
    double ratio_error = 0.0;  // |P_R(-Sigma_k) - e^{-Sigma_k} P_F(Sigma_k)|
};

struct FluctuationReport {
    double jarzynski_value = 0.0;
    std::vector<CrooksRow> crooks_rows;
    bool support_ok = false;
    bool degenerate_binned = false;  // eigenvalues within 1e-9 were merged
};

/// Forward/reverse entropy statistics with P_F(Sigma_k) = <f_k|Q_F|f_k>
/// and P_R(-Sigma_k) = <r_k|Q_R|r_k>. Requires full-rank Q_F and Q_R
/// (throws NotFullRank). Eigenvalues within a 1e-9 bin are aggregated into
/// one row by summing probabilities.
FluctuationReport crooks_report(const StateOverTime& qf, const StateOverTime& qr);

/// Rotation U and the two local terms with
///   U Sigma U^dag = 1 (x) log sqrt(rho^T) (gamma^T)^{-1} sqrt(rho^T)
///                   - log E(gamma)^{-1/2} tau E(gamma)^{-1/2} (x) 1 ,
/// U = (1 (x) rho^T)^{-1/2} C_E^{-1/2} sqrt(Q_F). For rank-deficient rho,
/// U comes from the polar decomposition of (1 (x) sqrt(rho^T)) sqrt(C_E).
struct LocalityDecomposition {
    Matrix rotation;     // unitary U
    Matrix input_term;   // on H_in
    Matrix output_term;  // on H_out
};

LocalityDecomposition locality_decomposition(const QuantumChannel& channel,
                                             const DensityMatrix& rho,
                                             const DensityMatrix& gamma,
                                             const DensityMatrix& tau);

/// Thermal endpoint data: gibbs inputs/outputs at inverse temperature beta
/// and the free-energy difference derived from the partition functions.
struct ThermalSpec {
    double beta = 0.0;
    Matrix hamiltonian_in;
    Matrix hamiltonian_out;
    double delta_f = 0.0;
};

ThermalSpec make_thermal_spec(double beta, const Matrix& hamiltonian_in,
                              const Matrix& hamiltonian_out);

struct WorkOperatorCheck {
    bool matched = false;
    double max_dev = 0.0;
};

/// For a unital channel with gamma = 1/d, rho thermal under H and tau
/// thermal under H', checks that the Sigma spectrum equals
/// {beta (E'_j - E_i - delta_f)}. Throws PreconditionViolation if the
/// channel is not unital.
WorkOperatorCheck work_operator_check(const QuantumChannel& channel,
                                      const ThermalSpec& spec);

struct SuperadditivityReport {
    double avg_step1 = 0.0;
    double avg_step2 = 0.0;
    double avg_total = 0.0;
    double gap = 0.0;  // avg_step1 + avg_step2 - avg_total >= 0
};

/// Entropy production of e2 . e1 versus the two steps separately. The
/// step-2 reverse uses the propagated prior E1(gamma); the total-process
/// reverse uses gamma and tau2.
SuperadditivityReport superadditivity_report(const QuantumChannel& e1,
                                             const QuantumChannel& e2,
                                             const DensityMatrix& rho,
                                             const DensityMatrix& gamma,
                                             const DensityMatrix& tau1,
                                             const DensityMatrix& tau2);

struct MeasurementEntropy {
    EntropyOperator op;  // block-diagonal construction; no reverse data
    double average = 0.0;
};

/// Entropy production of the measurement channel of `povm`, built from the
/// block-diagonal form
///   Sigma = sum_i |i><i| (x) Sigma[sqrt(Pi_i) rho sqrt(Pi_i),
///                               sqrt(Pi_i) gamma sqrt(Pi_i)]^T
///           - (log tau - log M(gamma)) (x) 1,
/// with average D_BS(rho||gamma) - D(M(rho)||M(gamma)) + D(M(rho)||tau).
/// tau must be diagonal in the measurement basis.
MeasurementEntropy measurement_entropy_production(const Povm& povm,
                                                  const DensityMatrix& rho,
                                                  const DensityMatrix& gamma,
                                                  const DensityMatrix& tau);

/// Observational entropy with a quantum prior:
///   S(rho) + D_BS(rho||gamma) - D(M(rho)||M(gamma)).
/// Its excess over S(rho) equals the entropy production of the measurement
/// process with tau = M(rho).
double observational_entropy(const Povm& povm, const DensityMatrix& rho,
                             const DensityMatrix& gamma);

}  // namespace qep
