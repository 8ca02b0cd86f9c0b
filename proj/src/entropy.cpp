#include "qep/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qep {

namespace {

constexpr double kSupportTol = 1e-9;

double expectation(const Matrix& m, const Vector& v) {
    return (v.adjoint() * m * v)(0, 0).real();
}

void check_support_nested(const Matrix& inner, const Matrix& outer,
                          const char* what) {
    if (weight_outside_support(inner, outer) > kSupportTol) {
        throw SupportMismatch(what);
    }
}

}  // namespace

double von_neumann_entropy(const DensityMatrix& rho) {
    const double s = -(rho.matrix() * mat_log(rho.matrix())).trace().real();
    return std::max(s, 0.0);
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw DimensionMismatch("relative entropy: dimension mismatch");
    }
    check_support_nested(rho.matrix(), sigma.matrix(),
                         "supp(rho) is not contained in supp(sigma)");
    return (rho.matrix() * (mat_log(rho.matrix()) - mat_log(sigma.matrix())))
        .trace()
        .real();
}

double bs_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw DimensionMismatch("relative entropy: dimension mismatch");
    }
    check_support_nested(rho.matrix(), sigma.matrix(),
                         "supp(rho) is not contained in supp(sigma)");
    const Matrix sqrt_rho = mat_sqrt(rho.matrix());
    const Matrix sandwich =
        hermitize(sqrt_rho * mat_inv(sigma.matrix()) * sqrt_rho, 1e-8);
    return (rho.matrix() * mat_log(sandwich)).trace().real();
}

EntropyOperator entropy_production_operator(const StateOverTime& qf,
                                            const StateOverTime& qr) {
    if (qf.matrix.rows() != qr.matrix.rows()) {
        throw DimensionMismatch("state-over-time pair: dimension mismatch");
    }
    if (weight_outside_support(qf.matrix, qr.matrix) > kSupportTol) {
        throw SupportMismatch("Q_R (" + qr.label +
                              ") is not invertible on the support of " +
                              qf.label);
    }
    const Index dim = qf.matrix.rows();
    const Index rank_f = psd_rank(qf.matrix);
    const Index rank_r = psd_rank(qr.matrix);
    const Matrix a = mat_sqrt(qf.matrix) * mat_inv_sqrt(qr.matrix);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);

    EntropyOperator op;
    op.full_rank = (rank_f == dim && rank_r == dim);
    op.has_reverse_data = true;
    // Singular values come sorted descending; the top rank(Q_F) of them
    // exhaust the support of Q_F, the rest are numerical zeros.
    op.singular_values = svd.singularValues().head(rank_f);
    op.eigenvalues = 2.0 * op.singular_values.array().log();
    op.forward_eigvecs = svd.matrixU().leftCols(rank_f);
    op.reverse_eigvecs = svd.matrixV().leftCols(rank_f);
    op.matrix = op.forward_eigvecs *
                op.eigenvalues.asDiagonal().toDenseMatrix().cast<Cplx>() *
                op.forward_eigvecs.adjoint();
    op.matrix = 0.5 * (op.matrix + op.matrix.adjoint());
    return op;
}

double entropy_production_umegaki(const QuantumChannel& channel,
                                  const DensityMatrix& rho,
                                  const DensityMatrix& gamma,
                                  const DensityMatrix& tau) {
    const DensityMatrix erho = channel.apply(rho);
    const DensityMatrix egamma = channel.apply(gamma);
    return relative_entropy(rho, gamma) - relative_entropy(erho, egamma) +
           relative_entropy(erho, tau);
}

double entropy_production_average(const StateOverTime& qf,
                                  const StateOverTime& qr) {
    const EntropyOperator op = entropy_production_operator(qf, qr);
    double avg = 0.0;
    for (Index k = 0; k < op.eigenvalues.size(); ++k) {
        avg += op.eigenvalues(k) * expectation(qf.matrix, op.forward_eigvecs.col(k));
    }
    return avg;
}

double entropy_production_closed_form(const QuantumChannel& channel,
                                      const DensityMatrix& rho,
                                      const DensityMatrix& gamma,
                                      const DensityMatrix& tau) {
    if (psd_rank(channel.choi()) != channel.dim_in() * channel.dim_out()) {
        throw NotFullRank("closed form requires a full-rank Choi operator");
    }
    if (psd_rank(gamma.matrix()) != gamma.dim()) {
        throw SingularPrior("prior gamma is rank deficient");
    }
    const Matrix egamma = channel.apply_matrix(gamma.matrix());
    if (psd_rank(egamma) != channel.dim_out()) {
        throw SingularPrior("E(gamma) is rank deficient");
    }
    const Matrix w = mat_inv_sqrt(egamma);
    const Matrix x = hermitize(w * tau.matrix() * w, 1e-8);
    const Matrix erho = channel.apply_matrix(rho.matrix());
    check_support_nested(erho, x, "supp(E(rho)) escapes supp of the tau block");
    return bs_relative_entropy(rho, gamma) - (erho * mat_log(x)).trace().real();
}

double jarzynski_average(const StateOverTime& qf, const EntropyOperator& op) {
    double total = 0.0;
    double support_weight = 0.0;
    for (Index k = 0; k < op.eigenvalues.size(); ++k) {
        const double p = expectation(qf.matrix, op.forward_eigvecs.col(k));
        total += std::exp(-op.eigenvalues(k)) * p;
        support_weight += p;
    }
    // e^{-Sigma} acts as the identity outside the support.
    total += qf.matrix.trace().real() - support_weight;
    return total;
}

FluctuationReport crooks_report(const StateOverTime& qf, const StateOverTime& qr) {
    const EntropyOperator op = entropy_production_operator(qf, qr);
    if (!op.full_rank) {
        throw NotFullRank("Crooks statistics require full-rank Q_F and Q_R");
    }
    FluctuationReport report;
    report.support_ok =
        weight_outside_support(qf.matrix, qr.matrix) <= kSupportTol &&
        weight_outside_support(qr.matrix, qf.matrix) <= kSupportTol;
    report.jarzynski_value = jarzynski_average(qf, op);

    const Index n = op.eigenvalues.size();
    std::vector<Index> order(static_cast<size_t>(n));
    for (Index k = 0; k < n; ++k) order[static_cast<size_t>(k)] = k;
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        return op.eigenvalues(a) < op.eigenvalues(b);
    });

    constexpr double kBinWidth = 1e-9;
    size_t i = 0;
    while (i < order.size()) {
        size_t j = i;
        const double start = op.eigenvalues(order[i]);
        double sigma_sum = 0.0, pf = 0.0, pr = 0.0, expected_pr = 0.0;
        while (j < order.size() && op.eigenvalues(order[j]) - start <= kBinWidth) {
            const Index k = order[j];
            const double p_fwd = expectation(qf.matrix, op.forward_eigvecs.col(k));
            sigma_sum += op.eigenvalues(k);
            pf += p_fwd;
            pr += expectation(qr.matrix, op.reverse_eigvecs.col(k));
            expected_pr += std::exp(-op.eigenvalues(k)) * p_fwd;
            ++j;
        }
        CrooksRow row;
        row.sigma = sigma_sum / static_cast<double>(j - i);
        row.p_forward = pf;
        row.p_reverse = pr;
        row.ratio_error = std::abs(pr - expected_pr);
        report.crooks_rows.push_back(row);
        if (j - i > 1) report.degenerate_binned = true;
        i = j;
    }
    return report;
}

LocalityDecomposition locality_decomposition(const QuantumChannel& channel,
                                             const DensityMatrix& rho,
                                             const DensityMatrix& gamma,
                                             const DensityMatrix& tau) {
    if (psd_rank(channel.choi()) != channel.dim_in() * channel.dim_out()) {
        throw NotFullRank("locality decomposition requires a full-rank Choi");
    }
    const Matrix rho_t = rho.matrix().transpose();
    const Matrix gamma_t = gamma.matrix().transpose();
    // Polar factor of (1 (x) sqrt(rho^T)) sqrt(C_E); for full-rank rho this
    // equals (1 (x) rho^T)^{-1/2} C_E^{-1/2} sqrt(Q_F), and it stays unitary
    // when rho is rank deficient.
    const Matrix x = tensor_product(Matrix::Identity(channel.dim_out(),
                                                     channel.dim_out()),
                                    mat_sqrt(rho_t)) *
                     channel.sqrt_choi();
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
    LocalityDecomposition dec;
    dec.rotation = svd.matrixU() * svd.matrixV().adjoint();

    const Matrix sqrt_rho_t = mat_sqrt(rho_t);
    dec.input_term = mat_log(
        hermitize(sqrt_rho_t * mat_inv(gamma_t) * sqrt_rho_t, 1e-8));
    const Matrix egamma = channel.apply_matrix(gamma.matrix());
    const Matrix w = mat_inv_sqrt(egamma);
    dec.output_term = mat_log(hermitize(w * tau.matrix() * w, 1e-8));
    return dec;
}

ThermalSpec make_thermal_spec(double beta, const Matrix& hamiltonian_in,
                              const Matrix& hamiltonian_out) {
    if (beta < 0.0) throw InvalidParameter("beta must be non-negative");
    ThermalSpec spec;
    spec.beta = beta;
    spec.hamiltonian_in = hermitize(hamiltonian_in);
    spec.hamiltonian_out = hermitize(hamiltonian_out);
    if (beta > 0.0) {
        const RealVector e_in = eig_hermitian(spec.hamiltonian_in).eigenvalues;
        const RealVector e_out = eig_hermitian(spec.hamiltonian_out).eigenvalues;
        const double log_z_in =
            std::log((-beta * e_in.array()).exp().sum());
        const double log_z_out =
            std::log((-beta * e_out.array()).exp().sum());
        spec.delta_f = -(log_z_out - log_z_in) / beta;
    }
    return spec;
}

WorkOperatorCheck work_operator_check(const QuantumChannel& channel,
                                      const ThermalSpec& spec) {
    if (!channel_rank_flags(channel).unital) {
        throw PreconditionViolation("work operator check requires a unital channel");
    }
    const Index d = channel.dim_in();
    const DensityMatrix rho = DensityMatrix::thermal(spec.hamiltonian_in, spec.beta);
    const DensityMatrix tau = DensityMatrix::thermal(spec.hamiltonian_out, spec.beta);
    const DensityMatrix gamma = DensityMatrix::maximally_mixed(d);

    const EntropyOperator op = entropy_production_operator(
        q_forward(channel, rho), q_reverse(channel, gamma, tau));

    const RealVector e_in = eig_hermitian(spec.hamiltonian_in).eigenvalues;
    const RealVector e_out = eig_hermitian(spec.hamiltonian_out).eigenvalues;
    std::vector<double> expected;
    for (Index j = 0; j < e_out.size(); ++j)
        for (Index i = 0; i < e_in.size(); ++i)
            expected.push_back(spec.beta * (e_out(j) - e_in(i) - spec.delta_f));
    std::sort(expected.begin(), expected.end());

    WorkOperatorCheck result;
    if (op.eigenvalues.size() != static_cast<Index>(expected.size())) {
        result.max_dev = std::numeric_limits<double>::infinity();
        return result;
    }
    std::vector<double> got(op.eigenvalues.data(),
                            op.eigenvalues.data() + op.eigenvalues.size());
    std::sort(got.begin(), got.end());
    double dev = 0.0;
    for (size_t k = 0; k < expected.size(); ++k) {
        dev = std::max(dev, std::abs(got[k] - expected[k]));
    }
    result.max_dev = dev;
    result.matched = dev < 1e-7;
    return result;
}

SuperadditivityReport superadditivity_report(const QuantumChannel& e1,
                                             const QuantumChannel& e2,
                                             const DensityMatrix& rho,
                                             const DensityMatrix& gamma,
                                             const DensityMatrix& tau1,
                                             const DensityMatrix& tau2) {
    if (e1.dim_out() != e2.dim_in()) {
        throw DimensionMismatch("channels cannot be composed");
    }
    for (const QuantumChannel* ch : {&e1, &e2}) {
        if (psd_rank(ch->choi()) != ch->dim_in() * ch->dim_out()) {
            throw NotFullRank("superadditivity requires full-rank Choi operators");
        }
    }
    if (psd_rank(gamma.matrix()) != gamma.dim() ||
        psd_rank(e1.apply_matrix(gamma.matrix())) != e1.dim_out()) {
        throw SingularPrior("gamma and E1(gamma) must be full rank");
    }
    const DensityMatrix mid_rho = e1.apply(rho);
    const DensityMatrix mid_gamma = e1.apply(gamma);
    const QuantumChannel total = compose(e2, e1);

    SuperadditivityReport report;
    report.avg_step1 = entropy_production_average(q_forward(e1, rho),
                                                  q_reverse(e1, gamma, tau1));
    report.avg_step2 = entropy_production_average(
        q_forward(e2, mid_rho), q_reverse(e2, mid_gamma, tau2));
    report.avg_total = entropy_production_average(
        q_forward(total, rho), q_reverse(total, gamma, tau2));
    report.gap = report.avg_step1 + report.avg_step2 - report.avg_total;
    return report;
}

MeasurementEntropy measurement_entropy_production(const Povm& povm,
                                                  const DensityMatrix& rho,
                                                  const DensityMatrix& gamma,
                                                  const DensityMatrix& tau) {
    const Index d = povm.dim();
    const Index k = povm.outcomes();
    if (rho.dim() != d || gamma.dim() != d) {
        throw DimensionMismatch("states do not match the POVM dimension");
    }
    if (tau.dim() != k) {
        throw DimensionMismatch("tau does not match the number of outcomes");
    }
    Matrix tau_diag = tau.matrix();
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j)
            if (i != j && std::abs(tau_diag(i, j)) > 1e-9) {
                throw PreconditionViolation(
                    "tau must be diagonal in the measurement basis");
            }

    const QuantumChannel m_channel = measurement_channel(povm);
    const DensityMatrix m_rho = m_channel.apply(rho);
    const DensityMatrix m_gamma = m_channel.apply(gamma);

    Matrix blocks = Matrix::Zero(k * d, k * d);
    for (Index i = 0; i < k; ++i) {
        const Matrix sqrt_effect = mat_sqrt(povm.effects[static_cast<size_t>(i)]);
        const Matrix a = hermitize(sqrt_effect * rho.matrix() * sqrt_effect, 1e-9);
        const Matrix b = hermitize(sqrt_effect * gamma.matrix() * sqrt_effect, 1e-9);
        const Matrix sqrt_a = mat_sqrt(a);
        const Matrix block =
            mat_log(hermitize(sqrt_a * mat_inv(b) * sqrt_a, 1e-8));
        blocks.block(i * d, i * d, d, d) = block.transpose();
    }
    const Matrix correction = tensor_product(
        mat_log(tau.matrix()) - mat_log(m_gamma.matrix()),
        Matrix::Identity(d, d));

    MeasurementEntropy result;
    result.op.matrix = hermitize(blocks - correction, 1e-9);
    const EigenDecomposition dec = eig_hermitian(result.op.matrix);
    result.op.eigenvalues = dec.eigenvalues;
    result.op.forward_eigvecs = dec.eigenvectors;
    result.op.singular_values = (dec.eigenvalues.array() / 2.0).exp();
    result.op.has_reverse_data = false;
    result.average = bs_relative_entropy(rho, gamma) -
                     relative_entropy(m_rho, m_gamma) +
                     relative_entropy(m_rho, tau);
    return result;
}

double observational_entropy(const Povm& povm, const DensityMatrix& rho,
                             const DensityMatrix& gamma) {
    const QuantumChannel m_channel = measurement_channel(povm);
    return von_neumann_entropy(rho) + bs_relative_entropy(rho, gamma) -
           relative_entropy(m_channel.apply(rho), m_channel.apply(gamma));
}

}  // namespace qep
