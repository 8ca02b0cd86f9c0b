#include "qep/states_over_time.hpp"

namespace qep {

namespace {

void check_dims(const QuantumChannel& channel, const DensityMatrix& gamma,
                const DensityMatrix& tau) {
    if (gamma.dim() != channel.dim_in()) {
        throw DimensionMismatch("prior gamma does not match dim_in");
    }
    if (tau.dim() != channel.dim_out()) {
        throw DimensionMismatch("reverse input tau does not match dim_out");
    }
}

Matrix reverse_input_block(const QuantumChannel& channel,
                           const DensityMatrix& gamma, const DensityMatrix& tau) {
    const Matrix egamma = channel.apply_matrix(gamma.matrix());
    if (weight_outside_support(tau.matrix(), egamma) > 1e-9) {
        throw SingularPrior("supp(tau) is not contained in supp(E(gamma))");
    }
    const Matrix w = mat_inv_sqrt(egamma);
    return w * tau.matrix() * w;
}

}  // namespace

StateOverTime q_forward_tilde(const QuantumChannel& channel,
                              const DensityMatrix& rho) {
    if (rho.dim() != channel.dim_in()) {
        throw DimensionMismatch("state does not match dim_in");
    }
    const Matrix side = tensor_product(Matrix::Identity(channel.dim_out(),
                                                        channel.dim_out()),
                                       mat_sqrt(rho.matrix().transpose()));
    Matrix m = side * channel.choi() * side;
    return StateOverTime{0.5 * (m + m.adjoint()), channel.dim_out(),
                         channel.dim_in(), Direction::Forward, true, "Qtilde_F"};
}

StateOverTime q_forward(const QuantumChannel& channel, const DensityMatrix& rho) {
    if (rho.dim() != channel.dim_in()) {
        throw DimensionMismatch("state does not match dim_in");
    }
    const Matrix middle = tensor_product(
        Matrix::Identity(channel.dim_out(), channel.dim_out()),
        rho.matrix().transpose());
    Matrix m = channel.sqrt_choi() * middle * channel.sqrt_choi();
    return StateOverTime{0.5 * (m + m.adjoint()), channel.dim_out(),
                         channel.dim_in(), Direction::Forward, false, "Q_F"};
}

StateOverTime q_reverse(const QuantumChannel& channel, const DensityMatrix& gamma,
                        const DensityMatrix& tau) {
    check_dims(channel, gamma, tau);
    const Matrix middle = tensor_product(reverse_input_block(channel, gamma, tau),
                                         gamma.matrix().transpose());
    Matrix m = channel.sqrt_choi() * middle * channel.sqrt_choi();
    return StateOverTime{0.5 * (m + m.adjoint()), channel.dim_out(),
                         channel.dim_in(), Direction::Reverse, false, "Q_R"};
}

StateOverTime q_reverse_variant(const QuantumChannel& channel,
                                const DensityMatrix& gamma,
                                const DensityMatrix& tau) {
    check_dims(channel, gamma, tau);
    const Matrix egamma = channel.apply_matrix(gamma.matrix());
    const Matrix sqrt_tau = mat_sqrt(tau.matrix());
    const Matrix sandwich = hermitize(sqrt_tau * egamma * sqrt_tau, 1e-9);
    if (psd_rank(sandwich) != psd_rank(tau.matrix())) {
        throw SingularPrior(
            "sqrt(tau) E(gamma) sqrt(tau) is not invertible on supp(tau)");
    }
    const Matrix bracket = sqrt_tau * mat_inv_sqrt(sandwich) * sqrt_tau;
    const Matrix middle = tensor_product(bracket * bracket,
                                         gamma.matrix().transpose());
    Matrix m = channel.sqrt_choi() * middle * channel.sqrt_choi();
    return StateOverTime{0.5 * (m + m.adjoint()), channel.dim_out(),
                         channel.dim_in(), Direction::ReverseVariant, false,
                         "Q_R[variant]"};
}

StateOverTime q_reverse_tilde(const QuantumChannel& channel,
                              const DensityMatrix& gamma,
                              const DensityMatrix& tau) {
    check_dims(channel, gamma, tau);
    const Matrix egamma = channel.apply_matrix(gamma.matrix());
    if (weight_outside_support(tau.matrix(), egamma) > 1e-9) {
        throw SingularPrior("supp(tau) is not contained in supp(E(gamma))");
    }
    const Matrix left = tensor_product(
        mat_sqrt(tau.matrix()) * mat_inv_sqrt(egamma),
        mat_sqrt(gamma.matrix().transpose()));
    Matrix m = left * channel.choi() * left.adjoint();
    return StateOverTime{0.5 * (m + m.adjoint()), channel.dim_out(),
                         channel.dim_in(), Direction::Reverse, true, "Qtilde_R"};
}

}  // namespace qep
