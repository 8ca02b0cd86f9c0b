#include "qep/retrodiction.hpp"

namespace qep {

namespace {

Matrix petz_apply_matrix(const QuantumChannel& channel, const Matrix& gamma,
                         const Matrix& inv_sqrt_egamma, const Matrix& x) {
    const Matrix sqrt_gamma = mat_sqrt(gamma);
    return sqrt_gamma *
           channel.adjoint_apply(inv_sqrt_egamma * x * inv_sqrt_egamma) *
           sqrt_gamma;
}

}  // namespace

DensityMatrix petz_apply(const QuantumChannel& channel,
                         const DensityMatrix& gamma, const DensityMatrix& tau) {
    if (gamma.dim() != channel.dim_in() || tau.dim() != channel.dim_out()) {
        throw DimensionMismatch("petz_apply: state dimensions do not match");
    }
    const Matrix egamma = channel.apply_matrix(gamma.matrix());
    if (weight_outside_support(tau.matrix(), egamma) > 1e-9) {
        throw SingularPrior("supp(tau) is not contained in supp(E(gamma))");
    }
    return DensityMatrix(petz_apply_matrix(channel, gamma.matrix(),
                                           mat_inv_sqrt(egamma), tau.matrix()));
}

ReverseChannel petz_reverse_channel(const QuantumChannel& channel,
                                    const DensityMatrix& gamma) {
    if (gamma.dim() != channel.dim_in()) {
        throw DimensionMismatch("prior does not match dim_in");
    }
    if (psd_rank(gamma.matrix()) != gamma.dim()) {
        throw SingularPrior("prior gamma is rank deficient");
    }
    const Matrix egamma = channel.apply_matrix(gamma.matrix());
    if (psd_rank(egamma) != channel.dim_out()) {
        throw SingularPrior("E(gamma) is rank deficient");
    }
    const Matrix inv_sqrt_egamma = mat_inv_sqrt(egamma);
    const Matrix gamma_m = gamma.matrix();
    QuantumChannel reverse = QuantumChannel::from_action(
        channel.dim_out(), channel.dim_in(), [&](const Matrix& x) {
            return petz_apply_matrix(channel, gamma_m, inv_sqrt_egamma, x);
        });
    return ReverseChannel{channel, gamma, std::move(reverse)};
}

Matrix petz_reverse_isometry(const QuantumChannel& channel,
                             const DensityMatrix& gamma) {
    const Index din = channel.dim_in();
    const Index dout = channel.dim_out();
    const Matrix egamma = channel.apply_matrix(gamma.matrix());
    if (psd_rank(egamma) != dout) {
        throw SingularPrior("E(gamma) is rank deficient");
    }
    const Matrix w = mat_inv_sqrt(egamma);
    const Matrix sqrt_gamma = mat_sqrt(gamma.matrix());
    const Matrix& sqrt_choi = channel.sqrt_choi();
    // V[(b', a', a), b] = sum_{b'', a''}
    //   sqrt(C)[(b',a'),(b'',a'')] w(b'', b) sqrt(gamma)(a, a'')
    Matrix v = Matrix::Zero(dout * din * din, dout);
    for (Index bp = 0; bp < dout; ++bp)
        for (Index ap = 0; ap < din; ++ap)
            for (Index a = 0; a < din; ++a)
                for (Index b = 0; b < dout; ++b) {
                    Cplx sum = 0.0;
                    for (Index bpp = 0; bpp < dout; ++bpp)
                        for (Index app = 0; app < din; ++app)
                            sum += sqrt_choi(bp * din + ap, bpp * din + app) *
                                   w(bpp, b) * sqrt_gamma(a, app);
                    v((bp * din + ap) * din + a, b) = sum;
                }
    return v;
}

}  // namespace qep
