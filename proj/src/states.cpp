#include "qep/states.hpp"

#include <cmath>

namespace qep {

DensityMatrix::DensityMatrix(Matrix m) : m_(hermitize(std::move(m))) {
    const EigenDecomposition dec = eig_hermitian(m_);
    const double lmax = std::max(dec.eigenvalues.maxCoeff(), 0.0);
    if (dec.eigenvalues.minCoeff() < -kSupportCutoff * lmax) {
        throw InvalidParameter("density matrix has negative eigenvalue " +
                               std::to_string(dec.eigenvalues.minCoeff()));
    }
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > 1e-10) {
        throw InvalidParameter("density matrix trace " + std::to_string(tr) +
                               " differs from 1");
    }
}

DensityMatrix DensityMatrix::maximally_mixed(Index d) {
    return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::diagonal(const RealVector& probs) {
    Matrix m = Matrix::Zero(probs.size(), probs.size());
    for (Index i = 0; i < probs.size(); ++i) m(i, i) = probs(i);
    return DensityMatrix(m);
}

DensityMatrix DensityMatrix::pure(const Vector& ket) {
    const Vector normalized = ket / ket.norm();
    return DensityMatrix(normalized * normalized.adjoint());
}

DensityMatrix DensityMatrix::from_bloch(double x, double y, double z) {
    const double norm2 = x * x + y * y + z * z;
    if (norm2 > 1.0 + 1e-12) {
        throw InvalidParameter("Bloch vector norm exceeds 1");
    }
    Matrix m(2, 2);
    m << Cplx(1.0 + z, 0.0), Cplx(x, -y),
         Cplx(x, y), Cplx(1.0 - z, 0.0);
    return DensityMatrix(0.5 * m);
}

DensityMatrix DensityMatrix::thermal(const Matrix& hamiltonian, double beta) {
    const EigenDecomposition dec = eig_hermitian(hamiltonian);
    RealVector w(dec.eigenvalues.size());
    for (Index i = 0; i < w.size(); ++i) w(i) = std::exp(-beta * dec.eigenvalues(i));
    const double z = w.sum();
    const Matrix m = dec.eigenvectors * (w / z).asDiagonal().toDenseMatrix().cast<Cplx>() *
                     dec.eigenvectors.adjoint();
    return DensityMatrix(m);
}

Povm::Povm(std::vector<Matrix> effects_in) : effects(std::move(effects_in)) {
    if (effects.empty()) throw InvalidParameter("POVM needs at least one effect");
    const Index d = effects.front().rows();
    Matrix sum = Matrix::Zero(d, d);
    for (auto& e : effects) {
        if (e.rows() != d || e.cols() != d) {
            throw DimensionMismatch("POVM effects have mixed dimensions");
        }
        e = hermitize(e);
        const EigenDecomposition dec = eig_hermitian(e);
        const double lmax = std::max(dec.eigenvalues.maxCoeff(), 0.0);
        if (dec.eigenvalues.minCoeff() < -kSupportCutoff * std::max(lmax, 1.0)) {
            throw InvalidParameter("POVM effect is not PSD");
        }
        sum += e;
    }
    if (max_abs(sum - Matrix::Identity(d, d)) > 1e-9) {
        throw InvalidParameter("POVM effects do not sum to identity");
    }
}

}  // namespace qep
