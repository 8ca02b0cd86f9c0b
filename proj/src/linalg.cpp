#include "qep/linalg.hpp"

#include <cmath>

namespace qep {

double hermiticity_defect(const Matrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("matrix is not square");
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Matrix hermitize(const Matrix& m, double tol) {
    const double defect = hermiticity_defect(m);
    if (defect > tol) {
        throw NonHermitianInput("hermiticity defect " + std::to_string(defect) +
                                " exceeds tolerance");
    }
    return 0.5 * (m + m.adjoint());
}

EigenDecomposition eig_hermitian(const Matrix& m) {
    const Matrix h = hermitize(m);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw Error("eigensolver failed to converge");
    }
    EigenDecomposition dec{solver.eigenvalues(), solver.eigenvectors()};
    // Fix each eigenvector's phase: first nonzero component real positive.
    for (Index c = 0; c < dec.eigenvectors.cols(); ++c) {
        for (Index r = 0; r < dec.eigenvectors.rows(); ++r) {
            const Cplx v = dec.eigenvectors(r, c);
            if (std::abs(v) > 1e-12) {
                dec.eigenvectors.col(c) *= std::conj(v) / std::abs(v);
                break;
            }
        }
    }
    return dec;
}

namespace {

bool requires_psd(SpectralFn fn) { return fn != SpectralFn::Exp; }

double apply_scalar(SpectralFn fn, double x, double power) {
    switch (fn) {
        case SpectralFn::Sqrt: return std::sqrt(x);
        case SpectralFn::Log: return std::log(x);
        case SpectralFn::Inv: return 1.0 / x;
        case SpectralFn::InvSqrt: return 1.0 / std::sqrt(x);
        case SpectralFn::Exp: return std::exp(x);
        case SpectralFn::Power: return std::pow(x, power);
    }
    throw InvalidParameter("unknown spectral function tag");
}

}  // namespace

Matrix spectral_fn(const Matrix& m, SpectralFn fn, double power,
                   double support_cutoff) {
    const EigenDecomposition dec = eig_hermitian(m);
    const Index d = dec.eigenvalues.size();
    RealVector mapped(d);
    if (fn == SpectralFn::Exp) {
        for (Index i = 0; i < d; ++i) mapped(i) = std::exp(dec.eigenvalues(i));
    } else {
        const double lmax = std::max(dec.eigenvalues.maxCoeff(), 0.0);
        const double threshold = support_cutoff * lmax;
        if (requires_psd(fn) && dec.eigenvalues.minCoeff() < -threshold) {
            throw NegativeSpectrum("eigenvalue " +
                                   std::to_string(dec.eigenvalues.minCoeff()) +
                                   " below PSD tolerance");
        }
        for (Index i = 0; i < d; ++i) {
            const double x = dec.eigenvalues(i);
            mapped(i) = (x > threshold) ? apply_scalar(fn, x, power) : 0.0;
        }
    }
    const Matrix r = dec.eigenvectors * mapped.asDiagonal() *
                     dec.eigenvectors.adjoint();
    return 0.5 * (r + r.adjoint());
}

Matrix mat_sqrt(const Matrix& m) { return spectral_fn(m, SpectralFn::Sqrt); }
Matrix mat_inv_sqrt(const Matrix& m) { return spectral_fn(m, SpectralFn::InvSqrt); }
Matrix mat_inv(const Matrix& m) { return spectral_fn(m, SpectralFn::Inv); }
Matrix mat_log(const Matrix& m) { return spectral_fn(m, SpectralFn::Log); }
Matrix mat_exp(const Matrix& m) { return spectral_fn(m, SpectralFn::Exp); }
Matrix mat_pow(const Matrix& m, double p) {
    return spectral_fn(m, SpectralFn::Power, p);
}

Matrix support_projector(const Matrix& m, double cutoff) {
    const EigenDecomposition dec = eig_hermitian(m);
    const double threshold = cutoff * std::max(dec.eigenvalues.maxCoeff(), 0.0);
    Matrix p = Matrix::Zero(m.rows(), m.cols());
    for (Index i = 0; i < dec.eigenvalues.size(); ++i) {
        if (dec.eigenvalues(i) > threshold) {
            p += dec.eigenvectors.col(i) * dec.eigenvectors.col(i).adjoint();
        }
    }
    return p;
}

Index psd_rank(const Matrix& m, double cutoff) {
    const EigenDecomposition dec = eig_hermitian(m);
    const double threshold = cutoff * std::max(dec.eigenvalues.maxCoeff(), 0.0);
    Index rank = 0;
    for (Index i = 0; i < dec.eigenvalues.size(); ++i) {
        if (dec.eigenvalues(i) > threshold) ++rank;
    }
    return rank;
}

double weight_outside_support(const Matrix& state, const Matrix& ref,
                              double cutoff) {
    if (state.rows() != ref.rows()) {
        throw DimensionMismatch("support check: dimension mismatch");
    }
    const Matrix p = support_projector(ref, cutoff);
    const Matrix complement = identity_matrix(ref.rows()) - p;
    return (state * complement).trace().real();
}

Matrix partial_trace(const Matrix& m, Index dim_first, Index dim_second,
                     Subsystem keep) {
    const Index d = dim_first * dim_second;
    if (m.rows() != d || m.cols() != d) {
        throw DimensionMismatch("partial_trace: matrix is " +
                                std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", expected " +
                                std::to_string(d));
    }
    if (keep == Subsystem::First) {
        Matrix r = Matrix::Zero(dim_first, dim_first);
        for (Index a = 0; a < dim_first; ++a)
            for (Index b = 0; b < dim_first; ++b)
                for (Index k = 0; k < dim_second; ++k)
                    r(a, b) += m(a * dim_second + k, b * dim_second + k);
        return r;
    }
    Matrix r = Matrix::Zero(dim_second, dim_second);
    for (Index a = 0; a < dim_second; ++a)
        for (Index b = 0; b < dim_second; ++b)
            for (Index k = 0; k < dim_first; ++k)
                r(a, b) += m(k * dim_second + a, k * dim_second + b);
    return r;
}

Matrix transpose_fixed_basis(const Matrix& m) { return m.transpose(); }

Matrix tensor_product(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
}

Matrix identity_matrix(Index d) { return Matrix::Identity(d, d); }

double trace_real(const Matrix& m) { return m.trace().real(); }

double trace_distance(const Matrix& a, const Matrix& b) {
    const EigenDecomposition dec = eig_hermitian(a - b);
    return 0.5 * dec.eigenvalues.cwiseAbs().sum();
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace qep
