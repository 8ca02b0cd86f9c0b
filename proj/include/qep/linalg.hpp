#pragma once

#include <complex>

#include <Eigen/Dense>

#include "qep/errors.hpp"

namespace qep {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Relative support cutoff: eigenvalues at or below cutoff * lambda_max are
/// treated as zero (double-precision eigensolver noise floor for dims <= 16).
inline constexpr double kSupportCutoff = 1e-12;

/// Absolute max-entry tolerance on |M - M^dag|. Below it we re-Hermitize,
/// above it the input is rejected.
inline constexpr double kHermiticityTol = 1e-10;

/// Spectral decomposition of a Hermitian matrix, eigenvalues ascending.
struct EigenDecomposition {
    RealVector eigenvalues;
    Matrix eigenvectors;  // orthonormal columns, phase-fixed
};

enum class SpectralFn { Sqrt, Log, Inv, InvSqrt, Exp, Power };

enum class Subsystem { First, Second };

/// Max-abs deviation from self-adjointness.
double hermiticity_defect(const Matrix& m);

/// Returns (M + M^dag)/2. Throws NonHermitianInput if the defect exceeds
/// the tolerance.
Matrix hermitize(const Matrix& m, double tol = kHermiticityTol);

/// Eigendecomposition of a Hermitian matrix. Eigenvalues are sorted
/// ascending; each eigenvector's first nonzero component is made real
/// positive so the output is deterministic.
EigenDecomposition eig_hermitian(const Matrix& m);

/// Applies a scalar function to the spectrum of a Hermitian matrix,
/// restricted to the support. Eigenvalues at or below
/// support_cutoff * lambda_max map to zero for the PSD-only functions
/// (Sqrt, Log, Inv, InvSqrt, Power); Exp acts on the full spectrum.
/// `power` is used by SpectralFn::Power only.
/// Throws NegativeSpectrum if a PSD-only function meets an eigenvalue
/// below -support_cutoff * lambda_max.
Matrix spectral_fn(const Matrix& m, SpectralFn fn, double power = 1.0,
                   double support_cutoff = kSupportCutoff);

Matrix mat_sqrt(const Matrix& m);
Matrix mat_inv_sqrt(const Matrix& m);
Matrix mat_inv(const Matrix& m);
Matrix mat_log(const Matrix& m);
Matrix mat_exp(const Matrix& m);
Matrix mat_pow(const Matrix& m, double p);

/// Projector onto the support (eigenvalues above cutoff * lambda_max).
Matrix support_projector(const Matrix& m, double cutoff = kSupportCutoff);

/// Number of eigenvalues above cutoff * lambda_max.
Index psd_rank(const Matrix& m, double cutoff = kSupportCutoff);

/// Weight of `state` outside the support of `ref`: Tr[state (1 - P_ref)].
double weight_outside_support(const Matrix& state, const Matrix& ref,
                              double cutoff = kSupportCutoff);

/// Partial trace of a matrix on H_first (x) H_second.
Matrix partial_trace(const Matrix& m, Index dim_first, Index dim_second,
                     Subsystem keep);

/// Entrywise transpose in the fixed computational basis, no conjugation.
/// Every transpose in this library is taken in this one basis.
Matrix transpose_fixed_basis(const Matrix& m);

Matrix tensor_product(const Matrix& a, const Matrix& b);

Matrix identity_matrix(Index d);

double trace_real(const Matrix& m);

/// Trace distance (1/2)||a - b||_1 for Hermitian a, b.
double trace_distance(const Matrix& a, const Matrix& b);

double max_abs(const Matrix& m);

}  // namespace qep
