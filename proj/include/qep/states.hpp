#pragma once

#include "qep/linalg.hpp"

namespace qep {

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityMatrix {
  public:
    /// Validates Hermiticity (re-Hermitizing small defects), positivity
    /// within the support cutoff and unit trace within 1e-10.
    explicit DensityMatrix(Matrix m);

    static DensityMatrix maximally_mixed(Index d);
    static DensityMatrix diagonal(const RealVector& probs);
    static DensityMatrix pure(const Vector& ket);

    /// Qubit state (1 + x X + y Y + z Z)/2; requires x^2+y^2+z^2 <= 1.
    static DensityMatrix from_bloch(double x, double y, double z);

    /// Gibbs state e^{-beta H}/Z for Hermitian H.
    static DensityMatrix thermal(const Matrix& hamiltonian, double beta);

    Index dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }

  private:
    Matrix m_;
};

/// Positive-operator-valued measure: PSD effects summing to identity.
struct Povm {
    std::vector<Matrix> effects;

    explicit Povm(std::vector<Matrix> effects_in);

    Index dim() const { return effects.front().rows(); }
    Index outcomes() const { return static_cast<Index>(effects.size()); }
};

}  // namespace qep
