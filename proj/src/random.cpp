#include "qep/random.hpp"

namespace qep {

Matrix random_ginibre(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) g(i, j) = Cplx(gauss(rng), gauss(rng));
    return g;
}

Matrix random_unitary(Index d, Rng& rng) {
    const Matrix g = random_ginibre(d, d, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < d; ++i) {
        const Cplx diag = r(i, i);
        if (std::abs(diag) > 0.0) q.col(i) *= diag / std::abs(diag);
    }
    return q;
}

DensityMatrix random_density_matrix(Index d, Rng& rng, double mix) {
    const Matrix g = random_ginibre(d, d, rng);
    Matrix w = g * g.adjoint();
    w /= w.trace().real();
    const Matrix m = (1.0 - mix) * w +
                     mix * Matrix::Identity(d, d) / static_cast<double>(d);
    return DensityMatrix(m);
}

DensityMatrix random_diagonal_state(Index d, Rng& rng, double floor) {
    std::uniform_real_distribution<double> uniform(floor, 1.0);
    RealVector p(d);
    for (Index i = 0; i < d; ++i) p(i) = uniform(rng);
    p /= p.sum();
    return DensityMatrix::diagonal(p);
}

QuantumChannel random_channel(Index dim_in, Index dim_out, Rng& rng, double mix) {
    const Index d = dim_in * dim_out;
    const Matrix g = random_ginibre(d, d, rng);
    Matrix w = g * g.adjoint();
    w *= static_cast<double>(dim_in) / w.trace().real();
    w = (1.0 - mix) * w + mix * Matrix::Identity(d, d) / static_cast<double>(dim_out);
    const Matrix marginal = partial_trace(w, dim_out, dim_in, Subsystem::Second);
    const Matrix fix = tensor_product(Matrix::Identity(dim_out, dim_out),
                                      mat_inv_sqrt(marginal));
    return QuantumChannel(fix * w * fix, dim_in, dim_out);
}

Povm random_povm(Index d, Index outcomes, Rng& rng) {
    std::vector<Matrix> effects;
    Matrix sum = Matrix::Zero(d, d);
    for (Index i = 0; i < outcomes; ++i) {
        const Matrix g = random_ginibre(d, d, rng);
        effects.push_back(g * g.adjoint() +
                          0.05 * Matrix::Identity(d, d));
        sum += effects.back();
    }
    const Matrix fix = mat_inv_sqrt(sum);
    for (auto& e : effects) e = hermitize(fix * e * fix, 1e-8);
    return Povm(std::move(effects));
}

QuantumChannel random_unital_channel(Index d, Index terms, Rng& rng) {
    std::vector<Matrix> unitaries;
    for (Index k = 0; k < terms; ++k) unitaries.push_back(random_unitary(d, rng));
    std::uniform_real_distribution<double> uniform(0.2, 1.0);
    RealVector w(terms);
    for (Index k = 0; k < terms; ++k) w(k) = uniform(rng);
    w /= w.sum();
    return QuantumChannel::from_action(d, d, [&](const Matrix& x) {
        Matrix out = Matrix::Zero(d, d);
        for (Index k = 0; k < terms; ++k) {
            out += w(k) * unitaries[static_cast<size_t>(k)] * x *
                   unitaries[static_cast<size_t>(k)].adjoint();
        }
        return out;
    });
}

DensityMatrix random_commuting_state(const Matrix& ref, Rng& rng, double floor) {
    const EigenDecomposition dec = eig_hermitian(ref);
    std::uniform_real_distribution<double> uniform(floor, 1.0);
    RealVector p(dec.eigenvalues.size());
    for (Index i = 0; i < p.size(); ++i) p(i) = uniform(rng);
    p /= p.sum();
    const Matrix m = dec.eigenvectors *
                     p.asDiagonal().toDenseMatrix().cast<Cplx>() *
                     dec.eigenvectors.adjoint();
    return DensityMatrix(m);
}

QuantumChannel random_cq_channel(Index d, Rng& rng) {
    std::vector<Matrix> outputs;
    for (Index i = 0; i < d; ++i) {
        outputs.push_back(random_density_matrix(d, rng, 0.3).matrix());
    }
    return QuantumChannel::from_action(d, d, [outputs, d](const Matrix& x) {
        Matrix out = Matrix::Zero(d, d);
        for (Index i = 0; i < d; ++i) out += x(i, i) * outputs[static_cast<size_t>(i)];
        return out;
    });
}

ClassicalProcess random_classical_process(Index inputs, Index outputs, Rng& rng,
                                          double floor) {
    std::uniform_real_distribution<double> uniform(floor, 1.0);
    auto draw_distribution = [&](Index n) {
        RealVector v(n);
        for (Index i = 0; i < n; ++i) v(i) = uniform(rng);
        return RealVector(v / v.sum());
    };
    ClassicalProcess proc;
    proc.p = draw_distribution(inputs);
    proc.pi = draw_distribution(inputs);
    proc.phi.resize(outputs, inputs);
    for (Index i = 0; i < inputs; ++i) proc.phi.col(i) = draw_distribution(outputs);
    proc.q = draw_distribution(outputs);
    proc.validate();
    return proc;
}

}  // namespace qep
