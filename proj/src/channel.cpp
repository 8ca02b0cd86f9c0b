#include "qep/channel.hpp"

#include <cmath>

namespace qep {

QuantumChannel::QuantumChannel(Matrix choi, Index dim_in, Index dim_out)
    : din_(dim_in), dout_(dim_out) {
    if (choi.rows() != dim_in * dim_out || choi.cols() != dim_in * dim_out) {
        throw DimensionMismatch("Choi operator has wrong dimension");
    }
    choi_ = hermitize(std::move(choi));
    const EigenDecomposition dec = eig_hermitian(choi_);
    const double lmax = std::max(dec.eigenvalues.maxCoeff(), 0.0);
    if (dec.eigenvalues.minCoeff() < -1e-9 * std::max(lmax, 1.0)) {
        throw NotCPTP("Choi operator is not PSD");
    }
    const Matrix marginal = partial_trace(choi_, dout_, din_, Subsystem::Second);
    if (max_abs(marginal - Matrix::Identity(din_, din_)) > 1e-9) {
        throw NotCPTP("channel is not trace preserving");
    }
    sqrt_choi_ = mat_sqrt(choi_);
}

QuantumChannel QuantumChannel::from_kraus(const std::vector<Matrix>& kraus) {
    if (kraus.empty()) throw InvalidParameter("empty Kraus list");
    const Index dout = kraus.front().rows();
    const Index din = kraus.front().cols();
    Matrix completeness = Matrix::Zero(din, din);
    Matrix choi = Matrix::Zero(dout * din, dout * din);
    for (const auto& k : kraus) {
        if (k.rows() != dout || k.cols() != din) {
            throw DimensionMismatch("Kraus operators have mixed dimensions");
        }
        completeness += k.adjoint() * k;
        // vec(K)[(a,i)] = K(a,i); C += vec vec^dag
        Vector v(dout * din);
        for (Index a = 0; a < dout; ++a)
            for (Index i = 0; i < din; ++i) v(a * din + i) = k(a, i);
        choi += v * v.adjoint();
    }
    if (max_abs(completeness - Matrix::Identity(din, din)) > 1e-9) {
        throw NotCPTP("Kraus completeness sum differs from identity");
    }
    return QuantumChannel(std::move(choi), din, dout);
}

QuantumChannel QuantumChannel::from_action(
    Index dim_in, Index dim_out,
    const std::function<Matrix(const Matrix&)>& action) {
    Matrix choi = Matrix::Zero(dim_out * dim_in, dim_out * dim_in);
    for (Index i = 0; i < dim_in; ++i) {
        for (Index j = 0; j < dim_in; ++j) {
            Matrix unit = Matrix::Zero(dim_in, dim_in);
            unit(i, j) = 1.0;
            choi += tensor_product(action(unit), unit);
        }
    }
    return QuantumChannel(std::move(choi), dim_in, dim_out);
}

QuantumChannel QuantumChannel::identity(Index d) {
    return from_action(d, d, [](const Matrix& x) { return x; });
}

QuantumChannel QuantumChannel::unitary(const Matrix& u) {
    if (max_abs(u.adjoint() * u - Matrix::Identity(u.cols(), u.cols())) > 1e-9) {
        throw InvalidParameter("matrix is not unitary");
    }
    return from_kraus({u});
}

DensityMatrix QuantumChannel::apply(const DensityMatrix& rho) const {
    if (rho.dim() != din_) throw DimensionMismatch("state does not match dim_in");
    return DensityMatrix(apply_matrix(rho.matrix()));
}

Matrix QuantumChannel::apply_matrix(const Matrix& x) const {
    if (x.rows() != din_ || x.cols() != din_) {
        throw DimensionMismatch("input does not match dim_in");
    }
    const Matrix m =
        choi_ * tensor_product(Matrix::Identity(dout_, dout_), x.transpose());
    return partial_trace(m, dout_, din_, Subsystem::First);
}

Matrix QuantumChannel::adjoint_apply(const Matrix& sigma) const {
    if (sigma.rows() != dout_ || sigma.cols() != dout_) {
        throw DimensionMismatch("input does not match dim_out");
    }
    const Matrix m =
        choi_ * tensor_product(sigma, Matrix::Identity(din_, din_));
    return partial_trace(m, dout_, din_, Subsystem::Second).transpose();
}

QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first) {
    if (first.dim_out() != second.dim_in()) {
        throw DimensionMismatch("compose: inner dimensions do not match");
    }
    return QuantumChannel::from_action(
        first.dim_in(), second.dim_out(), [&](const Matrix& x) {
            return second.apply_matrix(first.apply_matrix(x));
        });
}

Matrix stinespring(const QuantumChannel& channel) {
    const Index din = channel.dim_in();
    const Index dout = channel.dim_out();
    const Matrix sqrt_choi_t = mat_sqrt(channel.choi().transpose());
    // V[(b, b', a'), a] = sqrt(C^T)[(b', a'), (b, a)]
    Matrix v = Matrix::Zero(dout * dout * din, din);
    for (Index b = 0; b < dout; ++b)
        for (Index bp = 0; bp < dout; ++bp)
            for (Index ap = 0; ap < din; ++ap)
                for (Index a = 0; a < din; ++a)
                    v((b * dout + bp) * din + ap, a) =
                        sqrt_choi_t(bp * din + ap, b * din + a);
    return v;
}

DensityMatrix complementary_apply(const QuantumChannel& channel,
                                  const DensityMatrix& rho) {
    if (rho.dim() != channel.dim_in()) {
        throw DimensionMismatch("state does not match dim_in");
    }
    const Matrix v = stinespring(channel);
    const Matrix dilated = v * rho.matrix() * v.adjoint();
    return DensityMatrix(partial_trace(
        dilated, channel.dim_out(), channel.dim_out() * channel.dim_in(),
        Subsystem::Second));
}

QuantumChannel measurement_channel(const Povm& povm) {
    const Index d = povm.dim();
    const Index k = povm.outcomes();
    return QuantumChannel::from_action(d, k, [&](const Matrix& x) {
        Matrix out = Matrix::Zero(k, k);
        for (Index i = 0; i < k; ++i) {
            out(i, i) = (povm.effects[static_cast<size_t>(i)] * x).trace();
        }
        return out;
    });
}

namespace {

void validate_collision_model(const CollisionModel& model) {
    if (!(model.xi_population > 0.0 && model.xi_population < 1.0)) {
        throw InvalidParameter("xi_population must lie in (0,1)");
    }
    if (std::abs(model.xi_coherence) != 0.0) {
        throw InvalidParameter(
            "ancilla state must be diagonal in the interaction basis");
    }
    if (model.n < 1) throw InvalidParameter("collision count must be positive");
}

}  // namespace

Cplx collision_coherence_factor(const CollisionModel& model) {
    return 0.5 * Cplx(1.0 + std::cos(2.0 * model.phi),
                      std::sin(2.0 * model.phi) * (2.0 * model.xi_population - 1.0));
}

QuantumChannel collision_channel(const CollisionModel& model) {
    validate_collision_model(model);
    const double x = model.xi_population;
    const double c = std::cos(model.phi);
    const double c2n = std::pow(c * c, model.n);
    const Cplx kn = std::pow(collision_coherence_factor(model),
                             static_cast<double>(model.n));
    return QuantumChannel::from_action(2, 2, [=](const Matrix& e) {
        const Cplx tr = e(0, 0) + e(1, 1);
        Matrix out = Matrix::Zero(2, 2);
        out(0, 0) = c2n * e(0, 0) + (1.0 - c2n) * x * tr;
        out(1, 1) = tr - out(0, 0);
        out(0, 1) = kn * e(0, 1);
        out(1, 0) = std::conj(kn) * e(1, 0);
        return out;
    });
}

std::vector<Matrix> collision_kraus(const CollisionModel& model) {
    validate_collision_model(model);
    Matrix swap = Matrix::Zero(4, 4);
    swap(0, 0) = swap(3, 3) = 1.0;
    swap(1, 2) = swap(2, 1) = 1.0;
    const Matrix u = std::cos(model.phi) * Matrix::Identity(4, 4) +
                     Cplx(0.0, std::sin(model.phi)) * swap;
    const double lambda[2] = {model.xi_population, 1.0 - model.xi_population};
    std::vector<Matrix> kraus;
    for (Index m = 0; m < 2; ++m) {
        for (Index l = 0; l < 2; ++l) {
            Matrix k(2, 2);
            for (Index s_out = 0; s_out < 2; ++s_out)
                for (Index s_in = 0; s_in < 2; ++s_in)
                    k(s_out, s_in) = u(s_out * 2 + l, s_in * 2 + m);
            kraus.push_back(std::sqrt(lambda[m]) * k);
        }
    }
    return kraus;
}

ChannelRankFlags channel_rank_flags(const QuantumChannel& channel) {
    ChannelRankFlags flags;
    const Index full = channel.dim_in() * channel.dim_out();
    const Index rank = psd_rank(channel.choi());
    flags.full_rank_choi = (rank == full);
    flags.unitary = (rank == 1);
    if (channel.dim_in() == channel.dim_out()) {
        const Index d = channel.dim_in();
        const Matrix mixed = Matrix::Identity(d, d) / static_cast<double>(d);
        flags.unital =
            max_abs(channel.apply_matrix(mixed) - mixed) < 1e-10;
    }
    return flags;
}

}  // namespace qep
