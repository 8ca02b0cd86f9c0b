#include "qep/classical.hpp"

#include <cmath>
#include <limits>

namespace qep {

namespace {

void check_distribution(const RealVector& v, const char* name) {
    if (v.minCoeff() < -1e-12) {
        throw InvalidParameter(std::string(name) + " has a negative entry");
    }
    if (std::abs(v.sum() - 1.0) > 1e-9) {
        throw InvalidParameter(std::string(name) + " does not sum to 1");
    }
}

double kl_divergence(const RealVector& a, const RealVector& b) {
    double d = 0.0;
    for (Index i = 0; i < a.size(); ++i) {
        if (a(i) <= 0.0) continue;
        if (b(i) <= 0.0) throw SupportMismatch("KL divergence: support mismatch");
        d += a(i) * std::log(a(i) / b(i));
    }
    return d;
}

}  // namespace

void ClassicalProcess::validate() const {
    if (p.size() != phi.cols() || pi.size() != phi.cols() ||
        q.size() != phi.rows()) {
        throw DimensionMismatch("classical process: inconsistent sizes");
    }
    check_distribution(p, "p");
    check_distribution(pi, "pi");
    check_distribution(q, "q");
    for (Index i = 0; i < phi.cols(); ++i) {
        if (phi.col(i).minCoeff() < -1e-12 ||
            std::abs(phi.col(i).sum() - 1.0) > 1e-12) {
            throw InvalidParameter("phi is not column stochastic");
        }
    }
}

RealMatrix classical_reverse(const ClassicalProcess& proc) {
    proc.validate();
    const RealVector posterior = proc.phi * proc.pi;
    RealMatrix reverse(proc.inputs(), proc.outputs());
    for (Index o = 0; o < proc.outputs(); ++o) {
        if (posterior(o) <= 0.0) {
            if (proc.q(o) > 0.0) {
                throw SingularPrior("(phi pi) vanishes inside supp(q)");
            }
            reverse.col(o).setConstant(1.0 / static_cast<double>(proc.inputs()));
            continue;
        }
        for (Index i = 0; i < proc.inputs(); ++i) {
            reverse(i, o) = proc.phi(o, i) * proc.pi(i) / posterior(o);
        }
    }
    return reverse;
}

RealMatrix classical_sigma(const ClassicalProcess& proc) {
    proc.validate();
    const RealVector posterior = proc.phi * proc.pi;
    RealMatrix sigma(proc.inputs(), proc.outputs());
    for (Index i = 0; i < proc.inputs(); ++i) {
        for (Index o = 0; o < proc.outputs(); ++o) {
            const double pf = proc.p(i) * proc.phi(o, i);
            if (pf <= 0.0) {
                sigma(i, o) = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            if (proc.pi(i) <= 0.0 || proc.q(o) <= 0.0 || posterior(o) <= 0.0) {
                throw SupportMismatch("sigma undefined: P_R vanishes on a "
                                      "forward-reachable cell");
            }
            sigma(i, o) = std::log(proc.p(i) / proc.pi(i)) +
                          std::log(posterior(o) / proc.q(o));
        }
    }
    return sigma;
}

ClassicalAverage classical_average(const ClassicalProcess& proc) {
    proc.validate();
    ClassicalAverage result;
    result.d_in = kl_divergence(proc.p, proc.pi);
    result.d_out1 = kl_divergence(proc.phi * proc.p, proc.phi * proc.pi);
    result.d_out2 = kl_divergence(proc.phi * proc.p, proc.q);
    result.avg = result.d_in - result.d_out1 + result.d_out2;
    return result;
}

ClassicalProcess tpm_process(const RealVector& label_dist,
                             const std::vector<DensityMatrix>& states,
                             const Povm& povm) {
    if (static_cast<Index>(states.size()) != label_dist.size()) {
        throw DimensionMismatch("one state per classical label is required");
    }
    check_distribution(label_dist, "label distribution");
    const Index ni = label_dist.size();
    const Index no = povm.outcomes();
    RealMatrix phi(no, ni);
    for (Index i = 0; i < ni; ++i) {
        if (states[static_cast<size_t>(i)].dim() != povm.dim()) {
            throw DimensionMismatch("state does not match the POVM dimension");
        }
        for (Index j = 0; j < no; ++j) {
            phi(j, i) = (states[static_cast<size_t>(i)].matrix() *
                         povm.effects[static_cast<size_t>(j)])
                            .trace()
                            .real();
        }
        phi.col(i) /= phi.col(i).sum();  // remove Born-rule rounding residue
    }
    ClassicalProcess proc;
    proc.p = label_dist;
    proc.phi = phi;
    proc.pi = RealVector::Constant(ni, 1.0 / static_cast<double>(ni));
    proc.q = phi * label_dist;
    proc.validate();
    return proc;
}

ClassicalEmbedding embed_as_quantum(const ClassicalProcess& proc) {
    proc.validate();
    const Index ni = proc.inputs();
    const Index no = proc.outputs();
    const RealMatrix phi = proc.phi;
    QuantumChannel channel =
        QuantumChannel::from_action(ni, no, [&phi, ni, no](const Matrix& x) {
            Matrix out = Matrix::Zero(no, no);
            for (Index j = 0; j < no; ++j) {
                for (Index i = 0; i < ni; ++i) out(j, j) += phi(j, i) * x(i, i);
            }
            return out;
        });
    return ClassicalEmbedding{std::move(channel),
                              DensityMatrix::diagonal(proc.p),
                              DensityMatrix::diagonal(proc.pi),
                              DensityMatrix::diagonal(proc.q)};
}

}  // namespace qep
