#include "doctest.h"

#include <cmath>

#include "qep/classical.hpp"
#include "qep/entropy.hpp"
#include "testutil.hpp"

using namespace qep;
using namespace qep::testutil;

TEST_CASE("von Neumann entropy") {
    Rng rng(81);
    Vector ket(2);
    ket << 0.6, Cplx(0.0, 0.8);
    CHECK(von_neumann_entropy(DensityMatrix::pure(ket)) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed(3)) ==
          doctest::Approx(std::log(3.0)));
    const DensityMatrix diag =
        DensityMatrix::diagonal((RealVector(2) << 0.8, 0.2).finished());
    CHECK(von_neumann_entropy(diag) == doctest::Approx(0.5004024235381879));
    const DensityMatrix rho = random_density_matrix(3, rng);
    CHECK(von_neumann_entropy(rho) >= 0.0);
    CHECK(von_neumann_entropy(rho) <= std::log(3.0));
}

TEST_CASE("Umegaki relative entropy") {
    Rng rng(82);
    const DensityMatrix rho = random_density_matrix(2, rng);
    CHECK(relative_entropy(rho, rho) == doctest::Approx(0.0).epsilon(1e-12));

    const DensityMatrix a =
        DensityMatrix::diagonal((RealVector(2) << 0.8, 0.2).finished());
    const DensityMatrix b = DensityMatrix::maximally_mixed(2);
    CHECK(relative_entropy(a, b) == doctest::Approx(0.19274475702175753));

    const DensityMatrix pure =
        DensityMatrix::diagonal((RealVector(2) << 1.0, 0.0).finished());
    CHECK(relative_entropy(pure, b) == doctest::Approx(std::log(2.0)));

    CHECK_THROWS_AS(relative_entropy(b, pure), SupportMismatch);
}

TEST_CASE("Belavkin-Staszewski relative entropy") {
    Rng rng(83);
    const DensityMatrix d1 =
        DensityMatrix::diagonal((RealVector(3) << 0.5, 0.3, 0.2).finished());
    const DensityMatrix d2 =
        DensityMatrix::diagonal((RealVector(3) << 0.2, 0.3, 0.5).finished());
    CHECK(bs_relative_entropy(d1, d2) ==
          doctest::Approx(relative_entropy(d1, d2)).epsilon(1e-12));

    const DensityMatrix rho = random_density_matrix(2, rng);
    CHECK(bs_relative_entropy(rho, rho) == doctest::Approx(0.0).epsilon(1e-10));

    const DensityMatrix bx = DensityMatrix::from_bloch(0.9, 0.0, 0.0);
    const DensityMatrix bz = DensityMatrix::from_bloch(0.0, 0.0, 0.9);
    CHECK(bs_relative_entropy(bx, bz) > relative_entropy(bx, bz) + 1e-3);
}

TEST_CASE("BS dominates Umegaki; channels contract the divergence") {
    Rng rng(84);
    for (int trial = 0; trial < 200; ++trial) {
        const Index d = (trial % 2 == 0) ? 2 : 3;
        const DensityMatrix rho = random_density_matrix(d, rng);
        const DensityMatrix sigma = random_density_matrix(d, rng);
        CHECK(bs_relative_entropy(rho, sigma) >=
              relative_entropy(rho, sigma) - 1e-10);
    }
    for (int trial = 0; trial < 20; ++trial) {
        const QuantumChannel channel = random_channel(2, 2, rng);
        const DensityMatrix rho = random_density_matrix(2, rng);
        const DensityMatrix sigma = random_density_matrix(2, rng);
        CHECK(relative_entropy(channel.apply(rho), channel.apply(sigma)) <=
              relative_entropy(rho, sigma) + 1e-10);
    }
}

TEST_CASE("relative-entropy form of the average") {
    Rng rng(85);
    const QuantumChannel channel = random_channel(2, 2, rng);
    const DensityMatrix gamma = random_density_matrix(2, rng);
    CHECK(entropy_production_umegaki(channel, gamma, gamma,
                                     channel.apply(gamma)) ==
          doctest::Approx(0.0).epsilon(1e-10));

    const DensityMatrix tau = random_density_matrix(2, rng);
    CHECK(entropy_production_umegaki(channel, gamma, gamma, tau) ==
          doctest::Approx(relative_entropy(channel.apply(gamma), tau))
              .epsilon(1e-10));

    const ClassicalProcess proc = random_classical_process(3, 3, rng);
    const ClassicalEmbedding e = embed_as_quantum(proc);
    CHECK(entropy_production_umegaki(e.channel, e.rho, e.gamma, e.tau) ==
          doctest::Approx(classical_average(proc).avg).epsilon(1e-10));
}

TEST_CASE("entropy operator: zero case and the classical diagonal form") {
    Rng rng(86);
    const QuantumChannel channel = random_channel(2, 2, rng);
    const DensityMatrix gamma = random_density_matrix(2, rng);
    const StateOverTime qf = q_forward(channel, gamma);
    const StateOverTime qr = q_reverse(channel, gamma, channel.apply(gamma));
    const EntropyOperator zero_op = entropy_production_operator(qf, qr);
    CHECK(max_abs(zero_op.matrix) < 1e-8);

    const ClassicalProcess proc = random_classical_process(2, 2, rng);
    const ClassicalEmbedding e = embed_as_quantum(proc);
    const EntropyOperator op = entropy_production_operator(
        q_forward(e.channel, e.rho), q_reverse(e.channel, e.gamma, e.tau));
    const RealMatrix sigma = classical_sigma(proc);
    // diagonal operator with entries sigma(i, o) at position (o, i)
    Matrix expected = Matrix::Zero(4, 4);
    for (Index i = 0; i < 2; ++i)
        for (Index o = 0; o < 2; ++o)
            expected(o * 2 + i, o * 2 + i) = sigma(i, o);
    CHECK(max_abs(op.matrix - expected) < 1e-9);
}

TEST_CASE("SVD construction agrees with the dense matrix-log route") {
    Rng rng(110);
    for (int trial = 0; trial < 10; ++trial) {
        const QuantumChannel ch = random_channel(2, 2, rng);
        const StateOverTime qf = q_forward(ch, random_density_matrix(2, rng));
        const StateOverTime qr = q_reverse(ch, random_density_matrix(2, rng),
                                           random_density_matrix(2, rng));
        const EntropyOperator op = entropy_production_operator(qf, qr);
        // dense route: log of the sandwiched triple product
        const Matrix sqrt_qf = mat_sqrt(qf.matrix);
        const Matrix dense = mat_log(
            hermitize(sqrt_qf * mat_inv(qr.matrix) * sqrt_qf, 1e-8));
        CHECK(max_abs(op.matrix - dense) < 1e-8);
        // the operator average equals the BS divergence of the pair
        CHECK(entropy_production_average(qf, qr) ==
              doctest::Approx(bs_relative_entropy(DensityMatrix(qf.matrix),
                                                  DensityMatrix(qr.matrix)))
                  .epsilon(1e-9));
        // and Tr[Q_F Sigma] evaluated with the dense operator
        CHECK(entropy_production_average(qf, qr) ==
              doctest::Approx((qf.matrix * dense).trace().real()).epsilon(1e-9));
        // eigenpair relation for the kept modes
        for (Index k = 0; k < op.eigenvalues.size(); ++k) {
            const Vector f = op.forward_eigvecs.col(k);
            CHECK((op.matrix * f - op.eigenvalues(k) * f).norm() < 1e-9);
        }
    }
}

TEST_CASE("role-swapped operator has opposite eigenvalues on the r_k") {
    Rng rng(87);
    for (int trial = 0; trial < 10; ++trial) {
        const QuantumChannel channel = random_channel(2, 2, rng);
        const StateOverTime qf = q_forward(channel, random_density_matrix(2, rng));
        const StateOverTime qr = q_reverse(channel, random_density_matrix(2, rng),
                                           random_density_matrix(2, rng));
        const EntropyOperator op = entropy_production_operator(qf, qr);
        const EntropyOperator swapped = entropy_production_operator(qr, qf);
        std::vector<double> forward(op.eigenvalues.data(),
                                    op.eigenvalues.data() + op.eigenvalues.size());
        std::vector<double> reversed(swapped.eigenvalues.data(),
                                     swapped.eigenvalues.data() +
                                         swapped.eigenvalues.size());
        for (double& v : reversed) v = -v;
        CHECK(multiset_distance(forward, reversed) < 1e-9);
        // the reverse eigenvectors diagonalize the swapped operator
        for (Index k = 0; k < op.eigenvalues.size(); ++k) {
            const Vector r = op.reverse_eigvecs.col(k);
            CHECK((swapped.matrix * r + op.eigenvalues(k) * r).norm() < 1e-8);
        }
    }
}

TEST_CASE("support mismatch between the two-time operators is an error") {
    // A classical cell with P_F > 0 but q = 0 makes Q_R vanish inside the
    // support of Q_F.
    ClassicalProcess proc;
    proc.p = (RealVector(2) << 0.5, 0.5).finished();
    proc.phi = (RealMatrix(2, 2) << 0.7, 0.3, 0.3, 0.7).finished();
    proc.pi = (RealVector(2) << 0.5, 0.5).finished();
    proc.q = (RealVector(2) << 1.0, 0.0).finished();
    const ClassicalEmbedding e = embed_as_quantum(proc);
    CHECK_THROWS_AS(
        entropy_production_operator(q_forward(e.channel, e.rho),
                                    q_reverse(e.channel, e.gamma, e.tau)),
        SupportMismatch);
}

TEST_CASE("operator average: zero, unitary, and closed-form agreement") {
    Rng rng(88);
    const QuantumChannel channel = random_channel(2, 2, rng);
    const DensityMatrix gamma = random_density_matrix(2, rng);
    CHECK(entropy_production_average(
              q_forward(channel, gamma),
              q_reverse(channel, gamma, channel.apply(gamma))) ==
          doctest::Approx(0.0).epsilon(1e-10));

    for (int trial = 0; trial < 5; ++trial) {
        const QuantumChannel uc = QuantumChannel::unitary(random_unitary(2, rng));
        const double avg = entropy_production_average(
            q_forward(uc, random_density_matrix(2, rng)),
            q_reverse(uc, random_density_matrix(2, rng),
                      random_density_matrix(2, rng)));
        CHECK(std::abs(avg) < 1e-9);
    }

    for (int trial = 0; trial < 10; ++trial) {
        const QuantumChannel ch = random_channel(2, 2, rng);
        const DensityMatrix rho = random_density_matrix(2, rng);
        const DensityMatrix g = random_density_matrix(2, rng);
        const DensityMatrix tau = random_density_matrix(2, rng);
        const double avg = entropy_production_average(q_forward(ch, rho),
                                                      q_reverse(ch, g, tau));
        CHECK(avg ==
              doctest::Approx(entropy_production_closed_form(ch, rho, g, tau))
                  .epsilon(1e-9));
        CHECK(avg >= -1e-10);
    }
}

TEST_CASE("closed form: preconditions and the tau = E(rho) inequality") {
    Rng rng(89);
    const QuantumChannel uc = QuantumChannel::unitary(random_unitary(2, rng));
    CHECK_THROWS_AS(
        entropy_production_closed_form(uc, random_density_matrix(2, rng),
                                       random_density_matrix(2, rng),
                                       random_density_matrix(2, rng)),
        NotFullRank);

    for (int trial = 0; trial < 20; ++trial) {
        const QuantumChannel ch = random_channel(2, 2, rng);
        const DensityMatrix rho = random_density_matrix(2, rng);
        const DensityMatrix gamma = random_density_matrix(2, rng);
        const double avg = entropy_production_closed_form(ch, rho, gamma,
                                                          ch.apply(rho));
        const double bound = bs_relative_entropy(rho, gamma) -
                             relative_entropy(ch.apply(rho), ch.apply(gamma));
        CHECK(avg >= bound - 1e-9);
    }
}

TEST_CASE("closed form agrees with both routes on the collision z-axis") {
    // gamma = xi (fixed point), tau = N(rho), rho on the z axis: everything
    // is diagonal, so the operator average and the relative-entropy form
    // must coincide.
    const QuantumChannel channel = collision_channel({0.9, 0.0, 0.2, 1});
    const DensityMatrix xi =
        DensityMatrix::diagonal((RealVector(2) << 0.9, 0.1).finished());
    const DensityMatrix rho =
        DensityMatrix::diagonal((RealVector(2) << 0.99, 0.01).finished());
    const DensityMatrix tau = channel.apply(rho);
    const double closed = entropy_production_closed_form(channel, rho, xi, tau);
    CHECK(closed == doctest::Approx(entropy_production_umegaki(channel, rho, xi,
                                                               tau))
                        .epsilon(1e-9));
    CHECK(closed ==
          doctest::Approx(entropy_production_average(
                              q_forward(channel, rho),
                              q_reverse(channel, xi, tau)))
              .epsilon(1e-9));
}

TEST_CASE("commuting reduction to the three-term formula") {
    Rng rng(90);
    for (int trial = 0; trial < 20; ++trial) {
        const QuantumChannel ch = random_channel(2, 2, rng);
        const DensityMatrix rho = random_density_matrix(2, rng);
        const DensityMatrix gamma = random_density_matrix(2, rng);
        const DensityMatrix tau = commuting_tau(ch, gamma, rng);
        const double closed = entropy_production_closed_form(ch, rho, gamma, tau);
        const double three_term =
            bs_relative_entropy(rho, gamma) -
            relative_entropy(ch.apply(rho), ch.apply(gamma)) +
            relative_entropy(ch.apply(rho), tau);
        CHECK(closed == doctest::Approx(three_term).epsilon(1e-9));
    }
}

TEST_CASE("fluctuation identities on random instances") {
    Rng rng(91);
    for (int trial = 0; trial < 20; ++trial) {
        const QuantumChannel ch = random_channel(2, 2, rng);
        const StateOverTime qf = q_forward(ch, random_density_matrix(2, rng));
        const StateOverTime qr = q_reverse(ch, random_density_matrix(2, rng),
                                           random_density_matrix(2, rng));
        const EntropyOperator op = entropy_production_operator(qf, qr);
        CHECK(jarzynski_average(qf, op) == doctest::Approx(1.0).epsilon(1e-8));
        const FluctuationReport report = crooks_report(qf, qr);
        double pf_total = 0.0;
        for (const CrooksRow& row : report.crooks_rows) {
            CHECK(row.ratio_error < 1e-8);
            CHECK(row.p_forward >= -1e-12);
            CHECK(row.p_forward <= 1.0 + 1e-12);
            pf_total += row.p_forward;
        }
        CHECK(pf_total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("Crooks on the coincident pair collapses to a single row") {
    Rng rng(92);
    const QuantumChannel ch = random_channel(2, 2, rng);
    const DensityMatrix gamma = random_density_matrix(2, rng);
    const StateOverTime qf = q_forward(ch, gamma);
    const StateOverTime qr = q_reverse(ch, gamma, ch.apply(gamma));
    const FluctuationReport report = crooks_report(qf, qr);
    REQUIRE(report.crooks_rows.size() == 1);
    CHECK(report.degenerate_binned);
    CHECK(report.crooks_rows[0].sigma == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(report.crooks_rows[0].p_forward == doctest::Approx(1.0));
    CHECK(report.crooks_rows[0].p_reverse == doctest::Approx(1.0));
    CHECK(report.jarzynski_value == doctest::Approx(1.0));
}

TEST_CASE("Crooks against the classical two-state enumeration") {
    ClassicalProcess proc;
    proc.p = (RealVector(2) << 0.7, 0.3).finished();
    proc.phi = (RealMatrix(2, 2) << 0.9, 0.2, 0.1, 0.8).finished();
    proc.pi = (RealVector(2) << 0.5, 0.5).finished();
    proc.q = proc.phi * proc.p;
    const ClassicalEmbedding e = embed_as_quantum(proc);
    const FluctuationReport report = crooks_report(
        q_forward(e.channel, e.rho), q_reverse(e.channel, e.gamma, e.tau));

    const RealMatrix sigma = classical_sigma(proc);
    const RealMatrix reverse = classical_reverse(proc);
    std::vector<double> sigmas, pf, pr;
    for (Index i = 0; i < 2; ++i) {
        for (Index o = 0; o < 2; ++o) {
            sigmas.push_back(sigma(i, o));
            pf.push_back(proc.p(i) * proc.phi(o, i));
            pr.push_back(proc.q(o) * reverse(i, o));
        }
    }
    REQUIRE(report.crooks_rows.size() == 4);
    std::vector<double> got_sigma, got_pf, got_pr;
    for (const CrooksRow& row : report.crooks_rows) {
        got_sigma.push_back(row.sigma);
        got_pf.push_back(row.p_forward);
        got_pr.push_back(row.p_reverse);
        CHECK(row.ratio_error < 1e-10);
    }
    CHECK(multiset_distance(sigmas, got_sigma) < 1e-9);
    CHECK(multiset_distance(pf, got_pf) < 1e-9);
    CHECK(multiset_distance(pr, got_pr) < 1e-9);
}

TEST_CASE("Crooks requires full rank") {
    Rng rng(93);
    const QuantumChannel uc = QuantumChannel::unitary(random_unitary(2, rng));
    CHECK_THROWS_AS(crooks_report(q_forward(uc, random_density_matrix(2, rng)),
                                  q_reverse(uc, random_density_matrix(2, rng),
                                            random_density_matrix(2, rng))),
                    NotFullRank);
}

TEST_CASE("locality decomposition on full-rank instances") {
    Rng rng(94);
    for (int trial = 0; trial < 10; ++trial) {
        const QuantumChannel ch = random_channel(2, 2, rng);
        const DensityMatrix rho = random_density_matrix(2, rng);
        const DensityMatrix gamma = random_density_matrix(2, rng);
        const DensityMatrix tau = random_density_matrix(2, rng);
        const LocalityDecomposition dec =
            locality_decomposition(ch, rho, gamma, tau);
        CHECK(max_abs(dec.rotation * dec.rotation.adjoint() -
                      Matrix::Identity(4, 4)) < 1e-9);
        // for full-rank rho the polar factor equals the closed-form rotation
        const StateOverTime qf = q_forward(ch, rho);
        const Matrix closed_form_u =
            mat_inv_sqrt(tensor_product(Matrix::Identity(2, 2),
                                        rho.matrix().transpose())) *
            mat_inv_sqrt(ch.choi()) * mat_sqrt(qf.matrix);
        CHECK(max_abs(dec.rotation - closed_form_u) < 1e-8);

        const EntropyOperator op = entropy_production_operator(
            qf, q_reverse(ch, gamma, tau));
        const Matrix local =
            tensor_product(Matrix::Identity(2, 2), dec.input_term) -
            tensor_product(dec.output_term, Matrix::Identity(2, 2));
        CHECK(max_abs(dec.rotation * op.matrix * dec.rotation.adjoint() - local) <
              1e-8);
        CHECK(spectrum_distance(op.matrix, local) < 1e-8);
    }
}

TEST_CASE("classical-quantum channels make the rotation trivial") {
    Rng rng(95);
    const QuantumChannel cq = random_cq_channel(2, rng);
    const DensityMatrix rho = random_diagonal_state(2, rng);
    const DensityMatrix gamma = random_density_matrix(2, rng);
    const DensityMatrix tau = random_density_matrix(2, rng);
    const LocalityDecomposition dec = locality_decomposition(cq, rho, gamma, tau);
    CHECK(max_abs(dec.rotation - Matrix::Identity(4, 4)) < 1e-9);
}

TEST_CASE("locality requires a full-rank Choi operator") {
    Rng rng(96);
    const QuantumChannel uc = QuantumChannel::unitary(random_unitary(2, rng));
    CHECK_THROWS_AS(locality_decomposition(uc, random_density_matrix(2, rng),
                                           random_density_matrix(2, rng),
                                           random_density_matrix(2, rng)),
                    NotFullRank);
}

TEST_CASE("thermal endpoints reduce to the work-operator spectrum") {
    Rng rng(97);
    Matrix h_in = Matrix::Zero(2, 2);
    h_in(1, 1) = 1.0;
    Matrix h_out = Matrix::Zero(2, 2);
    h_out(1, 1) = 2.0;

    const QuantumChannel unital = random_unital_channel(2, 6, rng);
    REQUIRE(channel_rank_flags(unital).full_rank_choi);

    const ThermalSpec spec = make_thermal_spec(1.0, h_in, h_out);
    // Delta F from the partition functions directly
    const double z_in = 1.0 + std::exp(-1.0);
    const double z_out = 1.0 + std::exp(-2.0);
    CHECK(spec.delta_f == doctest::Approx(-(std::log(z_out) - std::log(z_in))));

    const WorkOperatorCheck result = work_operator_check(unital, spec);
    CHECK(result.matched);
    CHECK(result.max_dev < 1e-7);

    // H = H' = 0 and beta = 0 both give an all-zero spectrum
    const ThermalSpec trivial = make_thermal_spec(1.0, Matrix::Zero(2, 2),
                                                  Matrix::Zero(2, 2));
    CHECK(trivial.delta_f == doctest::Approx(0.0));
    CHECK(work_operator_check(unital, trivial).matched);
    const ThermalSpec infinite_temp = make_thermal_spec(0.0, h_in, h_out);
    CHECK(infinite_temp.delta_f == doctest::Approx(0.0));
    CHECK(work_operator_check(unital, infinite_temp).matched);

    const QuantumChannel not_unital = collision_channel({0.9, 0.0, 0.2, 1});
    CHECK_THROWS_AS(work_operator_check(not_unital, spec), PreconditionViolation);
}

TEST_CASE("superadditivity of the average") {
    Rng rng(98);
    // everything aligned: all three averages vanish
    const QuantumChannel e1 = random_channel(2, 2, rng);
    const QuantumChannel e2 = random_channel(2, 2, rng);
    const DensityMatrix gamma = random_density_matrix(2, rng);
    const SuperadditivityReport zero = superadditivity_report(
        e1, e2, gamma, gamma, e1.apply(gamma), compose(e2, e1).apply(gamma));
    CHECK(std::abs(zero.avg_step1) < 1e-9);
    CHECK(std::abs(zero.avg_step2) < 1e-9);
    CHECK(std::abs(zero.avg_total) < 1e-9);
    CHECK(std::abs(zero.gap) < 1e-9);

    // generic instances: the gap is non-negative and matches the closed form
    for (int trial = 0; trial < 10; ++trial) {
        const DensityMatrix rho = random_density_matrix(2, rng);
        const DensityMatrix prior = random_density_matrix(2, rng);
        const DensityMatrix tau1 = random_density_matrix(2, rng);
        const DensityMatrix tau2 = random_density_matrix(2, rng);
        const SuperadditivityReport report =
            superadditivity_report(e1, e2, rho, prior, tau1, tau2);
        CHECK(report.gap >= -1e-9);
        CHECK(report.gap == doctest::Approx(report.avg_step1 + report.avg_step2 -
                                            report.avg_total)
                                .epsilon(1e-12));
        const Matrix w = mat_inv_sqrt(e1.apply_matrix(prior.matrix()));
        const double closed =
            bs_relative_entropy(e1.apply(rho), e1.apply(prior)) -
            (e1.apply_matrix(rho.matrix()) *
             mat_log(hermitize(w * tau1.matrix() * w, 1e-8)))
                .trace()
                .real();
        CHECK(report.gap == doctest::Approx(closed).epsilon(1e-9));
        CHECK(report.gap > 1e-6);  // generic noncommuting instances are strict
    }
}

TEST_CASE("superadditivity gap closes for aligned diagonal steps") {
    Rng rng(99);
    // first step measure-and-prepare: outputs commute, tau1 = E1(rho)
    const ClassicalProcess proc = random_classical_process(2, 2, rng);
    const QuantumChannel e1 = embed_as_quantum(proc).channel;
    const QuantumChannel e2 = random_channel(2, 2, rng);
    const DensityMatrix rho = random_density_matrix(2, rng);
    const DensityMatrix gamma = random_density_matrix(2, rng);
    const SuperadditivityReport report = superadditivity_report(
        e1, e2, rho, gamma, e1.apply(rho), random_density_matrix(2, rng));
    CHECK(commutator_norm(e1.apply_matrix(rho.matrix()),
                          e1.apply_matrix(gamma.matrix())) < 1e-12);
    CHECK(std::abs(report.gap) < 1e-9);
}

TEST_CASE("pushforward identity against the local form") {
    Rng rng(100);
    for (int trial = 0; trial < 5; ++trial) {
        const QuantumChannel ch = random_channel(2, 2, rng);
        const DensityMatrix rho = random_density_matrix(2, rng);
        const DensityMatrix gamma = random_density_matrix(2, rng);
        const DensityMatrix tau = random_density_matrix(2, rng);
        const StateOverTime qf = q_forward(ch, rho);
        const StateOverTime qt = q_forward_tilde(ch, rho);
        const EntropyOperator op =
            entropy_production_operator(qf, q_reverse(ch, gamma, tau));
        const LocalityDecomposition dec =
            locality_decomposition(ch, rho, gamma, tau);
        const Matrix local =
            tensor_product(Matrix::Identity(2, 2), dec.input_term) -
            tensor_product(dec.output_term, Matrix::Identity(2, 2));

        // f(x) = x
        CHECK((qf.matrix * op.matrix).trace().real() ==
              doctest::Approx((qt.matrix * local).trace().real()).epsilon(1e-8));
        // f(x) = x^2
        CHECK((qf.matrix * op.matrix * op.matrix).trace().real() ==
              doctest::Approx((qt.matrix * local * local).trace().real())
                  .epsilon(1e-8));
        // f(x) = e^{-x}
        CHECK((qf.matrix * mat_exp(-op.matrix)).trace().real() ==
              doctest::Approx((qt.matrix * mat_exp(-local)).trace().real())
                  .epsilon(1e-8));
    }
}

TEST_CASE("variant reverse keeps every fluctuation identity") {
    Rng rng(101);
    for (int trial = 0; trial < 10; ++trial) {
        const QuantumChannel ch = random_channel(2, 2, rng);
        const StateOverTime qf = q_forward(ch, random_density_matrix(2, rng));
        const StateOverTime qr =
            q_reverse_variant(ch, random_density_matrix(2, rng),
                              random_density_matrix(2, rng));
        const EntropyOperator op = entropy_production_operator(qf, qr);
        CHECK(jarzynski_average(qf, op) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(entropy_production_average(qf, qr) >= -1e-10);
        const FluctuationReport report = crooks_report(qf, qr);
        for (const CrooksRow& row : report.crooks_rows) {
            CHECK(row.ratio_error < 1e-8);
        }
    }
}

TEST_CASE("zero average characterizes coinciding two-time operators") {
    Rng rng(102);
    for (int trial = 0; trial < 20; ++trial) {
        const QuantumChannel ch = random_channel(2, 2, rng);
        const DensityMatrix rho = random_density_matrix(2, rng);
        const DensityMatrix gamma = random_density_matrix(2, rng);
        const DensityMatrix tau = random_density_matrix(2, rng);
        const StateOverTime qf = q_forward(ch, rho);
        const StateOverTime qr = q_reverse(ch, gamma, tau);
        const double avg = entropy_production_average(qf, qr);
        const double separation = max_abs(qf.matrix - qr.matrix);
        if (avg < 1e-9) CHECK(separation < 1e-6);
        if (separation < 1e-6) CHECK(avg < 1e-9);
    }
}

TEST_CASE("measurement-channel entropy production") {
    Rng rng(103);
    const DensityMatrix rho = random_density_matrix(2, rng);
    const DensityMatrix gamma = random_density_matrix(2, rng);

    // trivial POVM: a single block, no output information
    const MeasurementEntropy trivial = measurement_entropy_production(
        Povm({Matrix::Identity(2, 2)}), rho, gamma,
        DensityMatrix::maximally_mixed(1));
    CHECK(trivial.average ==
          doctest::Approx(bs_relative_entropy(rho, gamma)).epsilon(1e-9));

    // projective measurement in the common eigenbasis of commuting states
    const DensityMatrix diag_rho = random_diagonal_state(2, rng);
    const DensityMatrix diag_gamma = random_diagonal_state(2, rng);
    Matrix p0 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    Matrix p1 = Matrix::Zero(2, 2);
    p1(1, 1) = 1.0;
    const Povm projective({p0, p1});
    const DensityMatrix tau_diag = random_diagonal_state(2, rng);
    const MeasurementEntropy commuting = measurement_entropy_production(
        projective, diag_rho, diag_gamma, tau_diag);
    ClassicalProcess proc;
    proc.p = diag_rho.matrix().diagonal().real();
    proc.phi = RealMatrix::Identity(2, 2);
    proc.pi = diag_gamma.matrix().diagonal().real();
    proc.q = tau_diag.matrix().diagonal().real();
    CHECK(commuting.average ==
          doctest::Approx(classical_average(proc).avg).epsilon(1e-9));

    // tau = M(rho) drops the last term
    const Povm povm = random_povm(2, 2, rng);
    const QuantumChannel meas = measurement_channel(povm);
    const DensityMatrix m_rho = meas.apply(rho);
    const DensityMatrix m_gamma = meas.apply(gamma);
    const MeasurementEntropy at_output =
        measurement_entropy_production(povm, rho, gamma, m_rho);
    CHECK(at_output.average ==
          doctest::Approx(bs_relative_entropy(rho, gamma) -
                          relative_entropy(m_rho, m_gamma))
              .epsilon(1e-9));

    // the block construction reproduces the generic operator
    const DensityMatrix tau = random_diagonal_state(2, rng);
    const MeasurementEntropy block =
        measurement_entropy_production(povm, rho, gamma, tau);
    const EntropyOperator generic = entropy_production_operator(
        q_forward(meas, rho), q_reverse(meas, gamma, tau));
    CHECK(max_abs(block.op.matrix - generic.matrix) < 1e-9);
    CHECK((q_forward(meas, rho).matrix * block.op.matrix).trace().real() ==
          doctest::Approx(block.average).epsilon(1e-9));

    Vector plus(2);
    plus << 1.0, 1.0;
    CHECK_THROWS_AS(
        measurement_entropy_production(povm, rho, gamma, DensityMatrix::pure(plus)),
        PreconditionViolation);
}

TEST_CASE("observational entropy") {
    Rng rng(104);
    const DensityMatrix rho = random_density_matrix(2, rng);
    const Povm povm = random_povm(2, 3, rng);
    CHECK(observational_entropy(povm, rho, rho) ==
          doctest::Approx(von_neumann_entropy(rho)).epsilon(1e-9));

    // maximally informative measurement in the eigenbasis of rho
    const EigenDecomposition dec = eig_hermitian(rho.matrix());
    std::vector<Matrix> projectors;
    for (Index i = 0; i < 2; ++i) {
        projectors.push_back(dec.eigenvectors.col(i) *
                             dec.eigenvectors.col(i).adjoint());
    }
    CHECK(observational_entropy(Povm(projectors), rho, rho) ==
          doctest::Approx(von_neumann_entropy(rho)).epsilon(1e-9));

    const DensityMatrix gamma = random_density_matrix(2, rng);
    const QuantumChannel meas = measurement_channel(povm);
    const MeasurementEntropy qc = measurement_entropy_production(
        povm, rho, gamma, meas.apply(rho));
    CHECK(observational_entropy(povm, rho, gamma) ==
          doctest::Approx(von_neumann_entropy(rho) + qc.average).epsilon(1e-9));
}

TEST_CASE("non-negativity of the operator average at both dimensions") {
    Rng rng(105);
    for (int trial = 0; trial < 100; ++trial) {
        const Index d = (trial % 2 == 0) ? 2 : 3;
        const QuantumChannel ch = random_channel(d, d, rng);
        const double avg = entropy_production_average(
            q_forward(ch, random_density_matrix(d, rng)),
            q_reverse(ch, random_density_matrix(d, rng),
                      random_density_matrix(d, rng)));
        CHECK(avg >= -1e-10);
    }
}
