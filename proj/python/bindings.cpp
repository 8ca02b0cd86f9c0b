#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qep/experiments.hpp"
#include "qep/random.hpp"
#include "qep/retrodiction.hpp"

namespace py = pybind11;
using namespace qep;

namespace {

DensityMatrix as_state(const Matrix& m) { return DensityMatrix(m); }

StateOverTime reverse_sot(const QuantumChannel& channel, const Matrix& gamma,
                          const Matrix& tau, bool variant) {
    return variant ? q_reverse_variant(channel, as_state(gamma), as_state(tau))
                   : q_reverse(channel, as_state(gamma), as_state(tau));
}

py::dict operator_dict(const EntropyOperator& op) {
    py::dict d;
    d["matrix"] = op.matrix;
    d["eigenvalues"] = op.eigenvalues;
    d["singular_values"] = op.singular_values;
    d["forward_eigvecs"] = op.forward_eigvecs;
    if (op.has_reverse_data) d["reverse_eigvecs"] = op.reverse_eigvecs;
    d["full_rank"] = op.full_rank;
    return d;
}

py::dict report_dict(const FluctuationReport& report) {
    py::dict d;
    d["jarzynski"] = report.jarzynski_value;
    py::list rows;
    for (const CrooksRow& row : report.crooks_rows) {
        py::dict r;
        r["sigma"] = row.sigma;
        r["p_f"] = row.p_forward;
        r["p_r"] = row.p_reverse;
        r["ratio_error"] = row.ratio_error;
        rows.append(r);
    }
    d["crooks"] = rows;
    d["support_ok"] = report.support_ok;
    d["degenerate_binned"] = report.degenerate_binned;
    return d;
}

py::list grid_list(const GridResult& grid) {
    py::list rows;
    for (const GridRow& row : grid) {
        rows.append(py::make_tuple(row.x, row.z, row.n, row.value, row.flags));
    }
    return rows;
}

ClassicalProcess make_process(const RealVector& p, const RealMatrix& phi,
                              const RealVector& pi, const RealVector& q) {
    ClassicalProcess proc{p, phi, pi, q};
    proc.validate();
    return proc;
}

}  // namespace

PYBIND11_MODULE(_qep, m) {
    m.doc() = "entropy production for quantum processes: channels in Choi "
              "form, Bayesian reverse processes, the entropy-production "
              "operator and its fluctuation statistics";

    py::register_exception<Error>(m, "QepError");

    py::class_<QuantumChannel>(m, "QuantumChannel")
        .def(py::init<Matrix, Index, Index>(), py::arg("choi"),
             py::arg("dim_in"), py::arg("dim_out"))
        .def_static("from_kraus", &QuantumChannel::from_kraus)
        .def_static("identity", &QuantumChannel::identity)
        .def_static("unitary", &QuantumChannel::unitary)
        .def_property_readonly("dim_in", &QuantumChannel::dim_in)
        .def_property_readonly("dim_out", &QuantumChannel::dim_out)
        .def_property_readonly("choi", &QuantumChannel::choi)
        .def("apply",
             [](const QuantumChannel& ch, const Matrix& rho) {
                 return ch.apply(as_state(rho)).matrix();
             })
        .def("adjoint_apply", &QuantumChannel::adjoint_apply)
        .def("compose_after", [](const QuantumChannel& second,
                                 const QuantumChannel& first) {
            return compose(second, first);
        });

    m.def("collision_channel",
          [](double xi_population, double phi, int n) {
              return collision_channel({xi_population, 0.0, phi, n});
          },
          py::arg("xi_population"), py::arg("phi"), py::arg("n") = 1);
    m.def("measurement_channel", [](const std::vector<Matrix>& effects) {
        return measurement_channel(Povm(effects));
    });
    m.def("stinespring", &stinespring);
    m.def("complementary_apply",
          [](const QuantumChannel& ch, const Matrix& rho) {
              return complementary_apply(ch, as_state(rho)).matrix();
          });
    m.def("channel_rank_flags", [](const QuantumChannel& ch) {
        const ChannelRankFlags flags = channel_rank_flags(ch);
        py::dict d;
        d["full_rank_choi"] = flags.full_rank_choi;
        d["unital"] = flags.unital;
        d["unitary"] = flags.unitary;
        return d;
    });

    m.def("petz_apply", [](const QuantumChannel& ch, const Matrix& gamma,
                           const Matrix& tau) {
        return petz_apply(ch, as_state(gamma), as_state(tau)).matrix();
    });
    m.def("petz_reverse_channel",
          [](const QuantumChannel& ch, const Matrix& gamma) {
              return petz_reverse_channel(ch, as_state(gamma)).reverse;
          });

    m.def("q_forward", [](const QuantumChannel& ch, const Matrix& rho) {
        return q_forward(ch, as_state(rho)).matrix;
    });
    m.def("q_forward_tilde", [](const QuantumChannel& ch, const Matrix& rho) {
        return q_forward_tilde(ch, as_state(rho)).matrix;
    });
    m.def("q_reverse",
          [](const QuantumChannel& ch, const Matrix& gamma, const Matrix& tau,
             bool variant) { return reverse_sot(ch, gamma, tau, variant).matrix; },
          py::arg("channel"), py::arg("gamma"), py::arg("tau"),
          py::arg("variant") = false);
    m.def("q_reverse_tilde",
          [](const QuantumChannel& ch, const Matrix& gamma, const Matrix& tau) {
              return q_reverse_tilde(ch, as_state(gamma), as_state(tau)).matrix;
          });

    m.def("von_neumann_entropy",
          [](const Matrix& rho) { return von_neumann_entropy(as_state(rho)); });
    m.def("relative_entropy", [](const Matrix& rho, const Matrix& sigma) {
        return relative_entropy(as_state(rho), as_state(sigma));
    });
    m.def("bs_relative_entropy", [](const Matrix& rho, const Matrix& sigma) {
        return bs_relative_entropy(as_state(rho), as_state(sigma));
    });

    m.def("entropy_production_operator",
          [](const QuantumChannel& ch, const Matrix& rho, const Matrix& gamma,
             const Matrix& tau, bool variant) {
              return operator_dict(entropy_production_operator(
                  q_forward(ch, as_state(rho)),
                  reverse_sot(ch, gamma, tau, variant)));
          },
          py::arg("channel"), py::arg("rho"), py::arg("gamma"), py::arg("tau"),
          py::arg("variant") = false);
    m.def("entropy_production_average",
          [](const QuantumChannel& ch, const Matrix& rho, const Matrix& gamma,
             const Matrix& tau, bool variant) {
              return entropy_production_average(
                  q_forward(ch, as_state(rho)),
                  reverse_sot(ch, gamma, tau, variant));
          },
          py::arg("channel"), py::arg("rho"), py::arg("gamma"), py::arg("tau"),
          py::arg("variant") = false);
    m.def("entropy_production_umegaki",
          [](const QuantumChannel& ch, const Matrix& rho, const Matrix& gamma,
             const Matrix& tau) {
              return entropy_production_umegaki(ch, as_state(rho),
                                                as_state(gamma), as_state(tau));
          });
    m.def("entropy_production_closed_form",
          [](const QuantumChannel& ch, const Matrix& rho, const Matrix& gamma,
             const Matrix& tau) {
              return entropy_production_closed_form(
                  ch, as_state(rho), as_state(gamma), as_state(tau));
          });
    m.def("jarzynski_average",
          [](const QuantumChannel& ch, const Matrix& rho, const Matrix& gamma,
             const Matrix& tau, bool variant) {
              const StateOverTime qf = q_forward(ch, as_state(rho));
              const StateOverTime qr = reverse_sot(ch, gamma, tau, variant);
              return jarzynski_average(qf, entropy_production_operator(qf, qr));
          },
          py::arg("channel"), py::arg("rho"), py::arg("gamma"), py::arg("tau"),
          py::arg("variant") = false);
    m.def("crooks_report",
          [](const QuantumChannel& ch, const Matrix& rho, const Matrix& gamma,
             const Matrix& tau, bool variant) {
              return report_dict(crooks_report(
                  q_forward(ch, as_state(rho)),
                  reverse_sot(ch, gamma, tau, variant)));
          },
          py::arg("channel"), py::arg("rho"), py::arg("gamma"), py::arg("tau"),
          py::arg("variant") = false);

    m.def("locality_decomposition",
          [](const QuantumChannel& ch, const Matrix& rho, const Matrix& gamma,
             const Matrix& tau) {
              const LocalityDecomposition dec = locality_decomposition(
                  ch, as_state(rho), as_state(gamma), as_state(tau));
              py::dict d;
              d["rotation"] = dec.rotation;
              d["input_term"] = dec.input_term;
              d["output_term"] = dec.output_term;
              return d;
          });
    m.def("superadditivity_report",
          [](const QuantumChannel& e1, const QuantumChannel& e2,
             const Matrix& rho, const Matrix& gamma, const Matrix& tau1,
             const Matrix& tau2) {
              const SuperadditivityReport r = superadditivity_report(
                  e1, e2, as_state(rho), as_state(gamma), as_state(tau1),
                  as_state(tau2));
              py::dict d;
              d["avg1"] = r.avg_step1;
              d["avg2"] = r.avg_step2;
              d["avg12"] = r.avg_total;
              d["gap"] = r.gap;
              return d;
          });
    m.def("measurement_entropy_production",
          [](const std::vector<Matrix>& effects, const Matrix& rho,
             const Matrix& gamma, const Matrix& tau) {
              const MeasurementEntropy r = measurement_entropy_production(
                  Povm(effects), as_state(rho), as_state(gamma), as_state(tau));
              py::dict d;
              d["operator"] = operator_dict(r.op);
              d["average"] = r.average;
              return d;
          });
    m.def("observational_entropy",
          [](const std::vector<Matrix>& effects, const Matrix& rho,
             const Matrix& gamma) {
              return observational_entropy(Povm(effects), as_state(rho),
                                           as_state(gamma));
          });

    m.def("classical_reverse", [](const RealVector& p, const RealMatrix& phi,
                                  const RealVector& pi, const RealVector& q) {
        return classical_reverse(make_process(p, phi, pi, q));
    });
    m.def("classical_sigma", [](const RealVector& p, const RealMatrix& phi,
                                const RealVector& pi, const RealVector& q) {
        return classical_sigma(make_process(p, phi, pi, q));
    });
    m.def("classical_average", [](const RealVector& p, const RealMatrix& phi,
                                  const RealVector& pi, const RealVector& q) {
        const ClassicalAverage avg = classical_average(make_process(p, phi, pi, q));
        py::dict d;
        d["avg"] = avg.avg;
        d["d_in"] = avg.d_in;
        d["d_out1"] = avg.d_out1;
        d["d_out2"] = avg.d_out2;
        return d;
    });
    m.def("embed_as_quantum", [](const RealVector& p, const RealMatrix& phi,
                                 const RealVector& pi, const RealVector& q) {
        ClassicalEmbedding e = embed_as_quantum(make_process(p, phi, pi, q));
        py::dict d;
        d["channel"] = e.channel;
        d["rho"] = e.rho.matrix();
        d["gamma"] = e.gamma.matrix();
        d["tau"] = e.tau.matrix();
        return d;
    });

    m.def("bloch_state", [](double x, double y, double z) {
        return DensityMatrix::from_bloch(x, y, z).matrix();
    });
    m.def("random_channel",
          [](Index dim_in, Index dim_out, uint64_t seed) {
              Rng rng(seed);
              return random_channel(dim_in, dim_out, rng);
          },
          py::arg("dim_in"), py::arg("dim_out"), py::arg("seed"));
    m.def("random_density_matrix",
          [](Index d, uint64_t seed) {
              Rng rng(seed);
              return random_density_matrix(d, rng).matrix();
          },
          py::arg("dim"), py::arg("seed"));

    m.def("run_fig1", [](const ScenarioConfig& config) {
        const Fig1Result r = run_fig1(config);
        py::dict d;
        d["input_diff"] = grid_list(r.input_diff);
        d["output_diff"] = grid_list(r.output_diff);
        d["total_diff"] = grid_list(r.total_diff);
        return d;
    });
    m.def("run_fig2", [](const ScenarioConfig& config) {
        const Fig2Result r = run_fig2(config);
        py::dict d;
        d["operator_avg"] = grid_list(r.operator_avg);
        d["umegaki_avg"] = grid_list(r.umegaki_avg);
        return d;
    });
    m.def("run_fig3",
          [](const ScenarioConfig& config) { return grid_list(run_fig3(config)); });

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("xi_population", &ScenarioConfig::xi_population)
        .def_readwrite("phi", &ScenarioConfig::phi)
        .def_readwrite("n_values", &ScenarioConfig::n_values)
        .def_readwrite("grid_resolution", &ScenarioConfig::grid_resolution)
        .def_readwrite("radius_clip", &ScenarioConfig::radius_clip)
        .def_readwrite("variant_reverse", &ScenarioConfig::variant_reverse)
        .def_readwrite("threads", &ScenarioConfig::threads)
        .def_property(
            "gamma_bloch",
            [](const ScenarioConfig& c) {
                return py::make_tuple(c.gamma_bloch.x, c.gamma_bloch.y,
                                      c.gamma_bloch.z);
            },
            [](ScenarioConfig& c, std::tuple<double, double, double> v) {
                c.gamma_bloch = {std::get<0>(v), std::get<1>(v), std::get<2>(v)};
            });
    m.def("fig1_defaults", &fig1_defaults);
    m.def("fig2_defaults", &fig2_defaults);
    m.def("fig3_defaults", &fig3_defaults);
}
