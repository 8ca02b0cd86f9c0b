#include "qep/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "qep/random.hpp"
#include "qep/retrodiction.hpp"

namespace qep {

DensityMatrix bloch_state(const BlochPoint& p) {
    return DensityMatrix::from_bloch(p.x, p.y, p.z);
}

ScenarioConfig fig1_defaults() {
    ScenarioConfig config;
    config.scenario = Scenario::Fig1Diff;
    config.xi_population = 0.95;
    config.phi = 0.4;
    config.n_values = {1};
    config.gamma_bloch = {0.9, 0.0, 0.0};
    config.tau_mode = TauMode::Explicit;
    config.tau_bloch = {-2.0 / 3.0, 0.0, -2.0 / 3.0};
    return config;
}

ScenarioConfig fig2_defaults() {
    ScenarioConfig config;
    config.scenario = Scenario::Fig2FixedPoint;
    config.xi_population = 0.9;
    config.phi = 0.2;
    config.n_values = {1, 4, 16};
    // gamma is pinned to the channel fixed point xi in this scenario.
    config.gamma_bloch = {0.0, 0.0, 2.0 * 0.9 - 1.0};
    config.tau_mode = TauMode::ChannelOutput;
    return config;
}

ScenarioConfig fig3_defaults() {
    ScenarioConfig config;
    config.scenario = Scenario::Fig3TauXi;
    config.xi_population = 0.9;
    config.phi = 0.2;
    config.n_values = {1, 4, 16};
    config.gamma_bloch = {0.8, 0.0, -0.2};
    config.tau_mode = TauMode::Xi;
    return config;
}

ScenarioConfig report_defaults() {
    ScenarioConfig config;
    config.scenario = Scenario::Report;
    config.xi_population = 0.9;
    config.phi = 0.2;
    config.n_values = {1};
    config.gamma_bloch = {0.0, 0.0, 2.0 * 0.9 - 1.0};
    config.tau_mode = TauMode::ChannelOutput;
    return config;
}

namespace {

DensityMatrix xi_state(const ScenarioConfig& config) {
    RealVector p(2);
    p << config.xi_population, 1.0 - config.xi_population;
    return DensityMatrix::diagonal(p);
}

DensityMatrix resolve_tau(const ScenarioConfig& config,
                          const QuantumChannel& channel,
                          const DensityMatrix& rho) {
    switch (config.tau_mode) {
        case TauMode::Explicit: return bloch_state(config.tau_bloch);
        case TauMode::ChannelOutput: return channel.apply(rho);
        case TauMode::Xi: return xi_state(config);
    }
    throw InvalidParameter("unknown tau mode");
}

/// Evaluates `point_value` over the (x, z) grid for each n, in
/// deterministic (n, z, x) row order. The worker pool only changes who
/// computes a row, never its position in the output.
GridResult sweep_grid(
    const ScenarioConfig& config,
    const std::function<double(const QuantumChannel&, int,
                               const DensityMatrix&)>& point_value) {
    const int res = config.grid_resolution;
    if (res < 2) throw InvalidParameter("grid resolution must be at least 2");
    std::vector<double> axis(static_cast<size_t>(res));
    for (int i = 0; i < res; ++i) {
        axis[static_cast<size_t>(i)] = -1.0 + 2.0 * i / (res - 1);
    }

    struct Point {
        double x, z;
        int n;
    };
    std::vector<Point> points;
    std::vector<int> ns = config.n_values;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    for (int n : ns) {
        for (double z : axis) {
            for (double x : axis) {
                if (std::sqrt(x * x + z * z) > config.radius_clip) continue;
                points.push_back({x, z, n});
            }
        }
    }

    std::vector<GridRow> rows(points.size());
    auto worker = [&](size_t begin, size_t end, const QuantumChannel* channel,
                      int n) {
        for (size_t i = begin; i < end; ++i) {
            const Point& pt = points[i];
            GridRow row{pt.x, pt.z, pt.n, 0.0, ""};
            try {
                const DensityMatrix rho = bloch_state({pt.x, 0.0, pt.z});
                const double v = point_value(*channel, n, rho);
                if (std::isfinite(v)) {
                    row.value = v;
                } else {
                    row.flags = "singular";
                }
            } catch (const Error&) {
                row.flags = "singular";
            }
            rows[i] = std::move(row);
        }
    };

    // One channel per n, shared read-only across workers.
    size_t begin = 0;
    for (int n : ns) {
        size_t end = begin;
        while (end < points.size() && points[end].n == n) ++end;
        CollisionModel model{config.xi_population, 0.0, config.phi, n};
        const QuantumChannel channel = collision_channel(model);
        const size_t count = end - begin;
        const int threads = std::max(1, config.threads);
        if (threads == 1 || count < 64) {
            worker(begin, end, &channel, n);
        } else {
            std::vector<std::thread> pool;
            const size_t chunk = (count + threads - 1) / threads;
            for (int t = 0; t < threads; ++t) {
                const size_t lo = begin + t * chunk;
                const size_t hi = std::min(begin + (t + 1) * chunk, end);
                if (lo >= hi) break;
                pool.emplace_back(worker, lo, hi, &channel, n);
            }
            for (auto& th : pool) th.join();
        }
        begin = end;
    }
    return rows;
}

double average_operator_form(const ScenarioConfig& config,
                             const QuantumChannel& channel,
                             const DensityMatrix& rho,
                             const DensityMatrix& gamma,
                             const DensityMatrix& tau) {
    if (config.variant_reverse) {
        return entropy_production_average(q_forward(channel, rho),
                                          q_reverse_variant(channel, gamma, tau));
    }
    return entropy_production_closed_form(channel, rho, gamma, tau);
}

}  // namespace

Fig1Result run_fig1(const ScenarioConfig& config) {
    const DensityMatrix gamma = bloch_state(config.gamma_bloch);
    Fig1Result result;
    result.input_diff = sweep_grid(
        config, [&](const QuantumChannel&, int, const DensityMatrix& rho) {
            return bs_relative_entropy(rho, gamma) - relative_entropy(rho, gamma);
        });
    result.total_diff = sweep_grid(
        config, [&](const QuantumChannel& channel, int, const DensityMatrix& rho) {
            const DensityMatrix tau = resolve_tau(config, channel, rho);
            return average_operator_form(config, channel, rho, gamma, tau) -
                   entropy_production_umegaki(channel, rho, gamma, tau);
        });
    // Output-side difference = total - input, evaluated pointwise so each
    // row stays flagged independently.
    result.output_diff = sweep_grid(
        config, [&](const QuantumChannel& channel, int, const DensityMatrix& rho) {
            const DensityMatrix tau = resolve_tau(config, channel, rho);
            const double total =
                average_operator_form(config, channel, rho, gamma, tau) -
                entropy_production_umegaki(channel, rho, gamma, tau);
            const double input =
                bs_relative_entropy(rho, gamma) - relative_entropy(rho, gamma);
            return total - input;
        });
    return result;
}

Fig2Result run_fig2(const ScenarioConfig& config) {
    const DensityMatrix gamma = xi_state(config);  // prior = fixed point
    Fig2Result result;
    result.operator_avg = sweep_grid(
        config, [&](const QuantumChannel& channel, int, const DensityMatrix& rho) {
            const DensityMatrix tau = resolve_tau(config, channel, rho);
            return average_operator_form(config, channel, rho, gamma, tau);
        });
    result.umegaki_avg = sweep_grid(
        config, [&](const QuantumChannel& channel, int, const DensityMatrix& rho) {
            const DensityMatrix tau = resolve_tau(config, channel, rho);
            return entropy_production_umegaki(channel, rho, gamma, tau);
        });
    return result;
}

GridResult run_fig3(const ScenarioConfig& config) {
    const DensityMatrix gamma = bloch_state(config.gamma_bloch);
    return sweep_grid(
        config, [&](const QuantumChannel& channel, int, const DensityMatrix& rho) {
            const DensityMatrix tau = resolve_tau(config, channel, rho);
            return average_operator_form(config, channel, rho, gamma, tau);
        });
}

ReportResult run_report(const ScenarioConfig& config) {
    const auto [channel, rho, gamma, tau] = [&] {
        if (config.classical) {
            ClassicalEmbedding e = embed_as_quantum(*config.classical);
            return std::make_tuple(std::move(e.channel), std::move(e.rho),
                                   std::move(e.gamma), std::move(e.tau));
        }
        CollisionModel model{config.xi_population, 0.0, config.phi,
                             config.n_values.empty() ? 1 : config.n_values.front()};
        QuantumChannel ch = model.phi == 0.0 ? QuantumChannel::identity(2)
                                             : collision_channel(model);
        DensityMatrix in = bloch_state(config.rho_bloch);
        DensityMatrix prior = bloch_state(config.gamma_bloch);
        DensityMatrix rev_in = resolve_tau(config, ch, in);
        return std::make_tuple(std::move(ch), std::move(in), std::move(prior),
                               std::move(rev_in));
    }();

    const StateOverTime qf = q_forward(channel, rho);
    const StateOverTime qr = config.variant_reverse
                                 ? q_reverse_variant(channel, gamma, tau)
                                 : q_reverse(channel, gamma, tau);

    ReportResult result;
    result.average = entropy_production_average(qf, qr);
    result.average_umegaki = entropy_production_umegaki(channel, rho, gamma, tau);
    result.jarzynski =
        jarzynski_average(qf, entropy_production_operator(qf, qr));
    try {
        const FluctuationReport fluct = crooks_report(qf, qr);
        result.crooks = fluct.crooks_rows;
        result.crooks_available = true;
    } catch (const NotFullRank& e) {
        result.crooks_available = false;
        result.note = e.what();
    }

    if (config.phi2) {
        CollisionModel second{config.xi_population2, 0.0, *config.phi2, config.n2};
        const QuantumChannel e2 = collision_channel(second);
        const QuantumChannel total = compose(e2, channel);
        const DensityMatrix tau2 = config.tau_mode == TauMode::ChannelOutput
                                       ? total.apply(rho)
                                       : resolve_tau(config, total, rho);
        result.superadd = superadditivity_report(channel, e2, rho, gamma,
                                                 channel.apply(rho), tau2);
    }
    return result;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

void write_grid_csv(std::ostream& out, const GridResult& grid) {
    out << "x,z,n,value,flags\n";
    for (const GridRow& row : grid) {
        out << format_double(row.x) << ',' << format_double(row.z) << ','
            << row.n << ',' << format_double(row.value) << ',' << row.flags
            << '\n';
    }
}

void write_grid_json(std::ostream& out, const GridResult& grid) {
    nlohmann::json rows = nlohmann::json::array();
    for (const GridRow& row : grid) {
        rows.push_back({{"x", row.x},
                        {"z", row.z},
                        {"n", row.n},
                        {"value", row.value},
                        {"flags", row.flags}});
    }
    out << rows.dump(2) << '\n';
}

std::string report_json(const ReportResult& report) {
    nlohmann::json j;
    j["jarzynski"] = report.jarzynski;
    j["average"] = report.average;
    j["average_umegaki"] = report.average_umegaki;
    nlohmann::json crooks = nlohmann::json::array();
    if (report.crooks_available) {
        for (const CrooksRow& row : report.crooks) {
            crooks.push_back({{"sigma", row.sigma},
                              {"p_f", row.p_forward},
                              {"p_r", row.p_reverse},
                              {"ratio_error", row.ratio_error}});
        }
    }
    j["crooks"] = crooks;
    if (!report.note.empty()) j["note"] = report.note;
    if (report.superadd) {
        j["superadditivity"] = {{"avg1", report.superadd->avg_step1},
                                {"avg2", report.superadd->avg_step2},
                                {"avg12", report.superadd->avg_total},
                                {"gap", report.superadd->gap}};
    } else {
        j["superadditivity"] = nullptr;
    }
    return j.dump(2);
}

std::size_t count_flagged(const GridResult& grid) {
    std::size_t n = 0;
    for (const GridRow& row : grid) {
        if (!row.flags.empty()) ++n;
    }
    return n;
}

int run_selftest(std::ostream& out) {
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        out << (ok ? "[PASS] " : "[FAIL] ") << name << '\n';
        if (!ok) ++failures;
    };
    Rng rng(20240817);

    {
        CollisionModel model{0.9, 0.0, 0.2, 1};
        const QuantumChannel channel = collision_channel(model);
        const DensityMatrix xi =
            DensityMatrix::diagonal((RealVector(2) << 0.9, 0.1).finished());
        check("collision channel fixes xi",
              max_abs(channel.apply(xi).matrix() - xi.matrix()) < 1e-10);
        const QuantumChannel iterated =
            compose(channel, channel);
        const QuantumChannel closed = collision_channel({0.9, 0.0, 0.2, 2});
        check("closed form matches two explicit collisions",
              max_abs(iterated.choi() - closed.choi()) < 1e-10);
    }
    {
        bool all_ok = true;
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            const QuantumChannel channel = random_channel(2, 2, rng);
            const DensityMatrix rho = random_density_matrix(2, rng);
            const DensityMatrix gamma = random_density_matrix(2, rng);
            const DensityMatrix tau = random_density_matrix(2, rng);
            const StateOverTime qf = q_forward(channel, rho);
            const StateOverTime qr = q_reverse(channel, gamma, tau);
            const FluctuationReport fluct = crooks_report(qf, qr);
            worst = std::max(worst, std::abs(fluct.jarzynski_value - 1.0));
            for (const CrooksRow& row : fluct.crooks_rows) {
                worst = std::max(worst, row.ratio_error);
            }
            const double avg = entropy_production_average(qf, qr);
            const double closed =
                entropy_production_closed_form(channel, rho, gamma, tau);
            worst = std::max(worst, std::abs(avg - closed));
            all_ok = all_ok && avg > -1e-10;
        }
        check("fluctuation identities on random full-rank instances",
              all_ok && worst < 1e-8);
    }
    {
        const ClassicalProcess proc = random_classical_process(3, 3, rng);
        const ClassicalEmbedding embedding = embed_as_quantum(proc);
        const double classical = classical_average(proc).avg;
        const double quantum = entropy_production_average(
            q_forward(embedding.channel, embedding.rho),
            q_reverse(embedding.channel, embedding.gamma, embedding.tau));
        check("classical embedding reproduces the classical average",
              std::abs(classical - quantum) < 1e-9);
    }
    {
        const QuantumChannel channel =
            QuantumChannel::unitary(random_unitary(2, rng));
        const double avg = entropy_production_average(
            q_forward(channel, random_density_matrix(2, rng)),
            q_reverse(channel, random_density_matrix(2, rng),
                      random_density_matrix(2, rng)));
        check("unitary channel produces zero entropy", std::abs(avg) < 1e-9);
    }
    {
        const QuantumChannel channel = random_channel(2, 2, rng);
        const DensityMatrix gamma = random_density_matrix(2, rng);
        const DensityMatrix recovered =
            petz_apply(channel, gamma, channel.apply(gamma));
        check("reverse process is involutive at the prior",
              max_abs(recovered.matrix() - gamma.matrix()) < 1e-10);
        const Matrix v = stinespring(channel);
        check("dilation isometry",
              max_abs(v.adjoint() * v - Matrix::Identity(2, 2)) < 1e-10);
    }
    return failures;
}

}  // namespace qep
