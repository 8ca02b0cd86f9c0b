#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "qep/experiments.hpp"

namespace {

using qep::GridResult;
using qep::ScenarioConfig;

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        values.push_back(std::stod(item));
    }
    return values;
}

qep::BlochPoint parse_bloch(const std::string& text) {
    const std::vector<double> v = parse_csv_doubles(text);
    if (v.size() != 3) {
        throw qep::InvalidParameter("expected a Bloch vector as x,y,z");
    }
    return {v[0], v[1], v[2]};
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(v.size()));
    for (size_t i = 0; i < v.size(); ++i) r(static_cast<Eigen::Index>(i)) = v[i];
    return r;
}

/// Adds the sweep/report flags shared by all subcommands. String targets
/// are parsed after CLI11 runs so config-file values pass through the same
/// validation.
struct RawOptions {
    std::string config_path;
    std::string n_list;
    std::string gamma;
    std::string rho;
    std::string tau;
    std::string classical_p, classical_phi, classical_pi, classical_q;
};

/// Flat key=value file mirroring the long flags (keys without the leading
/// dashes, e.g. `xi-pop=0.9`). '#' starts a comment line.
std::map<std::string, std::string> load_config_kv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qep::InvalidParameter("cannot read config file " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw qep::InvalidParameter("config line without '=': " + line);
        }
        auto trim = [](std::string s) {
            const auto first = s.find_first_not_of(" \t");
            const auto last = s.find_last_not_of(" \t");
            return first == std::string::npos ? std::string()
                                              : s.substr(first, last - first + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

/// Applies config-file values to every option the command line left
/// untouched, so explicit flags always win.
void apply_config_file(const CLI::App* cmd, ScenarioConfig& config,
                       RawOptions& raw, std::string& out_path,
                       std::string& format) {
    if (raw.config_path.empty()) return;
    const std::map<std::string, std::string> kv = load_config_kv(raw.config_path);
    auto value = [&](const char* key,
                     const char* flag) -> const std::string* {
        const auto it = kv.find(key);
        if (it == kv.end() || cmd->count(flag) > 0) return nullptr;
        return &it->second;
    };
    if (const auto* v = value("xi-pop", "--xi-pop")) config.xi_population = std::stod(*v);
    if (const auto* v = value("phi", "--phi")) config.phi = std::stod(*v);
    if (const auto* v = value("n", "--n")) raw.n_list = *v;
    if (const auto* v = value("gamma", "--gamma")) raw.gamma = *v;
    if (const auto* v = value("rho", "--rho")) raw.rho = *v;
    if (const auto* v = value("tau", "--tau")) raw.tau = *v;
    if (const auto* v = value("grid", "--grid")) config.grid_resolution = std::stoi(*v);
    if (const auto* v = value("radius-clip", "--radius-clip")) config.radius_clip = std::stod(*v);
    if (const auto* v = value("out", "--out")) out_path = *v;
    if (const auto* v = value("format", "--format")) format = *v;
    if (const auto* v = value("threads", "--threads")) config.threads = std::stoi(*v);
    if (const auto* v = value("variant-reverse", "--variant-reverse")) {
        config.variant_reverse = (*v == "1" || *v == "true");
    }
    if (const auto* v = value("phi2", "--phi2")) config.phi2 = std::stod(*v);
    if (const auto* v = value("xi-pop2", "--xi-pop2")) config.xi_population2 = std::stod(*v);
    if (const auto* v = value("n2", "--n2")) config.n2 = std::stoi(*v);
    if (const auto* v = value("classical-p", "--classical-p")) raw.classical_p = *v;
    if (const auto* v = value("classical-phi", "--classical-phi")) raw.classical_phi = *v;
    if (const auto* v = value("classical-pi", "--classical-pi")) raw.classical_pi = *v;
    if (const auto* v = value("classical-q", "--classical-q")) raw.classical_q = *v;
}

void add_common_options(CLI::App* cmd, ScenarioConfig& config, RawOptions& raw,
                        std::string& out_path, std::string& format) {
    cmd->add_option("--xi-pop", config.xi_population,
                    "ancilla population <0|xi|0>");
    cmd->add_option("--phi", config.phi, "partial-swap angle in radians");
    cmd->add_option("--n", raw.n_list, "comma list of collision counts");
    cmd->add_option("--gamma", raw.gamma, "prior state Bloch vector x,y,z");
    cmd->add_option("--rho", raw.rho, "input state Bloch vector x,y,z");
    cmd->add_option("--tau", raw.tau,
                    "reverse input: x,y,z | output | xi");
    cmd->add_option("--grid", config.grid_resolution, "grid points per axis");
    cmd->add_option("--radius-clip", config.radius_clip,
                    "skip grid points with Bloch norm above this");
    cmd->add_option("--out", out_path, "output path (stdout when omitted)");
    cmd->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", config.threads, "worker threads for sweeps");
    cmd->add_flag("--variant-reverse", config.variant_reverse,
                  "use the minimum-change reverse instead of the Petz one");
    cmd->add_option("--config", raw.config_path,
                    "flat key=value file mirroring the flags; flags override");
}

void add_report_options(CLI::App* cmd, ScenarioConfig& config, RawOptions& raw) {
    cmd->add_option("--phi2", [&config](const std::vector<std::string>& v) {
        config.phi2 = std::stod(v.front());
        return true;
    }, "second-stage swap angle; enables the superadditivity block");
    cmd->add_option("--xi-pop2", config.xi_population2,
                    "second-stage ancilla population");
    cmd->add_option("--n2", config.n2, "second-stage collision count");
    cmd->add_option("--classical-p", raw.classical_p,
                    "classical input distribution, comma separated");
    cmd->add_option("--classical-phi", raw.classical_phi,
                    "classical transition matrix, rows ; separated");
    cmd->add_option("--classical-pi", raw.classical_pi,
                    "classical prior distribution");
    cmd->add_option("--classical-q", raw.classical_q,
                    "classical reverse-start distribution");
}

void finalize_config(ScenarioConfig& config, const RawOptions& raw) {
    if (!raw.n_list.empty()) {
        config.n_values.clear();
        for (double v : parse_csv_doubles(raw.n_list)) {
            const int n = static_cast<int>(v);
            if (n < 1) throw qep::InvalidParameter("collision counts must be >= 1");
            config.n_values.push_back(n);
        }
    }
    if (!raw.gamma.empty()) config.gamma_bloch = parse_bloch(raw.gamma);
    if (!raw.rho.empty()) config.rho_bloch = parse_bloch(raw.rho);
    if (!raw.tau.empty()) {
        if (raw.tau == "output") {
            config.tau_mode = qep::TauMode::ChannelOutput;
        } else if (raw.tau == "xi") {
            config.tau_mode = qep::TauMode::Xi;
        } else {
            config.tau_mode = qep::TauMode::Explicit;
            config.tau_bloch = parse_bloch(raw.tau);
        }
    }
    const bool any_classical = !raw.classical_p.empty() ||
                               !raw.classical_phi.empty() ||
                               !raw.classical_pi.empty() ||
                               !raw.classical_q.empty();
    if (any_classical) {
        if (raw.classical_p.empty() || raw.classical_phi.empty() ||
            raw.classical_pi.empty() || raw.classical_q.empty()) {
            throw qep::InvalidParameter(
                "--classical-p/--classical-phi/--classical-pi/--classical-q "
                "must be given together");
        }
        qep::ClassicalProcess proc;
        proc.p = to_vector(parse_csv_doubles(raw.classical_p));
        proc.pi = to_vector(parse_csv_doubles(raw.classical_pi));
        proc.q = to_vector(parse_csv_doubles(raw.classical_q));
        std::vector<std::vector<double>> rows;
        std::stringstream stream(raw.classical_phi);
        std::string row_text;
        while (std::getline(stream, row_text, ';')) {
            rows.push_back(parse_csv_doubles(row_text));
        }
        if (rows.empty()) throw qep::InvalidParameter("empty transition matrix");
        Eigen::MatrixXd phi(static_cast<Eigen::Index>(rows.size()),
                            static_cast<Eigen::Index>(rows.front().size()));
        for (size_t o = 0; o < rows.size(); ++o) {
            if (rows[o].size() != rows.front().size()) {
                throw qep::InvalidParameter("ragged transition matrix");
            }
            for (size_t i = 0; i < rows[o].size(); ++i) {
                phi(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i)) =
                    rows[o][i];
            }
        }
        proc.phi = phi;
        proc.validate();
        config.classical = std::move(proc);
    }
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
    const size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || path.find('/', dot) != std::string::npos) {
        return path + "_" + suffix;
    }
    return path.substr(0, dot) + "_" + suffix + path.substr(dot);
}

size_t write_grid(const GridResult& grid, const std::string& path,
                  const std::string& format, const std::string& name) {
    if (path.empty()) {
        std::cout << "# " << name << '\n';
        if (format == "json") {
            qep::write_grid_json(std::cout, grid);
        } else {
            qep::write_grid_csv(std::cout, grid);
        }
    } else {
        std::ofstream out(path);
        if (!out) throw qep::Error("cannot open output file " + path);
        if (format == "json") {
            qep::write_grid_json(out, grid);
        } else {
            qep::write_grid_csv(out, grid);
        }
    }
    return qep::count_flagged(grid);
}

int finish(size_t flagged) {
    if (flagged > 0) {
        std::cerr << "flagged rows: " << flagged << '\n';
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entropy production for quantum processes: Bloch-plane "
                 "sweeps of collisional models and fluctuation-theorem "
                 "reports"};
    app.require_subcommand(1);

    ScenarioConfig fig1 = qep::fig1_defaults();
    ScenarioConfig fig2 = qep::fig2_defaults();
    ScenarioConfig fig3 = qep::fig3_defaults();
    ScenarioConfig report = qep::report_defaults();
    RawOptions raw1, raw2, raw3, raw_report;
    std::string out1, out2, out3, out_report;
    std::string fmt1 = "csv", fmt2 = "csv", fmt3 = "csv", fmt_report = "json";

    CLI::App* cmd1 = app.add_subcommand(
        "fig1", "difference between the two average definitions");
    add_common_options(cmd1, fig1, raw1, out1, fmt1);
    CLI::App* cmd2 = app.add_subcommand(
        "fig2", "entropy production with the fixed-point prior and tau = "
                "channel output");
    add_common_options(cmd2, fig2, raw2, out2, fmt2);
    CLI::App* cmd3 = app.add_subcommand(
        "fig3", "entropy production with tau = xi and a rotated prior");
    add_common_options(cmd3, fig3, raw3, out3, fmt3);
    CLI::App* cmd_report = app.add_subcommand(
        "report", "fluctuation-theorem report for one configured instance");
    add_common_options(cmd_report, report, raw_report, out_report, fmt_report);
    add_report_options(cmd_report, report, raw_report);
    CLI::App* cmd_selftest =
        app.add_subcommand("selftest", "run fast internal identity checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_selftest->parsed()) {
            return qep::run_selftest(std::cout) == 0 ? 0 : 3;
        }
        if (cmd1->parsed()) {
            apply_config_file(cmd1, fig1, raw1, out1, fmt1);
            finalize_config(fig1, raw1);
            const qep::Fig1Result result = qep::run_fig1(fig1);
            size_t flagged = 0;
            flagged += write_grid(result.input_diff,
                                  out1.empty() ? "" : with_suffix(out1, "input"),
                                  fmt1, "input_diff");
            flagged += write_grid(result.output_diff,
                                  out1.empty() ? "" : with_suffix(out1, "output"),
                                  fmt1, "output_diff");
            flagged += write_grid(result.total_diff,
                                  out1.empty() ? "" : with_suffix(out1, "total"),
                                  fmt1, "total_diff");
            return finish(flagged);
        }
        if (cmd2->parsed()) {
            apply_config_file(cmd2, fig2, raw2, out2, fmt2);
            finalize_config(fig2, raw2);
            const qep::Fig2Result result = qep::run_fig2(fig2);
            size_t flagged = 0;
            flagged += write_grid(result.operator_avg,
                                  out2.empty() ? "" : with_suffix(out2, "operator"),
                                  fmt2, "operator_avg");
            flagged += write_grid(result.umegaki_avg,
                                  out2.empty() ? "" : with_suffix(out2, "umegaki"),
                                  fmt2, "umegaki_avg");
            return finish(flagged);
        }
        if (cmd3->parsed()) {
            apply_config_file(cmd3, fig3, raw3, out3, fmt3);
            finalize_config(fig3, raw3);
            const GridResult result = qep::run_fig3(fig3);
            return finish(write_grid(result, out3, fmt3, "fig3"));
        }
        apply_config_file(cmd_report, report, raw_report, out_report, fmt_report);
        finalize_config(report, raw_report);
        const qep::ReportResult result = qep::run_report(report);
        const std::string text = qep::report_json(result);
        if (out_report.empty()) {
            std::cout << text << '\n';
        } else {
            std::ofstream out(out_report);
            if (!out) throw qep::Error("cannot open output file " + out_report);
            out << text << '\n';
        }
        return 0;
    } catch (const qep::InvalidParameter& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    } catch (const qep::Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    }
}
