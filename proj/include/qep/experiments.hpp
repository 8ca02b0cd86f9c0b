#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qep/classical.hpp"
#include "qep/entropy.hpp"

namespace qep {

struct BlochPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

DensityMatrix bloch_state(const BlochPoint& p);

enum class TauMode { Explicit, ChannelOutput, Xi };

enum class Scenario { Fig1Diff, Fig2FixedPoint, Fig3TauXi, Report };

/// Sweep / report configuration. Scenario presets carry each case study's
/// default parameters; every field can be overridden from the CLI.
struct ScenarioConfig {
    Scenario scenario = Scenario::Report;
    double xi_population = 0.9;
    double phi = 0.2;
    std::vector<int> n_values = {1, 4, 16};
    BlochPoint gamma_bloch;
    BlochPoint rho_bloch;
    BlochPoint tau_bloch;
    TauMode tau_mode = TauMode::ChannelOutput;
    int grid_resolution = 101;
    double radius_clip = 0.999;
    bool variant_reverse = false;
    int threads = 1;

    // Report extras: an optional second collision stage (superadditivity)
    // and an optional classical process to embed instead of the collision
    // channel.
    std::optional<double> phi2;
    double xi_population2 = 0.9;
    int n2 = 1;
    std::optional<ClassicalProcess> classical;
};

ScenarioConfig fig1_defaults();
ScenarioConfig fig2_defaults();
ScenarioConfig fig3_defaults();
ScenarioConfig report_defaults();

struct GridRow {
    double x = 0.0;
    double z = 0.0;
    int n = 1;
    double value = 0.0;
    std::string flags;  // empty, or "singular" for numerical failures
};

/// Rows ordered by (n, z, x); points with Bloch norm above radius_clip are
/// skipped, failed points are flagged rather than dropped.
using GridResult = std::vector<GridRow>;

struct Fig1Result {
    GridResult input_diff;   // D_BS(rho||gamma) - D(rho||gamma), >= 0
    GridResult output_diff;  // difference of the output-side terms
    GridResult total_diff;   // closed-form average minus relative-entropy form
};

Fig1Result run_fig1(const ScenarioConfig& config);

struct Fig2Result {
    GridResult operator_avg;  // closed form / operator average
    GridResult umegaki_avg;   // three-term relative-entropy form
};

Fig2Result run_fig2(const ScenarioConfig& config);

GridResult run_fig3(const ScenarioConfig& config);

struct ReportResult {
    double average = 0.0;          // operator average
    double average_umegaki = 0.0;  // relative-entropy form
    double jarzynski = 0.0;
    std::vector<CrooksRow> crooks;
    bool crooks_available = false;
    std::string note;  // set when Crooks statistics are unavailable
    std::optional<SuperadditivityReport> superadd;
};

ReportResult run_report(const ScenarioConfig& config);

void write_grid_csv(std::ostream& out, const GridResult& grid);
void write_grid_json(std::ostream& out, const GridResult& grid);
std::string report_json(const ReportResult& report);
std::size_t count_flagged(const GridResult& grid);

/// Fast fixed-seed identity checks; prints one line per check and returns
/// the number of failures.
int run_selftest(std::ostream& out);

}  // namespace qep
