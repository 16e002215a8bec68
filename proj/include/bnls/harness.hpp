#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bnls/config.hpp"
#include "bnls/diagnostics.hpp"
#include "bnls/evolution.hpp"

namespace bnls {

// Post-run analysis: regime classification, power-law fits over the standard
// window, and the limit diagnostic L^q L_t with q = 1/p_pred - 1.
struct AnalysisReport {
    RegimeLabel regime;
    std::optional<FitResult> p_fit;
    std::optional<FitResult> alpha_fit;
    std::optional<LimitDiagnostic> limit;
    double ring_radius_drift_last_decade = 0.0;  // relative change of r_max
    std::string notes;
};
AnalysisReport analyze_series(const DiagnosticsSeries& series);

// Resolve ic.amplitude from ic.power_fraction (fraction of the critical
// power) for ring data; no-op when an explicit amplitude is set.
void resolve_initial_amplitude(SimConfig& config);

struct RunSummary {
    double sigma = 0.0;
    int dim = 0;
    std::string regime;
    std::string status;
    double focusing = 0.0;
    std::optional<double> alpha, alpha_residual;
    std::optional<double> p, p_residual;
    double alpha_b = 0.0;
    double p_pred = 0.0;
    double max_power_drift = 0.0;
    double max_hamiltonian_drift = 0.0;
    double max_regrid_power_jump = 0.0;
    long steps = 0;
    int regrids = 0;
    bool complete = false;
};
void write_summary(std::ostream& os, const RunSummary& s);
RunSummary read_summary(std::istream& is);

// Execute one run and write the artifact set (effective config echo, series,
// snapshots + grid dumps, fit reports, limit diagnostic, plot data, summary).
// Returns 0 iff the run completed: collapse reached the width target or
// global existence was confirmed by the stagnation rule.
int run_experiment(const SimConfig& config, const ExpectedOutcome* expected,
                   const std::filesystem::path& out_dir);

// Fan out one run per sigma (workers share nothing) and write the combined
// alpha-vs-alpha_b table.
int run_sweep(int dim, const std::vector<double>& sigmas,
              const std::filesystem::path& out_dir, int threads,
              double focusing_target = 1e3);

// One-line-per-run summary table from run directories; gaps are marked and
// incomplete runs flagged. Rows sort by (d, alpha_b).
std::string report(const std::vector<std::filesystem::path>& run_dirs);

}  // namespace bnls
