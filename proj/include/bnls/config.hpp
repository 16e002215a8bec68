#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bnls/diagnostics.hpp"
#include "bnls/evolution.hpp"

namespace bnls {

// Flat sectioned key-value configuration. Sections: physics, grid, stepping,
// regrid, stopping, output. Unknown keys are rejected; the echo lists every
// key with its effective value and reproduces the run exactly when re-parsed.
SimConfig parse_config(std::istream& is);
SimConfig parse_config(const std::string& text);
void echo_config(std::ostream& os, const SimConfig& config);
std::string config_text(const SimConfig& config);

struct ExpectedOutcome {
    Regime regime = Regime::subcritical;
    bool expect_collapse = false;
    std::optional<double> alpha_lo, alpha_hi;
    std::optional<double> p_lo, p_hi;
    std::optional<double> ring_radius_drift_max;  // over the final focusing decade
};

struct ExperimentPreset {
    std::string name;
    std::string note;  // human description of the run family
    SimConfig config;
    ExpectedOutcome expected;
};

const std::vector<ExperimentPreset>& presets();
const ExperimentPreset* find_preset(std::string_view name);

// Sigma lists for the regime sweeps (alpha_b = 1, 0.75, 0.5, 0.25, 0).
std::vector<double> sweep_sigmas(int dim);

// Sweep run built from the common ring template for one (sigma, d) pair.
ExperimentPreset make_sweep_preset(int dim, double sigma, double focusing_target = 1e3);

}  // namespace bnls
