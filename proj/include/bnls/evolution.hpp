#pragma once

#include <functional>
#include <string>

#include "bnls/banded.hpp"
#include "bnls/diagnostics.hpp"
#include "bnls/field.hpp"
#include "bnls/grid.hpp"
#include "bnls/mesh.hpp"
#include "bnls/operators.hpp"

namespace bnls {

struct SteppingParams {
    double cdt = 0.05;  // dt = cdt * L^4: fixed phase advance per step
    double dt_max = 1e-3;
    double dt_min = 1e-16;
    int corrector_passes = 2;
};

struct StoppingParams {
    double width_min = 1e-3;       // collapse target
    long max_steps = 500000;
    long stagnation_steps = 4000;  // no width decrease for this many steps -> no collapse
    double max_seconds = 0.0;      // 0 = unlimited
};

struct OutputParams {
    int record_stride = 1;
    bool decade_snapshots = true;
};

// Ring Gaussian initial condition  A exp(-((r - center)/width)^2). When
// power_fraction > 0 the amplitude is resolved by the harness so that the
// discrete power equals power_fraction * critical_power(d).
struct InitialCondition {
    double amplitude = 0.0;
    double center = 5.0;
    double width = 1.0;
    double power_fraction = 0.0;
};

struct SimConfig {
    DimensionParams dims;
    InitialCondition ic;
    std::size_t n = 2048;
    double outer_radius = 0.0;  // 0 -> 4 * ic.center
    SteppingParams stepping;
    RegridPolicy regrid;
    MonitorParams monitor;
    StoppingParams stopping;
    OutputParams output;

    double resolved_outer_radius() const;
    void validate() const;  // throws std::invalid_argument naming the offending key
};

struct SimulationState {
    WaveField field;
    RadialGrid grid;
    long step_count = 0;
    int regrid_count = 0;
    double tau = 0.0;  // accumulated phase integral dt / L^4 (bookkeeping only)
};

struct RegridEvent {
    long step = 0;
    double time = 0.0;
    double width = 0.0;
    double power_jump = 0.0;  // relative |P_after - P_before| / P_before
    double max_spacing_ratio = 1.0;
    double max_second_difference = 0.0;
    int core_points_before = 0;
    int core_points_after = 0;
};

enum class RunStatus {
    collapse_reached,
    global_existence,
    step_budget_exhausted,
    wall_clock_exhausted,
};
const char* run_status_name(RunStatus s);

struct RunSinks {
    std::function<void(const StepRecord&)> on_record;
    std::function<void(const SimulationState&, const std::string& label)> on_snapshot;
    std::function<void(const RegridEvent&)> on_regrid;
    std::function<void(const std::string&)> on_message;
};

struct RunResult {
    DiagnosticsSeries series;
    SimulationState final_state;
    RunStatus status = RunStatus::step_budget_exhausted;
    double initial_width = 0.0;
    double min_width = 0.0;
    double focusing = 1.0;  // initial_width / min_width
    double max_power_drift = 0.0;
    double max_hamiltonian_drift = 0.0;
    double max_regrid_power_jump = 0.0;
    std::vector<RegridEvent> regrid_events;
};

double choose_dt(double width_scale, double cdt, double dt_max = 1e-3, double dt_min = 1e-16);

// |u|^{2 sigma} u with cheap paths for the exponents the presets use.
class NonlinearPower {
public:
    explicit NonlinearPower(double sigma);
    Complex operator()(const Complex& u) const { return magnitude_power(std::norm(u)) * u; }
    double magnitude_power(double abs2) const;  // |u|^{2 sigma} from |u|^2

private:
    double sigma_;
    int mode_;  // 0 general, 1 integer exponent, 2 third-integer exponent
    int ipow_;
};

// Predictor-corrector Crank-Nicolson on a fixed grid:
//   (I + i dt/2 B) psi* = (I - i dt/2 B) psi^n + i dt N(psi^n)
// followed by corrector passes with N evaluated at (psi^n + psi*)/2,
// N(u) = |u|^{2 sigma} u. Second order in time. Workspace is reused across
// steps; one stepper serves one simulation.
class TimeStepper {
public:
    TimeStepper(const RadialGrid& grid, const DimensionParams& dims, int corrector_passes = 2);
    WaveField advance(const WaveField& field, double dt);
    const BandedOperator& biharmonic() const { return biharmonic_; }

private:
    BandedOperator biharmonic_;
    NonlinearPower nonlinear_;
    int passes_;
    BandedOperator system_;
    BandLU lu_;
    std::vector<Complex> base_, rhs_, current_;
};

// Single-step convenience wrapper (assembles operators for the state's grid).
SimulationState step(const SimulationState& state, double dt, const DimensionParams& dims,
                     int corrector_passes = 2);

// Sample the analytic initial condition on a monitor-adapted grid.
SimulationState make_initial_state(const SimConfig& config);

// Main loop: diagnostics -> snapshots -> regrid when under-resolved ->
// operator reassembly (only on regrid) -> adaptive-dt step, until the width
// target, stagnation, or a budget is reached.
RunResult run(const SimConfig& config, const RunSinks& sinks = {});

// Snapshot writer: header lines (t, L, r_max, P, H, N, d, sigma) then rows
// "r Re(psi) Im(psi)", 17 significant digits.
void write_snapshot(std::ostream& os, const SimulationState& state,
                    const DimensionParams& dims);
struct SnapshotData {
    SimulationState state;
    DimensionParams dims;
};
SnapshotData read_snapshot(std::istream& is);

}  // namespace bnls
