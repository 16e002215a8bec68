#include "bnls/evolution.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "bnls/norms.hpp"
#include "bnls/textio.hpp"

namespace bnls {

double SimConfig::resolved_outer_radius() const {
    return outer_radius > 0.0 ? outer_radius : 4.0 * ic.center;
}

void SimConfig::validate() const {
    if (dims.dim < 1) throw std::invalid_argument("physics.d must be >= 1");
    if (!(dims.sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (n < 8) throw std::invalid_argument("grid.n must be >= 8 (stencil needs 7 points)");
    if (!(ic.amplitude > 0.0) && !(ic.power_fraction > 0.0))
        throw std::invalid_argument("physics.amplitude (or physics.power_fraction) is required");
    if (!(ic.center >= 0.0)) throw std::invalid_argument("physics.center must be >= 0");
    if (!(ic.width > 0.0)) throw std::invalid_argument("physics.width must be positive");
    const double outer = resolved_outer_radius();
    if (!(outer > ic.center + 4.0 * ic.width))
        throw std::invalid_argument("grid.outer_radius must exceed center + 4 widths");
    if (!(stepping.cdt > 0.0)) throw std::invalid_argument("stepping.cdt must be positive");
    if (!(stepping.dt_max > 0.0)) throw std::invalid_argument("stepping.dt_max must be positive");
    if (stepping.corrector_passes < 0)
        throw std::invalid_argument("stepping.corrector_passes must be >= 0");
    if (!(stopping.width_min > 0.0)) throw std::invalid_argument("stopping.l_min must be positive");
    if (stopping.max_steps < 1) throw std::invalid_argument("stopping.max_steps must be >= 1");
    if (regrid.min_core_points < 1)
        throw std::invalid_argument("regrid.min_core_points must be >= 1");
    if (!(regrid.core_window_widths > 0.0))
        throw std::invalid_argument("regrid.core_window_widths must be positive");
}

const char* run_status_name(RunStatus s) {
    switch (s) {
        case RunStatus::collapse_reached: return "collapse_reached";
        case RunStatus::global_existence: return "global_existence";
        case RunStatus::step_budget_exhausted: return "step_budget_exhausted";
        case RunStatus::wall_clock_exhausted: return "wall_clock_exhausted";
    }
    return "unknown";
}

double choose_dt(double width_scale, double cdt, double dt_max, double dt_min) {
    if (!(width_scale > 0.0)) throw std::invalid_argument("choose_dt: width must be positive");
    const double dt = cdt * width_scale * width_scale * width_scale * width_scale;
    return std::clamp(dt, dt_min, dt_max);
}

NonlinearPower::NonlinearPower(double sigma) : sigma_(sigma), mode_(0), ipow_(0) {
    const double rounded = std::round(sigma);
    const double third = std::round(3.0 * sigma);
    if (std::abs(sigma - rounded) < 1e-14 && rounded >= 1.0 && rounded <= 16.0) {
        mode_ = 1;
        ipow_ = static_cast<int>(rounded);
    } else if (std::abs(3.0 * sigma - third) < 1e-13 && third >= 1.0 && third <= 48.0) {
        mode_ = 2;
        ipow_ = static_cast<int>(third);
    }
}

namespace {
inline double powi(double x, int k) {
    double acc = 1.0;
    while (k > 0) {
        if (k & 1) acc *= x;
        x *= x;
        k >>= 1;
    }
    return acc;
}
}  // namespace

double NonlinearPower::magnitude_power(double abs2) const {
    switch (mode_) {
        case 1: return powi(abs2, ipow_);
        case 2: return powi(std::cbrt(abs2), ipow_);
        default: return std::pow(abs2, sigma_);
    }
}

TimeStepper::TimeStepper(const RadialGrid& grid, const DimensionParams& dims,
                         int corrector_passes)
    : biharmonic_(biharmonic_operator(grid, dims.dim)),
      nonlinear_(dims.sigma),
      passes_(corrector_passes),
      system_(biharmonic_.size(), biharmonic_.lower_bands(), biharmonic_.upper_bands()),
      base_(biharmonic_.size()),
      rhs_(biharmonic_.size()),
      current_(biharmonic_.size()) {}

WaveField TimeStepper::advance(const WaveField& field, double dt) {
    const std::size_t n = field.size();
    if (n != biharmonic_.size()) throw std::invalid_argument("advance: field/operator mismatch");
    if (!(dt > 0.0)) throw std::invalid_argument("advance: dt must be positive");

    const Complex ihalf(0.0, 0.5 * dt);
    const Complex idt(0.0, dt);

    system_.assign_identity_plus_scaled(biharmonic_, ihalf);
    lu_.factor(system_);

    biharmonic_.apply_into(field.values, base_);
    for (std::size_t i = 0; i < n; ++i) base_[i] = field.values[i] - ihalf * base_[i];

    for (std::size_t i = 0; i < n; ++i) rhs_[i] = base_[i] + idt * nonlinear_(field.values[i]);
    current_ = rhs_;
    lu_.solve_in_place(current_);

    for (int pass = 0; pass < passes_; ++pass) {
        for (std::size_t i = 0; i < n; ++i) {
            const Complex mid = 0.5 * (field.values[i] + current_[i]);
            rhs_[i] = base_[i] + idt * nonlinear_(mid);
        }
        current_ = rhs_;
        lu_.solve_in_place(current_);
    }

    WaveField out;
    out.values = current_;
    out.time = field.time + dt;
    if (!out.finite())
        throw std::runtime_error(
            "non-finite field after implicit solve (collapse passed the resolution limit or dt "
            "too large)");
    return out;
}

SimulationState step(const SimulationState& state, double dt, const DimensionParams& dims,
                     int corrector_passes) {
    TimeStepper stepper(state.grid, dims, corrector_passes);
    SimulationState out = state;
    out.field = stepper.advance(state.field, dt);
    out.step_count = state.step_count + 1;
    return out;
}

namespace {

WaveField sample_initial_condition(const SimConfig& config, const RadialGrid& grid) {
    WaveField field;
    field.time = 0.0;
    field.values.resize(grid.size());
    const double a = config.ic.amplitude;
    const double c = config.ic.center;
    const double w = config.ic.width;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = (grid[i] - c) / w;
        field.values[i] = Complex(a * std::exp(-u * u), 0.0);
    }
    return field;
}

}  // namespace

SimulationState make_initial_state(const SimConfig& config_in) {
    SimConfig config = config_in;
    config.validate();
    if (!(config.ic.amplitude > 0.0))
        throw std::invalid_argument(
            "physics.amplitude unresolved (resolve power_fraction before running)");
    if (config.monitor.amplitude_ref <= 0.0) config.monitor.amplitude_ref = config.ic.amplitude;
    const double outer = config.resolved_outer_radius();
    RadialGrid grid = RadialGrid::uniform(config.n, outer);
    WaveField field = sample_initial_condition(config, grid);
    grid = adapt_grid(field, grid, config.monitor);
    SimulationState state;
    state.field = sample_initial_condition(config, grid);
    state.grid = std::move(grid);
    return state;
}

RunResult run(const SimConfig& config_in, const RunSinks& sinks) {
    SimConfig config = config_in;
    if (config.monitor.amplitude_ref <= 0.0) config.monitor.amplitude_ref = config.ic.amplitude;
    const auto t_start = std::chrono::steady_clock::now();
    RunResult result;
    result.series.dim = config.dims.dim;
    result.series.sigma = config.dims.sigma;

    SimulationState state = make_initial_state(config);
    TimeStepper stepper(state.grid, config.dims, config.stepping.corrector_passes);
    BandedOperator laplacian = laplacian_operator(state.grid, config.dims.dim);

    const NormReport norms0 =
        weighted_norms(state.field, state.grid, config.dims.dim, config.dims.sigma, laplacian);
    const double power0 = norms0.power;
    const double ham0 = norms0.hamiltonian;

    PeakInfo peak = locate_peak(state.field, state.grid);
    const double width0 = std::pow(peak.amplitude, -config.dims.sigma / 2.0);
    result.initial_width = width0;
    result.min_width = width0;

    double best_width = width0;
    long last_improvement = 0;
    int last_decade = static_cast<int>(std::floor(std::log10(std::max(1.0 / width0, 1e-300))));
    result.status = RunStatus::step_budget_exhausted;

    auto emit_message = [&](const std::string& m) {
        if (sinks.on_message) sinks.on_message(m);
    };

    while (true) {
        peak = locate_peak(state.field, state.grid);
        const double width_now = std::pow(peak.amplitude, -config.dims.sigma / 2.0);
        result.min_width = std::min(result.min_width, width_now);

        const double dt =
            choose_dt(width_now, config.stepping.cdt, config.stepping.dt_max,
                      config.stepping.dt_min);
        const double window = config.regrid.core_window_widths * width_now;
        const int core_points =
            static_cast<int>(count_core_points(state.grid, peak.r_max, window));

        // Norms only on recorded steps; the peak drives dt and regrids.
        if (state.step_count % config.output.record_stride == 0) {
            const NormReport norms = weighted_norms(state.field, state.grid, config.dims.dim,
                                                    config.dims.sigma, laplacian);
            const double power_drift = std::abs(norms.power - power0) / std::abs(power0);
            // The Hamiltonian is a difference of two terms that both blow up
            // during collapse; drift is measured against the dominant term
            // scale so it stays evaluable at deep focusing.
            const double ham_scale = std::max(std::abs(ham0), norms.kinetic);
            const double ham_drift =
                std::abs(norms.hamiltonian - ham0) / std::max(ham_scale, 1e-300);
            result.max_power_drift = std::max(result.max_power_drift, power_drift);
            result.max_hamiltonian_drift = std::max(result.max_hamiltonian_drift, ham_drift);

            StepRecord record;
            record.time = state.field.time;
            record.width = width_now;
            record.ring_radius = peak.r_max;
            record.power = norms.power;
            record.hamiltonian = norms.hamiltonian;
            record.dt = dt;
            record.core_points = core_points;
            record.regrid_count = state.regrid_count;
            result.series.records.push_back(record);
            if (sinks.on_record) sinks.on_record(record);
        }

        if (config.output.decade_snapshots && sinks.on_snapshot) {
            const int decade = static_cast<int>(std::floor(std::log10(1.0 / width_now)));
            while (decade > last_decade) {
                ++last_decade;
                if (last_decade >= 1)
                    sinks.on_snapshot(state, "invL_1e+" + std::string(last_decade < 10 ? "0" : "") +
                                                 std::to_string(last_decade));
            }
        }

        if (width_now < best_width * (1.0 - 1e-3)) {
            best_width = width_now;
            last_improvement = state.step_count;
        }

        if (width_now <= config.stopping.width_min) {
            result.status = RunStatus::collapse_reached;
            emit_message("collapse reached width target L = " + fmt_g17(width_now));
            break;
        }
        if (state.step_count - last_improvement > config.stopping.stagnation_steps) {
            result.status = RunStatus::global_existence;
            emit_message("no collapse detected (width stagnated above the target)");
            break;
        }
        if (state.step_count >= config.stopping.max_steps) {
            result.status = RunStatus::step_budget_exhausted;
            emit_message("step budget exhausted");
            break;
        }
        if (config.stopping.max_seconds > 0.0) {
            const double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
            if (elapsed > config.stopping.max_seconds) {
                result.status = RunStatus::wall_clock_exhausted;
                emit_message("wall-clock budget exhausted");
                break;
            }
        }

        if (needs_regrid(state.field, state.grid, width_now, peak.r_max, config.regrid)) {
            const double power_before = discrete_power(state.field, state.grid, config.dims.dim);
            RadialGrid new_grid = adapt_grid(state.field, state.grid, config.monitor);
            WaveField new_field = regrid(state.field, state.grid, new_grid);
            const double power_after = discrete_power(new_field, new_grid, config.dims.dim);

            RegridEvent event;
            event.step = state.step_count;
            event.time = state.field.time;
            event.width = width_now;
            event.power_jump = std::abs(power_after - power_before) / std::abs(power_before);
            event.max_spacing_ratio = max_spacing_ratio(new_grid);
            event.max_second_difference = max_second_difference_ratio(new_grid);
            event.core_points_before = core_points;
            event.core_points_after =
                static_cast<int>(count_core_points(new_grid, peak.r_max, window));
            result.regrid_events.push_back(event);
            result.max_regrid_power_jump =
                std::max(result.max_regrid_power_jump, event.power_jump);
            if (sinks.on_regrid) sinks.on_regrid(event);

            state.grid = std::move(new_grid);
            state.field = std::move(new_field);
            state.regrid_count += 1;
            stepper = TimeStepper(state.grid, config.dims, config.stepping.corrector_passes);
            laplacian = laplacian_operator(state.grid, config.dims.dim);
        }

        state.field = stepper.advance(state.field, dt);
        state.tau += dt / (width_now * width_now * width_now * width_now);
        state.step_count += 1;
    }

    if (sinks.on_snapshot) sinks.on_snapshot(state, "final");
    result.focusing = result.initial_width / result.min_width;
    result.final_state = std::move(state);
    return result;
}

void write_snapshot(std::ostream& os, const SimulationState& state,
                    const DimensionParams& dims) {
    const PeakInfo peak = locate_peak(state.field, state.grid);
    const double width_now = std::pow(peak.amplitude, -dims.sigma / 2.0);
    const NormReport norms = weighted_norms(state.field, state.grid, dims.dim, dims.sigma);
    os << "# t = " << fmt_g17(state.field.time) << '\n';
    os << "# L = " << fmt_g17(width_now) << '\n';
    os << "# r_max = " << fmt_g17(peak.r_max) << '\n';
    os << "# P = " << fmt_g17(norms.power) << '\n';
    os << "# H = " << fmt_g17(norms.hamiltonian) << '\n';
    os << "# n = " << state.grid.size() << '\n';
    os << "# d = " << dims.dim << '\n';
    os << "# sigma = " << fmt_g17(dims.sigma) << '\n';
    os << "r\tre\tim\n";
    for (std::size_t i = 0; i < state.grid.size(); ++i) {
        os << fmt_g17(state.grid[i]) << '\t' << fmt_g17(state.field.values[i].real()) << '\t'
           << fmt_g17(state.field.values[i].imag()) << '\n';
    }
}

SnapshotData read_snapshot(std::istream& is) {
    SnapshotData out;
    std::vector<double> radii;
    std::vector<Complex> values;
    double time = 0.0;
    std::string line;
    while (std::getline(is, line)) {
        std::string_view sv = trim(line);
        if (sv.empty()) continue;
        if (sv.front() == '#') {
            const auto eq = sv.find('=');
            if (eq == std::string_view::npos) continue;
            const auto key = trim(sv.substr(1, eq - 1));
            const auto val = trim(sv.substr(eq + 1));
            double v;
            if (key == "t" && parse_double(val, v)) time = v;
            if (key == "d" && parse_double(val, v)) out.dims.dim = static_cast<int>(v);
            if (key == "sigma" && parse_double(val, v)) out.dims.sigma = v;
            continue;
        }
        if (sv.front() == 'r') continue;  // column header
        const auto fields = split_fields(sv);
        if (fields.size() != 3) continue;
        double r, re, im;
        if (parse_double(fields[0], r) && parse_double(fields[1], re) &&
            parse_double(fields[2], im)) {
            radii.push_back(r);
            values.emplace_back(re, im);
        }
    }
    out.state.grid = RadialGrid(std::move(radii));
    out.state.field.values = std::move(values);
    out.state.field.time = time;
    return out;
}

}  // namespace bnls
