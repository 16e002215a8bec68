#include "bnls/config.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bnls/textio.hpp"

namespace bnls {

namespace {

struct ParseState {
    SimConfig config;
    bool seen_d = false, seen_sigma = false, seen_amplitude = false, seen_center = false;
};

double require_double(std::string_view key, std::string_view val) {
    double v;
    if (!parse_double(val, v))
        throw std::invalid_argument("invalid number for key " + std::string(key));
    return v;
}

long require_long(std::string_view key, std::string_view val) {
    long v;
    if (!parse_long(val, v))
        throw std::invalid_argument("invalid integer for key " + std::string(key));
    return v;
}

bool require_bool(std::string_view key, std::string_view val) {
    bool v;
    if (!parse_bool(val, v))
        throw std::invalid_argument("invalid boolean for key " + std::string(key));
    return v;
}

void apply_key(ParseState& ps, const std::string& section, std::string_view key,
               std::string_view val) {
    SimConfig& c = ps.config;
    const std::string full = section + "." + std::string(key);
    if (section == "physics") {
        if (key == "d") {
            c.dims.dim = static_cast<int>(require_long(full, val));
            ps.seen_d = true;
        } else if (key == "sigma") {
            c.dims.sigma = require_double(full, val);
            ps.seen_sigma = true;
        } else if (key == "amplitude" || key == "A") {
            c.ic.amplitude = require_double(full, val);
            ps.seen_amplitude = true;
        } else if (key == "center" || key == "r_c") {
            c.ic.center = require_double(full, val);
            ps.seen_center = true;
        } else if (key == "width") {
            c.ic.width = require_double(full, val);
        } else if (key == "power_fraction") {
            c.ic.power_fraction = require_double(full, val);
            ps.seen_amplitude = true;
        } else {
            throw std::invalid_argument("unknown key " + full);
        }
    } else if (section == "grid") {
        if (key == "n")
            c.n = static_cast<std::size_t>(require_long(full, val));
        else if (key == "outer_radius")
            c.outer_radius = require_double(full, val);
        else
            throw std::invalid_argument("unknown key " + full);
    } else if (section == "stepping") {
        if (key == "cdt")
            c.stepping.cdt = require_double(full, val);
        else if (key == "dt_max")
            c.stepping.dt_max = require_double(full, val);
        else if (key == "dt_min")
            c.stepping.dt_min = require_double(full, val);
        else if (key == "corrector_passes")
            c.stepping.corrector_passes = static_cast<int>(require_long(full, val));
        else
            throw std::invalid_argument("unknown key " + full);
    } else if (section == "regrid") {
        if (key == "min_core_points")
            c.regrid.min_core_points = static_cast<int>(require_long(full, val));
        else if (key == "core_window_widths")
            c.regrid.core_window_widths = require_double(full, val);
        else if (key == "monitor_scale")
            c.monitor.scale_length = require_double(full, val);
        else if (key == "amplitude_ref")
            c.monitor.amplitude_ref = require_double(full, val);
        else if (key == "dr_cap")
            c.monitor.dr_cap = require_double(full, val);
        else if (key == "use_w3")
            c.monitor.use_w3 = require_bool(full, val);
        else if (key == "max_sweeps")
            c.monitor.max_sweeps = static_cast<int>(require_long(full, val));
        else if (key == "movement_tol")
            c.monitor.movement_tol = require_double(full, val);
        else
            throw std::invalid_argument("unknown key " + full);
    } else if (section == "stopping") {
        if (key == "l_min")
            c.stopping.width_min = require_double(full, val);
        else if (key == "max_steps")
            c.stopping.max_steps = require_long(full, val);
        else if (key == "stagnation_steps")
            c.stopping.stagnation_steps = require_long(full, val);
        else if (key == "max_seconds")
            c.stopping.max_seconds = require_double(full, val);
        else
            throw std::invalid_argument("unknown key " + full);
    } else if (section == "output") {
        if (key == "record_stride")
            c.output.record_stride = static_cast<int>(require_long(full, val));
        else if (key == "snapshots")
            c.output.decade_snapshots = require_bool(full, val);
        else
            throw std::invalid_argument("unknown key " + full);
    } else {
        throw std::invalid_argument("unknown section [" + section + "]");
    }
}

}  // namespace

SimConfig parse_config(std::istream& is) {
    ParseState ps;
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        if (sv.front() == '[') {
            if (sv.back() != ']')
                throw std::invalid_argument("malformed section header at line " +
                                            std::to_string(lineno));
            section = std::string(trim(sv.substr(1, sv.size() - 2)));
            continue;
        }
        const auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("expected key = value at line " + std::to_string(lineno));
        const auto key = trim(sv.substr(0, eq));
        const auto val = trim(sv.substr(eq + 1));
        if (section.empty())
            throw std::invalid_argument("key outside any section at line " +
                                        std::to_string(lineno));
        apply_key(ps, section, key, val);
    }
    if (!ps.seen_d) throw std::invalid_argument("missing required key physics.d");
    if (!ps.seen_sigma) throw std::invalid_argument("missing required key physics.sigma");
    if (!ps.seen_amplitude)
        throw std::invalid_argument(
            "missing required key physics.amplitude (or physics.power_fraction)");
    if (!ps.seen_center) throw std::invalid_argument("missing required key physics.center");
    ps.config.validate();
    return ps.config;
}

SimConfig parse_config(const std::string& text) {
    std::istringstream is(text);
    return parse_config(is);
}

void echo_config(std::ostream& os, const SimConfig& c) {
    os << "# effective configuration (defaults resolved)\n";
    os << "[physics]\n";
    os << "d = " << c.dims.dim << '\n';
    os << "sigma = " << fmt_g17(c.dims.sigma) << '\n';
    if (c.ic.power_fraction > 0.0) {
        os << "power_fraction = " << fmt_g17(c.ic.power_fraction) << '\n';
        if (c.ic.amplitude > 0.0)
            os << "# resolved amplitude = " << fmt_g17(c.ic.amplitude) << '\n';
    } else {
        os << "amplitude = " << fmt_g17(c.ic.amplitude) << '\n';
    }
    os << "center = " << fmt_g17(c.ic.center) << '\n';
    os << "width = " << fmt_g17(c.ic.width) << '\n';
    os << "[grid]\n";
    os << "n = " << c.n << '\n';
    os << "outer_radius = " << fmt_g17(c.resolved_outer_radius()) << '\n';
    os << "[stepping]\n";
    os << "cdt = " << fmt_g17(c.stepping.cdt) << '\n';
    os << "dt_max = " << fmt_g17(c.stepping.dt_max) << '\n';
    os << "dt_min = " << fmt_g17(c.stepping.dt_min) << '\n';
    os << "corrector_passes = " << c.stepping.corrector_passes << '\n';
    os << "[regrid]\n";
    os << "min_core_points = " << c.regrid.min_core_points << '\n';
    os << "core_window_widths = " << fmt_g17(c.regrid.core_window_widths) << '\n';
    os << "monitor_scale = " << fmt_g17(c.monitor.scale_length) << '\n';
    os << "amplitude_ref = " << fmt_g17(c.monitor.amplitude_ref) << '\n';
    os << "dr_cap = " << fmt_g17(c.monitor.dr_cap) << '\n';
    os << "use_w3 = " << (c.monitor.use_w3 ? "true" : "false") << '\n';
    os << "max_sweeps = " << c.monitor.max_sweeps << '\n';
    os << "movement_tol = " << fmt_g17(c.monitor.movement_tol) << '\n';
    os << "[stopping]\n";
    os << "l_min = " << fmt_g17(c.stopping.width_min) << '\n';
    os << "max_steps = " << c.stopping.max_steps << '\n';
    os << "stagnation_steps = " << c.stopping.stagnation_steps << '\n';
    os << "max_seconds = " << fmt_g17(c.stopping.max_seconds) << '\n';
    os << "[output]\n";
    os << "record_stride = " << c.output.record_stride << '\n';
    os << "snapshots = " << (c.output.decade_snapshots ? "true" : "false") << '\n';
}

std::string config_text(const SimConfig& config) {
    std::ostringstream os;
    echo_config(os, config);
    return os.str();
}

namespace {

SimConfig ring_config(int d, double sigma, double amplitude, double center, double l_min) {
    SimConfig c;
    c.dims.dim = d;
    c.dims.sigma = sigma;
    c.ic.amplitude = amplitude;
    c.ic.center = center;
    c.ic.width = 1.0;
    c.n = 4096;
    c.outer_radius = 4.0 * center;
    c.regrid.min_core_points = 800;
    c.monitor.scale_length = 10.0;
    c.stepping.cdt = 0.00625;
    c.stopping.width_min = l_min;
    return c;
}

std::vector<ExperimentPreset> build_presets() {
    std::vector<ExperimentPreset> out;

    {
        ExperimentPreset p;
        p.name = "standing-ring-d2";
        p.note = "reference standing-ring collapse, d=2 sigma=4, desk depth";
        p.config = ring_config(2, 4.0, 2.0, 5.0, 1e-3);
        p.expected.regime = Regime::standing_ring_critical_exponent;
        p.expected.expect_collapse = true;
        p.expected.p_lo = 0.24;
        p.expected.p_hi = 0.27;
        p.expected.alpha_lo = -0.05;
        p.expected.alpha_hi = 0.05;
        p.expected.ring_radius_drift_max = 0.05;
        out.push_back(p);
    }
    {
        ExperimentPreset p;
        p.name = "standing-ring-d2-deep";
        p.note = "standing-ring collapse pushed to deep focusing (long runtime)";
        p.config = ring_config(2, 4.0, 2.0, 5.0, 1e-8);
        p.expected.regime = Regime::standing_ring_critical_exponent;
        p.expected.expect_collapse = true;
        p.expected.p_lo = 0.24;
        p.expected.p_hi = 0.27;
        out.push_back(p);
    }
    {
        ExperimentPreset p;
        p.name = "standing-ring-d3";
        p.note = "standing-ring collapse, d=3 sigma=4, desk depth";
        p.config = ring_config(3, 4.0, 2.0, 5.0, 1e-3);
        p.expected.regime = Regime::standing_ring_critical_exponent;
        p.expected.expect_collapse = true;
        p.expected.p_lo = 0.24;
        p.expected.p_hi = 0.27;
        out.push_back(p);
    }
    {
        ExperimentPreset p;
        p.name = "shrinking-ring-d2";
        p.note = "shrinking-ring collapse, d=2 sigma=8/3, focusing 100";
        const double sigma = 8.0 / 3.0;
        const double l0 = std::pow(2.0, -sigma / 2.0);
        p.config = ring_config(2, sigma, 2.0, 10.0, 1e-2 * l0);
        p.expected.regime = Regime::shrinking_ring;
        p.expected.expect_collapse = true;
        p.expected.alpha_lo = 0.45;
        p.expected.alpha_hi = 0.55;
        p.expected.p_lo = 0.27;
        p.expected.p_hi = 0.30;
        out.push_back(p);
    }
    {
        ExperimentPreset p;
        p.name = "critical-ring-d2";
        p.note = "equal-rate critical-ring collapse, d=2 sigma=2, focusing 1000";
        p.config = ring_config(2, 2.0, 2.5, 10.0, (1.0 / 2.5) / 1000.0);
        p.expected.regime = Regime::critical_equal_rate;
        p.expected.expect_collapse = true;
        p.expected.alpha_lo = 0.95;
        p.expected.alpha_hi = 1.08;
        p.expected.p_lo = 0.24;
        p.expected.p_hi = 0.26;
        out.push_back(p);
    }
    {
        ExperimentPreset p;
        p.name = "critical-ring-d2-deep";
        p.note = "equal-rate critical-ring collapse pushed to focusing 4e5 (long runtime)";
        p.config = ring_config(2, 2.0, 2.5, 10.0, 1e-6);
        p.expected.regime = Regime::critical_equal_rate;
        p.expected.expect_collapse = true;
        p.expected.alpha_lo = 0.95;
        p.expected.alpha_hi = 1.08;
        p.expected.p_lo = 0.24;
        p.expected.p_hi = 0.26;
        out.push_back(p);
    }
    {
        ExperimentPreset p;
        p.name = "below-critical-d2";
        p.note = "critical-power check: ring data at 0.9 of the critical power";
        p.config = ring_config(2, 2.0, 0.0, 10.0, 1e-3);
        p.config.ic.power_fraction = 0.9;
        p.config.stopping.max_steps = 12000;
        p.config.stopping.stagnation_steps = 6000;
        p.expected.regime = Regime::critical_equal_rate;
        p.expected.expect_collapse = false;
        out.push_back(p);
    }
    {
        ExperimentPreset p;
        p.name = "above-critical-d2";
        p.note = "critical-power check: ring data at 3x the critical power";
        p.config = ring_config(2, 2.0, 0.0, 10.0, 5e-2);
        p.config.ic.power_fraction = 3.0;
        p.expected.regime = Regime::critical_equal_rate;
        p.expected.expect_collapse = true;
        out.push_back(p);
    }
    return out;
}

}  // namespace

const std::vector<ExperimentPreset>& presets() {
    static const std::vector<ExperimentPreset> list = build_presets();
    return list;
}

const ExperimentPreset* find_preset(std::string_view name) {
    for (const auto& p : presets()) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

std::vector<double> sweep_sigmas(int dim) {
    if (dim == 2) return {2.0, 16.0 / 7.0, 8.0 / 3.0, 16.0 / 5.0, 4.0};
    if (dim == 3) return {4.0 / 3.0, 8.0 / 5.0, 2.0, 8.0 / 3.0, 4.0};
    throw std::invalid_argument("sweep sigma lists exist for d = 2 and d = 3");
}

ExperimentPreset make_sweep_preset(int dim, double sigma, double focusing_target) {
    ExperimentPreset p;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "sweep-d%d-sigma-%.6g", dim, sigma);
    p.name = buf;
    p.note = "regime sweep point";
    const double l0 = std::pow(2.0, -sigma / 2.0);
    p.config = ring_config(dim, sigma, 2.0, 10.0, l0 / focusing_target);
    const RegimeLabel label = classify_regime(sigma, dim);
    p.expected.regime = label.regime;
    p.expected.expect_collapse = true;
    if (label.regime != Regime::subcritical) {
        p.expected.alpha_lo = label.alpha_b - 0.07;
        p.expected.alpha_hi = label.alpha_b + 0.07;
        p.expected.p_lo = label.p_pred - 0.02;
        p.expected.p_hi = label.p_pred + 0.02;
    }
    return p;
}

}  // namespace bnls
