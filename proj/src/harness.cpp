#include "bnls/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "bnls/groundstate.hpp"
#include "bnls/norms.hpp"
#include "bnls/textio.hpp"

namespace fs = std::filesystem;

namespace bnls {

AnalysisReport analyze_series(const DiagnosticsSeries& series) {
    AnalysisReport out;
    out.regime = classify_regime(series.sigma, series.dim);

    const auto widths = series.widths();
    const auto times = series.times();
    const auto radii = series.ring_radii();
    if (widths.empty()) {
        out.notes = "empty series";
        return out;
    }

    const auto window = select_fit_window(widths);
    if (window.size() >= 10) {
        std::vector<double> t, w, r;
        t.reserve(window.size());
        w.reserve(window.size());
        r.reserve(window.size());
        bool radii_positive = true;
        for (std::size_t idx : window) {
            t.push_back(times[idx]);
            w.push_back(widths[idx]);
            r.push_back(radii[idx]);
            if (!(radii[idx] > 0.0)) radii_positive = false;
        }
        try {
            FitResult fit = fit_power_law(t, w);
            fit.window_first = window.front();
            fit.window_last = window.back();
            out.p_fit = fit;
        } catch (const std::exception& e) {
            out.notes += std::string("p fit unavailable: ") + e.what() + "; ";
        }
        if (radii_positive) {
            try {
                FitResult fit = fit_shrink_rate(w, r);
                fit.window_first = window.front();
                fit.window_last = window.back();
                out.alpha_fit = fit;
            } catch (const std::exception& e) {
                out.notes += std::string("alpha fit unavailable: ") + e.what() + "; ";
            }
        }
        if (std::isfinite(out.regime.p_pred)) {
            const double q = 1.0 / out.regime.p_pred - 1.0;
            try {
                out.limit = limit_diagnostic(t, w, q);
            } catch (const std::exception& e) {
                out.notes += std::string("limit diagnostic unavailable: ") + e.what() + "; ";
            }
        }
    } else {
        out.notes += "fit window shorter than 10 samples; ";
    }

    // Ring-radius drift across the final focusing decade.
    const double w_end = widths.back();
    double r_lo = std::numeric_limits<double>::infinity(), r_hi = 0.0;
    for (std::size_t i = 0; i < widths.size(); ++i) {
        if (widths[i] <= 10.0 * w_end) {
            r_lo = std::min(r_lo, radii[i]);
            r_hi = std::max(r_hi, radii[i]);
        }
    }
    const double r_ref = std::max(std::abs(radii.back()), 1e-300);
    out.ring_radius_drift_last_decade = (r_hi - r_lo) / r_ref;
    return out;
}

void resolve_initial_amplitude(SimConfig& config) {
    if (!(config.ic.power_fraction > 0.0)) return;
    const double pcr = critical_power(config.dims.dim);
    const double target = config.ic.power_fraction * pcr;

    // Unit-amplitude ring power by fine trapezoid quadrature.
    const double outer = config.resolved_outer_radius();
    const std::size_t nq = 200001;
    const double h = outer / static_cast<double>(nq - 1);
    double integral = 0.0;
    for (std::size_t i = 0; i < nq; ++i) {
        const double r = h * static_cast<double>(i);
        const double u = (r - config.ic.center) / config.ic.width;
        const double f =
            std::exp(-2.0 * u * u) * (config.dims.dim == 1 ? 1.0 : std::pow(r, config.dims.dim - 1));
        integral += (i == 0 || i == nq - 1) ? 0.5 * f : f;
    }
    integral *= h;
    config.ic.amplitude = std::sqrt(target / integral);
}

void write_summary(std::ostream& os, const RunSummary& s) {
    os << "sigma: " << fmt_g17(s.sigma) << '\n';
    os << "d: " << s.dim << '\n';
    os << "regime: " << s.regime << '\n';
    os << "status: " << s.status << '\n';
    os << "complete: " << (s.complete ? "true" : "false") << '\n';
    os << "focusing: " << fmt_g17(s.focusing) << '\n';
    auto opt = [&](const char* key, const std::optional<double>& v) {
        os << key << ": " << (v ? fmt_g17(*v) : std::string("none")) << '\n';
    };
    opt("alpha", s.alpha);
    opt("alpha_residual", s.alpha_residual);
    opt("p", s.p);
    opt("p_residual", s.p_residual);
    os << "alpha_b: " << fmt_g17(s.alpha_b) << '\n';
    os << "p_pred: " << fmt_g17(s.p_pred) << '\n';
    os << "max_power_drift: " << fmt_g17(s.max_power_drift) << '\n';
    os << "max_hamiltonian_drift: " << fmt_g17(s.max_hamiltonian_drift) << '\n';
    os << "max_regrid_power_jump: " << fmt_g17(s.max_regrid_power_jump) << '\n';
    os << "steps: " << s.steps << '\n';
    os << "regrids: " << s.regrids << '\n';
}

RunSummary read_summary(std::istream& is) {
    RunSummary s;
    std::string line;
    auto as_opt = [](std::string_view v) -> std::optional<double> {
        double d;
        if (v == "none" || !parse_double(v, d)) return std::nullopt;
        return d;
    };
    while (std::getline(is, line)) {
        const auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        const auto key = trim(std::string_view(line).substr(0, colon));
        const auto val = trim(std::string_view(line).substr(colon + 1));
        double d;
        long l;
        if (key == "sigma" && parse_double(val, d)) s.sigma = d;
        else if (key == "d" && parse_long(val, l)) s.dim = static_cast<int>(l);
        else if (key == "regime") s.regime = std::string(val);
        else if (key == "status") s.status = std::string(val);
        else if (key == "complete") s.complete = (val == "true");
        else if (key == "focusing" && parse_double(val, d)) s.focusing = d;
        else if (key == "alpha") s.alpha = as_opt(val);
        else if (key == "alpha_residual") s.alpha_residual = as_opt(val);
        else if (key == "p") s.p = as_opt(val);
        else if (key == "p_residual") s.p_residual = as_opt(val);
        else if (key == "alpha_b" && parse_double(val, d)) s.alpha_b = d;
        else if (key == "p_pred" && parse_double(val, d)) s.p_pred = d;
        else if (key == "max_power_drift" && parse_double(val, d)) s.max_power_drift = d;
        else if (key == "max_hamiltonian_drift" && parse_double(val, d)) s.max_hamiltonian_drift = d;
        else if (key == "max_regrid_power_jump" && parse_double(val, d)) s.max_regrid_power_jump = d;
        else if (key == "steps" && parse_long(val, l)) s.steps = l;
        else if (key == "regrids" && parse_long(val, l)) s.regrids = static_cast<int>(l);
    }
    return s;
}

namespace {

void write_two_columns(const fs::path& path, std::string_view col_a, std::string_view col_b,
                       std::span<const double> a, std::span<const double> b) {
    std::ofstream os(path);
    os << col_a << '\t' << col_b << '\n';
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
        os << fmt_g17(a[i]) << '\t' << fmt_g17(b[i]) << '\n';
}

}  // namespace

int run_experiment(const SimConfig& config_in, const ExpectedOutcome* expected,
                   const fs::path& out_dir) {
    fs::create_directories(out_dir);
    fs::create_directories(out_dir / "snapshots");
    fs::create_directories(out_dir / "grids");
    fs::create_directories(out_dir / "plotdata");

    SimConfig config = config_in;
    resolve_initial_amplitude(config);
    config.validate();
    {
        std::ofstream echo(out_dir / "config_effective.txt");
        echo_config(echo, config);
    }

    std::ofstream log(out_dir / "run.log");
    std::vector<std::pair<SimulationState, std::string>> snapshots;

    RunSinks sinks;
    sinks.on_message = [&](const std::string& m) { log << m << '\n'; };
    sinks.on_regrid = [&](const RegridEvent& e) {
        log << "regrid step=" << e.step << " t=" << fmt_g17(e.time) << " L=" << fmt_g17(e.width)
            << " power_jump=" << fmt_g17(e.power_jump)
            << " max_spacing_ratio=" << fmt_g17(e.max_spacing_ratio)
            << " core_before=" << e.core_points_before << " core_after=" << e.core_points_after
            << '\n';
    };
    sinks.on_snapshot = [&](const SimulationState& state, const std::string& label) {
        snapshots.emplace_back(state, label);
        std::ofstream snap(out_dir / "snapshots" / ("snapshot_" + label + ".txt"));
        write_snapshot(snap, state, config.dims);
        std::ofstream gridfile(out_dir / "snapshots" / ("grid_" + label + ".txt"));
        state.grid.dump(gridfile);
    };

    RunResult result;
    try {
        result = run(config, sinks);
    } catch (const std::exception& e) {
        log << "fatal: " << e.what() << '\n';
        RunSummary s;
        s.sigma = config.dims.sigma;
        s.dim = config.dims.dim;
        s.regime = "unknown";
        s.status = std::string("fatal: ") + e.what();
        s.complete = false;
        std::ofstream os(out_dir / "summary.txt");
        write_summary(os, s);
        return 2;
    }

    {
        std::ofstream grid0(out_dir / "grids" / "grid_final.txt");
        result.final_state.grid.dump(grid0);
    }
    {
        std::ofstream series_os(out_dir / "series.tsv");
        write_series(series_os, result.series);
    }

    const AnalysisReport analysis = analyze_series(result.series);
    const bool collapsed = result.status == RunStatus::collapse_reached;

    RunSummary summary;
    summary.sigma = config.dims.sigma;
    summary.dim = config.dims.dim;
    summary.regime = regime_name(analysis.regime.regime);
    summary.status = run_status_name(result.status);
    summary.complete =
        collapsed || result.status == RunStatus::global_existence;
    summary.focusing = result.focusing;
    summary.alpha_b = analysis.regime.alpha_b;
    summary.p_pred = analysis.regime.p_pred;
    summary.max_power_drift = result.max_power_drift;
    summary.max_hamiltonian_drift = result.max_hamiltonian_drift;
    summary.max_regrid_power_jump = result.max_regrid_power_jump;
    summary.steps = result.final_state.step_count;
    summary.regrids = result.final_state.regrid_count;

    // Fit reports only for accepted collapse runs.
    if (collapsed) {
        if (analysis.p_fit) {
            summary.p = analysis.p_fit->exponent;
            summary.p_residual = analysis.p_fit->rms_log_residual;
            std::ofstream os(out_dir / "fit_p.txt");
            write_fit_report(os, *analysis.p_fit, "blowup_rate");
        }
        if (analysis.alpha_fit) {
            summary.alpha = analysis.alpha_fit->exponent;
            summary.alpha_residual = analysis.alpha_fit->rms_log_residual;
            std::ofstream os(out_dir / "fit_alpha.txt");
            write_fit_report(os, *analysis.alpha_fit, "shrink_rate");
        }
        if (analysis.limit) {
            std::ofstream os(out_dir / "limit_report.txt");
            os << "q: " << fmt_g17(analysis.limit->q) << '\n';
            os << "tail: " << tail_behavior_name(analysis.limit->tail) << '\n';
            os << "tail_slope: " << fmt_g17(analysis.limit->tail_slope) << '\n';
            write_two_columns(out_dir / "plotdata" / "limit_LqLt.tsv", "inv_L", "Lq_Lt",
                              analysis.limit->inv_width, analysis.limit->scaled_rate);
        }

        const auto widths = result.series.widths();
        const auto radii = result.series.ring_radii();
        std::vector<double> inv(widths.size());
        for (std::size_t i = 0; i < widths.size(); ++i) inv[i] = 1.0 / widths[i];
        write_two_columns(out_dir / "plotdata" / "rmax_vs_invL.tsv", "inv_L", "r_max", inv, radii);

        if (analysis.p_fit) {
            const auto times = result.series.times();
            std::vector<double> remaining, lvals;
            for (std::size_t i = 0; i < times.size(); ++i) {
                const double rem = analysis.p_fit->tc - times[i];
                if (rem > 0.0) {
                    remaining.push_back(rem);
                    lvals.push_back(widths[i]);
                }
            }
            write_two_columns(out_dir / "plotdata" / "L_vs_remaining_time.tsv", "tc_minus_t", "L",
                              remaining, lvals);
        }

        const RescaledProfile prof = rescaled_profile(
            result.final_state.field, result.final_state.grid, config.dims.sigma);
        write_two_columns(out_dir / "plotdata" / "rescaled_profile_final.tsv", "rho", "amplitude",
                          prof.rho, prof.amplitude);
    }

    if (expected) {
        auto check = [&](const char* what, bool ok) {
            log << "expectation " << what << ": " << (ok ? "met" : "NOT met") << '\n';
        };
        check("regime", analysis.regime.regime == expected->regime);
        check("collapse", collapsed == expected->expect_collapse);
        if (expected->p_lo && summary.p)
            check("p interval", *summary.p >= *expected->p_lo && *summary.p <= *expected->p_hi);
        if (expected->alpha_lo && summary.alpha)
            check("alpha interval",
                  *summary.alpha >= *expected->alpha_lo && *summary.alpha <= *expected->alpha_hi);
        if (expected->ring_radius_drift_max)
            check("ring radius drift",
                  analysis.ring_radius_drift_last_decade <= *expected->ring_radius_drift_max);
    }

    {
        std::ofstream os(out_dir / "summary.txt");
        write_summary(os, summary);
    }
    return summary.complete ? 0 : 1;
}

int run_sweep(int dim, const std::vector<double>& sigmas, const fs::path& out_dir, int threads,
              double focusing_target) {
    fs::create_directories(out_dir);
    std::vector<ExperimentPreset> runs;
    runs.reserve(sigmas.size());
    for (double s : sigmas) runs.push_back(make_sweep_preset(dim, s, focusing_target));

    std::atomic<std::size_t> next{0};
    std::atomic<int> worst{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= runs.size()) return;
            const int rc = run_experiment(runs[i].config, &runs[i].expected,
                                          out_dir / runs[i].name);
            int prev = worst.load();
            while (rc > prev && !worst.compare_exchange_weak(prev, rc)) {
            }
        }
    };
    const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(runs.size())));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Combined alpha-vs-alpha_b table, sorted by alpha_b.
    std::vector<RunSummary> summaries;
    for (const auto& r : runs) {
        std::ifstream is(out_dir / r.name / "summary.txt");
        if (is) summaries.push_back(read_summary(is));
    }
    std::sort(summaries.begin(), summaries.end(),
              [](const RunSummary& a, const RunSummary& b) { return a.alpha_b < b.alpha_b; });
    {
        std::ofstream os(out_dir / "alpha_table.tsv");
        os << "sigma\talpha_b\talpha_fit\talpha_residual\tp_pred\tp_fit\tp_residual\n";
        for (const auto& s : summaries) {
            auto opt = [](const std::optional<double>& v) {
                return v ? fmt_g17(*v) : std::string("none");
            };
            os << fmt_g17(s.sigma) << '\t' << fmt_g17(s.alpha_b) << '\t' << opt(s.alpha) << '\t'
               << opt(s.alpha_residual) << '\t' << fmt_g17(s.p_pred) << '\t' << opt(s.p) << '\t'
               << opt(s.p_residual) << '\n';
        }
    }
    {
        std::vector<fs::path> dirs;
        for (const auto& r : runs) dirs.push_back(out_dir / r.name);
        std::ofstream os(out_dir / "report.txt");
        os << report(dirs);
    }
    return worst.load();
}

std::string report(const std::vector<fs::path>& run_dirs) {
    struct Row {
        RunSummary summary;
        std::string dir;
        bool present = false;
    };
    std::vector<Row> rows;
    for (const auto& dir : run_dirs) {
        Row row;
        row.dir = dir.filename().string();
        std::ifstream is(dir / "summary.txt");
        if (is) {
            row.summary = read_summary(is);
            row.present = true;
        }
        rows.push_back(row);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.summary.dim != b.summary.dim) return a.summary.dim < b.summary.dim;
        return a.summary.alpha_b < b.summary.alpha_b;
    });

    std::ostringstream os;
    os << std::left << std::setw(10) << "sigma" << std::setw(4) << "d" << std::setw(34) << "regime"
       << std::setw(22) << "alpha(fit+-res)" << std::setw(22) << "p(fit+-res)" << std::setw(10)
       << "alpha_b" << std::setw(10) << "p_pred" << std::setw(12) << "P_drift" << std::setw(12)
       << "H_drift" << std::setw(12) << "focusing" << "status" << '\n';
    auto short_num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4g", v);
        return std::string(buf);
    };
    for (const auto& row : rows) {
        if (!row.present) {
            os << row.dir << ": missing artifacts (incomplete)\n";
            continue;
        }
        const RunSummary& s = row.summary;
        auto fit_col = [&](const std::optional<double>& v, const std::optional<double>& res) {
            if (!v) return std::string("-");
            return short_num(*v) + "+-" + (res ? short_num(*res) : std::string("?"));
        };
        os << std::left << std::setw(10) << short_num(s.sigma) << std::setw(4) << s.dim
           << std::setw(34) << s.regime << std::setw(22) << fit_col(s.alpha, s.alpha_residual)
           << std::setw(22) << fit_col(s.p, s.p_residual) << std::setw(10) << short_num(s.alpha_b)
           << std::setw(10) << short_num(s.p_pred) << std::setw(12) << short_num(s.max_power_drift)
           << std::setw(12) << short_num(s.max_hamiltonian_drift) << std::setw(12)
           << short_num(s.focusing) << s.status << (s.complete ? "" : " (incomplete)") << '\n';
    }
    return os.str();
}

}  // namespace bnls
