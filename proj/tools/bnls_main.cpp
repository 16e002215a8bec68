#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "bnls/config.hpp"
#include "bnls/groundstate.hpp"
#include "bnls/harness.hpp"
#include "bnls/textio.hpp"

namespace fs = std::filesystem;

namespace {

int cmd_run(const std::string& preset_name, const std::string& config_path,
            const std::string& out_dir, double lmin, bool list_presets) {
    if (list_presets) {
        for (const auto& p : bnls::presets())
            std::cout << p.name << "  -  " << p.note << '\n';
        return 0;
    }
    bnls::SimConfig config;
    const bnls::ExpectedOutcome* expected = nullptr;
    if (!preset_name.empty()) {
        const auto* preset = bnls::find_preset(preset_name);
        if (!preset) {
            std::cerr << "unknown preset '" << preset_name << "' (see run --list-presets)\n";
            return 2;
        }
        config = preset->config;
        expected = &preset->expected;
    } else if (!config_path.empty()) {
        std::ifstream is(config_path);
        if (!is) {
            std::cerr << "cannot open config " << config_path << '\n';
            return 2;
        }
        config = bnls::parse_config(is);
    } else {
        std::cerr << "run needs --preset or --config\n";
        return 2;
    }
    if (lmin > 0.0) config.stopping.width_min = lmin;
    const int rc = bnls::run_experiment(config, expected, out_dir);
    std::cout << bnls::report({fs::path(out_dir)});
    return rc;
}

int cmd_sweep(int dim, std::vector<double> sigmas, const std::string& out_dir, int threads,
              double focusing) {
    if (sigmas.empty()) sigmas = bnls::sweep_sigmas(dim);
    const int rc = bnls::run_sweep(dim, sigmas, out_dir, threads, focusing);
    std::ifstream rep(fs::path(out_dir) / "report.txt");
    std::cout << rep.rdbuf();
    return rc;
}

int cmd_groundstate(double sigma, int dim, bool oned, double extent, std::size_t n,
                    const std::string& out_dir) {
    bnls::GroundStateProfile profile;
    if (oned || dim == 1) {
        profile = bnls::solve_ground_state_1d(sigma, extent > 0 ? extent : 25.0,
                                              n > 0 ? n : 4096);
    } else {
        if (sigma <= 0.0) sigma = 4.0 / dim;
        profile = bnls::solve_ground_state_radial(sigma, dim, extent > 0 ? extent : 30.0,
                                                  n > 0 ? n : 2000);
    }
    std::cout << "sigma = " << bnls::fmt_g17(profile.sigma) << ", d = " << profile.dim
              << ", norm_sq = " << bnls::fmt_g17(profile.norm_sq)
              << ", residual = " << bnls::fmt_g17(profile.residual)
              << ", iterations = " << profile.iterations << '\n';
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::string name = profile.dim == 1 ? "ground_state_1d.txt" : "ground_state_radial.txt";
        std::ofstream os(fs::path(out_dir) / name);
        bnls::write_profile(os, profile);
        std::cout << "wrote " << (fs::path(out_dir) / name).string() << '\n';
    }
    return 0;
}

int cmd_analyze(const std::string& series_path, const std::string& out_dir) {
    std::ifstream is(series_path);
    if (!is) {
        std::cerr << "cannot open series " << series_path << '\n';
        return 2;
    }
    const bnls::DiagnosticsSeries series = bnls::read_series(is);
    if (series.records.empty() || series.dim == 0) {
        std::cerr << "series is empty or lacks the d/sigma header\n";
        return 2;
    }
    const bnls::AnalysisReport analysis = bnls::analyze_series(series);
    std::cout << "regime: " << bnls::regime_name(analysis.regime.regime) << '\n';
    std::cout << "alpha_b: " << bnls::fmt_g17(analysis.regime.alpha_b) << '\n';
    std::cout << "p_pred: " << bnls::fmt_g17(analysis.regime.p_pred) << '\n';
    if (analysis.p_fit) bnls::write_fit_report(std::cout, *analysis.p_fit, "blowup_rate");
    if (analysis.alpha_fit) bnls::write_fit_report(std::cout, *analysis.alpha_fit, "shrink_rate");
    if (analysis.limit)
        std::cout << "limit tail (q=" << bnls::fmt_g17(analysis.limit->q)
                  << "): " << bnls::tail_behavior_name(analysis.limit->tail)
                  << " (slope " << bnls::fmt_g17(analysis.limit->tail_slope) << ")\n";
    if (!analysis.notes.empty()) std::cout << "notes: " << analysis.notes << '\n';
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        if (analysis.p_fit) {
            std::ofstream os(fs::path(out_dir) / "fit_p.txt");
            bnls::write_fit_report(os, *analysis.p_fit, "blowup_rate");
        }
        if (analysis.alpha_fit) {
            std::ofstream os(fs::path(out_dir) / "fit_alpha.txt");
            bnls::write_fit_report(os, *analysis.alpha_fit, "shrink_rate");
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bnls - radial biharmonic NLS ring-collapse simulator"};
    app.require_subcommand(1);

    // run
    std::string preset, config_path, out_dir = "out";
    double lmin = 0.0;
    bool list_presets = false;
    auto* run = app.add_subcommand("run", "run one experiment");
    run->add_option("--preset", preset, "preset name");
    run->add_option("--config", config_path, "configuration file");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--lmin", lmin, "override the width target");
    run->add_flag("--list-presets", list_presets, "list presets and exit");

    // sweep
    int dim = 2, threads = 1;
    std::vector<double> sigmas;
    std::string sweep_out = "out/sweep";
    double focusing = 1e3;
    auto* sweep = app.add_subcommand("sweep", "run a sigma sweep for one dimension");
    sweep->add_option("--d", dim, "dimension (2 or 3)");
    sweep->add_option("--sigmas", sigmas, "explicit sigma list (default: built-in)");
    sweep->add_option("--out", sweep_out, "output directory");
    sweep->add_option("--threads", threads, "worker threads");
    sweep->add_option("--focusing", focusing, "focusing target per run");

    // groundstate
    double gs_sigma = 0.0, gs_extent = 0.0;
    int gs_dim = 2;
    std::size_t gs_n = 0;
    bool gs_oned = false;
    std::string gs_out;
    auto* gs = app.add_subcommand("groundstate", "compute a standing-wave ground state");
    gs->add_option("--sigma", gs_sigma, "nonlinearity exponent (radial default: 4/d)");
    gs->add_option("--d", gs_dim, "dimension for the radial problem");
    gs->add_flag("--oned", gs_oned, "solve the 1D line problem (sigma required)");
    gs->add_option("--extent", gs_extent, "half-width (1D) or radius (radial)");
    gs->add_option("--n", gs_n, "grid points");
    gs->add_option("--out", gs_out, "directory for the profile file");

    // analyze
    std::string series_path, analyze_out;
    auto* analyze = app.add_subcommand("analyze", "fit a recorded diagnostics series");
    analyze->add_option("--series", series_path, "series.tsv path")->required();
    analyze->add_option("--out", analyze_out, "directory for fit reports");

    // report
    std::vector<std::string> report_dirs;
    auto* rep = app.add_subcommand("report", "summarize run directories");
    rep->add_option("dirs", report_dirs, "run directories")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(preset, config_path, out_dir, lmin, list_presets);
        if (*sweep) return cmd_sweep(dim, sigmas, sweep_out, threads, focusing);
        if (*gs) {
            if (gs_oned && gs_sigma <= 0.0) {
                std::cerr << "--oned requires --sigma\n";
                return 2;
            }
            return cmd_groundstate(gs_sigma, gs_dim, gs_oned, gs_extent, gs_n, gs_out);
        }
        if (*analyze) return cmd_analyze(series_path, analyze_out);
        if (*rep) {
            std::vector<fs::path> dirs(report_dirs.begin(), report_dirs.end());
            std::cout << bnls::report(dirs);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
