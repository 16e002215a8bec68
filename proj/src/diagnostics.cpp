#include "bnls/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "bnls/fd_weights.hpp"
#include "bnls/interp.hpp"
#include "bnls/norms.hpp"
#include "bnls/textio.hpp"

namespace bnls {

std::vector<double> DiagnosticsSeries::times() const {
    std::vector<double> v(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) v[i] = records[i].time;
    return v;
}
std::vector<double> DiagnosticsSeries::widths() const {
    std::vector<double> v(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) v[i] = records[i].width;
    return v;
}
std::vector<double> DiagnosticsSeries::ring_radii() const {
    std::vector<double> v(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) v[i] = records[i].ring_radius;
    return v;
}

void write_series(std::ostream& os, const DiagnosticsSeries& series) {
    os << "# bnls diagnostics series\n";
    os << "# d = " << series.dim << '\n';
    os << "# sigma = " << fmt_g17(series.sigma) << '\n';
    os << "t\tL\tr_max\tP\tH\tdt\tcore_points\tregrids\n";
    for (const auto& r : series.records) {
        os << fmt_g17(r.time) << '\t' << fmt_g17(r.width) << '\t' << fmt_g17(r.ring_radius)
           << '\t' << fmt_g17(r.power) << '\t' << fmt_g17(r.hamiltonian) << '\t'
           << fmt_g17(r.dt) << '\t' << r.core_points << '\t' << r.regrid_count << '\n';
    }
}

DiagnosticsSeries read_series(std::istream& is) {
    DiagnosticsSeries out;
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
            if (key == "d" && parse_double(val, v)) out.dim = static_cast<int>(v);
            if (key == "sigma" && parse_double(val, v)) out.sigma = v;
            continue;
        }
        if (sv.front() == 't') continue;  // column header
        const auto fields = split_fields(sv);
        if (fields.size() < 6) continue;
        StepRecord r;
        long tmp;
        if (!parse_double(fields[0], r.time) || !parse_double(fields[1], r.width) ||
            !parse_double(fields[2], r.ring_radius) || !parse_double(fields[3], r.power) ||
            !parse_double(fields[4], r.hamiltonian) || !parse_double(fields[5], r.dt))
            continue;
        if (fields.size() > 6 && parse_long(fields[6], tmp)) r.core_points = static_cast<int>(tmp);
        if (fields.size() > 7 && parse_long(fields[7], tmp)) r.regrid_count = static_cast<int>(tmp);
        out.records.push_back(r);
    }
    return out;
}

PeakInfo locate_peak(const WaveField& field, const RadialGrid& grid) {
    const std::size_t n = field.size();
    if (n != grid.size()) throw std::invalid_argument("locate_peak: size mismatch");
    if (n == 0) throw std::invalid_argument("locate_peak: empty field");

    std::vector<double> y(n);
    std::size_t imax = 0;
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = std::norm(field.values[i]);
        if (y[i] > y[imax]) imax = i;
    }
    if (!(y[imax] > 0.0)) throw std::invalid_argument("locate_peak: zero field");

    PeakInfo out;
    for (std::size_t i = imax + 1; i < n; ++i) {
        if (y[i] == y[imax]) {
            out.tie = true;  // ties break to the smallest radius
            break;
        }
    }
    if (imax == 0 || imax == n - 1) {
        out.at_boundary = true;
        out.r_max = grid[imax];
        out.amplitude = std::sqrt(y[imax]);
        return out;
    }

    // Quadratic through (r, |psi|^2) at the discrete argmax and neighbours.
    const double x0 = grid[imax - 1], x1 = grid[imax], x2 = grid[imax + 1];
    const double y0 = y[imax - 1], y1 = y[imax], y2 = y[imax + 1];
    const double d10 = x1 - x0, d12 = x1 - x2;
    const double num = d10 * d10 * (y1 - y2) - d12 * d12 * (y1 - y0);
    const double den = d10 * (y1 - y2) - d12 * (y1 - y0);
    double vertex = x1;
    if (std::abs(den) > 0.0) vertex = x1 - 0.5 * num / den;
    vertex = std::clamp(vertex, x0, x2);

    // Evaluate the Lagrange parabola at the vertex.
    const double l0 = (vertex - x1) * (vertex - x2) / ((x0 - x1) * (x0 - x2));
    const double l1 = (vertex - x0) * (vertex - x2) / ((x1 - x0) * (x1 - x2));
    const double l2 = (vertex - x0) * (vertex - x1) / ((x2 - x0) * (x2 - x1));
    const double peak2 = std::max(l0 * y0 + l1 * y1 + l2 * y2, y1);

    out.r_max = vertex;
    out.amplitude = std::sqrt(peak2);
    return out;
}

double width(const WaveField& field, double sigma) {
    double sup2 = 0.0;
    for (const Complex& v : field.values) sup2 = std::max(sup2, std::norm(v));
    if (!(sup2 > 0.0)) throw std::invalid_argument("width: zero field");
    return std::pow(std::sqrt(sup2), -sigma / 2.0);
}

double ring_radius(const WaveField& field, const RadialGrid& grid) {
    return locate_peak(field, grid).r_max;
}

RescaledProfile rescaled_profile(const WaveField& field, const RadialGrid& grid, double sigma,
                                 double rho_max, std::size_t samples) {
    if (samples < 3) throw std::invalid_argument("rescaled_profile: need >= 3 samples");
    const PeakInfo peak = locate_peak(field, grid);

    const std::size_t n = field.size();
    std::vector<double> amp(n);
    for (std::size_t i = 0; i < n; ++i) amp[i] = std::abs(field.values[i]);

    // Width scale from the interpolated peak amplitude, so the profile value
    // at rho = 0 is exactly 1.
    const double peak_amp =
        std::max(interp_cubic_at(grid.nodes(), amp, peak.r_max), peak.amplitude * 0.5);
    const double scale = std::pow(peak_amp, -sigma / 2.0);

    RescaledProfile out;
    out.width_scale = scale;
    out.ring_radius = peak.r_max;
    out.rho.resize(samples);
    out.amplitude.resize(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        const double rho =
            -rho_max + 2.0 * rho_max * static_cast<double>(k) / static_cast<double>(samples - 1);
        double r = peak.r_max + rho * scale;
        if (r < 0.0 || r > grid.outer_radius()) {
            out.truncated = true;
            r = std::clamp(r, 0.0, grid.outer_radius());
        }
        out.rho[k] = rho;
        out.amplitude[k] = interp_cubic_at(grid.nodes(), amp, r) / peak_amp;
    }
    return out;
}

double profile_mismatch(const RescaledProfile& profile, const GroundStateProfile& ground,
                        double rho_limit) {
    if (ground.dim != 1) throw std::invalid_argument("profile_mismatch: needs a 1D ground state");
    if (!(ground.peak > 0.0)) throw std::invalid_argument("profile_mismatch: empty ground state");
    // Bring the ground state to the amplitude-width normalization of the
    // rescaled solution: R(xi) -> R(xi / Rmax^2) / Rmax has peak 1.
    const double rm = ground.peak;
    std::vector<double> ga(ground.values.size());
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] = std::abs(ground.values[i]);
    double worst = 0.0;
    for (std::size_t k = 0; k < profile.rho.size(); ++k) {
        const double rho = profile.rho[k];
        if (std::abs(rho) > rho_limit) continue;
        const double xi = rho / (rm * rm);
        if (xi < ground.xs.front() || xi > ground.xs.back()) continue;
        const double gval = interp_cubic_at(ground.xs, ga, xi) / rm;
        worst = std::max(worst, std::abs(profile.amplitude[k] - gval));
    }
    return worst;
}

namespace {

struct LogFit {
    double intercept = 0.0;
    double slope = 0.0;
    double rms = 0.0;
};

LogFit linear_fit(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double dn = static_cast<double>(n);
    const double det = dn * sxx - sx * sx;
    LogFit out;
    out.slope = (dn * sxy - sx * sy) / det;
    out.intercept = (sy - out.slope * sx) / dn;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - out.intercept - out.slope * x[i];
        ss += e * e;
    }
    out.rms = std::sqrt(ss / dn);
    return out;
}

}  // namespace

FitResult fit_power_law(std::span<const double> t, std::span<const double> y) {
    const std::size_t n = t.size();
    if (n != y.size()) throw std::invalid_argument("fit_power_law: size mismatch");
    if (n < 10) throw std::invalid_argument("fit_power_law: need at least 10 samples");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(y[i] > 0.0)) throw std::invalid_argument("fit_power_law: y must be positive");
        if (i > 0 && !(y[i] < y[i - 1]))
            throw std::invalid_argument("fit_power_law: window must be decreasing");
        if (i > 0 && !(t[i] > t[i - 1]))
            throw std::invalid_argument("fit_power_law: times must be increasing");
    }

    const double t_last = t[n - 1];
    const double span_t = t_last - t[0];
    std::vector<double> logy(n);
    for (std::size_t i = 0; i < n; ++i) logy[i] = std::log(y[i]);

    std::vector<double> logx(n);
    auto rms_at = [&](double u) {
        const double tc = t_last + std::exp(u);
        for (std::size_t i = 0; i < n; ++i) logx[i] = std::log(tc - t[i]);
        return linear_fit(logx, logy).rms;
    };

    // Golden-section search for Tc on a log scale relative to the last sample.
    double lo = std::log(span_t) + std::log(1e-14);
    double hi = std::log(span_t) + std::log(1e2);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = rms_at(c), fd = rms_at(d);
    for (int iter = 0; iter < 200 && (b - a) > 1e-12; ++iter) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = rms_at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = rms_at(d);
        }
    }
    const double u = 0.5 * (a + b);

    FitResult out;
    out.flagged = (u < lo + 1e-6 * (hi - lo)) || (u > hi - 1e-6 * (hi - lo));
    out.tc = t_last + std::exp(u);
    out.tc_valid = true;
    const double tc = out.tc;
    for (std::size_t i = 0; i < n; ++i) logx[i] = std::log(tc - t[i]);
    const LogFit fit = linear_fit(logx, logy);
    out.coefficient = std::exp(fit.intercept);
    out.exponent = fit.slope;
    out.rms_log_residual = fit.rms;
    out.samples = n;
    return out;
}

FitResult fit_shrink_rate(std::span<const double> width, std::span<const double> ring_radius) {
    const std::size_t n = width.size();
    if (n != ring_radius.size()) throw std::invalid_argument("fit_shrink_rate: size mismatch");
    if (n < 10) throw std::invalid_argument("fit_shrink_rate: need at least 10 samples");
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(width[i] > 0.0) || !(ring_radius[i] > 0.0))
            throw std::invalid_argument("fit_shrink_rate: values must be positive");
        lx[i] = std::log(width[i]);
        ly[i] = std::log(ring_radius[i]);
    }
    const LogFit fit = linear_fit(lx, ly);
    FitResult out;
    out.coefficient = std::exp(fit.intercept);
    out.exponent = fit.slope;
    out.tc = std::numeric_limits<double>::quiet_NaN();
    out.tc_valid = false;
    out.rms_log_residual = fit.rms;
    out.samples = n;
    return out;
}

void write_fit_report(std::ostream& os, const FitResult& fit, std::string_view kind) {
    os << "kind: " << kind << '\n';
    os << "coefficient: " << fmt_g17(fit.coefficient) << '\n';
    os << "exponent: " << fmt_g17(fit.exponent) << '\n';
    if (fit.tc_valid) os << "tc_estimate: " << fmt_g17(fit.tc) << '\n';
    os << "rms_log_residual: " << fmt_g17(fit.rms_log_residual) << '\n';
    os << "samples: " << fit.samples << '\n';
    os << "window_first: " << fit.window_first << '\n';
    os << "window_last: " << fit.window_last << '\n';
    if (fit.flagged) os << "flagged: degenerate search window\n";
}

const char* tail_behavior_name(TailBehavior t) {
    switch (t) {
        case TailBehavior::negative_constant: return "negative_constant";
        case TailBehavior::to_zero: return "to_zero";
        case TailBehavior::to_minus_infinity: return "to_minus_infinity";
        case TailBehavior::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

LimitDiagnostic limit_diagnostic(std::span<const double> t, std::span<const double> width,
                                 double q) {
    const std::size_t n = t.size();
    if (n != width.size()) throw std::invalid_argument("limit_diagnostic: size mismatch");
    if (n < 3) throw std::invalid_argument("limit_diagnostic: need at least 3 samples");

    LimitDiagnostic out;
    out.q = q;
    out.inv_width.reserve(n - 2);
    out.scaled_rate.reserve(n - 2);
    double xs[3];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        xs[0] = t[i - 1];
        xs[1] = t[i];
        xs[2] = t[i + 1];
        const auto w = fd_weights(t[i], std::span<const double>(xs, 3), 1);
        const double lt = w[0] * width[i - 1] + w[1] * width[i] + w[2] * width[i + 1];
        out.inv_width.push_back(1.0 / width[i]);
        out.scaled_rate.push_back(std::pow(width[i], q) * lt);
    }

    // Tail classification over the last decade of 1/L.
    const double inv_max = *std::max_element(out.inv_width.begin(), out.inv_width.end());
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < out.inv_width.size(); ++i) {
        if (out.inv_width[i] >= inv_max / 10.0 && out.scaled_rate[i] < 0.0) {
            lx.push_back(std::log(out.inv_width[i]));
            ly.push_back(std::log(-out.scaled_rate[i]));
        }
    }
    if (lx.size() >= 5) {
        const LogFit fit = linear_fit(lx, ly);
        out.tail_slope = fit.slope;
        if (std::abs(fit.slope) < 0.02)
            out.tail = TailBehavior::negative_constant;
        else if (fit.slope < 0.0)
            out.tail = TailBehavior::to_zero;
        else
            out.tail = TailBehavior::to_minus_infinity;
    }
    return out;
}

double power_concentration(const WaveField& field, const RadialGrid& grid, int dim,
                           double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("power_concentration: eps must be positive");
    const std::size_t n = field.size();
    if (n != grid.size()) throw std::invalid_argument("power_concentration: size mismatch");
    auto w = [&](double r) { return dim == 1 ? 1.0 : std::pow(r, dim - 1); };
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double r0 = grid[i], r1 = grid[i + 1];
        if (r0 >= eps) break;
        const double f0 = std::norm(field.values[i]) * w(r0);
        const double f1 = std::norm(field.values[i + 1]) * w(r1);
        if (r1 <= eps) {
            acc += 0.5 * (f0 + f1) * (r1 - r0);
        } else {
            const double tfrac = (eps - r0) / (r1 - r0);
            const double fe = f0 + tfrac * (f1 - f0);
            acc += 0.5 * (f0 + fe) * (eps - r0);
        }
    }
    return acc;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::subcritical: return "subcritical";
        case Regime::critical_equal_rate: return "critical_equal_rate";
        case Regime::shrinking_ring: return "shrinking_ring";
        case Regime::standing_ring_critical_exponent: return "standing_ring_critical_exponent";
        case Regime::standing_ring_supercritical: return "standing_ring_supercritical";
    }
    return "unknown";
}

RegimeLabel classify_regime(double sigma, int dim) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (dim < 2) throw std::invalid_argument("ring classification needs d >= 2");

    RegimeLabel out;
    const double crit = sigma * dim;
    out.alpha_b = std::max((4.0 - sigma) / (sigma * (dim - 1)), 0.0);
    const double tol = 1e-9;
    if (crit < 4.0 - tol) {
        out.regime = Regime::subcritical;
        out.p_pred = std::numeric_limits<double>::quiet_NaN();
        out.note = "global existence; no singular ring solutions";
    } else if (std::abs(crit - 4.0) <= tol) {
        out.regime = Regime::critical_equal_rate;
        out.alpha_b = 1.0;
        out.p_pred = 0.25;
        out.note = "equal-rate collapse, quartic-root blowup";
    } else if (sigma < 4.0 - tol) {
        out.regime = Regime::shrinking_ring;
        out.p_pred = 1.0 / (3.0 + out.alpha_b);
        out.note = "shrinking ring";
    } else if (std::abs(sigma - 4.0) <= tol) {
        out.regime = Regime::standing_ring_critical_exponent;
        out.alpha_b = 0.0;
        out.p_pred = 0.25;
        out.note = "standing ring, blowup slightly faster than the quartic rate";
    } else {
        out.regime = Regime::standing_ring_supercritical;
        out.alpha_b = 0.0;
        out.p_pred = 0.25;
        out.note = "standing ring, quartic-root blowup";
    }
    return out;
}

std::vector<std::size_t> select_fit_window(std::span<const double> width, double decades,
                                           double trim_fraction) {
    const std::size_t n = width.size();
    std::vector<std::size_t> out;
    if (n < 3) return out;
    std::size_t trim = static_cast<std::size_t>(std::floor(trim_fraction * static_cast<double>(n)));
    trim = std::max<std::size_t>(trim, 1);
    if (trim + 2 >= n) return out;
    const std::size_t last = n - 1 - trim;
    const double w_hi = width[last] * std::pow(10.0, decades);

    // Collect the strictly-decreasing subsequence ending at `last` (running
    // minima scanned backwards) restricted to the focusing window.
    std::vector<std::size_t> rev;
    double floor_w = width[last];
    rev.push_back(last);
    for (std::size_t i = last; i-- > 0;) {
        if (width[i] > floor_w && width[i] <= w_hi) {
            rev.push_back(i);
            floor_w = width[i];
        }
    }
    out.assign(rev.rbegin(), rev.rend());
    return out;
}

}  // namespace bnls
