#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bnls/field.hpp"
#include "bnls/grid.hpp"
#include "bnls/groundstate.hpp"

namespace bnls {

struct StepRecord {
    double time = 0.0;
    double width = 0.0;        // L = (max |psi|)^{-sigma/2}
    double ring_radius = 0.0;  // argmax_r |psi|
    double power = 0.0;
    double hamiltonian = 0.0;
    double dt = 0.0;
    int core_points = 0;
    int regrid_count = 0;
};

struct DiagnosticsSeries {
    int dim = 0;
    double sigma = 0.0;
    std::vector<StepRecord> records;

    std::vector<double> times() const;
    std::vector<double> widths() const;
    std::vector<double> ring_radii() const;
};

void write_series(std::ostream& os, const DiagnosticsSeries& series);
DiagnosticsSeries read_series(std::istream& is);

// Sub-grid peak location and amplitude: quadratic fit through the discrete
// argmax of |psi|^2 and its two neighbours. Ties break to the smallest radius
// and are flagged; a peak on a boundary node is returned as-is and flagged.
struct PeakInfo {
    double r_max = 0.0;
    double amplitude = 0.0;
    bool at_boundary = false;
    bool tie = false;
};
PeakInfo locate_peak(const WaveField& field, const RadialGrid& grid);

// L = (max_r |psi|)^{-sigma/2} from the discrete maximum.
double width(const WaveField& field, double sigma);
double ring_radius(const WaveField& field, const RadialGrid& grid);

// |psi| rescaled to the collapse frame: amplitude(rho) =
// L^{2/sigma} |psi(r_max + rho L)| sampled uniformly in rho by cubic
// interpolation. L is taken from the interpolated peak so the value at
// rho = 0 is exactly 1.
struct RescaledProfile {
    std::vector<double> rho;
    std::vector<double> amplitude;
    double width_scale = 0.0;
    double ring_radius = 0.0;
    bool truncated = false;  // window exceeded the grid and was clipped
};
RescaledProfile rescaled_profile(const WaveField& field, const RadialGrid& grid, double sigma,
                                 double rho_max = 5.0, std::size_t samples = 401);

// L-inf distance over |rho| <= rho_limit between a rescaled solution profile
// and a ground state brought to the same amplitude normalization
// (R(rho) -> R(rho / Rmax^2) / Rmax for sigma = 4).
double profile_mismatch(const RescaledProfile& profile, const GroundStateProfile& ground,
                        double rho_limit);

struct FitResult {
    double coefficient = 0.0;  // kappa or r0
    double exponent = 0.0;     // p or alpha
    double tc = 0.0;           // collapse-time estimate (power-law fits in t only)
    double rms_log_residual = 0.0;
    std::size_t samples = 0;
    std::size_t window_first = 0;  // indices into the source series, set by callers
    std::size_t window_last = 0;
    bool tc_valid = false;
    bool flagged = false;  // degenerate Tc search (minimizer pinned to the bracket)
};

// Joint fit of y ~ k (Tc - t)^p: for a candidate Tc the (log k, p) pair comes
// from linear least squares in log-log; Tc minimizes the rms log-residual by
// golden-section search. Requires y > 0 strictly decreasing, >= 10 samples.
FitResult fit_power_law(std::span<const double> t, std::span<const double> y);

// Linear least squares of log(r_max) against log(L): r_max ~ r0 L^alpha.
FitResult fit_shrink_rate(std::span<const double> width, std::span<const double> ring_radius);

void write_fit_report(std::ostream& os, const FitResult& fit, std::string_view kind);

enum class TailBehavior { negative_constant, to_zero, to_minus_infinity, indeterminate };
const char* tail_behavior_name(TailBehavior t);

// Series (1/L, L^q dL/dt) with dL/dt from 3-point non-uniform centered
// differences. The tail classifier compares the slope of log|L^q L_t| against
// log(1/L) over the last decade: |slope| < 0.02 -> negative constant,
// decreasing magnitude -> 0-, growing magnitude -> -infinity.
struct LimitDiagnostic {
    std::vector<double> inv_width;
    std::vector<double> scaled_rate;
    double q = 3.0;
    TailBehavior tail = TailBehavior::indeterminate;
    double tail_slope = 0.0;
};
LimitDiagnostic limit_diagnostic(std::span<const double> t, std::span<const double> width,
                                 double q);

// integral_{r < eps} |psi|^2 r^{d-1} dr (trapezoid, partial end cell included).
double power_concentration(const WaveField& field, const RadialGrid& grid, int dim,
                           double eps);

enum class Regime {
    subcritical,
    critical_equal_rate,
    shrinking_ring,
    standing_ring_critical_exponent,
    standing_ring_supercritical,
};
const char* regime_name(Regime r);

struct RegimeLabel {
    Regime regime = Regime::subcritical;
    double alpha_b = 0.0;  // (4 - sigma) / (sigma (d-1)), clamped to >= 0
    double p_pred = 0.0;   // NaN when no collapse is predicted
    std::string note;
};
RegimeLabel classify_regime(double sigma, int dim);

// Indices of the fit window: the strictly-decreasing tail of the width series
// covering the last `decades` decades of focusing, excluding the trailing
// trim_fraction of samples.
std::vector<std::size_t> select_fit_window(std::span<const double> width,
                                           double decades = 1.5,
                                           double trim_fraction = 0.02);

}  // namespace bnls
