#include "bnls/groundstate.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bnls/banded.hpp"
#include "bnls/fd_weights.hpp"
#include "bnls/grid.hpp"
#include "bnls/norms.hpp"
#include "bnls/operators.hpp"
#include "bnls/textio.hpp"

namespace bnls {

namespace {

std::mutex fftw_planning_mutex;

struct FftwBuffer {
    double* data = nullptr;
    explicit FftwBuffer(std::size_t n) : data(static_cast<double*>(fftw_malloc(n * sizeof(double)))) {}
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

struct FftwComplexBuffer {
    fftw_complex* data = nullptr;
    explicit FftwComplexBuffer(std::size_t n)
        : data(static_cast<fftw_complex*>(fftw_malloc(n * sizeof(fftw_complex)))) {}
    ~FftwComplexBuffer() { fftw_free(data); }
    FftwComplexBuffer(const FftwComplexBuffer&) = delete;
    FftwComplexBuffer& operator=(const FftwComplexBuffer&) = delete;
};

double nonlinear_term(double v, double sigma) { return std::pow(v * v, sigma) * v; }

// L-inf residual of -R'''' - R + |R|^{2s}R via a seven-point uniform-grid
// fourth derivative, independent of the spectral solve.
double residual_1d(const std::vector<double>& r, double h, double sigma) {
    const std::size_t n = r.size();
    std::vector<double> offsets(7);
    for (int k = 0; k < 7; ++k) offsets[k] = (k - 3) * h;
    const auto w4 = fd_weights(0.0, offsets, 4);
    double worst = 0.0;
    for (std::size_t j = 3; j + 3 < n; ++j) {
        double d4 = 0.0;
        for (int k = 0; k < 7; ++k) d4 += w4[k] * r[j + k - 3];
        const double res = -d4 - r[j] + nonlinear_term(r[j], sigma);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

}  // namespace

GroundStateProfile solve_ground_state_1d(double sigma, double half_width, std::size_t n,
                                         GroundStateOptions opts) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (n < 64 || (n & 1)) throw std::invalid_argument("n must be even and >= 64");
    if (!(half_width > 1.0)) throw std::invalid_argument("half_width too small");

    const double h = 2.0 * half_width / static_cast<double>(n);
    const std::size_t nk = n / 2 + 1;

    FftwBuffer real_buf(n);
    FftwComplexBuffer spec_buf(nk);
    fftw_plan fwd, bwd;
    {
        std::lock_guard<std::mutex> lock(fftw_planning_mutex);
        fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_buf.data, spec_buf.data,
                                   FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec_buf.data, real_buf.data,
                                   FFTW_ESTIMATE);
    }

    std::vector<double> xs(n), r(n), nl(n), symbol(nk), mult(nk);
    for (std::size_t j = 0; j < n; ++j) {
        xs[j] = -half_width + h * static_cast<double>(j);
        r[j] = std::exp(-xs[j] * xs[j]);
    }
    for (std::size_t k = 0; k < nk; ++k) {
        const double wave = M_PI * static_cast<double>(k) / half_width;
        const double k4 = wave * wave * wave * wave;
        symbol[k] = 1.0 / (1.0 + k4);
        mult[k] = (k == 0 || k == nk - 1) ? 1.0 : 2.0;
    }
    const double gamma = (2.0 * sigma + 1.0) / (2.0 * sigma);

    int it = 0;
    double diff = 0.0;
    bool converged = false;
    std::vector<double> next(n);
    for (it = 1; it <= opts.max_iter; ++it) {
        for (std::size_t j = 0; j < n; ++j) nl[j] = nonlinear_term(r[j], sigma);

        // <R, (1 + D^4) R> by Parseval on the current iterate.
        for (std::size_t j = 0; j < n; ++j) real_buf.data[j] = r[j];
        fftw_execute(fwd);
        double quad = 0.0;
        for (std::size_t k = 0; k < nk; ++k) {
            const double re = spec_buf.data[k][0];
            const double im = spec_buf.data[k][1];
            quad += mult[k] * (re * re + im * im) / symbol[k];
        }
        quad *= h / static_cast<double>(n);

        double inner = 0.0;
        for (std::size_t j = 0; j < n; ++j) inner += r[j] * nl[j];
        inner *= h;
        if (!(std::abs(inner) > 1e-300))
            throw std::runtime_error("ground state iterate collapsed to zero (bad initial guess)");
        const double factor = std::pow(quad / inner, gamma);

        for (std::size_t j = 0; j < n; ++j) real_buf.data[j] = nl[j];
        fftw_execute(fwd);
        for (std::size_t k = 0; k < nk; ++k) {
            spec_buf.data[k][0] *= symbol[k];
            spec_buf.data[k][1] *= symbol[k];
        }
        fftw_execute(bwd);

        diff = 0.0;
        double peak = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            next[j] = factor * real_buf.data[j] / static_cast<double>(n);
            diff = std::max(diff, std::abs(next[j] - r[j]));
            peak = std::max(peak, std::abs(next[j]));
        }
        r.swap(next);
        if (!(peak > 1e-10))
            throw std::runtime_error("ground state iterate collapsed to zero (bad initial guess)");
        if (diff < opts.tol * std::max(1.0, peak)) {
            converged = true;
            break;
        }
    }
    {
        std::lock_guard<std::mutex> lock(fftw_planning_mutex);
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    if (!converged)
        throw std::runtime_error("ground state iteration did not converge; last difference " +
                                 fmt_g17(diff));

    if (r[n / 2] < 0.0)
        for (double& v : r) v = -v;

    GroundStateProfile out;
    out.xs = std::move(xs);
    out.values = std::move(r);
    out.sigma = sigma;
    out.dim = 1;
    out.iterations = it;
    for (double v : out.values) out.peak = std::max(out.peak, std::abs(v));
    double nsq = 0.0;
    for (double v : out.values) nsq += v * v;
    out.norm_sq = nsq * h;
    out.residual = residual_1d(out.values, h, sigma);
    return out;
}

GroundStateProfile solve_ground_state_radial(double sigma, int dim, double radius,
                                             std::size_t n, GroundStateOptions opts) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    if (n < 64) throw std::invalid_argument("n must be >= 64");

    const RadialGrid grid = RadialGrid::uniform(n, radius);
    const BandedOperator biharm = biharmonic_operator(grid, dim);
    BandedOperator system = biharm;
    for (std::size_t i = 0; i < n; ++i) system.add(i, i, 1.0);
    const BandLU lu(system);

    std::vector<double> r(n), nl(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = std::exp(-grid[i] * grid[i]);
    const double gamma = (2.0 * sigma + 1.0) / (2.0 * sigma);

    std::vector<Complex> rhs(n), rc(n);
    int it = 0;
    double diff = 0.0;
    bool converged = false;
    for (it = 1; it <= opts.max_iter; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            nl[i] = nonlinear_term(r[i], sigma);
            rc[i] = Complex(r[i], 0.0);
            rhs[i] = Complex(nl[i], 0.0);
        }
        const auto sys_r = system.apply(rc);
        std::vector<double> quad_f(n), inner_f(n);
        for (std::size_t i = 0; i < n; ++i) {
            quad_f[i] = r[i] * sys_r[i].real();
            inner_f[i] = r[i] * nl[i];
        }
        const double quad = radial_integral(quad_f, grid, dim);
        const double inner = radial_integral(inner_f, grid, dim);
        if (!(std::abs(inner) > 1e-300))
            throw std::runtime_error("ground state iterate collapsed to zero (bad initial guess)");
        const double factor = std::pow(quad / inner, gamma);

        const auto lin = lu.solve(rhs);
        diff = 0.0;
        double peak = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = factor * lin[i].real();
            diff = std::max(diff, std::abs(v - r[i]));
            peak = std::max(peak, std::abs(v));
            r[i] = v;
        }
        if (!(peak > 1e-10))
            throw std::runtime_error("ground state iterate collapsed to zero (bad initial guess)");
        if (diff < opts.tol * std::max(1.0, peak)) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw std::runtime_error("ground state iteration did not converge; last difference " +
                                 fmt_g17(diff));

    if (r[0] < 0.0)
        for (double& v : r) v = -v;

    GroundStateProfile out;
    out.xs = grid.nodes();
    out.values = r;
    out.sigma = sigma;
    out.dim = dim;
    out.iterations = it;
    for (double v : r) out.peak = std::max(out.peak, std::abs(v));
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = r[i] * r[i];
    out.norm_sq = radial_integral(sq, grid, dim);

    for (std::size_t i = 0; i < n; ++i) rc[i] = Complex(r[i], 0.0);
    const auto br = biharm.apply(rc);
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double res = -br[i].real() - r[i] + nonlinear_term(r[i], sigma);
        worst = std::max(worst, std::abs(res));
    }
    out.residual = worst;
    return out;
}

double critical_power(int dim) {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    static std::mutex mutex;
    static std::map<int, double> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(dim);
    if (it != cache.end()) return it->second;
    const auto profile = solve_ground_state_radial(4.0 / dim, dim);
    cache[dim] = profile.norm_sq;
    return profile.norm_sq;
}

void write_profile(std::ostream& os, const GroundStateProfile& profile) {
    os << "# sigma = " << fmt_g17(profile.sigma) << '\n';
    os << "# d = " << profile.dim << '\n';
    os << "# norm_sq = " << fmt_g17(profile.norm_sq) << '\n';
    os << "# residual = " << fmt_g17(profile.residual) << '\n';
    os << "x\tR\n";
    for (std::size_t i = 0; i < profile.xs.size(); ++i)
        os << fmt_g17(profile.xs[i]) << '\t' << fmt_g17(profile.values[i]) << '\n';
}

GroundStateProfile read_profile(std::istream& is) {
    GroundStateProfile out;
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
            if (key == "sigma" && parse_double(val, v)) out.sigma = v;
            if (key == "d" && parse_double(val, v)) out.dim = static_cast<int>(v);
            if (key == "norm_sq" && parse_double(val, v)) out.norm_sq = v;
            if (key == "residual" && parse_double(val, v)) out.residual = v;
            continue;
        }
        if (sv.front() == 'x') continue;  // column header
        const auto fields = split_fields(sv);
        if (fields.size() != 2) continue;
        double x, r;
        if (parse_double(fields[0], x) && parse_double(fields[1], r)) {
            out.xs.push_back(x);
            out.values.push_back(r);
            out.peak = std::max(out.peak, std::abs(r));
        }
    }
    return out;
}

}  // namespace bnls
