#include "bnls/banded.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bnls/textio.hpp"

namespace bnls {

BandedOperator::BandedOperator(std::size_t n, int lower, int upper)
    : n_(n), kl_(lower), ku_(upper) {
    if (lower < 0 || upper < 0) throw std::invalid_argument("band counts must be non-negative");
    rows_.assign(n_ * static_cast<std::size_t>(bandwidth()), Complex(0.0, 0.0));
}

Complex BandedOperator::at(std::size_t i, std::size_t j) const {
    const long off = static_cast<long>(j) - static_cast<long>(i);
    if (off < -kl_ || off > ku_) return Complex(0.0, 0.0);
    return rows_[i * bandwidth() + static_cast<std::size_t>(off + kl_)];
}

void BandedOperator::set(std::size_t i, std::size_t j, Complex v) {
    const long off = static_cast<long>(j) - static_cast<long>(i);
    if (i >= n_ || j >= n_ || off < -kl_ || off > ku_)
        throw std::out_of_range("band entry outside bandwidth");
    rows_[i * bandwidth() + static_cast<std::size_t>(off + kl_)] = v;
}

void BandedOperator::add(std::size_t i, std::size_t j, Complex v) {
    const long off = static_cast<long>(j) - static_cast<long>(i);
    if (i >= n_ || j >= n_ || off < -kl_ || off > ku_)
        throw std::out_of_range("band entry outside bandwidth");
    rows_[i * bandwidth() + static_cast<std::size_t>(off + kl_)] += v;
}

void BandedOperator::clear_row(std::size_t i) {
    for (int b = 0; b < bandwidth(); ++b) rows_[i * bandwidth() + b] = Complex(0.0, 0.0);
}

double BandedOperator::row_scale(std::size_t i) const {
    double s2 = 0.0;
    for (int b = 0; b < bandwidth(); ++b)
        s2 = std::max(s2, std::norm(rows_[i * bandwidth() + b]));
    return std::sqrt(s2);
}

void BandedOperator::assign_identity_plus_scaled(const BandedOperator& b, Complex alpha) {
    if (n_ != b.n_ || kl_ != b.kl_ || ku_ != b.ku_)
        throw std::invalid_argument("assign_identity_plus_scaled: shape mismatch");
    for (std::size_t k = 0; k < rows_.size(); ++k) rows_[k] = alpha * b.rows_[k];
    for (std::size_t i = 0; i < n_; ++i)
        rows_[i * bandwidth() + static_cast<std::size_t>(kl_)] += 1.0;
}

void BandedOperator::apply_into(std::span<const Complex> x, std::span<Complex> y) const {
    if (x.size() != n_ || y.size() != n_) throw std::invalid_argument("apply: length mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
        const long jlo = std::max<long>(0, static_cast<long>(i) - kl_);
        const long jhi = std::min<long>(static_cast<long>(n_) - 1, static_cast<long>(i) + ku_);
        Complex acc(0.0, 0.0);
        const Complex* row = &rows_[i * bandwidth()];
        for (long j = jlo; j <= jhi; ++j)
            acc += row[j - static_cast<long>(i) + kl_] * x[static_cast<std::size_t>(j)];
        y[i] = acc;
    }
}

std::vector<Complex> BandedOperator::apply(std::span<const Complex> x) const {
    std::vector<Complex> y(n_, Complex(0.0, 0.0));
    apply_into(x, y);
    return y;
}

BandedOperator identity_plus_scaled(const BandedOperator& b, Complex alpha) {
    BandedOperator out(b.size(), b.lower_bands(), b.upper_bands());
    for (std::size_t i = 0; i < b.size(); ++i) {
        const long jlo = std::max<long>(0, static_cast<long>(i) - b.lower_bands());
        const long jhi =
            std::min<long>(static_cast<long>(b.size()) - 1, static_cast<long>(i) + b.upper_bands());
        for (long j = jlo; j <= jhi; ++j) {
            Complex v = alpha * b.at(i, static_cast<std::size_t>(j));
            if (static_cast<std::size_t>(j) == i) v += 1.0;
            out.set(i, static_cast<std::size_t>(j), v);
        }
    }
    return out;
}

namespace {
constexpr double kPivotTol = 1e-14;
}

void BandLU::factor(const BandedOperator& op) {
    n_ = op.size();
    kl_ = op.lower_bands();
    ku_ = op.upper_bands();
    ldab_ = 2 * kl_ + ku_ + 1;
    ab_.assign(static_cast<std::size_t>(ldab_) * n_, Complex(0.0, 0.0));
    ipiv_.assign(n_, 0);

    // Column-major band layout with kl extra rows for pivoting fill-in:
    // A(i, j) at ab_[(kl + ku + i - j) + j * ldab].
    const int kd = kl_ + ku_;
    scale_.resize(n_);
    std::vector<double>& scale = scale_;
    for (std::size_t i = 0; i < n_; ++i) scale[i] = op.row_scale(i);
    for (std::size_t j = 0; j < n_; ++j) {
        const long ilo = std::max<long>(0, static_cast<long>(j) - ku_);
        const long ihi = std::min<long>(static_cast<long>(n_) - 1, static_cast<long>(j) + kl_);
        for (long i = ilo; i <= ihi; ++i)
            ab_[static_cast<std::size_t>(kd + i - static_cast<long>(j)) +
                j * static_cast<std::size_t>(ldab_)] = op.at(static_cast<std::size_t>(i), j);
    }

    auto entry = [&](long i, long j) -> Complex& {
        return ab_[static_cast<std::size_t>(kd + i - j) +
                   static_cast<std::size_t>(j) * static_cast<std::size_t>(ldab_)];
    };

    for (long k = 0; k < static_cast<long>(n_); ++k) {
        const long imax = std::min<long>(static_cast<long>(n_) - 1, k + kl_);
        long p = k;
        double best2 = std::norm(entry(k, k));
        for (long i = k + 1; i <= imax; ++i) {
            const double v2 = std::norm(entry(i, k));
            if (v2 > best2) {
                best2 = v2;
                p = i;
            }
        }
        const double best = std::sqrt(best2);
        const double rowscale = std::max(scale[static_cast<std::size_t>(p)], 0.0);
        if (!(best > kPivotTol * rowscale) || best == 0.0) {
            throw std::runtime_error(
                "band LU: pivot " + fmt_g17(best) + " below " + fmt_g17(kPivotTol) +
                " of row scale " + fmt_g17(rowscale) + " at column " + std::to_string(k) +
                " (matrix singular or severely ill-conditioned)");
        }
        ipiv_[static_cast<std::size_t>(k)] = static_cast<std::size_t>(p);
        const long jhi = std::min<long>(static_cast<long>(n_) - 1, k + kl_ + ku_);
        if (p != k) {
            std::swap(scale[static_cast<std::size_t>(p)], scale[static_cast<std::size_t>(k)]);
            for (long j = k; j <= jhi; ++j) std::swap(entry(k, j), entry(p, j));
        }
        const Complex pivot_inv = 1.0 / entry(k, k);
        for (long i = k + 1; i <= imax; ++i) {
            const Complex m = entry(i, k) * pivot_inv;
            entry(i, k) = m;
            if (m != Complex(0.0, 0.0)) {
                for (long j = k + 1; j <= jhi; ++j) entry(i, j) -= m * entry(k, j);
            }
        }
    }
}

void BandLU::solve_in_place(std::span<Complex> x) const {
    if (x.size() != n_) throw std::invalid_argument("solve: length mismatch");
    const int kd = kl_ + ku_;
    auto entry = [&](long i, long j) -> const Complex& {
        return ab_[static_cast<std::size_t>(kd + i - j) +
                   static_cast<std::size_t>(j) * static_cast<std::size_t>(ldab_)];
    };
    for (long k = 0; k < static_cast<long>(n_); ++k) {
        const std::size_t p = ipiv_[static_cast<std::size_t>(k)];
        if (p != static_cast<std::size_t>(k)) std::swap(x[static_cast<std::size_t>(k)], x[p]);
        const long imax = std::min<long>(static_cast<long>(n_) - 1, k + kl_);
        const Complex xk = x[static_cast<std::size_t>(k)];
        if (xk != Complex(0.0, 0.0)) {
            for (long i = k + 1; i <= imax; ++i)
                x[static_cast<std::size_t>(i)] -= entry(i, k) * xk;
        }
    }
    for (long k = static_cast<long>(n_) - 1; k >= 0; --k) {
        const long jhi = std::min<long>(static_cast<long>(n_) - 1, k + kl_ + ku_);
        Complex acc = x[static_cast<std::size_t>(k)];
        for (long j = k + 1; j <= jhi; ++j) acc -= entry(k, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(k)] = acc / entry(k, k);
    }
}

std::vector<Complex> BandLU::solve(std::span<const Complex> rhs) const {
    std::vector<Complex> x(rhs.begin(), rhs.end());
    solve_in_place(x);
    return x;
}

std::vector<Complex> apply(const BandedOperator& op, std::span<const Complex> x) {
    return op.apply(x);
}

std::vector<Complex> solve_banded(const BandedOperator& op, std::span<const Complex> rhs) {
    return BandLU(op).solve(rhs);
}

}  // namespace bnls
