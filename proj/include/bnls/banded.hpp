#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bnls/field.hpp"

namespace bnls {

// Complex band matrix with kl sub- and ku super-diagonals (bandwidth
// kl + ku + 1). The spatial operators use kl = ku = 3: a seven-point stencil.
// Storage is row-major by stencil window: entry (i, j) lives at
// rows_[i * (kl + ku + 1) + (j - i + kl)].
class BandedOperator {
public:
    BandedOperator() = default;
    explicit BandedOperator(std::size_t n, int lower = 3, int upper = 3);

    std::size_t size() const { return n_; }
    int lower_bands() const { return kl_; }
    int upper_bands() const { return ku_; }
    int bandwidth() const { return kl_ + ku_ + 1; }

    Complex at(std::size_t i, std::size_t j) const;   // zero outside the band
    void set(std::size_t i, std::size_t j, Complex v);
    void add(std::size_t i, std::size_t j, Complex v);
    void clear_row(std::size_t i);

    // Infinity norm of row i.
    double row_scale(std::size_t i) const;

    // this = I + alpha * b, reusing storage (shapes must match).
    void assign_identity_plus_scaled(const BandedOperator& b, Complex alpha);

    std::vector<Complex> apply(std::span<const Complex> x) const;
    void apply_into(std::span<const Complex> x, std::span<Complex> y) const;

private:
    std::size_t n_ = 0;
    int kl_ = 3;
    int ku_ = 3;
    std::vector<Complex> rows_;

    friend class BandLU;
};

// I + alpha * B, same band structure.
BandedOperator identity_plus_scaled(const BandedOperator& b, Complex alpha);

// Direct band LU factorization with partial pivoting confined to the band.
// Throws std::runtime_error with a condition report when a pivot falls below
// 1e-14 of the corresponding row scale. factor() reuses the workspace, so a
// stepper can refactorize every step without reallocating.
class BandLU {
public:
    BandLU() = default;
    explicit BandLU(const BandedOperator& op) { factor(op); }
    void factor(const BandedOperator& op);
    std::vector<Complex> solve(std::span<const Complex> rhs) const;
    void solve_in_place(std::span<Complex> x) const;

private:
    std::size_t n_ = 0;
    int kl_ = 0;
    int ku_ = 0;
    int ldab_ = 0;
    std::vector<Complex> ab_;      // column-major with kl fill-in rows
    std::vector<std::size_t> ipiv_;
    std::vector<double> scale_;
};

std::vector<Complex> apply(const BandedOperator& op, std::span<const Complex> x);
std::vector<Complex> solve_banded(const BandedOperator& op, std::span<const Complex> rhs);

}  // namespace bnls
