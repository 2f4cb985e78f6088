#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace panelfact {

/// Dense row-major matrix of doubles. Element (i, j) (0-based) lives at offset i*cols + j.
/// Dimensions are always positive.
class Matrix {
public:
    /// Zero-filled rows x cols matrix. Throws DimensionError on a zero or overflowing size.
    Matrix(std::size_t rows, std::size_t cols);

    static Matrix identity(std::size_t n);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool is_square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }
    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

/// Submatrix coordinates, 1-based and inclusive on both ends. Carries no data.
struct Region {
    std::size_t row_start;
    std::size_t row_end;
    std::size_t col_start;
    std::size_t col_end;

    std::size_t rows() const noexcept { return row_end - row_start + 1; }
    std::size_t cols() const noexcept { return col_end - col_start + 1; }

    static Region full(const Matrix& m) { return {1, m.rows(), 1, m.cols()}; }
};

Matrix zeros(std::size_t rows, std::size_t cols);
Matrix transpose(const Matrix& a);

/// Throws DimensionError unless r lies inside m.
void check_region(const Matrix& m, const Region& r);

/// Fresh copy of the entries of src inside r.
Matrix copy_region(const Matrix& src, const Region& r);

/// dst[r] -= s elementwise; entries outside r are untouched.
void sub_assign_region(Matrix& dst, const Region& r, const Matrix& s);

double frobenius(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);
double max_abs(const Matrix& a);

/// a - b, same shape.
Matrix subtract(const Matrix& a, const Matrix& b);

// Structural checks: number of entries that are not exactly 0.0 in the named strict triangle.
std::size_t count_nonzero_strict_upper(const Matrix& a);
std::size_t count_nonzero_strict_lower(const Matrix& a);

/// splitmix64 stream. next() advances the state by 0x9e3779b97f4a7c15 and mixes.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept;
    /// Uniform on [0, 1) from the top 53 bits.
    double uniform01() noexcept;
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

private:
    std::uint64_t state_;
};

/// Symmetric matrix: off-diagonals uniform in [-1, 1], diagonal n + uniform[0, 1].
/// Strictly diagonally dominant, hence positive-definite.
Matrix gen_spd(std::size_t n, std::uint64_t seed);

/// Nonsymmetric matrix with uniform [-1, 1] entries and the diagonal shifted by +n.
Matrix gen_general(std::size_t n, std::uint64_t seed);

} // namespace panelfact
