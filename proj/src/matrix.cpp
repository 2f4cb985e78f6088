#include "panelfact/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "panelfact/errors.hpp"

namespace panelfact {

namespace {

std::size_t checked_size(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
        throw DimensionError("matrix dimensions must be positive, got " + std::to_string(rows) +
                             "x" + std::to_string(cols));
    }
    constexpr auto limit = std::numeric_limits<std::size_t>::max() / sizeof(double);
    if (rows > limit / cols) {
        throw DimensionError("matrix dimensions overflow: " + std::to_string(rows) + "x" +
                             std::to_string(cols));
    }
    return rows * cols;
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) +
                             "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                             "x" + std::to_string(b.cols()));
    }
}

} // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(checked_size(rows, cols), 0.0) {}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) throw DimensionError("from_rows: ragged rows");
        std::copy(row.begin(), row.end(), m.row(i).begin());
        ++i;
    }
    return m;
}

Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

void check_region(const Matrix& m, const Region& r) {
    const bool ok = r.row_start >= 1 && r.row_start <= r.row_end && r.row_end <= m.rows() &&
                    r.col_start >= 1 && r.col_start <= r.col_end && r.col_end <= m.cols();
    if (!ok) {
        throw DimensionError("region rows " + std::to_string(r.row_start) + ".." +
                             std::to_string(r.row_end) + ", cols " + std::to_string(r.col_start) +
                             ".." + std::to_string(r.col_end) + " outside " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + " matrix");
    }
}

Matrix copy_region(const Matrix& src, const Region& r) {
    check_region(src, r);
    Matrix out(r.rows(), r.cols());
    for (std::size_t i = 0; i < r.rows(); ++i) {
        const auto from = src.row(r.row_start - 1 + i).subspan(r.col_start - 1, r.cols());
        std::copy(from.begin(), from.end(), out.row(i).begin());
    }
    return out;
}

void sub_assign_region(Matrix& dst, const Region& r, const Matrix& s) {
    check_region(dst, r);
    if (s.rows() != r.rows() || s.cols() != r.cols()) {
        throw DimensionError("sub_assign_region: operand is " + std::to_string(s.rows()) + "x" +
                             std::to_string(s.cols()) + ", region is " + std::to_string(r.rows()) +
                             "x" + std::to_string(r.cols()));
    }
    for (std::size_t i = 0; i < r.rows(); ++i) {
        auto to = dst.row(r.row_start - 1 + i).subspan(r.col_start - 1, r.cols());
        const auto from = s.row(i);
        for (std::size_t j = 0; j < to.size(); ++j) to[j] -= from[j];
    }
}

double frobenius(const Matrix& a) {
    double sum = 0.0;
    for (double v : a.values()) sum += v * v;
    return std::sqrt(sum);
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double worst = 0.0;
    const auto x = a.values();
    const auto y = b.values();
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    return worst;
}

double max_abs(const Matrix& a) {
    double worst = 0.0;
    for (double v : a.values()) worst = std::max(worst, std::abs(v));
    return worst;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "subtract");
    Matrix out = a;
    auto o = out.values();
    const auto y = b.values();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] -= y[i];
    return out;
}

std::size_t count_nonzero_strict_upper(const Matrix& a) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (a(i, j) != 0.0) ++count;
    return count;
}

std::size_t count_nonzero_strict_lower(const Matrix& a) {
    std::size_t count = 0;
    for (std::size_t i = 1; i < a.rows(); ++i)
        for (std::size_t j = 0; j < std::min(i, a.cols()); ++j)
            if (a(i, j) != 0.0) ++count;
    return count;
}

std::uint64_t SplitMix64::next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform01() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

Matrix gen_spd(std::size_t n, std::uint64_t seed) {
    Matrix a(n, n);
    SplitMix64 rng(seed);
    // Upper triangle row by row, mirrored; then the diagonal.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = rng.uniform(-1.0, 1.0);
            a(i, j) = v;
            a(j, i) = v;
        }
    }
    for (std::size_t i = 0; i < n; ++i) a(i, i) = static_cast<double>(n) + rng.uniform01();
    return a;
}

Matrix gen_general(std::size_t n, std::uint64_t seed) {
    Matrix a(n, n);
    SplitMix64 rng(seed);
    for (double& v : a.values()) v = rng.uniform(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) a(i, i) += static_cast<double>(n);
    return a;
}

} // namespace panelfact
