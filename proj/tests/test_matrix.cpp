#include <gtest/gtest.h>

#include <cmath>

#include "panelfact/errors.hpp"
#include "panelfact/matrix.hpp"
#include "panelfact/oracle.hpp"

using namespace panelfact;

TEST(Zeros, Shapes) {
    const Matrix a = zeros(2, 2);
    EXPECT_EQ(a, Matrix::from_rows({{0, 0}, {0, 0}}));
    const Matrix row = zeros(1, 3);
    EXPECT_EQ(row.rows(), 1u);
    EXPECT_EQ(row.cols(), 3u);
    const Matrix col = zeros(3, 1);
    EXPECT_EQ(col.rows(), 3u);
    for (double v : col.values()) EXPECT_EQ(v, 0.0);
}

TEST(Zeros, RejectsDegenerateSizes) {
    EXPECT_THROW(zeros(0, 3), DimensionError);
    EXPECT_THROW(zeros(3, 0), DimensionError);
    EXPECT_THROW(zeros(std::size_t{1} << 40, std::size_t{1} << 40), DimensionError);
}

TEST(Matrix, RowMajorLayout) {
    const Matrix a = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
    EXPECT_EQ(a.data()[1 * 3 + 2], 6.0);
    EXPECT_EQ(a(1, 0), 4.0);
    EXPECT_THROW(Matrix::from_rows({{1, 2}, {3}}), DimensionError);
}

TEST(CopyRegion, Examples) {
    const Matrix src = Matrix::from_rows({{1, 2}, {3, 4}});
    EXPECT_EQ(copy_region(src, {1, 2, 2, 2}), Matrix::from_rows({{2}, {4}}));

    Matrix whole = copy_region(src, Region::full(src));
    EXPECT_EQ(whole, src);
    whole(0, 0) = 9;
    EXPECT_EQ(src(0, 0), 1.0);

    EXPECT_EQ(copy_region(Matrix::identity(3), {2, 3, 1, 2}), Matrix::from_rows({{0, 1}, {0, 0}}));
}

TEST(CopyRegion, RejectsOutOfBounds) {
    const Matrix src = zeros(3, 3);
    EXPECT_THROW(copy_region(src, {0, 1, 1, 1}), DimensionError);
    EXPECT_THROW(copy_region(src, {1, 4, 1, 1}), DimensionError);
    EXPECT_THROW(copy_region(src, {2, 1, 1, 1}), DimensionError);
    EXPECT_THROW(copy_region(src, {1, 1, 3, 4}), DimensionError);
}

TEST(SubAssignRegion, Examples) {
    Matrix dst = Matrix::from_rows({{5, 5}, {5, 5}});
    sub_assign_region(dst, Region::full(dst), Matrix::from_rows({{1, 2}, {3, 4}}));
    EXPECT_EQ(dst, Matrix::from_rows({{4, 3}, {2, 1}}));

    const Matrix before = dst;
    sub_assign_region(dst, Region::full(dst), zeros(2, 2));
    EXPECT_EQ(dst, before);

    Matrix big = Matrix::from_rows({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
    sub_assign_region(big, {2, 3, 2, 3}, Matrix::from_rows({{1, 1}, {1, 1}}));
    EXPECT_EQ(big, Matrix::from_rows({{1, 1, 1}, {1, 0, 0}, {1, 0, 0}}));
}

TEST(SubAssignRegion, ShapeMismatch) {
    Matrix dst = zeros(3, 3);
    EXPECT_THROW(sub_assign_region(dst, {1, 2, 1, 2}, zeros(2, 3)), DimensionError);
}

TEST(Norms, Frobenius) {
    EXPECT_DOUBLE_EQ(frobenius(Matrix::from_rows({{3, 4}})), 5.0);
    EXPECT_EQ(frobenius(zeros(4, 2)), 0.0);
    EXPECT_DOUBLE_EQ(frobenius(Matrix::identity(7)), std::sqrt(7.0));
}

TEST(Norms, MaxAbsDiff) {
    const Matrix a = gen_general(5, 3);
    EXPECT_EQ(max_abs_diff(a, a), 0.0);
    EXPECT_EQ(max_abs_diff(Matrix::from_rows({{1}}), Matrix::from_rows({{1.5}})), 0.5);
    EXPECT_EQ(max_abs_diff(Matrix::identity(3), zeros(3, 3)), 1.0);
    EXPECT_THROW(max_abs_diff(zeros(2, 2), zeros(2, 3)), DimensionError);
}

TEST(Triangles, CountStrictParts) {
    const Matrix a = Matrix::from_rows({{1, 2, 0}, {0, 1, 3}, {4, 0, 1}});
    EXPECT_EQ(count_nonzero_strict_upper(a), 2u);
    EXPECT_EQ(count_nonzero_strict_lower(a), 1u);
}

TEST(SplitMix64, KnownSequence) {
    // Reference values of the splitmix64 stream seeded with 0.
    SplitMix64 g(0);
    EXPECT_EQ(g.next(), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(g.next(), 0x6e789e6aa1b965f4ULL);
    EXPECT_EQ(g.next(), 0x06c45d188009454fULL);
}

TEST(SplitMix64, UniformRange) {
    SplitMix64 g(123);
    for (int i = 0; i < 10000; ++i) {
        const double u = g.uniform01();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(GenSpd, Deterministic) {
    EXPECT_EQ(gen_spd(4, 42), gen_spd(4, 42));
    EXPECT_NE(gen_spd(4, 42), gen_spd(4, 43));
}

TEST(GenSpd, SymmetricAndPositiveDefinite) {
    const Matrix a = gen_spd(8, 7);
    EXPECT_EQ(a, transpose(a));
    EXPECT_NO_THROW(oracle::cholesky_crout(a));
}

TEST(GenGeneral, DeterministicAndNonsymmetric) {
    EXPECT_EQ(gen_general(4, 1), gen_general(4, 1));
    const Matrix a = gen_general(2, 5);
    EXPECT_NE(a, transpose(a));
}

TEST(GenGeneral, PivotsNonzero) {
    const auto f = oracle::lu_crout_unit_u(gen_general(8, 3));
    for (std::size_t c = 0; c < 8; ++c) EXPECT_GT(std::abs(f.lower(c, c)), 0.0);
}

TEST(Generators, EntryRanges) {
    const std::size_t n = 50;
    const Matrix s = gen_spd(n, 11);
    const Matrix g = gen_general(n, 11);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) {
                EXPECT_GE(s(i, i), double(n));
                EXPECT_LT(s(i, i), double(n) + 1);
                EXPECT_GE(g(i, i), double(n) - 1);
                EXPECT_LT(g(i, i), double(n) + 1);
            } else {
                EXPECT_GE(s(i, j), -1.0);
                EXPECT_LE(s(i, j), 1.0);
                EXPECT_GE(g(i, j), -1.0);
                EXPECT_LE(g(i, j), 1.0);
            }
        }
    }
}
