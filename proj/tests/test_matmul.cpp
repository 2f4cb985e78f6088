#include <gtest/gtest.h>

#include <cmath>

#include "panelfact/errors.hpp"
#include "panelfact/matmul.hpp"

using namespace panelfact;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    SplitMix64 g(seed);
    Matrix m(rows, cols);
    for (double& v : m.values()) v = g.uniform(-1.0, 1.0);
    return m;
}

Matrix ones(std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (double& v : m.values()) v = 1.0;
    return m;
}

// Straight triple loop, k ascending from the first product.
Matrix reference_product(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double sum = a(i, 0) * b(0, j);
            for (std::size_t k = 1; k < a.cols(); ++k) sum += a(i, k) * b(k, j);
            c(i, j) = sum;
        }
    }
    return c;
}

const Matrix kA = Matrix::from_rows({{1, 2}, {3, 4}});
const Matrix kB = Matrix::from_rows({{5, 6}, {7, 8}});
const Matrix kAB = Matrix::from_rows({{19, 22}, {43, 50}});

} // namespace

TEST(MulClassical, Examples) {
    EXPECT_EQ(mul_classical(kA, kB), kAB);
    const Matrix r = random_matrix(5, 5, 1);
    EXPECT_EQ(mul_classical(r, Matrix::identity(5)), r);
    EXPECT_EQ(mul_classical(ones(2, 3), ones(3, 2)), Matrix::from_rows({{3, 3}, {3, 3}}));
}

TEST(MulClassical, BitwiseMatchesTripleLoop) {
    // Shapes straddle the register tile edges.
    for (std::size_t m : {1u, 3u, 7u, 9u, 13u, 21u, 33u}) {
        for (std::size_t k : {1u, 2u, 5u, 17u}) {
            for (std::size_t p : {1u, 4u, 8u, 11u, 19u, 40u}) {
                const Matrix a = random_matrix(m, k, m * 100 + k);
                const Matrix b = random_matrix(k, p, p * 7 + 3);
                ASSERT_EQ(mul_classical(a, b), reference_product(a, b))
                    << m << "x" << k << "x" << p;
            }
        }
    }
}

TEST(MulClassical, CountsAndErrors) {
    OpCount ops;
    mul_classical(random_matrix(3, 4, 1), random_matrix(4, 5, 2), &ops);
    EXPECT_EQ(ops.mults, 60u);
    EXPECT_EQ(ops.adds, 45u);
    EXPECT_THROW(mul_classical(zeros(2, 3), zeros(2, 3)), DimensionError);
}

TEST(MulStrassen, Examples) {
    EXPECT_EQ(mul_strassen_square(kA, kB, 1), kAB);
    const Matrix a = random_matrix(9, 9, 5), b = random_matrix(9, 9, 6);
    EXPECT_EQ(mul_strassen_square(a, b, 0), mul_classical(a, b));
}

TEST(MulStrassen, CountDepthOneOnFour) {
    OpCount ops;
    mul_strassen_square(random_matrix(4, 4, 1), random_matrix(4, 4, 2), 1, &ops);
    EXPECT_EQ(ops.mults, 56u);
    OpCount classical;
    mul_classical(random_matrix(4, 4, 1), random_matrix(4, 4, 2), &classical);
    EXPECT_EQ(classical.mults, 64u);
}

TEST(MulStrassen, CountLaw) {
    for (std::size_t n : {8u, 16u, 32u, 64u}) {
        for (std::size_t d = 1; d <= 3; ++d) {
            OpCount ops;
            mul_strassen_square(random_matrix(n, n, n), random_matrix(n, n, d), d, &ops);
            const std::uint64_t leaf = n >> d;
            EXPECT_EQ(ops.mults, static_cast<std::uint64_t>(std::pow(7, d)) * leaf * leaf * leaf);
            EXPECT_EQ(ops, predict_square(n, MulBackend::strassen(d)));
        }
    }
}

TEST(MulStrassen, AdditionsPerLevel) {
    // One level on n = 2h: 7 leaf products of h^3 mults, h^2 (h - 1) adds,
    // plus 18 block additions of h^2 entries.
    OpCount ops;
    mul_strassen_square(random_matrix(6, 6, 1), random_matrix(6, 6, 2), 1, &ops);
    EXPECT_EQ(ops.mults, 7u * 27u);
    EXPECT_EQ(ops.adds, 7u * 9u * 2u + 18u * 9u);
}

TEST(MulStrassen, PaddingMatchesClassical) {
    for (std::size_t n : {1u, 3u, 5u, 7u, 10u, 13u, 31u, 50u}) {
        for (std::size_t d = 1; d <= 3; ++d) {
            const Matrix a = random_matrix(n, n, n + 10 * d), b = random_matrix(n, n, n + 1);
            OpCount ops;
            const Matrix c = mul_strassen_square(a, b, d, &ops);
            EXPECT_LE(max_abs_diff(c, mul_classical(a, b)), 1e-12 * double(n)) << n << " " << d;
            EXPECT_EQ(ops, predict_square(n, MulBackend::strassen(d)));
        }
    }
}

TEST(MulStrassen, CutoffReducesDepth) {
    EXPECT_EQ(effective_strassen_depth(64, 3, 1), 3u);
    EXPECT_EQ(effective_strassen_depth(64, 3, 16), 2u);
    EXPECT_EQ(effective_strassen_depth(64, 3, 65), 0u);
    EXPECT_EQ(effective_strassen_depth(5, 3, 1), 3u);
    const Matrix a = random_matrix(16, 16, 1), b = random_matrix(16, 16, 2);
    EXPECT_EQ(mul_square(a, b, MulBackend::strassen(3, 17)), mul_classical(a, b));
}

TEST(MulStrassen, Errors) {
    EXPECT_THROW(mul_strassen_square(zeros(2, 3), zeros(3, 2), 1), DimensionError);
    EXPECT_THROW(mul_strassen_square(zeros(2, 2), zeros(3, 3), 1), DimensionError);
    EXPECT_THROW(mul_square(zeros(2, 2), zeros(3, 3), MulBackend::classical()), DimensionError);
}

TEST(MulRect, Examples) {
    EXPECT_EQ(mul_rect(ones(4, 2), ones(2, 4), MulBackend::classical(), 2), [] {
        Matrix m(4, 4);
        for (double& v : m.values()) v = 2.0;
        return m;
    }());

    const Matrix a = random_matrix(6, 3, 1), b = random_matrix(3, 6, 2);
    const Matrix c = mul_rect(a, b, MulBackend::strassen(1), 3);
    EXPECT_LE(max_abs_diff(c, mul_classical(a, b)), 1e-12 * 3);
}

TEST(MulRect, SingleTileIsOneBackendCall) {
    const Matrix a = random_matrix(5, 3, 1), b = random_matrix(3, 4, 2);
    for (const MulBackend be : {MulBackend::classical(), MulBackend::strassen(2)}) {
        Matrix ap(8, 8), bp(8, 8);
        for (std::size_t i = 0; i < 5; ++i) {
            for (std::size_t j = 0; j < 3; ++j) ap(i, j) = a(i, j);
        }
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 4; ++j) bp(i, j) = b(i, j);
        }
        const Matrix full = mul_square(ap, bp, be);
        EXPECT_EQ(mul_rect(a, b, be, 8), copy_region(full, {1, 5, 1, 4}));
    }
}

TEST(MulRect, ClassicalTilesAreBitwiseClassicalWhenOneInnerBlock) {
    const Matrix a = random_matrix(23, 6, 1), b = random_matrix(6, 17, 2);
    EXPECT_EQ(mul_rect(a, b, MulBackend::classical(), 6), mul_classical(a, b));
}

TEST(MulRect, BlockProductCount) {
    for (std::size_t m : {1u, 5u, 8u, 13u}) {
        for (std::size_t k : {1u, 4u, 9u}) {
            for (std::size_t p : {2u, 8u, 11u}) {
                for (std::size_t t : {1u, 3u, 4u, 16u}) {
                    OpCount ops;
                    mul_rect(random_matrix(m, k, 1), random_matrix(k, p, 2),
                             MulBackend::strassen(1), t, &ops);
                    const auto cd = [](std::size_t x, std::size_t y) { return (x + y - 1) / y; };
                    EXPECT_EQ(ops.block_products, cd(m, t) * cd(k, t) * cd(p, t));
                    EXPECT_EQ(ops, predict_rect(m, k, p, MulBackend::strassen(1), t));
                }
            }
        }
    }
}

TEST(MulRect, Errors) {
    EXPECT_THROW(mul_rect(zeros(2, 3), zeros(2, 3), MulBackend::classical(), 2), DimensionError);
    EXPECT_THROW(mul_rect(zeros(2, 3), zeros(3, 2), MulBackend::classical(), 0), DimensionError);
}

TEST(MulAtB, Examples) {
    const Matrix b = random_matrix(4, 3, 3);
    EXPECT_EQ(mul_at_b(Matrix::identity(4), b, MulBackend::classical(), 2), b);
    const Matrix v = Matrix::from_rows({{1}, {2}});
    EXPECT_EQ(mul_at_b(v, v, MulBackend::classical(), 1), Matrix::from_rows({{5}}));

    const Matrix x = random_matrix(5, 2, 1), y = random_matrix(5, 3, 2);
    const Matrix expect = mul_classical(transpose(x), y);
    for (const MulBackend be : {MulBackend::classical(), MulBackend::strassen(1)}) {
        EXPECT_LE(max_abs_diff(mul_at_b(x, y, be, 2), expect), 1e-13);
    }
    EXPECT_THROW(mul_at_b(zeros(2, 2), zeros(3, 2), MulBackend::classical(), 2), DimensionError);
}

TEST(MulABt, Examples) {
    const Matrix a = random_matrix(3, 4, 3);
    EXPECT_EQ(mul_a_bt(a, Matrix::identity(4), MulBackend::classical(), 2), a);
    const Matrix r = Matrix::from_rows({{1, 2}});
    EXPECT_EQ(mul_a_bt(r, r, MulBackend::classical(), 2), Matrix::from_rows({{5}}));
    EXPECT_THROW(mul_a_bt(zeros(2, 2), zeros(2, 3), MulBackend::classical(), 2), DimensionError);
}

TEST(MulABt, SelfProductSymmetry) {
    const Matrix a = random_matrix(6, 2, 9);
    const Matrix s = mul_a_bt(a, a, MulBackend::classical(), 2);
    EXPECT_EQ(s, transpose(s));

    const Matrix big = random_matrix(40, 12, 4);
    const Matrix ss = mul_a_bt(big, big, MulBackend::strassen(2), 12);
    EXPECT_LE(max_abs_diff(ss, transpose(ss)), 1e-13 * max_abs(ss));
}

TEST(Backend, ParseAndPrint) {
    EXPECT_EQ(parse_backend_kind("classical"), BackendKind::Classical);
    EXPECT_EQ(parse_backend_kind("strassen"), BackendKind::Strassen);
    EXPECT_EQ(to_string(BackendKind::Strassen), "strassen");
    EXPECT_THROW(parse_backend_kind("winograd"), std::invalid_argument);
}
