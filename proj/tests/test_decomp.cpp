#include <gtest/gtest.h>

#include "panelfact/decomp.hpp"
#include "panelfact/errors.hpp"
#include "panelfact/policy.hpp"

using namespace panelfact;

namespace {

const MulBackend kClassical = MulBackend::classical();

void expect_failure(auto&& fn, NumericalFailure kind, std::size_t column) {
    try {
        fn();
        FAIL() << "expected NumericalError";
    } catch (const NumericalError& e) {
        EXPECT_EQ(e.kind(), kind);
        EXPECT_EQ(e.column(), column);
    }
}

} // namespace

TEST(PanelState, FlushCondition) {
    PanelState st{1, 1, 3};
    EXPECT_FALSE(st.flush_due());
    st.current = 4;
    EXPECT_TRUE(st.flush_due());
}

TEST(DecompKind, ParseAndPrint) {
    EXPECT_EQ(parse_decomp_kind("cholesky"), DecompKind::Cholesky);
    EXPECT_EQ(parse_decomp_kind("lu"), DecompKind::Lu);
    EXPECT_EQ(parse_decomp_kind("qr"), DecompKind::Qr);
    EXPECT_EQ(to_string(DecompKind::Qr), "qr");
    EXPECT_THROW(parse_decomp_kind("svd"), std::invalid_argument);
}

TEST(BlockedCholesky, FullWidthIsCrout) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Matrix a = gen_spd(37, seed);
        EXPECT_EQ(blocked_cholesky(a, 37, kClassical), oracle::cholesky_crout(a));
        EXPECT_EQ(blocked_cholesky(a, 37, MulBackend::strassen(2)), oracle::cholesky_crout(a));
    }
}

TEST(BlockedCholesky, UnitWidthIsRecursive) {
    const Matrix a = gen_spd(24, 5);
    EXPECT_LE(max_abs_diff(blocked_cholesky(a, 1, kClassical), oracle::cholesky_recursive(a)),
              1e-13);
}

TEST(BlockedCholesky, StrassenMatchesOracle) {
    const Matrix a = gen_spd(64, 9);
    const Matrix l = blocked_cholesky(a, 8, MulBackend::strassen(2));
    EXPECT_LE(max_abs_diff(l, oracle::cholesky_crout(a)), 1e-11);
    EXPECT_EQ(count_nonzero_strict_upper(l), 0u);
}

TEST(BlockedCholesky, Errors) {
    const Matrix bad = Matrix::from_rows({{1, 2}, {2, 1}});
    for (std::size_t s : {1u, 2u}) {
        expect_failure([&] { blocked_cholesky(bad, s, kClassical); },
                       NumericalFailure::NotPositiveDefinite, 2);
    }
    EXPECT_THROW(blocked_cholesky(gen_spd(4, 1), 0, kClassical), DimensionError);
    EXPECT_THROW(blocked_cholesky(gen_spd(4, 1), 5, kClassical), DimensionError);
    EXPECT_THROW(blocked_cholesky(zeros(2, 3), 1, kClassical), DimensionError);
}

TEST(BlockedCholesky, FailureAfterFlush) {
    // Leading 3x3 block is PD, the 4th pivot goes negative after a flush.
    Matrix a = Matrix::identity(4);
    a(3, 0) = a(0, 3) = 2;
    for (std::size_t s : {1u, 2u, 3u, 4u}) {
        DecompStats st;
        expect_failure([&] { blocked_cholesky(a, s, kClassical, &st); },
                       NumericalFailure::NotPositiveDefinite, 4);
        EXPECT_EQ(st.flushes, expected_flushes(4, s));
    }
}

TEST(BlockedLu, HandExampleAnyWidth) {
    const Matrix a = Matrix::from_rows({{2, 1}, {4, 4}});
    for (std::size_t s : {1u, 2u}) {
        const auto f = blocked_lu(a, s, kClassical);
        EXPECT_EQ(f.lower, Matrix::from_rows({{2, 0}, {4, 2}}));
        EXPECT_EQ(f.upper, Matrix::from_rows({{1, 0.5}, {0, 1}}));
    }
}

TEST(BlockedLu, FullWidthIsCrout) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Matrix a = gen_general(29, seed);
        const auto f = blocked_lu(a, 29, kClassical);
        const auto o = oracle::lu_crout_unit_u(a);
        EXPECT_EQ(f.lower, o.lower);
        EXPECT_EQ(f.upper, o.upper);
    }
}

TEST(BlockedLu, StrassenReconstruction) {
    const Matrix a = gen_general(64, 4);
    const auto f = blocked_lu(a, 8, MulBackend::strassen(1));
    EXPECT_LE(residual_rel(DecompKind::Lu, a, {f.lower, f.upper}), 1e-12 * 64);
    for (std::size_t c = 0; c < 64; ++c) EXPECT_EQ(f.upper(c, c), 1.0);
    EXPECT_EQ(count_nonzero_strict_upper(f.lower), 0u);
    EXPECT_EQ(count_nonzero_strict_lower(f.upper), 0u);
}

TEST(BlockedLu, SingularLeadingMinor) {
    const Matrix a = Matrix::from_rows({{0, 1}, {1, 0}});
    for (std::size_t s : {1u, 2u}) {
        expect_failure([&] { blocked_lu(a, s, kClassical); },
                       NumericalFailure::SingularLeadingMinor, 1);
    }
    // Singular only after a trailing update has been applied.
    const Matrix b = Matrix::from_rows({{1, 2, 0}, {2, 4, 1}, {0, 1, 1}});
    for (std::size_t s : {1u, 2u, 3u}) {
        expect_failure([&] { blocked_lu(b, s, kClassical); },
                       NumericalFailure::SingularLeadingMinor, 2);
    }
}

TEST(BlockedQr, FullWidthMatchesMgs) {
    const Matrix a = gen_general(21, 2);
    const auto f = blocked_qr(a, 21, kClassical);
    const auto o = oracle::qr_mgs(a);
    EXPECT_LE(max_abs_diff(f.q, o.q), 1e-13);
    EXPECT_LE(max_abs_diff(f.r, o.r), 1e-13);
}

TEST(BlockedQr, IdentityAnyWidth) {
    for (std::size_t s : {1u, 2u, 3u, 5u}) {
        const auto f = blocked_qr(Matrix::identity(5), s, MulBackend::strassen(1));
        EXPECT_EQ(f.q, Matrix::identity(5));
        EXPECT_EQ(f.r, Matrix::identity(5));
    }
}

TEST(BlockedQr, StrassenOrthogonality) {
    const Matrix a = gen_general(64, 11);
    const auto f = blocked_qr(a, 8, MulBackend::strassen(1));
    EXPECT_LE(orth_rel(f.q), 1e-10 * 64);
    EXPECT_LE(residual_rel(DecompKind::Qr, a, {f.q, f.r}), 1e-10 * 64);
    EXPECT_EQ(count_nonzero_strict_lower(f.r), 0u);
}

TEST(BlockedQr, RankDeficient) {
    const Matrix a = Matrix::from_rows({{1, 2, 1}, {2, 4, 0}, {3, 6, 1}});
    for (std::size_t s : {1u, 2u, 3u}) {
        expect_failure([&] { blocked_qr(a, s, kClassical); }, NumericalFailure::RankDeficient, 2);
    }
}

TEST(FlushCount, MatchesFloorLaw) {
    for (std::size_t n : {1u, 2u, 7u, 16u, 33u}) {
        for (std::size_t s = 1; s <= n; ++s) {
            DecompStats ch, lu, qr;
            blocked_cholesky(gen_spd(n, 1), s, kClassical, &ch);
            blocked_lu(gen_general(n, 1), s, kClassical, &lu);
            blocked_qr(gen_general(n, 1), s, kClassical, &qr);
            const std::size_t want = (n - 1) / s;
            EXPECT_EQ(expected_flushes(n, s), want);
            EXPECT_EQ(ch.flushes, want) << n << " " << s;
            EXPECT_EQ(lu.flushes, want) << n << " " << s;
            EXPECT_EQ(qr.flushes, want) << n << " " << s;
        }
    }
}

TEST(Stats, FlushCountsMatchSchedule) {
    for (const MulBackend be : {kClassical, MulBackend::strassen(1), MulBackend::strassen(2)}) {
        for (auto kind : {DecompKind::Cholesky, DecompKind::Lu, DecompKind::Qr}) {
            const std::size_t n = 40, s = 8;
            const Matrix a = kind == DecompKind::Cholesky ? gen_spd(n, 3) : gen_general(n, 3);
            RunReport report;
            decompose_with_report(kind, a, s, be, report, false);
            EXPECT_EQ(report.stats.flush, predict_cost(n, s, be, kind).flush);
            EXPECT_EQ(report.mults, report.stats.total().mults);
            EXPECT_EQ(report.adds, report.stats.total().adds);
        }
    }
}

TEST(Stats, StrassenFlushUsesFewerMults) {
    const Matrix a = gen_spd(64, 2);
    DecompStats classical, strassen;
    blocked_cholesky(a, 8, kClassical, &classical);
    blocked_cholesky(a, 8, MulBackend::strassen(2), &strassen);
    EXPECT_LT(strassen.flush.mults, classical.flush.mults);
    EXPECT_EQ(strassen.panel, classical.panel);
}

TEST(DecomposeWithReport, FillsReport) {
    const Matrix a = gen_general(30, 1);
    RunReport report;
    const auto d = decompose_with_report(DecompKind::Qr, a, 7, MulBackend::strassen(1), report);
    ASSERT_EQ(d.factors.size(), 2u);
    EXPECT_EQ(report.n, 30u);
    EXPECT_EQ(report.s, 7u);
    EXPECT_EQ(report.flushes, 4u);
    EXPECT_GE(report.wall_seconds, 0.0);
    ASSERT_TRUE(report.residual_rel.has_value());
    ASSERT_TRUE(report.orth_rel.has_value());
    ASSERT_TRUE(report.discarded_lower_mass.has_value());
    EXPECT_TRUE(report.error.empty());
}

TEST(DecomposeWithReport, FullWidthNoFlush) {
    const Matrix a = gen_spd(12, 1);
    RunReport report;
    decompose_with_report(DecompKind::Cholesky, a, 12, kClassical, report);
    EXPECT_EQ(report.flushes, 0u);
    EXPECT_FALSE(report.orth_rel.has_value());
}

TEST(DecomposeWithReport, PartialCountsOnFailure) {
    Matrix a = gen_spd(20, 1);
    a(15, 15) = -100;
    RunReport report;
    EXPECT_THROW(decompose_with_report(DecompKind::Cholesky, a, 4, kClassical, report),
                 NumericalError);
    EXPECT_NE(report.error.find("column 16"), std::string::npos) << report.error;
    EXPECT_EQ(report.flushes, 3u);
    EXPECT_GT(report.mults, 0u);
}

TEST(Determinism, RepeatedRunsAreBitIdentical) {
    const Matrix a = gen_general(50, 8);
    const MulBackend be = MulBackend::strassen(2);
    const auto x = blocked_qr(a, 9, be);
    const auto y = blocked_qr(a, 9, be);
    EXPECT_EQ(x.q, y.q);
    EXPECT_EQ(x.r, y.r);
    const auto u = blocked_lu(a, 9, be);
    const auto v = blocked_lu(a, 9, be);
    EXPECT_EQ(u.lower, v.lower);
    EXPECT_EQ(u.upper, v.upper);
}

TEST(Decompose, InputUntouched) {
    const Matrix a = gen_spd(10, 4);
    const Matrix copy = a;
    blocked_cholesky(a, 3, kClassical);
    blocked_lu(a, 3, kClassical);
    blocked_qr(a, 3, kClassical);
    EXPECT_EQ(a, copy);
}
