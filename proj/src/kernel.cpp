#include "kernel.hpp"

#include <algorithm>
#include <cstring>
#include <vector>

namespace panelfact::detail {

namespace {

// Strips of W = 8 columns are processed with NV vectors of L lanes each.
constexpr std::size_t W = 8;

// Spelled out per width: GCC drops vector_size on a dependent alias template.
template <int L>
struct lanes;
template <>
struct lanes<2> {
    typedef double type __attribute__((vector_size(16)));
};
template <>
struct lanes<4> {
    typedef double type __attribute__((vector_size(32)));
};
template <>
struct lanes<8> {
    typedef double type __attribute__((vector_size(64)));
};

template <int L>
using vec = typename lanes<L>::type;
static_assert(sizeof(vec<8>) == 8 * sizeof(double));

template <int L>
[[gnu::always_inline]] inline vec<L> load(const double* p) {
    vec<L> v;
    std::memcpy(&v, p, sizeof v);
    return v;
}

template <int L>
[[gnu::always_inline]] inline void store(double* p, vec<L> v) {
    std::memcpy(p, &v, sizeof v);
}

template <int L>
[[gnu::always_inline]] inline void put(const Target& t, std::size_t off, vec<L> v) {
    double* q = t.p + off;
    switch (t.mode) {
    case Store::Assign: store<L>(q, v); break;
    case Store::Add: store<L>(q, load<L>(q) + v); break;
    case Store::Sub: store<L>(q, load<L>(q) - v); break;
    }
}

inline void put1(const Target& t, std::size_t off, double v) {
    double* q = t.p + off;
    switch (t.mode) {
    case Store::Assign: *q = v; break;
    case Store::Add: *q += v; break;
    case Store::Sub: *q -= v; break;
    }
}

// MR x W register tile over a packed k x W strip. Row r of a starts at
// a + r * lda. Every accumulator follows the per-entry order exactly.
template <int L, int MR>
[[gnu::always_inline]] inline void tile(const double* __restrict a, std::size_t lda,
                                        const double* __restrict pb, std::size_t k,
                                        vec<L> (&acc)[MR][W / L]) {
    constexpr int NV = W / L;
    vec<L> bv[NV];
#pragma GCC unroll 4
    for (int v = 0; v < NV; ++v) bv[v] = load<L>(pb + v * L);
#pragma GCC unroll 16
    for (int r = 0; r < MR; ++r) {
        const double x = a[r * lda];
#pragma GCC unroll 4
        for (int v = 0; v < NV; ++v) acc[r][v] = x * bv[v];
    }
    for (std::size_t kk = 1; kk < k; ++kk) {
        pb += W;
#pragma GCC unroll 4
        for (int v = 0; v < NV; ++v) bv[v] = load<L>(pb + v * L);
#pragma GCC unroll 16
        for (int r = 0; r < MR; ++r) {
            const double x = a[r * lda + kk];
#pragma GCC unroll 4
            for (int v = 0; v < NV; ++v) acc[r][v] += x * bv[v];
        }
    }
}

// Dispatches a tail of `rows` < MR rows to an exact-height tile.
template <int L, int MR>
[[gnu::always_inline]] inline void tail_tile(std::size_t rows, const double* a, std::size_t lda,
                                             const double* pb, std::size_t k,
                                             vec<L> (&acc)[MR][W / L]) {
    if constexpr (MR > 1) {
        if (rows == MR - 1) {
            vec<L> part[MR - 1][W / L] = {};
            tile<L, MR - 1>(a, lda, pb, k, part);
            for (int r = 0; r < MR - 1; ++r) {
                for (int v = 0; v < int(W / L); ++v) acc[r][v] = part[r][v];
            }
            return;
        }
        vec<L> part[MR - 1][W / L] = {};
        tail_tile<L, MR - 1>(rows, a, lda, pb, k, part);
        for (std::size_t r = 0; r < rows; ++r) {
            for (int v = 0; v < int(W / L); ++v) acc[r][v] = part[r][v];
        }
    }
}

// Column strips are copied into a contiguous k x W panel (zero beyond p),
// swept by MR x W register tiles, and ragged rows by an exact-height tile.
// Padding lanes are dropped on store.
template <int L, int MR>
[[gnu::always_inline]] inline void gemm(const double* __restrict a, std::size_t lda,
                                        const double* __restrict b, std::size_t ldb,
                                        std::size_t m, std::size_t k, std::size_t p,
                                        const Target& first, const Target& second) {
    constexpr int NV = W / L;
    const bool two = second.p != nullptr;
    const std::size_t full = m - m % MR;
    thread_local std::vector<double> panel;
    if (panel.size() < k * W) panel.resize(k * W);

    vec<L> acc[MR][NV];
    for (std::size_t j = 0; j < p; j += W) {
        const std::size_t w = std::min(W, p - j);
        for (std::size_t kk = 0; kk < k; ++kk) {
            const double* src = b + kk * ldb + j;
            double* dst = panel.data() + kk * W;
            std::size_t jj = 0;
            for (; jj < w; ++jj) dst[jj] = src[jj];
            for (; jj < W; ++jj) dst[jj] = 0.0;
        }

        auto put_row = [&](std::size_t i, const vec<L>* row) {
            if (w == W) {
                for (int v = 0; v < NV; ++v) {
                    put<L>(first, i * first.ld + j + v * L, row[v]);
                    if (two) put<L>(second, i * second.ld + j + v * L, row[v]);
                }
                return;
            }
            double vals[W];
            for (int v = 0; v < NV; ++v) store<L>(vals + v * L, row[v]);
            for (std::size_t jj = 0; jj < w; ++jj) {
                put1(first, i * first.ld + j + jj, vals[jj]);
                if (two) put1(second, i * second.ld + j + jj, vals[jj]);
            }
        };

        for (std::size_t i = 0; i < full; i += MR) {
            tile<L, MR>(a + i * lda, lda, panel.data(), k, acc);
            for (int r = 0; r < MR; ++r) put_row(i + r, acc[r]);
        }
        if (full < m) {
            tail_tile<L, MR>(m - full, a + full * lda, lda, panel.data(), k, acc);
            for (std::size_t r = 0; full + r < m; ++r) put_row(full + r, acc[r]);
        }
    }
}

[[gnu::target("avx512f")]] void gemm_avx512(const double* a, std::size_t lda, const double* b,
                                            std::size_t ldb, std::size_t m, std::size_t k,
                                            std::size_t p, const Target& first,
                                            const Target& second) {
    gemm<8, 10>(a, lda, b, ldb, m, k, p, first, second);
}

[[gnu::target("avx2")]] void gemm_avx2(const double* a, std::size_t lda, const double* b,
                                       std::size_t ldb, std::size_t m, std::size_t k,
                                       std::size_t p, const Target& first, const Target& second) {
    gemm<4, 6>(a, lda, b, ldb, m, k, p, first, second);
}

void gemm_generic(const double* a, std::size_t lda, const double* b, std::size_t ldb,
                  std::size_t m, std::size_t k, std::size_t p, const Target& first,
                  const Target& second) {
    gemm<2, 4>(a, lda, b, ldb, m, k, p, first, second);
}

using GemmFn = void (*)(const double*, std::size_t, const double*, std::size_t, std::size_t,
                        std::size_t, std::size_t, const Target&, const Target&);

GemmFn select_gemm() {
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx512f")) return gemm_avx512;
    if (__builtin_cpu_supports("avx2")) return gemm_avx2;
    return gemm_generic;
}

} // namespace

__attribute__((target_clones("avx512f", "avx2", "default")))
void add_blocks(const double* __restrict x, std::size_t ldx, const double* __restrict y,
                std::size_t ldy, bool subtract, double* __restrict out, std::size_t ldo,
                std::size_t rows, std::size_t cols) {
    for (std::size_t i = 0; i < rows; ++i) {
        const double* xr = x + i * ldx;
        const double* yr = y + i * ldy;
        double* o = out + i * ldo;
        if (subtract) {
            for (std::size_t j = 0; j < cols; ++j) o[j] = xr[j] - yr[j];
        } else {
            for (std::size_t j = 0; j < cols; ++j) o[j] = xr[j] + yr[j];
        }
    }
}

__attribute__((target_clones("avx512f", "avx2", "default")))
void apply_block(const double* __restrict src, std::size_t ld, Target t, std::size_t rows,
                 std::size_t cols) {
    for (std::size_t i = 0; i < rows; ++i) {
        const double* s = src + i * ld;
        double* __restrict d = t.p + i * t.ld;
        switch (t.mode) {
        case Store::Assign: std::copy(s, s + cols, d); break;
        case Store::Add:
            for (std::size_t j = 0; j < cols; ++j) d[j] += s[j];
            break;
        case Store::Sub:
            for (std::size_t j = 0; j < cols; ++j) d[j] -= s[j];
            break;
        }
    }
}

void gemm_into(const double* a, std::size_t lda, const double* b, std::size_t ldb, std::size_t m,
               std::size_t k, std::size_t p, Target first, Target second) {
    static const GemmFn impl = select_gemm();
    if (m == 0 || p == 0 || k == 0) return;
    impl(a, lda, b, ldb, m, k, p, first, second);
}

} // namespace panelfact::detail
