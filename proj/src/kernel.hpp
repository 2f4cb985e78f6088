#pragma once

#include <cstddef>

namespace panelfact::detail {

enum class Store : unsigned char { Assign, Add, Sub };

/// Destination of a product: p[i*ld + j] (=, +=, -=) P(i, j).
struct Target {
    double* p = nullptr;
    std::size_t ld = 0;
    Store mode = Store::Assign;
};

/// P = a (m x k) * b (k x p), row strides lda / ldb, applied to `first` and,
/// when second.p is set, to `second`.
///
/// Every entry of P is a[i][0]*b[0][j] followed by += a[i][kk]*b[kk][j] for kk
/// ascending, each multiply and add rounded separately. The result is the same
/// bit pattern as the textbook triple loop regardless of tiling or ISA.
void gemm_into(const double* a, std::size_t lda, const double* b, std::size_t ldb,
               std::size_t m, std::size_t k, std::size_t p, Target first, Target second = {});

/// out = x + y (or x - y) over a rows x cols block.
void add_blocks(const double* x, std::size_t ldx, const double* y, std::size_t ldy,
                bool subtract, double* out, std::size_t ldo, std::size_t rows, std::size_t cols);

/// Applies a rows x cols block to a target.
void apply_block(const double* src, std::size_t ld, Target t, std::size_t rows,
                 std::size_t cols);

} // namespace panelfact::detail
