#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "panelfact/matrix.hpp"

namespace panelfact {

/// Exact tallies of scalar arithmetic performed.
struct OpCount {
    std::uint64_t mults = 0;
    std::uint64_t adds = 0;          ///< additions and subtractions
    std::uint64_t block_products = 0; ///< backend calls issued by mul_rect

    std::uint64_t total() const noexcept { return mults + adds; }

    OpCount& operator+=(const OpCount& o) noexcept {
        mults += o.mults;
        adds += o.adds;
        block_products += o.block_products;
        return *this;
    }
    friend OpCount operator+(OpCount a, const OpCount& b) noexcept { return a += b; }
    friend bool operator==(const OpCount&, const OpCount&) = default;
};

enum class BackendKind { Classical, Strassen };

/// How square block products are computed.
///
/// Strassen pads both operands with zeros to a multiple of 2^d and recurses d
/// levels, where d is `depth` reduced until the leaf side is at least `cutoff`.
/// Leaves use the classical kernel. depth == 0 is the classical product.
struct MulBackend {
    BackendKind kind = BackendKind::Classical;
    std::size_t depth = 0;
    std::size_t cutoff = 1;

    static MulBackend classical() { return {}; }
    static MulBackend strassen(std::size_t depth, std::size_t cutoff = 1) {
        return {BackendKind::Strassen, depth, cutoff};
    }

    friend bool operator==(const MulBackend&, const MulBackend&) = default;
};

std::string to_string(BackendKind kind);
BackendKind parse_backend_kind(const std::string& name);

/// Triple loop, k ascending for every output entry. Bit-deterministic.
Matrix mul_classical(const Matrix& a, const Matrix& b, OpCount* ops = nullptr);

/// 7-product Strassen (18 block additions per level) on square operands.
Matrix mul_strassen_square(const Matrix& a, const Matrix& b, std::size_t depth,
                           OpCount* ops = nullptr, std::size_t cutoff = 1);

/// Square product through the backend.
Matrix mul_square(const Matrix& a, const Matrix& b, const MulBackend& backend,
                  OpCount* ops = nullptr);

/// Rectangular product built from tile x tile square block products.
/// Ragged edges are zero-padded; block products along the inner dimension are
/// accumulated in ascending order.
Matrix mul_rect(const Matrix& a, const Matrix& b, const MulBackend& backend,
                std::size_t tile, OpCount* ops = nullptr);

/// transpose(a) * b via mul_rect.
Matrix mul_at_b(const Matrix& a, const Matrix& b, const MulBackend& backend,
                std::size_t tile, OpCount* ops = nullptr);

/// a * transpose(b) via mul_rect.
Matrix mul_a_bt(const Matrix& a, const Matrix& b, const MulBackend& backend,
                std::size_t tile, OpCount* ops = nullptr);

// Closed-form operation counts matching the instrumentation above.

OpCount predict_classical(std::size_t m, std::size_t k, std::size_t p);
OpCount predict_square(std::size_t n, const MulBackend& backend);
OpCount predict_rect(std::size_t m, std::size_t k, std::size_t p,
                     const MulBackend& backend, std::size_t tile);

/// Recursion depth actually used for an n x n Strassen product.
std::size_t effective_strassen_depth(std::size_t n, std::size_t depth, std::size_t cutoff);

} // namespace panelfact
