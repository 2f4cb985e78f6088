#include "panelfact/matmul.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "kernel.hpp"
#include "panelfact/errors.hpp"

namespace panelfact {

namespace {

using detail::Store;
using detail::Target;

void require(bool ok, const std::string& message) {
    if (!ok) throw DimensionError(message);
}

std::string shape(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

std::size_t ceil_div(std::size_t x, std::size_t y) { return (x + y - 1) / y; }

std::size_t padded_side(std::size_t n, std::size_t levels) {
    const std::size_t unit = std::size_t{1} << levels;
    return ceil_div(n, unit) * unit;
}

std::size_t strassen_levels(std::size_t n, const MulBackend& backend) {
    if (backend.kind == BackendKind::Classical) return 0;
    return effective_strassen_depth(n, backend.depth, backend.cutoff);
}

// Square operand addressed by pointer and row stride.
struct View {
    const double* p;
    std::size_t ld;
};

void combine(View x, View y, bool subtract, double* out, std::size_t h, OpCount* ops) {
    detail::add_blocks(x.p, x.ld, y.p, y.ld, subtract, out, h, h, h);
    if (ops) ops->adds += static_cast<std::uint64_t>(h) * h;
}

void apply(const double* src, std::size_t ld, const Target& t, std::size_t h, OpCount* ops) {
    detail::apply_block(src, ld, t, h, h);
    if (ops && t.mode != Store::Assign) ops->adds += static_cast<std::uint64_t>(h) * h;
}

std::size_t strassen_workspace(std::size_t n, std::size_t levels) {
    std::size_t total = 0;
    for (std::size_t h = n / 2; levels > 0; --levels, h /= 2) total += 3 * h * h;
    return total;
}

// c = a * b for n x n operands, n divisible by 2^levels, levels >= 1.
// `work` holds strassen_workspace(n, levels) doubles.
//
//   M1 = (A11 + A22)(B11 + B22)   C11 = M1 + M4 - M5 + M7
//   M2 = (A21 + A22) B11          C12 = M3 + M5
//   M3 = A11 (B12 - B22)          C21 = M2 + M4
//   M4 = A22 (B21 - B11)          C22 = M1 - M2 + M3 + M6
//   M5 = (A11 + A12) B22
//   M6 = (A21 - A11)(B11 + B12)
//   M7 = (A12 - A22)(B21 + B22)
//
// Each C quadrant is accumulated left to right as written: 10 operand and 8
// result additions per level. One level above the leaves the products go
// straight from the multiply kernel into their quadrants.
void strassen_rec(View a, View b, double* c, std::size_t ldc, std::size_t n, std::size_t levels,
                  double* work, OpCount* ops) {
    const std::size_t h = n / 2;
    const std::size_t hh = h * h;
    auto quad = [h](View v, std::size_t qi, std::size_t qj) {
        return View{v.p + qi * h * v.ld + qj * h, v.ld};
    };
    const View a11 = quad(a, 0, 0), a12 = quad(a, 0, 1), a21 = quad(a, 1, 0), a22 = quad(a, 1, 1);
    const View b11 = quad(b, 0, 0), b12 = quad(b, 0, 1), b21 = quad(b, 1, 0), b22 = quad(b, 1, 1);
    double* const c11 = c;
    double* const c12 = c + h;
    double* const c21 = c + h * ldc;
    double* const c22 = c + h * ldc + h;

    double* t1 = work;
    double* t2 = work + hh;
    double* prod = work + 2 * hh;
    double* deeper = work + 3 * hh;
    const View vt1{t1, h}, vt2{t2, h};
    const std::size_t next = levels - 1;

    auto emit = [&](View x, View y, Target first, Target second) {
        if (next == 0) {
            detail::gemm_into(x.p, x.ld, y.p, y.ld, h, h, h, first, second);
            if (ops) {
                *ops += predict_classical(h, h, h);
                if (first.mode != Store::Assign) ops->adds += hh;
                if (second.p && second.mode != Store::Assign) ops->adds += hh;
            }
            return;
        }
        strassen_rec(x, y, prod, h, h, next, deeper, ops);
        apply(prod, h, first, h, ops);
        if (second.p) apply(prod, h, second, h, ops);
    };
    auto to = [ldc](double* p, Store mode) { return Target{p, ldc, mode}; };

    combine(a11, a22, false, t1, h, ops);
    combine(b11, b22, false, t2, h, ops);
    emit(vt1, vt2, to(c11, Store::Assign), to(c22, Store::Assign)); // M1

    combine(a21, a22, false, t1, h, ops);
    emit(vt1, b11, to(c21, Store::Assign), to(c22, Store::Sub)); // M2

    combine(b12, b22, true, t2, h, ops);
    emit(a11, vt2, to(c12, Store::Assign), to(c22, Store::Add)); // M3

    combine(b21, b11, true, t2, h, ops);
    emit(a22, vt2, to(c11, Store::Add), to(c21, Store::Add)); // M4

    combine(a11, a12, false, t1, h, ops);
    emit(vt1, b22, to(c11, Store::Sub), to(c12, Store::Add)); // M5

    combine(a21, a11, true, t1, h, ops);
    combine(b11, b12, false, t2, h, ops);
    emit(vt1, vt2, to(c22, Store::Add), {}); // M6

    combine(a12, a22, true, t1, h, ops);
    combine(b21, b22, false, t2, h, ops);
    emit(vt1, vt2, to(c11, Store::Add), {}); // M7
}

// rows x cols of src (row stride ld) into a zeroed side x side buffer.
void pack_padded(const double* src, std::size_t ld, std::size_t rows, std::size_t cols,
                 double* dst, std::size_t side) {
    std::fill(dst, dst + side * side, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        std::copy(src + i * ld, src + i * ld + cols, dst + i * side);
    }
}

OpCount predict_strassen_rec(std::size_t n, std::size_t levels) {
    if (levels == 0) return predict_classical(n, n, n);
    const std::size_t h = n / 2;
    const OpCount child = predict_strassen_rec(h, levels - 1);
    OpCount out;
    out.mults = 7 * child.mults;
    out.adds = 7 * child.adds + 18 * static_cast<std::uint64_t>(h) * h;
    return out;
}

} // namespace

std::string to_string(BackendKind kind) {
    return kind == BackendKind::Classical ? "classical" : "strassen";
}

BackendKind parse_backend_kind(const std::string& name) {
    if (name == "classical") return BackendKind::Classical;
    if (name == "strassen") return BackendKind::Strassen;
    throw std::invalid_argument("unknown backend '" + name + "' (expected classical|strassen)");
}

Matrix mul_classical(const Matrix& a, const Matrix& b, OpCount* ops) {
    require(a.cols() == b.rows(), "mul_classical: inner dimensions differ (" + shape(a) + " * " +
                                      shape(b) + ")");
    Matrix c(a.rows(), b.cols());
    detail::gemm_into(a.data(), a.cols(), b.data(), b.cols(), a.rows(), a.cols(), b.cols(),
                      {c.data(), c.cols(), Store::Assign});
    if (ops) *ops += predict_classical(a.rows(), a.cols(), b.cols());
    return c;
}

std::size_t effective_strassen_depth(std::size_t n, std::size_t depth, std::size_t cutoff) {
    std::size_t d = depth;
    while (d > 0 && ceil_div(n, std::size_t{1} << d) < cutoff) --d;
    return d;
}

Matrix mul_strassen_square(const Matrix& a, const Matrix& b, std::size_t depth, OpCount* ops,
                           std::size_t cutoff) {
    require(a.is_square() && b.is_square() && a.rows() == b.rows(),
            "mul_strassen_square: operands must be square and equal (" + shape(a) + " * " +
                shape(b) + ")");
    const std::size_t n = a.rows();
    const std::size_t levels = effective_strassen_depth(n, depth, cutoff);
    if (levels == 0) return mul_classical(a, b, ops);

    const std::size_t np = padded_side(n, levels);
    std::vector<double> work(strassen_workspace(np, levels));
    Matrix c(n, n);
    if (np == n) {
        strassen_rec({a.data(), n}, {b.data(), n}, c.data(), n, n, levels, work.data(), ops);
        return c;
    }
    std::vector<double> ap(np * np), bp(np * np), cp(np * np);
    pack_padded(a.data(), n, n, n, ap.data(), np);
    pack_padded(b.data(), n, n, n, bp.data(), np);
    strassen_rec({ap.data(), np}, {bp.data(), np}, cp.data(), np, np, levels, work.data(), ops);
    for (std::size_t i = 0; i < n; ++i) std::copy_n(cp.data() + i * np, n, c.row(i).begin());
    return c;
}

Matrix mul_square(const Matrix& a, const Matrix& b, const MulBackend& backend, OpCount* ops) {
    if (backend.kind == BackendKind::Classical) {
        require(a.is_square() && b.is_square() && a.rows() == b.rows(),
                "mul_square: operands must be square and equal (" + shape(a) + " * " + shape(b) +
                    ")");
        return mul_classical(a, b, ops);
    }
    return mul_strassen_square(a, b, backend.depth, ops, backend.cutoff);
}

Matrix mul_rect(const Matrix& a, const Matrix& b, const MulBackend& backend, std::size_t tile,
                OpCount* ops) {
    require(a.cols() == b.rows(),
            "mul_rect: inner dimensions differ (" + shape(a) + " * " + shape(b) + ")");
    require(tile >= 1, "mul_rect: tile must be positive");

    const std::size_t m = a.rows(), k = a.cols(), p = b.cols();
    const std::size_t bi = ceil_div(m, tile), bk = ceil_div(k, tile), bj = ceil_div(p, tile);

    // Blocks are stored at the side the backend actually multiplies (the tile
    // rounded up for Strassen), zero outside the data.
    const std::size_t levels = strassen_levels(tile, backend);
    const std::size_t side = padded_side(tile, levels);
    const std::size_t block = side * side;

    auto pack = [&](const Matrix& src, std::size_t block_rows, std::size_t block_cols) {
        std::vector<double> blocks(block_rows * block_cols * block, 0.0);
        for (std::size_t I = 0; I < block_rows; ++I) {
            for (std::size_t J = 0; J < block_cols; ++J) {
                const std::size_t r0 = I * tile, c0 = J * tile;
                const std::size_t nr = std::min(tile, src.rows() - r0);
                const std::size_t nc = std::min(tile, src.cols() - c0);
                double* dst = blocks.data() + (I * block_cols + J) * block;
                for (std::size_t i = 0; i < nr; ++i) {
                    const auto from = src.row(r0 + i).subspan(c0, nc);
                    std::copy(from.begin(), from.end(), dst + i * side);
                }
            }
        }
        return blocks;
    };
    const std::vector<double> ablk = pack(a, bi, bk);
    const std::vector<double> bblk = pack(b, bk, bj);

    std::vector<double> acc(block), prod(levels > 0 ? block : 0);
    std::vector<double> work(strassen_workspace(side, levels));
    const OpCount one = predict_square(tile, backend);

    Matrix c(m, p);
    for (std::size_t I = 0; I < bi; ++I) {
        for (std::size_t J = 0; J < bj; ++J) {
            for (std::size_t K = 0; K < bk; ++K) {
                const double* x = ablk.data() + (I * bk + K) * block;
                const double* y = bblk.data() + (K * bj + J) * block;
                if (levels == 0) {
                    const Target into{acc.data(), side, K == 0 ? Store::Assign : Store::Add};
                    detail::gemm_into(x, side, y, side, side, side, side, into);
                } else if (K == 0) {
                    strassen_rec({x, side}, {y, side}, acc.data(), side, side, levels,
                                 work.data(), nullptr);
                } else {
                    strassen_rec({x, side}, {y, side}, prod.data(), side, side, levels,
                                 work.data(), nullptr);
                    apply(prod.data(), side, {acc.data(), side, Store::Add}, tile, nullptr);
                }
                if (ops) {
                    *ops += one;
                    if (K > 0) ops->adds += static_cast<std::uint64_t>(tile) * tile;
                }
            }
            const std::size_t r0 = I * tile, c0 = J * tile;
            const std::size_t nr = std::min(tile, m - r0), nc = std::min(tile, p - c0);
            for (std::size_t i = 0; i < nr; ++i) {
                std::copy_n(acc.data() + i * side, nc, c.row(r0 + i).begin() + c0);
            }
        }
    }
    if (ops) ops->block_products += bi * bk * bj;
    return c;
}

Matrix mul_at_b(const Matrix& a, const Matrix& b, const MulBackend& backend, std::size_t tile,
                OpCount* ops) {
    require(a.rows() == b.rows(),
            "mul_at_b: row counts differ (" + shape(a) + ", " + shape(b) + ")");
    return mul_rect(transpose(a), b, backend, tile, ops);
}

Matrix mul_a_bt(const Matrix& a, const Matrix& b, const MulBackend& backend, std::size_t tile,
                OpCount* ops) {
    require(a.cols() == b.cols(),
            "mul_a_bt: column counts differ (" + shape(a) + ", " + shape(b) + ")");
    return mul_rect(a, transpose(b), backend, tile, ops);
}

OpCount predict_classical(std::size_t m, std::size_t k, std::size_t p) {
    const std::uint64_t outputs = static_cast<std::uint64_t>(m) * p;
    return {outputs * k, outputs * (k - 1), 0};
}

OpCount predict_square(std::size_t n, const MulBackend& backend) {
    const std::size_t levels = strassen_levels(n, backend);
    if (levels == 0) return predict_classical(n, n, n);
    return predict_strassen_rec(padded_side(n, levels), levels);
}

OpCount predict_rect(std::size_t m, std::size_t k, std::size_t p, const MulBackend& backend,
                     std::size_t tile) {
    const std::uint64_t bi = ceil_div(m, tile), bk = ceil_div(k, tile), bj = ceil_div(p, tile);
    const std::uint64_t products = bi * bk * bj;
    const OpCount one = predict_square(tile, backend);
    OpCount out;
    out.mults = products * one.mults;
    out.adds = products * one.adds + bi * bj * (bk - 1) * tile * tile;
    out.block_products = products;
    return out;
}

} // namespace panelfact
