#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "panelfact/matmul.hpp"
#include "panelfact/matrix.hpp"
#include "panelfact/oracle.hpp"

namespace panelfact {

enum class DecompKind { Cholesky, Lu, Qr };

std::string to_string(DecompKind kind);
DecompKind parse_decomp_kind(const std::string& name);

/// Panel bookkeeping: `first` is the first column of the open panel, `current`
/// the column being processed. A flush fires when current == first + width.
struct PanelState {
    std::size_t first = 1;
    std::size_t current = 1;
    std::size_t width = 1;

    bool flush_due() const noexcept { return current == first + width; }
};

/// Instrumentation gathered by one blocked factorization.
struct DecompStats {
    OpCount panel;   ///< column sweeps inside the open panel
    OpCount flush;   ///< deferred trailing products and their subtraction
    OpCount final_product; ///< R := Q^T A (QR only)
    std::size_t flushes = 0;

    OpCount total() const noexcept { return panel + flush + final_product; }
};

// Panel-blocked factorizations. Up to `s` columns are processed against the
// open panel before the trailing block is updated with one rectangular product
// through `backend`. s == n never flushes; s == 1 flushes after every column.
// The input is never modified. `stats`, when given, is filled even if the
// factorization throws.

Matrix blocked_cholesky(const Matrix& a, std::size_t s, const MulBackend& backend,
                        DecompStats* stats = nullptr);

LuFactors blocked_lu(const Matrix& a, std::size_t s, const MulBackend& backend,
                     DecompStats* stats = nullptr);

QrFactors blocked_qr(const Matrix& a, std::size_t s, const MulBackend& backend,
                     DecompStats* stats = nullptr);

/// floor((n - 1) / s): the number of flushes any of the above performs.
std::size_t expected_flushes(std::size_t n, std::size_t s);

/// One benchmark / verification record.
struct RunReport {
    DecompKind kind = DecompKind::Cholesky;
    std::size_t n = 0;
    std::size_t s = 0;
    MulBackend backend;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
    std::uint64_t mults = 0;
    std::uint64_t adds = 0;
    std::size_t flushes = 0;
    std::optional<double> residual_rel;
    std::optional<double> orth_rel;
    std::optional<double> discarded_lower_mass;
    std::string error;

    /// Detailed tallies behind mults/adds.
    DecompStats stats;
};

/// Factor matrices in output order: {L}, {L, U} or {Q, R}.
struct Decomposition {
    DecompKind kind;
    std::vector<Matrix> factors;
};

/// Runs the blocked factorization, timing it and filling `report`. When
/// `verify` is set, residual norms are computed afterwards with the classical
/// product. On failure `report` holds the partial counts and the error text,
/// then the exception propagates.
Decomposition decompose_with_report(DecompKind kind, const Matrix& a, std::size_t s,
                                    const MulBackend& backend, RunReport& report,
                                    bool verify = true);

/// ||A - reconstruction||_F / ||A||_F for the given factors.
double residual_rel(DecompKind kind, const Matrix& a, const std::vector<Matrix>& factors);

/// ||Q^T Q - I||_F.
double orth_rel(const Matrix& q);

} // namespace panelfact
