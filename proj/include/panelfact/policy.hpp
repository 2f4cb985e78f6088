#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "panelfact/decomp.hpp"
#include "panelfact/matmul.hpp"

namespace panelfact {

/// Panel width rule: a fixed s, or s = ceil(n^k). Always clamped to [1, n].
class BlockPolicy {
public:
    static BlockPolicy fixed(std::size_t s) { return BlockPolicy(Mode::Fixed, s, 0.0); }
    static BlockPolicy exponent(double k) { return BlockPolicy(Mode::Exponent, 0, k); }

    bool is_fixed() const noexcept { return mode_ == Mode::Fixed; }
    std::size_t fixed_width() const noexcept { return width_; }
    double exponent_value() const noexcept { return exponent_; }

private:
    enum class Mode { Fixed, Exponent };
    BlockPolicy(Mode mode, std::size_t width, double k) : mode_(mode), width_(width), exponent_(k) {}

    Mode mode_;
    std::size_t width_;
    double exponent_;
};

std::size_t resolve(const BlockPolicy& policy, std::size_t n);

/// Hook for schedules that change the panel width between flushes. Called with
/// (n, first column of the next panel); returns the width to use. Only the
/// static policies are provided.
using PanelSchedule = std::function<std::size_t(std::size_t n, std::size_t next_column)>;

PanelSchedule static_schedule(const BlockPolicy& policy);

/// Two-term model n^2 s + (flushes) x (flush cost).
struct CostEstimate {
    std::uint64_t panel_ops = 0;
    OpCount flush;            ///< mults and adds of all flushes
    std::uint64_t flush_ops = 0;
    std::uint64_t total = 0;
};

/// Coarse model: every one of the floor((n-1)/s) flushes is an (n x s)(s x n)
/// tiled product plus n^2 subtractions.
CostEstimate predict_cost(std::size_t n, std::size_t s, const MulBackend& backend);

/// Schedule-exact model for a given factorization: each flush is costed at the
/// trailing shape that factorization actually multiplies. The flush term
/// matches DecompStats::flush.
CostEstimate predict_cost(std::size_t n, std::size_t s, const MulBackend& backend,
                          DecompKind kind);

/// Coarse-model estimates for each candidate, sorted by total, ties to smaller s.
std::vector<std::pair<std::size_t, CostEstimate>>
sweep_s(std::size_t n, std::span<const std::size_t> candidates, const MulBackend& backend);

} // namespace panelfact
