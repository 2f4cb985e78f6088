#include "panelfact/policy.hpp"

#include <algorithm>
#include <cmath>

#include "panelfact/errors.hpp"

namespace panelfact {

namespace {

std::size_t clamp_width(double s, std::size_t n) {
    if (!(s >= 1.0)) return 1;
    if (s >= static_cast<double>(n)) return n;
    return static_cast<std::size_t>(s);
}

CostEstimate finish(CostEstimate e) {
    e.flush_ops = e.flush.total();
    e.total = e.panel_ops + e.flush_ops;
    return e;
}

std::uint64_t panel_term(std::size_t n, std::size_t s) {
    return static_cast<std::uint64_t>(n) * n * s;
}

void require_width(std::size_t n, std::size_t s) {
    if (n < 1 || s < 1 || s > n) {
        throw DimensionError("panel width " + std::to_string(s) + " outside [1, " +
                             std::to_string(n) + "]");
    }
}

} // namespace

std::size_t resolve(const BlockPolicy& policy, std::size_t n) {
    if (n < 1) throw DimensionError("resolve: n must be positive");
    if (policy.is_fixed()) return clamp_width(static_cast<double>(policy.fixed_width()), n);
    return clamp_width(std::ceil(std::pow(static_cast<double>(n), policy.exponent_value())), n);
}

PanelSchedule static_schedule(const BlockPolicy& policy) {
    return [policy](std::size_t n, std::size_t) { return resolve(policy, n); };
}

CostEstimate predict_cost(std::size_t n, std::size_t s, const MulBackend& backend) {
    require_width(n, s);
    CostEstimate e;
    e.panel_ops = panel_term(n, s);
    const std::uint64_t flushes = expected_flushes(n, s);
    if (flushes > 0) {
        const OpCount one = predict_rect(n, s, n, backend, s);
        const std::uint64_t sq = static_cast<std::uint64_t>(n) * n;
        e.flush.mults = flushes * one.mults;
        e.flush.adds = flushes * (one.adds + sq);
        e.flush.block_products = flushes * one.block_products;
    }
    return finish(e);
}

CostEstimate predict_cost(std::size_t n, std::size_t s, const MulBackend& backend,
                          DecompKind kind) {
    require_width(n, s);
    CostEstimate e;
    e.panel_ops = panel_term(n, s);
    for (std::size_t c = 1 + s; c <= n; c += s) {
        const std::size_t m = n - c + 1;
        switch (kind) {
        case DecompKind::Cholesky:
        case DecompKind::Lu:
            e.flush += predict_rect(m, s, m, backend, s);
            e.flush.adds += static_cast<std::uint64_t>(m) * m;
            break;
        case DecompKind::Qr:
            e.flush += predict_rect(s, n, m, backend, s);
            e.flush += predict_rect(n, s, m, backend, s);
            e.flush.adds += static_cast<std::uint64_t>(n) * m;
            break;
        }
    }
    return finish(e);
}

std::vector<std::pair<std::size_t, CostEstimate>>
sweep_s(std::size_t n, std::span<const std::size_t> candidates, const MulBackend& backend) {
    if (candidates.empty()) throw std::invalid_argument("sweep_s: no candidate widths");
    std::vector<std::pair<std::size_t, CostEstimate>> rows;
    rows.reserve(candidates.size());
    for (std::size_t s : candidates) rows.emplace_back(s, predict_cost(n, s, backend));
    std::stable_sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
        if (x.second.total != y.second.total) return x.second.total < y.second.total;
        return x.first < y.first;
    });
    return rows;
}

} // namespace panelfact
