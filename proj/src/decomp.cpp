#include "panelfact/decomp.hpp"

#include <chrono>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "panelfact/errors.hpp"

namespace panelfact {

namespace {

void check_inputs(const Matrix& a, std::size_t s, const char* what) {
    if (!a.is_square()) {
        throw DimensionError(std::string(what) + ": square input required, got " +
                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
    if (s < 1 || s > a.rows()) {
        throw DimensionError(std::string(what) + ": panel width " + std::to_string(s) +
                             " outside [1, " + std::to_string(a.rows()) + "]");
    }
}

// 1-based element access, matching the column bookkeeping below.
inline double& at(Matrix& m, std::size_t i, std::size_t j) { return m(i - 1, j - 1); }
inline double at(const Matrix& m, std::size_t i, std::size_t j) { return m(i - 1, j - 1); }

// For each row r in [first, last] (1-based) of `rows`:
//   out(r) = init(r) - sum_{k} rows(r, k0 + k) * x[k], k ascending.
// Four rows are carried at once; each row keeps its own sequential order, so
// the result matches the plain loop bit for bit.
template <typename Init, typename Store>
void panel_dot_rows(const Matrix& rows, std::size_t first, std::size_t last, std::size_t k0,
                    std::span<const double> x, Init init, Store store) {
    const std::size_t len = x.size();
    std::size_t i = first;
    for (; i + 3 <= last; i += 4) {
        const double* r0 = rows.row(i - 1).data() + (k0 - 1);
        const double* r1 = rows.row(i).data() + (k0 - 1);
        const double* r2 = rows.row(i + 1).data() + (k0 - 1);
        const double* r3 = rows.row(i + 2).data() + (k0 - 1);
        double v0 = init(i), v1 = init(i + 1), v2 = init(i + 2), v3 = init(i + 3);
        for (std::size_t k = 0; k < len; ++k) {
            const double xk = x[k];
            v0 -= r0[k] * xk;
            v1 -= r1[k] * xk;
            v2 -= r2[k] * xk;
            v3 -= r3[k] * xk;
        }
        store(i, v0);
        store(i + 1, v1);
        store(i + 2, v2);
        store(i + 3, v3);
    }
    for (; i <= last; ++i) {
        const double* r = rows.row(i - 1).data() + (k0 - 1);
        double v = init(i);
        for (std::size_t k = 0; k < len; ++k) v -= r[k] * x[k];
        store(i, v);
    }
}

struct StatsSink {
    DecompStats local;
    DecompStats* target;

    explicit StatsSink(DecompStats* t) : target(t) {}
    ~StatsSink() {
        if (target) *target = local;
    }
    StatsSink(const StatsSink&) = delete;
    StatsSink& operator=(const StatsSink&) = delete;
};

} // namespace

std::string to_string(DecompKind kind) {
    switch (kind) {
    case DecompKind::Cholesky: return "cholesky";
    case DecompKind::Lu: return "lu";
    case DecompKind::Qr: return "qr";
    }
    return "?";
}

DecompKind parse_decomp_kind(const std::string& name) {
    if (name == "cholesky") return DecompKind::Cholesky;
    if (name == "lu") return DecompKind::Lu;
    if (name == "qr") return DecompKind::Qr;
    throw std::invalid_argument("unknown decomposition '" + name + "' (expected cholesky|lu|qr)");
}

std::size_t expected_flushes(std::size_t n, std::size_t s) { return s == 0 ? 0 : (n - 1) / s; }

Matrix blocked_cholesky(const Matrix& a, std::size_t s, const MulBackend& backend,
                        DecompStats* stats) {
    check_inputs(a, s, "blocked_cholesky");
    StatsSink sink(stats);
    auto& st = sink.local;

    const std::size_t n = a.rows();
    Matrix w = a;
    Matrix l(n, n);
    PanelState panel{1, 1, s};

    for (std::size_t c = 1; c <= n; ++c) {
        panel.current = c;
        const std::size_t z = panel.first;
        if (panel.flush_due()) {
            const Matrix r = copy_region(l, {c, n, z, c - 1});
            const Matrix prod = mul_a_bt(r, r, backend, c - z, &st.flush);
            sub_assign_region(w, {c, n, c, n}, prod);
            st.flush.adds += static_cast<std::uint64_t>(prod.rows()) * prod.cols();
            panel.first = c;
            ++st.flushes;
        }
        const std::size_t first = panel.first;
        const std::size_t width = c - first;
        const std::span<const double> lc = l.row(c - 1).subspan(first - 1, width);

        double d = at(w, c, c);
        for (std::size_t k = 0; k < width; ++k) d -= lc[k] * lc[k];
        if (!(d > 0.0)) throw NumericalError(NumericalFailure::NotPositiveDefinite, c);
        const double diag = std::sqrt(d);
        at(l, c, c) = diag;

        if (c < n) {
            panel_dot_rows(
                l, c + 1, n, first, lc, [&](std::size_t i) { return at(w, i, c); },
                [&](std::size_t i, double v) { at(l, i, c) = v / diag; });
        }
        const std::uint64_t dots = n - c + 1;
        st.panel.mults += dots * width;
        st.panel.adds += dots * width;
    }
    return l;
}

LuFactors blocked_lu(const Matrix& a, std::size_t s, const MulBackend& backend,
                     DecompStats* stats) {
    check_inputs(a, s, "blocked_lu");
    StatsSink sink(stats);
    auto& st = sink.local;

    const std::size_t n = a.rows();
    const double tol = pivot_tolerance(a);
    Matrix w = a;
    Matrix l(n, n);
    Matrix u(n, n);
    PanelState panel{1, 1, s};
    std::vector<double> ucol;
    std::vector<double> urow(n);

    for (std::size_t c = 1; c <= n; ++c) {
        panel.current = c;
        const std::size_t z = panel.first;
        if (panel.flush_due()) {
            const Matrix rl = copy_region(l, {c, n, z, c - 1});
            const Matrix ru = copy_region(u, {z, c - 1, c, n});
            const Matrix prod = mul_rect(rl, ru, backend, c - z, &st.flush);
            sub_assign_region(w, {c, n, c, n}, prod);
            st.flush.adds += static_cast<std::uint64_t>(prod.rows()) * prod.cols();
            panel.first = c;
            ++st.flushes;
        }
        const std::size_t first = panel.first;
        const std::size_t width = c - first;

        // Column c of L.
        ucol.resize(width);
        for (std::size_t k = 0; k < width; ++k) ucol[k] = at(u, first + k, c);
        panel_dot_rows(
            l, c, n, first, ucol, [&](std::size_t i) { return at(w, i, c); },
            [&](std::size_t i, double v) { at(l, i, c) = v; });

        const double pivot = at(l, c, c);
        if (!(std::abs(pivot) > tol)) {
            throw NumericalError(NumericalFailure::SingularLeadingMinor, c);
        }

        // Row c of U; k outermost keeps the per-entry k-ascending order.
        const auto wrow = w.row(c - 1);
        for (std::size_t i = c; i <= n; ++i) urow[i - 1] = wrow[i - 1];
        for (std::size_t k = first; k < c; ++k) {
            const double lck = at(l, c, k);
            const auto uk = u.row(k - 1);
            for (std::size_t i = c; i <= n; ++i) urow[i - 1] -= lck * uk[i - 1];
        }
        auto uc = u.row(c - 1);
        for (std::size_t i = c; i <= n; ++i) uc[i - 1] = urow[i - 1] / pivot;

        const std::uint64_t dots = 2 * (n - c + 1);
        st.panel.mults += dots * width;
        st.panel.adds += dots * width;
    }
    return {std::move(l), std::move(u)};
}

QrFactors blocked_qr(const Matrix& a, std::size_t s, const MulBackend& backend,
                     DecompStats* stats) {
    check_inputs(a, s, "blocked_qr");
    StatsSink sink(stats);
    auto& st = sink.local;

    const std::size_t n = a.rows();
    const double tol = pivot_tolerance(a);
    // Columns of M and Q are stored as rows of their transposes.
    Matrix mt = transpose(a);
    Matrix qt(n, n);
    PanelState panel{1, 1, s};
    std::vector<double> v(n);

    for (std::size_t c = 1; c <= n; ++c) {
        panel.current = c;
        const std::size_t z = panel.first;
        if (panel.flush_due()) {
            const std::size_t width = c - z;
            const Matrix bq = transpose(copy_region(qt, {z, c - 1, 1, n}));
            const Matrix bm = transpose(copy_region(mt, {c, n, 1, n}));
            const Matrix coef = mul_at_b(bq, bm, backend, width, &st.flush);
            const Matrix prod = mul_rect(bq, coef, backend, width, &st.flush);
            sub_assign_region(mt, {c, n, 1, n}, transpose(prod));
            st.flush.adds += static_cast<std::uint64_t>(prod.rows()) * prod.cols();
            panel.first = c;
            ++st.flushes;
        }
        const std::size_t first = panel.first;

        const auto mc = mt.row(c - 1);
        std::copy(mc.begin(), mc.end(), v.begin());
        for (std::size_t j = first; j < c; ++j) {
            const auto uj = qt.row(j - 1);
            double dot = uj[0] * v[0];
            for (std::size_t i = 1; i < n; ++i) dot += uj[i] * v[i];
            for (std::size_t i = 0; i < n; ++i) v[i] -= uj[i] * dot;
        }
        double sq = v[0] * v[0];
        for (std::size_t i = 1; i < n; ++i) sq += v[i] * v[i];
        const double norm = std::sqrt(sq);
        if (!(norm > tol)) throw NumericalError(NumericalFailure::RankDeficient, c);
        auto qc = qt.row(c - 1);
        for (std::size_t i = 0; i < n; ++i) qc[i] = v[i] / norm;

        const std::uint64_t width = c - first;
        st.panel.mults += width * 2 * n + n;
        st.panel.adds += width * (2 * n - 1) + (n - 1);
    }

    Matrix r = mul_square(qt, a, backend, &st.final_product);
    double lower_sq = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            lower_sq += r(i, j) * r(i, j);
            r(i, j) = 0.0;
        }
    }
    return {transpose(qt), std::move(r), std::sqrt(lower_sq)};
}

double residual_rel(DecompKind kind, const Matrix& a, const std::vector<Matrix>& factors) {
    const std::size_t expected = kind == DecompKind::Cholesky ? 1 : 2;
    if (factors.size() != expected) {
        throw DimensionError(to_string(kind) + " needs " + std::to_string(expected) +
                             " factor matrices, got " + std::to_string(factors.size()));
    }
    Matrix recon = kind == DecompKind::Cholesky
                       ? mul_classical(factors[0], transpose(factors[0]))
                       : mul_classical(factors[0], factors[1]);
    const double scale = frobenius(a);
    const double diff = frobenius(subtract(a, recon));
    return scale > 0.0 ? diff / scale : diff;
}

double orth_rel(const Matrix& q) {
    Matrix gram = mul_classical(transpose(q), q);
    for (std::size_t i = 0; i < gram.rows(); ++i) gram(i, i) -= 1.0;
    return frobenius(gram);
}

Decomposition decompose_with_report(DecompKind kind, const Matrix& a, std::size_t s,
                                    const MulBackend& backend, RunReport& report, bool verify) {
    report.kind = kind;
    report.n = a.rows();
    report.s = s;
    report.backend = backend;
    report.error.clear();
    report.residual_rel.reset();
    report.orth_rel.reset();
    report.discarded_lower_mass.reset();

    auto fill_counts = [&report] {
        const OpCount total = report.stats.total();
        report.mults = total.mults;
        report.adds = total.adds;
        report.flushes = report.stats.flushes;
    };

    Decomposition out{kind, {}};
    const auto start = std::chrono::steady_clock::now();
    try {
        switch (kind) {
        case DecompKind::Cholesky:
            out.factors.push_back(blocked_cholesky(a, s, backend, &report.stats));
            break;
        case DecompKind::Lu: {
            auto f = blocked_lu(a, s, backend, &report.stats);
            out.factors.push_back(std::move(f.lower));
            out.factors.push_back(std::move(f.upper));
            break;
        }
        case DecompKind::Qr: {
            auto f = blocked_qr(a, s, backend, &report.stats);
            report.discarded_lower_mass = f.discarded_lower_mass;
            out.factors.push_back(std::move(f.q));
            out.factors.push_back(std::move(f.r));
            break;
        }
        }
    } catch (const std::exception& e) {
        report.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        fill_counts();
        report.error = e.what();
        throw;
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fill_counts();

    if (verify) {
        report.residual_rel = residual_rel(kind, a, out.factors);
        if (kind == DecompKind::Qr) report.orth_rel = orth_rel(out.factors[0]);
    }
    return out;
}

} // namespace panelfact
