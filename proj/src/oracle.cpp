#include "panelfact/oracle.hpp"

#include <cmath>

#include "panelfact/errors.hpp"
#include "panelfact/matmul.hpp"

namespace panelfact {

namespace {

void require_square(const Matrix& a, const char* what) {
    if (!a.is_square()) {
        throw DimensionError(std::string(what) + ": square input required, got " +
                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
}

} // namespace

double pivot_tolerance(const Matrix& a) {
    return 1e-12 * frobenius(a) / static_cast<double>(a.rows());
}

namespace oracle {

Matrix cholesky_crout(const Matrix& a) {
    require_square(a, "cholesky_crout");
    const std::size_t n = a.rows();
    Matrix l(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        double d = a(c, c);
        for (std::size_t k = 0; k < c; ++k) d -= l(c, k) * l(c, k);
        if (!(d > 0.0)) throw NumericalError(NumericalFailure::NotPositiveDefinite, c + 1);
        l(c, c) = std::sqrt(d);
        for (std::size_t i = c + 1; i < n; ++i) {
            double v = a(i, c);
            for (std::size_t k = 0; k < c; ++k) v -= l(i, k) * l(c, k);
            l(i, c) = v / l(c, c);
        }
    }
    return l;
}

Matrix cholesky_recursive(const Matrix& a) {
    require_square(a, "cholesky_recursive");
    const std::size_t n = a.rows();
    Matrix w = a;
    Matrix l(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        const double d = w(c, c);
        if (!(d > 0.0)) throw NumericalError(NumericalFailure::NotPositiveDefinite, c + 1);
        l(c, c) = std::sqrt(d);
        for (std::size_t i = c + 1; i < n; ++i) l(i, c) = w(i, c) / l(c, c);
        for (std::size_t i = c + 1; i < n; ++i)
            for (std::size_t j = c + 1; j < n; ++j) w(i, j) -= l(i, c) * l(j, c);
    }
    return l;
}

LuFactors lu_crout_unit_u(const Matrix& a) {
    require_square(a, "lu_crout_unit_u");
    const std::size_t n = a.rows();
    const double tol = pivot_tolerance(a);
    Matrix l(n, n);
    Matrix u(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t i = c; i < n; ++i) {
            double v = a(i, c);
            for (std::size_t k = 0; k < c; ++k) v -= l(i, k) * u(k, c);
            l(i, c) = v;
        }
        if (!(std::abs(l(c, c)) > tol)) {
            throw NumericalError(NumericalFailure::SingularLeadingMinor, c + 1);
        }
        for (std::size_t i = c; i < n; ++i) {
            double v = a(c, i);
            for (std::size_t k = 0; k < c; ++k) v -= l(c, k) * u(k, i);
            u(c, i) = v / l(c, c);
        }
    }
    return {std::move(l), std::move(u)};
}

QrFactors qr_mgs(const Matrix& a) {
    require_square(a, "qr_mgs");
    const std::size_t n = a.rows();
    const double tol = pivot_tolerance(a);
    Matrix q(n, n);
    std::vector<double> v(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t i = 0; i < n; ++i) v[i] = a(i, c);
        for (std::size_t j = 0; j < c; ++j) {
            double dot = q(0, j) * v[0];
            for (std::size_t i = 1; i < n; ++i) dot += q(i, j) * v[i];
            for (std::size_t i = 0; i < n; ++i) v[i] -= q(i, j) * dot;
        }
        double sq = v[0] * v[0];
        for (std::size_t i = 1; i < n; ++i) sq += v[i] * v[i];
        const double norm = std::sqrt(sq);
        if (!(norm > tol)) throw NumericalError(NumericalFailure::RankDeficient, c + 1);
        for (std::size_t i = 0; i < n; ++i) q(i, c) = v[i] / norm;
    }

    Matrix r = mul_classical(transpose(q), a);
    double lower_sq = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            lower_sq += r(i, j) * r(i, j);
            r(i, j) = 0.0;
        }
    }
    // Positive diagonal guard; a no-op in exact arithmetic.
    for (std::size_t c = 0; c < n; ++c) {
        if (r(c, c) < 0.0) {
            for (std::size_t i = 0; i < n; ++i) q(i, c) = -q(i, c);
            for (std::size_t j = c; j < n; ++j) r(c, j) = -r(c, j);
        }
    }
    return {std::move(q), std::move(r), std::sqrt(lower_sq)};
}

} // namespace oracle
} // namespace panelfact
