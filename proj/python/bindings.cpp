#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <string>

#include "panelfact/decomp.hpp"
#include "panelfact/errors.hpp"
#include "panelfact/matmul.hpp"
#include "panelfact/oracle.hpp"
#include "panelfact/policy.hpp"

namespace py = pybind11;
using namespace panelfact;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a) {
    if (a.ndim() != 2) throw DimensionError("expected a 2-D array");
    Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    std::copy(a.data(), a.data() + a.size(), m.data());
    return m;
}

Array to_array(const Matrix& m) {
    Array out({m.rows(), m.cols()});
    std::copy(m.data(), m.data() + m.size(), out.mutable_data());
    return out;
}

MulBackend backend_from(const std::string& name, std::size_t depth) {
    return parse_backend_kind(name) == BackendKind::Classical ? MulBackend::classical()
                                                              : MulBackend::strassen(depth);
}

py::dict stats_dict(const DecompStats& st) {
    py::dict d;
    const OpCount total = st.total();
    d["mults"] = total.mults;
    d["adds"] = total.adds;
    d["flush_mults"] = st.flush.mults;
    d["flush_adds"] = st.flush.adds;
    d["flushes"] = st.flushes;
    return d;
}

} // namespace

PYBIND11_MODULE(_panelfact, m) {
    m.doc() = "Panel-blocked Cholesky, LU and QR with classical or Strassen trailing updates";

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);

    m.def("gen_spd", [](std::size_t n, std::uint64_t seed) { return to_array(gen_spd(n, seed)); },
          py::arg("n"), py::arg("seed") = 0);
    m.def("gen_general",
          [](std::size_t n, std::uint64_t seed) { return to_array(gen_general(n, seed)); },
          py::arg("n"), py::arg("seed") = 0);

    m.def(
        "mul_rect",
        [](const Array& a, const Array& b, const std::string& backend, std::size_t depth,
           std::size_t tile) {
            return to_array(mul_rect(to_matrix(a), to_matrix(b), backend_from(backend, depth), tile));
        },
        py::arg("a"), py::arg("b"), py::arg("backend") = "classical", py::arg("depth") = 0,
        py::arg("tile") = 64);
    m.def(
        "mul_strassen",
        [](const Array& a, const Array& b, std::size_t depth) {
            OpCount ops;
            auto c = mul_strassen_square(to_matrix(a), to_matrix(b), depth, &ops);
            return py::make_tuple(to_array(c), ops.mults, ops.adds);
        },
        py::arg("a"), py::arg("b"), py::arg("depth"),
        "Returns (product, scalar mults, scalar adds).");

    m.def(
        "cholesky",
        [](const Array& a, std::size_t s, const std::string& backend, std::size_t depth) {
            DecompStats st;
            auto l = blocked_cholesky(to_matrix(a), s, backend_from(backend, depth), &st);
            return py::make_tuple(to_array(l), stats_dict(st));
        },
        py::arg("a"), py::arg("s"), py::arg("backend") = "classical", py::arg("depth") = 0,
        "Blocked Cholesky. Returns (L, stats).");
    m.def(
        "lu",
        [](const Array& a, std::size_t s, const std::string& backend, std::size_t depth) {
            DecompStats st;
            auto f = blocked_lu(to_matrix(a), s, backend_from(backend, depth), &st);
            return py::make_tuple(to_array(f.lower), to_array(f.upper), stats_dict(st));
        },
        py::arg("a"), py::arg("s"), py::arg("backend") = "classical", py::arg("depth") = 0,
        "Blocked LU without pivoting (unit-diagonal U). Returns (L, U, stats).");
    m.def(
        "qr",
        [](const Array& a, std::size_t s, const std::string& backend, std::size_t depth) {
            DecompStats st;
            auto f = blocked_qr(to_matrix(a), s, backend_from(backend, depth), &st);
            auto d = stats_dict(st);
            d["discarded_lower_mass"] = f.discarded_lower_mass;
            return py::make_tuple(to_array(f.q), to_array(f.r), d);
        },
        py::arg("a"), py::arg("s"), py::arg("backend") = "classical", py::arg("depth") = 0,
        "Blocked modified Gram-Schmidt QR. Returns (Q, R, stats).");

    m.def("cholesky_crout", [](const Array& a) { return to_array(oracle::cholesky_crout(to_matrix(a))); });
    m.def("lu_crout", [](const Array& a) {
        auto f = oracle::lu_crout_unit_u(to_matrix(a));
        return py::make_tuple(to_array(f.lower), to_array(f.upper));
    });
    m.def("qr_mgs", [](const Array& a) {
        auto f = oracle::qr_mgs(to_matrix(a));
        return py::make_tuple(to_array(f.q), to_array(f.r));
    });

    m.def("resolve_width",
          [](std::size_t n, std::optional<std::size_t> s, std::optional<double> exponent) {
              if (s) return resolve(BlockPolicy::fixed(*s), n);
              if (exponent) return resolve(BlockPolicy::exponent(*exponent), n);
              throw std::invalid_argument("give either s or exponent");
          },
          py::arg("n"), py::arg("s") = py::none(), py::arg("exponent") = py::none());
    m.def(
        "predict_cost",
        [](std::size_t n, std::size_t s, const std::string& backend, std::size_t depth) {
            const auto e = predict_cost(n, s, backend_from(backend, depth));
            py::dict d;
            d["panel_ops"] = e.panel_ops;
            d["flush_mults"] = e.flush.mults;
            d["flush_adds"] = e.flush.adds;
            d["flush_ops"] = e.flush_ops;
            d["total"] = e.total;
            return d;
        },
        py::arg("n"), py::arg("s"), py::arg("backend") = "classical", py::arg("depth") = 0);
}
