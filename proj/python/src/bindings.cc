// Copyright 2026 The qhedge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qhedge/analysis.h"
#include "qhedge/channel.h"
#include "qhedge/interactive.h"
#include "qhedge/io.h"
#include "qhedge/linalg.h"
#include "qhedge/sdp.h"

namespace py = pybind11;
using namespace qhedge;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const ComplexArray &a) {
    if (a.ndim() != 2) {
        throw DimensionError("expected a 2-d array, got " + std::to_string(a.ndim()) + " dimensions");
    }
    auto r = static_cast<std::size_t>(a.shape(0));
    auto c = static_cast<std::size_t>(a.shape(1));
    std::vector<Complex> entries(a.data(), a.data() + r * c);
    return ComplexMatrix(r, c, std::move(entries));
}

ComplexArray to_array(const ComplexMatrix &m) {
    ComplexArray out({m.rows(), m.cols()});
    std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
    return out;
}

std::vector<Complex> to_vector(const ComplexArray &a) {
    if (a.ndim() != 1) {
        throw DimensionError("expected a 1-d array");
    }
    return std::vector<Complex>(a.data(), a.data() + a.shape(0));
}

InteractiveMeasurement make_im(std::size_t dim_x, std::size_t dim_y, std::size_t dim_z, const ComplexArray &rho,
                               const std::map<std::string, ComplexArray> &outcomes) {
    InteractiveMeasurement im;
    im.dims = {dim_x, dim_y, dim_z};
    im.rho = to_matrix(rho);
    for (const auto &[label, p] : outcomes) {
        im.outcomes.emplace(label, to_matrix(p));
    }
    return im;
}

py::dict outcomes_dict(const InteractiveMeasurement &im) {
    py::dict d;
    for (const auto &[label, p] : im.outcomes) {
        d[py::str(label)] = to_array(p);
    }
    return d;
}

PartialTraceSdp make_sdp(const ComplexArray &q, std::size_t dim_x, std::size_t dim_y, const std::string &sense) {
    return {to_matrix(q), dim_x, dim_y, parse_sense(sense)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Choi operators, interactive measurements and partial-trace SDPs.";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<NotHermitianError>(m, "NotHermitianError", PyExc_ValueError);
    py::register_exception<NotPsdError>(m, "NotPsdError", PyExc_ValueError);
    py::register_exception<ChannelError>(m, "ChannelError", PyExc_ValueError);
    py::register_exception<SdpError>(m, "SdpError", PyExc_RuntimeError);
    py::register_exception<io::ParseError>(m, "ParseError", PyExc_ValueError);

    m.def("partial_trace",
          [](const ComplexArray &a, std::vector<std::size_t> dims, std::size_t traced) {
              return to_array(partial_trace(to_matrix(a), SystemDims(std::move(dims)), traced));
          },
          py::arg("m"), py::arg("dims"), py::arg("traced_factor"));
    m.def("trace_norm", [](const ComplexArray &a) { return trace_norm(to_matrix(a)); });
    m.def("fidelity_squared", [](const ComplexArray &p, const ComplexArray &r) {
        return fidelity_squared(to_matrix(p), to_matrix(r));
    });
    m.def("eigvalsh", [](const ComplexArray &a) { return eig_hermitian(to_matrix(a)).values; });

    py::class_<ChoiOperator>(m, "ChoiOperator")
        .def(py::init([](std::size_t dim_in, std::size_t dim_out, const ComplexArray &j) {
                 return ChoiOperator(dim_in, dim_out, to_matrix(j));
             }),
             py::arg("dim_in"), py::arg("dim_out"), py::arg("matrix"))
        .def_property_readonly("dim_in", &ChoiOperator::dim_in)
        .def_property_readonly("dim_out", &ChoiOperator::dim_out)
        .def_property_readonly("matrix", [](const ChoiOperator &j) { return to_array(j.matrix()); })
        .def("__repr__", [](const ChoiOperator &j) {
            return "ChoiOperator(dim_in=" + std::to_string(j.dim_in()) + ", dim_out=" + std::to_string(j.dim_out()) +
                   ")";
        });

    m.def("choi_identity", &choi_identity, py::arg("dim"));
    m.def("choi_from_unitary", [](const ComplexArray &u) { return choi_from_unitary(to_matrix(u)); });
    m.def("choi_from_kraus", [](const std::vector<ComplexArray> &ks) {
        std::vector<ComplexMatrix> kraus;
        for (const auto &k : ks) {
            kraus.push_back(to_matrix(k));
        }
        return choi_from_kraus(kraus);
    });
    m.def("kraus_from_choi", [](const ChoiOperator &j) {
        std::vector<ComplexArray> out;
        for (const auto &k : kraus_from_choi(j)) {
            out.push_back(to_array(k));
        }
        return out;
    });
    m.def("choi_tensor", &choi_tensor);
    m.def(
        "validate_channel",
        [](const ChoiOperator &j, double tol) {
            auto v = validate(j, tol);
            py::dict d;
            d["completely_positive"] = v.completely_positive;
            d["trace_preserving"] = v.trace_preserving;
            d["cp_residual"] = v.cp_residual;
            d["tp_residual"] = v.tp_residual;
            return d;
        },
        py::arg("j"), py::arg("tol") = kChannelTol);
    m.def(
        "apply_extended",
        [](const ChoiOperator &j, const ComplexArray &rho, std::size_t dim_z) {
            return to_array(apply_extended(j, to_matrix(rho), {j.dim_in(), dim_z}));
        },
        py::arg("j"), py::arg("rho"), py::arg("dim_z"));
    m.def(
        "psi_apply",
        [](const ComplexArray &a, const ComplexArray &b, std::size_t x, std::size_t y, std::size_t z) {
            return to_array(psi_apply(to_matrix(a), to_matrix(b), {x, y, z}));
        },
        py::arg("a"), py::arg("b"), py::arg("dim_x"), py::arg("dim_y"), py::arg("dim_z"));

    py::class_<InteractiveMeasurement>(m, "InteractiveMeasurement")
        .def(py::init(&make_im), py::arg("dim_x"), py::arg("dim_y"), py::arg("dim_z"), py::arg("rho"),
             py::arg("outcomes"))
        .def_property_readonly("dim_x", [](const InteractiveMeasurement &im) { return im.dims.x; })
        .def_property_readonly("dim_y", [](const InteractiveMeasurement &im) { return im.dims.y; })
        .def_property_readonly("dim_z", [](const InteractiveMeasurement &im) { return im.dims.z; })
        .def_property_readonly("rho", [](const InteractiveMeasurement &im) { return to_array(im.rho); })
        .def_property_readonly("outcomes", &outcomes_dict)
        .def(
            "is_valid", [](const InteractiveMeasurement &im, double tol) { return validate_im(im, tol).valid; },
            py::arg("tol") = kMeasurementTol)
        .def("effective_operator",
             [](const InteractiveMeasurement &im, const std::string &label) {
                 return to_array(effective_operator(im, label));
             })
        .def("distribution",
             [](const InteractiveMeasurement &im, const ChoiOperator &j) {
                 std::map<std::string, std::pair<double, double>> out;
                 for (const auto &[label, e] : outcome_distribution(im, j)) {
                     out[label] = {e.direct, e.via_choi};
                 }
                 return out;
             })
        .def("probability", [](const InteractiveMeasurement &im, const ChoiOperator &j,
                               const std::string &label) { return outcome_probability(im, j, label); })
        .def("dephased", &dephase_im)
        .def("is_classical", [](const InteractiveMeasurement &im) { return is_classical(im); })
        .def("to_json", &io::format_test)
        .def_static("from_json", [](const std::string &text) { return io::parse_test(text); });

    m.def("product_compose", &product_compose);
    m.def("product_label", &product_label);

    py::class_<SdpSolution>(m, "SdpSolution")
        .def_property_readonly("primal_x", [](const SdpSolution &s) { return to_array(s.primal_x); })
        .def_property_readonly("dual_y", [](const SdpSolution &s) { return to_array(s.dual_y); })
        .def_readonly("primal_value", &SdpSolution::primal_value)
        .def_readonly("dual_value", &SdpSolution::dual_value)
        .def_readonly("gap", &SdpSolution::gap)
        .def_readonly("primal_residual", &SdpSolution::primal_residual)
        .def_readonly("dual_residual", &SdpSolution::dual_residual)
        .def_readonly("iterations", &SdpSolution::iterations)
        .def_readonly("converged", &SdpSolution::converged)
        .def_property_readonly("history", [](const SdpSolution &s) {
            std::vector<std::pair<double, double>> h;
            for (const auto &r : s.history) {
                h.emplace_back(r.primal, r.dual);
            }
            return h;
        });

    m.def(
        "solve",
        [](const ComplexArray &q, std::size_t dim_x, std::size_t dim_y, const std::string &sense, double tol,
           int max_iter) {
            PartialTraceSdp p = make_sdp(q, dim_x, dim_y, sense);
            py::gil_scoped_release release;
            return solve(p, {tol, max_iter});
        },
        py::arg("q"), py::arg("dim_x"), py::arg("dim_y"), py::arg("sense") = "max", py::arg("tol") = 1e-8,
        py::arg("max_iter") = 200);
    m.def(
        "certify",
        [](const ComplexArray &q, std::size_t dim_x, std::size_t dim_y, const std::string &sense,
           const SdpSolution &s) {
            auto c = certify(make_sdp(q, dim_x, dim_y, sense), s);
            py::dict d;
            d["passed"] = c.passed;
            d["weak_duality"] = c.weak_duality;
            d["gap"] = c.gap;
            d["failures"] = c.failures;
            return d;
        },
        py::arg("q"), py::arg("dim_x"), py::arg("dim_y"), py::arg("sense"), py::arg("solution"));
    m.def(
        "classical_exact",
        [](const ComplexArray &q, std::size_t dim_x, std::size_t dim_y, const std::string &sense) {
            auto c = classical_exact(make_sdp(q, dim_x, dim_y, sense));
            return std::make_pair(c.value, c.function);
        },
        py::arg("q"), py::arg("dim_x"), py::arg("dim_y"), py::arg("sense") = "max");
    m.def(
        "random_strategy_bound",
        [](const ComplexArray &q, std::size_t dim_x, std::size_t dim_y, const std::string &sense,
           std::size_t samples, std::uint64_t seed) {
            return random_strategy_bound(make_sdp(q, dim_x, dim_y, sense), samples, seed);
        },
        py::arg("q"), py::arg("dim_x"), py::arg("dim_y"), py::arg("sense") = "max", py::arg("samples") = 200,
        py::arg("seed") = 0);

    m.def("build_hedging_test", &build_hedging_test);
    m.def("build_echo_test", &build_echo_test);
    m.def("hedging_strategy", &hedging_strategy);
    m.def(
        "verify_hedging",
        [](double tol, int max_iter) {
            HedgingReport r;
            {
                py::gil_scoped_release release;
                r = verify_hedging(tol, max_iter);
            }
            py::dict d;
            d["single_max"] = r.single_max;
            d["single_min_fail"] = r.single_min_fail;
            d["joint_fail_min"] = r.joint_fail_min;
            d["joint_pass_max"] = r.joint_pass_max;
            d["strategy_distribution"] = r.strategy_distribution;
            d["strategy_joint_fail"] = r.strategy_joint_fail;
            d["classical_bound"] = r.classical_bound;
            d["classical_bound_violated"] = r.classical_bound_violated;
            d["checks"] = r.checks;
            d["all_checks_passed"] = r.all_checks_passed();
            return d;
        },
        py::arg("tol") = 1e-8, py::arg("max_iter") = 200);
    m.def("fidelity_bound", [] { return fidelity_bound_chain().value; });
    m.def(
        "classical_threshold_bound",
        [](unsigned k, unsigned t, double p) { return classical_threshold_bound({k, t, p}); }, py::arg("k"),
        py::arg("t"), py::arg("p"));
    m.def(
        "quantum_threshold_bound",
        [](unsigned k, unsigned t, double p) { return quantum_threshold_bound({k, t, p}); }, py::arg("k"),
        py::arg("t"), py::arg("p"));
}
