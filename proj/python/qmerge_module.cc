// Copyright 2026 The qmerge Authors
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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qmerge/applications.h"
#include "qmerge/distance.h"
#include "qmerge/entropy.h"
#include "qmerge/io.h"
#include "qmerge/merging.h"

namespace py = pybind11;
using namespace qmerge;

namespace {

Layout make_layout(const Labels &labels, const std::vector<int64_t> &dims) {
    if (labels.size() != dims.size()) throw std::invalid_argument("labels and dims differ in length");
    std::vector<Part> parts;
    for (size_t i = 0; i < labels.size(); ++i) parts.push_back({labels[i], dims[i]});
    return Layout(std::move(parts));
}

DensityOperator density_of(const py::object &state) {
    if (py::isinstance<PureState>(state)) return state.cast<const PureState &>().density();
    return state.cast<DensityOperator>();
}

PureState pure_of(const py::object &state, const std::string &purifier) {
    if (py::isinstance<PureState>(state)) return state.cast<PureState>();
    return purify(state.cast<const DensityOperator &>(), purifier);
}

py::object to_python(const Json &j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_qmerge, m) {
    m.doc() = "Entropy calculus, state merging simulation and rate regions.";

    py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);

    py::class_<PureState>(m, "PureState")
        .def(py::init([](const Labels &labels, const std::vector<int64_t> &dims, const Vector &amplitudes) {
                 return PureState(make_layout(labels, dims), amplitudes);
             }),
             py::arg("labels"), py::arg("dims"), py::arg("amplitudes"))
        .def_property_readonly("labels", [](const PureState &s) { return s.layout().labels(); })
        .def_property_readonly("dims", [](const PureState &s) { return s.layout().dims(); })
        .def_property_readonly("amplitudes", &PureState::amplitudes)
        .def("density", &PureState::density)
        .def("__repr__", [](const PureState &s) { return "PureState(" + s.layout().to_string() + ")"; });

    py::class_<DensityOperator>(m, "DensityOperator")
        .def(py::init([](const Labels &labels, const std::vector<int64_t> &dims, const Matrix &matrix) {
                 return DensityOperator(make_layout(labels, dims), matrix);
             }),
             py::arg("labels"), py::arg("dims"), py::arg("matrix"))
        .def_property_readonly("labels", [](const DensityOperator &s) { return s.layout().labels(); })
        .def_property_readonly("dims", [](const DensityOperator &s) { return s.layout().dims(); })
        .def_property_readonly("matrix", &DensityOperator::matrix)
        .def("spectrum", &DensityOperator::spectrum)
        .def("__repr__", [](const DensityOperator &s) { return "DensityOperator(" + s.layout().to_string() + ")"; });

    m.def(
        "parse_state",
        [](const std::string &spec) -> py::object {
            AnyState s = parse_state(spec);
            if (auto *p = std::get_if<PureState>(&s)) return py::cast(*p);
            return py::cast(std::get<DensityOperator>(s));
        },
        py::arg("spec"), "Preset name or path to a JSON state file.");
    m.def(
        "state_to_json",
        [](const py::object &state) {
            if (py::isinstance<PureState>(state)) return state_to_json(state.cast<PureState>());
            return state_to_json(state.cast<DensityOperator>());
        },
        py::arg("state"));
    m.def(
        "partial_trace", [](const py::object &state, const Labels &keep) { return partial_trace(density_of(state), keep); },
        py::arg("state"), py::arg("keep"));
    m.def("purify", &purify, py::arg("rho"), py::arg("label") = "R");
    m.def(
        "fidelity", [](const py::object &a, const py::object &b) { return fidelity(density_of(a), density_of(b)); },
        py::arg("a"), py::arg("b"));
    m.def(
        "trace_distance",
        [](const py::object &a, const py::object &b) { return trace_distance(density_of(a), density_of(b)); },
        py::arg("a"), py::arg("b"));

    m.def(
        "entropy", [](const py::object &s, const Labels &subset) { return entropy(density_of(s), subset); },
        py::arg("state"), py::arg("subset"));
    m.def(
        "conditional_entropy",
        [](const py::object &s, const Labels &a, const Labels &b) { return conditional_entropy(density_of(s), a, b); },
        py::arg("state"), py::arg("a"), py::arg("given") = Labels{});
    m.def(
        "mutual_information",
        [](const py::object &s, const Labels &a, const Labels &b) { return mutual_information(density_of(s), a, b); },
        py::arg("state"), py::arg("a"), py::arg("b"));
    m.def(
        "coherent_information",
        [](const py::object &s, const Labels &a, const Labels &b, bool legacy) {
            return coherent_information(density_of(s), a, b, legacy ? CoherentForm::kLegacy : CoherentForm::kSigned);
        },
        py::arg("state"), py::arg("a"), py::arg("b"), py::arg("legacy") = false);
    m.def(
        "ssa_margin",
        [](const py::object &s, const Labels &a, const Labels &b, const Labels &c) {
            return ssa_margin(density_of(s), a, b, c);
        },
        py::arg("state"), py::arg("a"), py::arg("b"), py::arg("c"));

    m.def(
        "plan_merge",
        [](const py::object &s, int copies, double slack, const Labels &alice, const Labels &bob) {
            PureState psi = pure_of(s, "R");
            return to_python(to_json(plan_merge(psi, copies, slack, MergeRoles::resolve(psi.layout(), alice, bob))));
        },
        py::arg("state"), py::arg("copies"), py::arg("slack") = 1.0, py::arg("alice") = Labels{"A"},
        py::arg("bob") = Labels{"B"});
    m.def(
        "merge_outcomes",
        [](const py::object &s, int copies, double slack, std::optional<Matrix> unitary, uint64_t seed,
           const Labels &alice, const Labels &bob) {
            PureState psi = pure_of(s, "R");
            const MergeRoles roles = MergeRoles::resolve(psi.layout(), alice, bob);
            MergeOptions opt;
            opt.alice_unitary = unitary;
            MergeSimulator sim(psi, plan_merge(psi, copies, slack, roles), roles, opt);
            Rng rng(seed);
            py::list out;
            for (const auto &o : sim.all_outcomes(sim.draw_unitary(rng))) out.append(to_python(to_json(o)));
            return out;
        },
        py::arg("state"), py::arg("copies"), py::arg("slack") = 1.0, py::arg("unitary") = py::none(),
        py::arg("seed") = 0, py::arg("alice") = Labels{"A"}, py::arg("bob") = Labels{"B"},
        "Every outcome of one merging run with a fixed measurement basis.");
    m.def(
        "merge_curve",
        [](const py::object &s, const std::vector<int> &copies, int trials, double slack, uint64_t seed,
           const Labels &alice, const Labels &bob) {
            PureState psi = pure_of(s, "R");
            std::vector<CurveRow> rows;
            {
                py::gil_scoped_release release;
                rows = monte_carlo_merge(psi, copies, trials, slack, seed, MergeRoles::resolve(psi.layout(), alice, bob));
            }
            py::list out;
            for (const auto &r : rows) out.append(to_python(to_json(r)));
            return out;
        },
        py::arg("state"), py::arg("copies"), py::arg("trials"), py::arg("slack") = 1.0, py::arg("seed") = 0,
        py::arg("alice") = Labels{"A"}, py::arg("bob") = Labels{"B"});

    m.def(
        "compression_region", [](const py::object &s) { return to_python(to_json(compression_region(density_of(s)))); },
        py::arg("state"));
    m.def(
        "mac_region",
        [](const py::object &s, const Labels &a, const Labels &b, const Labels &c) {
            return to_python(to_json(mac_region(EntropyReport(density_of(s)), MacGroups{a, b, c})));
        },
        py::arg("state"), py::arg("a") = Labels{"A"}, py::arg("b") = Labels{"B"}, py::arg("c") = Labels{"C"});
    m.def(
        "entanglement_of_assistance",
        [](const py::object &s, const Labels &alice, const Labels &bob) {
            return to_python(to_json(entanglement_of_assistance(s.cast<PureState>(), alice, bob)));
        },
        py::arg("state"), py::arg("alice") = Labels{"A"}, py::arg("bob") = Labels{"B"});
    m.def(
        "entanglement_of_purification",
        [](const py::object &s, const Labels &a, const std::string &u, int restarts, uint64_t seed) {
            EpOptions opt;
            opt.restarts = restarts;
            Rng rng(seed);
            return to_python(to_json(entanglement_of_purification(density_of(s), a, u, opt, rng)));
        },
        py::arg("state"), py::arg("a") = Labels{"A"}, py::arg("u") = "U", py::arg("restarts") = 4,
        py::arg("seed") = 0);
    m.def(
        "side_info_rates",
        [](const py::object &s, const std::string &channel, const Labels &alice, int restarts, uint64_t seed) {
            PureState psi = pure_of(s, "R");
            EpOptions opt;
            opt.restarts = restarts;
            Rng rng(seed);
            return to_python(to_json(side_info_rates(psi, alice, parse_channel(channel, psi.layout()), opt, rng)));
        },
        py::arg("state"), py::arg("channel"), py::arg("alice") = Labels{"A"}, py::arg("restarts") = 4,
        py::arg("seed") = 0);
}
