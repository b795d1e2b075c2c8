// Copyright 2026 The pairsketch Authors
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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pairsketch/bhm.hpp"
#include "pairsketch/errors.hpp"
#include "pairsketch/graph_io.hpp"
#include "pairsketch/harness.hpp"
#include "pairsketch/heavy_edges.hpp"
#include "pairsketch/pseudosnapshot.hpp"
#include "pairsketch/qsim.hpp"
#include "pairsketch/triangle.hpp"

namespace py = pybind11;
using namespace pairsketch;

namespace {

using EdgeList = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

EdgeStream to_stream(std::uint32_t n, const EdgeList &edges, bool directed) {
    EdgeStream s{n, {}, directed};
    for (auto [u, v] : edges) {
        s.edges.push_back({u, v});
    }
    s.validate();
    return s;
}

EdgeList to_edges(const EdgeStream &s) {
    EdgeList out;
    for (const Edge &e : s.edges) {
        out.emplace_back(e.u, e.v);
    }
    return out;
}

std::vector<ElementId> to_ids(const std::vector<std::uint64_t> &xs) {
    std::vector<ElementId> out;
    for (auto x : xs) {
        out.push_back(ElementId{x});
    }
    return out;
}

// A sketch on the flat universe {0, ..., size-1}.
class PySketch {
   public:
    PySketch(std::uint64_t size, const std::vector<std::uint64_t> &initial, std::uint64_t seed)
        : universe_(std::make_shared<const UniverseSpec>(UniverseSpec::flat(size))),
          h_(SketchHandle::create(universe_, std::span<const ElementId>(to_ids(initial)), seed)) {}

    void update(const PermutationSpec &pi) { h_.update(pi); }
    QueryOutcome query_one(std::uint64_t x) { return h_.query_one(ElementId{x}); }
    QueryOutcome query_pair(std::uint64_t x, std::uint64_t y) { return h_.query_pair(ElementId{x}, ElementId{y}); }
    bool alive() const { return h_.alive(); }
    std::vector<std::uint64_t> members() const {
        std::vector<std::uint64_t> out;
        for (ElementId x : h_.debug_members()) {
            out.push_back(x.index);
        }
        return out;
    }

   private:
    UniversePtr universe_;
    SketchHandle h_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Pair-sampling sketch, exact backends and streaming estimators.";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

    py::enum_<QueryOutcome>(m, "Outcome")
        .value("BOT", QueryOutcome::Bot)
        .value("IN", QueryOutcome::In)
        .value("PLUS", QueryOutcome::Plus)
        .value("MINUS", QueryOutcome::Minus);

    py::class_<PermutationSpec>(m, "Permutation")
        .def(py::init<>())
        .def("swap", [](PermutationSpec &p, std::uint64_t a, std::uint64_t b) -> PermutationSpec & { return p.swap(ElementId{a}, ElementId{b}); },
             py::return_value_policy::reference_internal)
        .def("swap_blocks",
             [](PermutationSpec &p, std::uint64_t a, std::uint64_t b, std::uint64_t len) -> PermutationSpec & {
                 return p.swap_blocks(ElementId{a}, ElementId{b}, len);
             },
             py::return_value_policy::reference_internal)
        .def("rotate_flat",
             [](PermutationSpec &p, std::int64_t lo, std::uint64_t size, std::uint64_t shift) -> PermutationSpec & {
                 return p.rotate({0, 0, {0}, lo, size, shift});
             },
             py::arg("lo"), py::arg("size"), py::arg("shift"), py::return_value_policy::reference_internal);

    py::class_<PySketch>(m, "Sketch")
        .def(py::init<std::uint64_t, const std::vector<std::uint64_t> &, std::uint64_t>(), py::arg("size"), py::arg("initial"),
             py::arg("seed") = 0)
        .def("update", &PySketch::update)
        .def("query_one", &PySketch::query_one)
        .def("query_pair", &PySketch::query_pair)
        .def_property_readonly("alive", &PySketch::alive)
        .def("debug_members", &PySketch::members);

    py::class_<ScriptOp>(m, "ScriptOp")
        .def_static("update", &ScriptOp::update)
        .def_static("query_one", [](std::uint64_t x) { return ScriptOp::query_one(ElementId{x}); })
        .def_static("query_pair", [](std::uint64_t x, std::uint64_t y) { return ScriptOp::query_pair(ElementId{x}, ElementId{y}); });

    m.def(
        "enumerate_distribution",
        [](std::uint64_t size, const std::vector<std::uint64_t> &initial, const Script &script, const std::string &backend) {
            auto u = UniverseSpec::flat(size);
            auto b = backend == "quantum" ? qsim::Backend::Quantum : qsim::Backend::Stochastic;
            if (backend != "quantum" && backend != "stochastic") {
                throw InvalidParamsError("backend must be 'stochastic' or 'quantum'");
            }
            auto dist = qsim::enumerate_distribution(u, to_ids(initial), script, b);
            std::map<std::string, double> out;
            for (const auto &[seq, p] : dist.entries) {
                std::string key;
                for (auto o : seq) {
                    key += outcome_char(o);
                }
                out[key] = p;
            }
            return out;
        },
        py::arg("size"), py::arg("initial"), py::arg("script"), py::arg("backend") = "stochastic",
        "Exact law of outcome sequences; keys spell outcomes with B, I, + and -.");
    m.def("total_variation", [](const std::map<std::string, double> &a, const std::map<std::string, double> &b) {
        double sum = 0;
        for (const auto &[k, p] : a) {
            auto it = b.find(k);
            sum += std::abs(p - (it == b.end() ? 0.0 : it->second));
        }
        for (const auto &[k, p] : b) {
            sum += a.count(k) ? 0.0 : p;
        }
        return sum / 2;
    });

    auto mb = m.def_submodule("bhm", "Boolean hidden matching");
    mb.def(
        "run",
        [](std::uint32_t n, double alpha, int b, std::uint64_t instance_seed, std::uint64_t trials, std::uint64_t seed) {
            auto inst = gen::matching(n, alpha, static_cast<std::uint8_t>(b), instance_seed);
            std::map<std::string, std::uint64_t> counts{{"correct", 0}, {"incorrect", 0}, {"bot", 0}};
            for (std::uint64_t i = 0; i < trials; ++i) {
                auto r = bhm::run_single(inst, derive_seed(seed, i));
                ++counts[!r ? "bot" : (*r == inst.b ? "correct" : "incorrect")];
            }
            return counts;
        },
        py::arg("n"), py::arg("alpha"), py::arg("b"), py::arg("instance_seed"), py::arg("trials"), py::arg("seed"));
    mb.def(
        "exact_law",
        [](std::uint32_t n, double alpha, int b, std::uint64_t instance_seed, bool quantum) {
            auto law = bhm::exact_output_law(gen::matching(n, alpha, static_cast<std::uint8_t>(b), instance_seed), quantum);
            return std::map<std::string, double>{{"p0", law.p0}, {"p1", law.p1}, {"bot", law.bot}};
        },
        py::arg("n"), py::arg("alpha"), py::arg("b"), py::arg("instance_seed"), py::arg("quantum") = false);

    auto mt = m.def_submodule("triangle", "Triangle counting");
    mt.def(
        "oracle",
        [](std::uint32_t n, const EdgeList &edges, std::uint64_t k) {
            auto rep = triangle::oracle_t_split(to_stream(n, edges, false), k);
            return py::dict(py::arg("T") = rep.T, py::arg("T_less") = to_double(rep.T_less),
                            py::arg("T_less_exact") = to_string(rep.T_less), py::arg("T_greater_exact") = to_string(rep.T_greater));
        },
        py::arg("n"), py::arg("edges"), py::arg("k"));
    mt.def(
        "run_single",
        [](std::uint32_t n, const EdgeList &edges, std::uint64_t k, std::uint64_t seed) {
            return triangle::run_single(to_stream(n, edges, false), k, seed);
        },
        py::arg("n"), py::arg("edges"), py::arg("k"), py::arg("seed"));

    auto mh = m.def_submodule("heavy", "Heavy edge counting");
    mh.def(
        "oracle",
        [](std::uint32_t n, const EdgeList &edges, std::uint64_t d_H, std::uint64_t d_T) {
            return heavy::oracle_heavy_count(to_stream(n, edges, true), d_H, d_T);
        },
        py::arg("n"), py::arg("edges"), py::arg("d_H"), py::arg("d_T"));
    mh.def(
        "estimate",
        [](std::uint32_t n, const EdgeList &edges, std::uint64_t d_H, std::uint64_t d_T, std::uint64_t copies, std::uint64_t seed) {
            heavy::HeavyParams p;
            p.d_H = d_H;
            p.d_T = d_T;
            p.copies = copies;
            return heavy::estimate(to_stream(n, edges, true), p, seed);
        },
        py::arg("n"), py::arg("edges"), py::arg("d_H"), py::arg("d_T"), py::arg("copies"), py::arg("seed"));

    auto ms = m.def_submodule("snapshot", "Pseudosnapshot estimation");
    ms.def(
        "grid", [](std::uint32_t n, double eps) { return snapshot::DegreeGrid::build(n, eps).levels; }, py::arg("n"), py::arg("eps"));
    ms.def(
        "expected",
        [](std::uint32_t n, const EdgeList &edges, std::uint64_t kappa, double eps, const std::vector<double> &thresholds,
           std::size_t alpha, std::size_t beta, std::uint64_t hash_seed) {
            auto s = to_stream(n, edges, true);
            snapshot::SnapshotParams p;
            p.kappa = kappa;
            p.eps = eps;
            p.thresholds = thresholds;
            p.alpha = alpha;
            p.beta = beta;
            snapshot::HashOracles h{hash_seed, kappa, eps};
            auto rep = snapshot::expected_estimate(s, h, snapshot::DegreeGrid::build(n, eps), p);
            return py::dict(py::arg("restricted") = rep.restricted, py::arg("expected") = rep.expected,
                            py::arg("bias_bound") = rep.bias_bound, py::arg("in_class") = rep.in_class);
        },
        py::arg("n"), py::arg("edges"), py::arg("kappa"), py::arg("eps"), py::arg("thresholds"), py::arg("alpha"), py::arg("beta"),
        py::arg("hash_seed"));
    ms.def(
        "pseudosnapshot",
        [](std::uint32_t n, const EdgeList &edges, std::uint64_t kappa, double eps, const std::vector<double> &thresholds,
           std::uint64_t hash_seed) {
            snapshot::HashOracles h{hash_seed, kappa, eps};
            return snapshot::pseudosnapshot_exact(to_stream(n, edges, true), h, snapshot::DegreeGrid::build(n, eps), thresholds);
        },
        py::arg("n"), py::arg("edges"), py::arg("kappa"), py::arg("eps"), py::arg("thresholds"), py::arg("hash_seed"));

    auto mg = m.def_submodule("gen", "Instance generators");
    mg.def(
        "gnp", [](std::uint32_t n, double p, std::uint64_t seed, bool directed) { return to_edges(gen::gnp(n, p, seed, directed)); },
        py::arg("n"), py::arg("p"), py::arg("seed"), py::arg("directed") = false);
    mg.def(
        "gnm",
        [](std::uint32_t n, std::uint64_t m, std::uint64_t seed, bool directed) { return to_edges(gen::gnm(n, m, seed, directed)); },
        py::arg("n"), py::arg("m"), py::arg("seed"), py::arg("directed") = false);
    mg.def("star", [](std::uint32_t n) { return to_edges(gen::star(n)); }, py::arg("n"));
    mg.def(
        "planted_triangles",
        [](std::uint32_t n, std::uint64_t t, std::uint64_t seed) { return to_edges(gen::planted_triangles(n, t, seed).stream); },
        py::arg("n"), py::arg("t"), py::arg("seed"));

    m.def(
        "run_experiment",
        [](const std::string &config_json) {
            auto config = harness::ExperimentConfig::from_json(harness::Json::parse(config_json));
            return harness::run_experiment(config).canonical();
        },
        py::arg("config_json"), "Runs one experiment and returns the canonical JSON report.");
}
