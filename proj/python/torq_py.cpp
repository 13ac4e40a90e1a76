#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "torq/io.hpp"

namespace py = pybind11;
using namespace torq;

namespace {

// dicts cross the boundary as JSON text
py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_py(const py::object& o) {
    return parse_json(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

Kind kind_of(const std::string& k) {
    if (k == "queens") return Kind::queens_toroidal;
    if (k == "semi") return Kind::semiqueens_toroidal;
    if (k == "classical") return Kind::queens_classical;
    throw invalid_argument("kind must be queens, semi or classical");
}

}  // namespace

PYBIND11_MODULE(torq_py, m) {
    m.doc() = "toroidal queens graphs: counts, lattice tests, greedy matchings, W-sets";

    py::register_exception<invalid_argument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<unsupported>(m, "Unsupported", PyExc_RuntimeError);
    py::register_exception<precondition_error>(m, "PreconditionError", PyExc_RuntimeError);
    py::register_exception<capacity_error>(m, "CapacityError", PyExc_RuntimeError);
    py::register_exception<verification_error>(m, "VerificationError", PyExc_RuntimeError);

    m.def("count_classical", &count_classical, py::arg("n"));
    m.def("count_toroidal", &count_toroidal, py::arg("n"));
    m.def("count_semiqueens", [](std::int64_t n, bool toroidal) {
        return count_semiqueens(n, toroidal ? Mode::toroidal : Mode::classical);
    }, py::arg("n"), py::arg("toroidal") = true);
    m.def("monsky", &monsky_formula, py::arg("n"));
    m.def("max_partial_toroidal", &max_partial_toroidal, py::arg("n"));

    m.def("ones", [](std::int64_t n) { return to_py(to_json(ones(TorusGraph(n)))); }, py::arg("n"));
    m.def("check_lattice", [](const py::object& doc) {
        SupportVector v = support_vector_from_json(from_py(doc));
        return to_py(to_json(v.kind == LatticeKind::semi ? in_lattice_semiqueens(v) : in_lattice_queens(v)));
    }, py::arg("vector"));
    m.def("hnf_oracle", [](const py::object& doc) {
        SupportVector v = support_vector_from_json(from_py(doc));
        return hnf_oracle(v.n, v.kind, v);
    }, py::arg("vector"));
    m.def("decompose", [](const py::object& doc) {
        return to_py(to_json(decompose_bounded(support_vector_from_json(from_py(doc)))));
    }, py::arg("vector"));
    m.def("make_config", [](std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t s) {
        return to_py(to_json(make_config(n, a, b, c, s)));
    }, py::arg("n"), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("s"));

    m.def("greedy", [](std::int64_t n, std::uint64_t seed, const std::string& kind, double b) {
        TorusGraph g(n, kind_of(kind));
        GreedyTrace t = run_greedy(g, seed);
        EnvelopeReport env = envelope_check(t, b);
        CountEstimate est = count_estimate(t);
        py::list q, dmin, dmax;
        for (const auto& s : t.steps) {
            q.append(s.Q);
            dmin.append(s.dmin);
            dmax.append(s.dmax);
        }
        py::list edges;
        for (const auto& e : t.matching) edges.append(py::make_tuple(e.x, e.y));
        py::dict d;
        d["n"] = t.n;
        d["seed"] = t.seed;
        d["target"] = t.target;
        d["completed"] = t.completed;
        d["Q"] = q;
        d["dmin"] = dmin;
        d["dmax"] = dmax;
        d["matching"] = edges;
        d["log_estimate"] = est.log_value;
        d["normalized_estimate"] = est.normalized;
        d["inside_fraction_q"] = env.inside_fraction_q;
        d["inside_fraction_d"] = env.inside_fraction_d;
        return d;
    }, py::arg("n"), py::arg("seed") = 0, py::arg("kind") = "queens", py::arg("b") = 0.05);
    m.def("knuth", [](std::int64_t n, std::int64_t trials, std::uint64_t seed, const std::string& kind) {
        KnuthEstimate k = knuth_count_estimator(TorusGraph(n, kind_of(kind)), trials, seed);
        py::dict d;
        d["estimate"] = k.estimate;
        d["log_estimate"] = k.log_estimate;
        d["trials"] = k.trials;
        d["successes"] = k.successes;
        return d;
    }, py::arg("n"), py::arg("trials"), py::arg("seed") = 0, py::arg("kind") = "queens");

    m.def("build_wset", [](std::int64_t n) { return to_py(to_json(build_wset(n))); }, py::arg("n"));
    m.def("verify_wset", [](const py::object& doc) {
        WSet w = wset_from_json(from_py(doc));
        return to_py(to_json(verify_tstar_lattice(w.n, w)));
    }, py::arg("wset"));
    m.def("extend", [](std::int64_t n, double timeout, std::uint64_t seed) -> py::object {
        ExtendOptions opt;
        opt.timeout_seconds = timeout;
        opt.seed = seed;
        WSet w = build_wset(n);
        std::optional<Placement> p;
        {
            py::gil_scoped_release nogil;
            p = extend_classical(n, w, opt);
        }
        if (!p) return py::none();
        return to_py(to_json(*p));
    }, py::arg("n"), py::arg("timeout") = 60.0, py::arg("seed") = 0);
    m.def("verify_placement", [](const py::object& doc) {
        PlacementDoc d = placement_from_json(from_py(doc));
        return verify_placement(d.n, d.queens, d.mode);
    }, py::arg("placement"));
}
