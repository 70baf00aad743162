// Thin pybind11 layer. Coordinates go in as ints, strings ("p/q") or anything whose str() parses
// as a rational; structured results come back as JSON text for the Python wrapper to decode.

#include "csd/caratheodory.hpp"
#include "csd/containers.hpp"
#include "csd/hardness.hpp"
#include "csd/io.hpp"
#include "csd/protocols.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace csd;

namespace {

Scalar to_scalar(const py::handle& v) { return scalar_from_json(Json(py::str(v).cast<std::string>())); }

Domain to_domain(const py::sequence& pts) {
    if (py::len(pts) == 0) throw std::invalid_argument("empty domain");
    std::vector<Point> out;
    int dim = -1;
    for (const auto& p : pts) {
        Point q;
        for (const auto& c : py::cast<py::sequence>(p)) q.push_back(to_scalar(c));
        if (dim < 0) dim = static_cast<int>(q.size());
        out.push_back(std::move(q));
    }
    return Domain(dim, std::move(out));
}

PointSet to_set(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

Bits to_bits(const std::string& s) {
    Bits b;
    for (char c : s) {
        if (c != '0' && c != '1') throw std::invalid_argument("bit strings hold only 0 and 1");
        b.push_back(c - '0');
    }
    return b;
}

ProtocolConfig config(const py::object& eps) {
    ProtocolConfig cfg;
    if (!eps.is_none()) cfg.epsilon = to_scalar(eps);
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);

    m.def("hulls_intersect", [](const py::sequence& pts, std::vector<int> x, std::vector<int> y) {
        return hulls_intersect(to_domain(pts), to_set(x), to_set(y)).intersecting;
    });
    m.def("separate", [](const py::sequence& pts, std::vector<int> x, std::vector<int> y) -> py::object {
        auto s = separate(to_domain(pts), to_set(x), to_set(y));
        if (!s) return py::none();
        Json j = to_json(s->halfspace);
        j["margin"] = to_json(s->margin);
        return py::str(j.dump());
    });
    m.def("halfspace_traces", [](const py::sequence& pts) {
        std::vector<PointSet> out;
        for (auto& t : enumerate_halfspace_traces(to_domain(pts))) out.push_back(std::move(t.members));
        return out;
    });
    m.def("symmetric_caratheodory", [](const py::sequence& pts, std::vector<int> x, std::vector<int> y) {
        SymmetricSupport s = symmetric_caratheodory(to_domain(pts), to_set(x), to_set(y));
        return std::make_pair(s.s1, s.s2);
    });
    m.def("container_family", [](const py::sequence& pts, const py::object& eps) {
        return to_json(build_container_family(to_domain(pts), to_scalar(eps))).dump();
    });
    m.def("run_promise_csd", [](const py::sequence& pts, std::vector<int> x, std::vector<int> y, const py::object& eps) {
        return to_json(run_promise_csd(to_domain(pts), to_set(x), to_set(y), config(eps))).dump();
    }, py::arg("points"), py::arg("x"), py::arg("y"), py::arg("eps") = py::none());
    m.def("run_csd", [](const py::sequence& pts, std::vector<int> x, std::vector<int> y, const py::object& eps) {
        return to_json(run_csd(to_domain(pts), to_set(x), to_set(y), config(eps))).dump();
    }, py::arg("points"), py::arg("x"), py::arg("y"), py::arg("eps") = py::none());
    m.def("run_learning", [](const py::sequence& pts, const Sample& a, const Sample& b, const py::object& eps) {
        return to_json(run_learning(a, b, to_domain(pts), config(eps))).dump();
    }, py::arg("points"), py::arg("alice"), py::arg("bob"), py::arg("eps") = py::none());
    m.def("disj", [](const std::string& x, const std::string& y) { return disj(to_bits(x), to_bits(y)); });
    m.def("disj_to_promise_csd", [](const std::string& x, const std::string& y) {
        PromiseInstance pi = disj_to_promise_csd(to_bits(x), to_bits(y));
        Instance inst;
        inst.domain = pi.gadget.domain;
        inst.alice = pi.alice;
        inst.bob = pi.bob;
        return to_json(inst).dump();
    });
}
