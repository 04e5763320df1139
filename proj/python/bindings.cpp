#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "writhe_lab/curve_io.hpp"
#include "writhe_lab/curves.hpp"
#include "writhe_lab/invariants.hpp"
#include "writhe_lab/pathway.hpp"
#include "writhe_lab/reconnection.hpp"

namespace py = pybind11;
namespace wl = writhe_lab;

namespace {

using PyVec = std::array<double, 3>;

wl::Vec3 to_vec(const PyVec& v) { return {v[0], v[1], v[2]}; }
PyVec from_vec(const wl::Vec3& v) { return {v.x, v.y, v.z}; }

std::vector<wl::Point3> to_points(const std::vector<PyVec>& pts) {
    std::vector<wl::Point3> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(to_vec(p));
    return out;
}

std::vector<PyVec> from_points(const std::vector<wl::Point3>& pts) {
    std::vector<PyVec> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(from_vec(p));
    return out;
}

}  // namespace

PYBIND11_MODULE(_writhe_lab, m) {
    m.doc() = "Writhe, twist, linking and helicity of closed polygonal curves, "
              "with anti-parallel reconnection surgery";

    py::register_exception<wl::Error>(m, "WritheLabError");

    py::class_<wl::PolygonalCurve>(m, "PolygonalCurve")
        .def(py::init([](const std::vector<PyVec>& pts) {
                 return wl::PolygonalCurve(to_points(pts));
             }),
             py::arg("vertices"))
        .def("__len__", &wl::PolygonalCurve::size)
        .def_property_readonly(
            "vertices",
            [](const wl::PolygonalCurve& c) { return from_points(c.vertices()); })
        .def("total_length", &wl::PolygonalCurve::total_length)
        .def("min_edge_length", &wl::PolygonalCurve::min_edge_length)
        .def("reversed", &wl::PolygonalCurve::reversed);

    py::class_<wl::CurveSystem>(m, "CurveSystem")
        .def(py::init<std::vector<wl::PolygonalCurve>>(), py::arg("components"))
        .def("__len__", &wl::CurveSystem::size)
        .def("component", &wl::CurveSystem::component, py::arg("i"),
             py::return_value_policy::reference_internal);

    py::class_<wl::Ribbon>(m, "Ribbon")
        .def(py::init([](const wl::PolygonalCurve& c, const std::vector<PyVec>& framing) {
                 return wl::Ribbon(c, to_points(framing));
             }),
             py::arg("curve"), py::arg("framing"))
        .def_property_readonly("curve", &wl::Ribbon::curve,
                               py::return_value_policy::reference_internal)
        .def_property_readonly(
            "framing", [](const wl::Ribbon& r) { return from_points(r.framing()); })
        .def_property_readonly("transport_holonomy", &wl::Ribbon::transport_holonomy)
        .def("pushoff", &wl::Ribbon::pushoff, py::arg("eps"));

    py::class_<wl::FluxTube>(m, "FluxTube")
        .def(py::init<wl::Ribbon, double>(), py::arg("ribbon"), py::arg("flux"))
        .def_property_readonly("ribbon", &wl::FluxTube::ribbon,
                               py::return_value_policy::reference_internal)
        .def_property_readonly("flux", &wl::FluxTube::flux);

    py::class_<wl::ReconnectionSite>(m, "ReconnectionSite")
        .def(py::init([](std::size_t edge_a, std::size_t edge_b, double snap_tolerance) {
                 return wl::ReconnectionSite{edge_a, edge_b, snap_tolerance};
             }),
             py::arg("edge_a"), py::arg("edge_b"), py::arg("snap_tolerance") = 1e-9)
        .def_readwrite("edge_a", &wl::ReconnectionSite::edge_a)
        .def_readwrite("edge_b", &wl::ReconnectionSite::edge_b)
        .def_readwrite("snap_tolerance", &wl::ReconnectionSite::snap_tolerance);

    py::class_<wl::MonteCarloEstimate>(m, "MonteCarloEstimate")
        .def_readonly("estimate", &wl::MonteCarloEstimate::estimate)
        .def_property_readonly(
            "stderr", [](const wl::MonteCarloEstimate& e) { return e.stderr_; })
        .def_readonly("samples", &wl::MonteCarloEstimate::samples)
        .def_readonly("perturbed_draws", &wl::MonteCarloEstimate::perturbed_draws);

    py::class_<wl::HelicityReport>(m, "HelicityReport")
        .def_readonly("writhe", &wl::HelicityReport::writhe)
        .def_readonly("total_torsion", &wl::HelicityReport::total_torsion)
        .def_readonly("intrinsic_twist", &wl::HelicityReport::intrinsic_twist)
        .def_readonly("twist", &wl::HelicityReport::twist)
        .def_readonly("self_linking", &wl::HelicityReport::self_linking)
        .def_readonly("flux", &wl::HelicityReport::flux)
        .def_readonly("centerline_helicity", &wl::HelicityReport::centerline_helicity)
        .def_readonly("intrinsic_twist_helicity",
                      &wl::HelicityReport::intrinsic_twist_helicity)
        .def_readonly("helicity", &wl::HelicityReport::helicity);

    py::class_<wl::ReconnectionLedger>(m, "ReconnectionLedger")
        .def_readonly("wr_before", &wl::ReconnectionLedger::wr_before)
        .def_readonly("wr_after", &wl::ReconnectionLedger::wr_after)
        .def_readonly("lk_before", &wl::ReconnectionLedger::lk_before)
        .def_readonly("tw_before_a", &wl::ReconnectionLedger::tw_before_a)
        .def_readonly("tw_before_b", &wl::ReconnectionLedger::tw_before_b)
        .def_readonly("tw_after", &wl::ReconnectionLedger::tw_after)
        .def_readonly("t_before", &wl::ReconnectionLedger::t_before)
        .def_readonly("t_after", &wl::ReconnectionLedger::t_after)
        .def_readonly("n_before", &wl::ReconnectionLedger::n_before)
        .def_readonly("n_after", &wl::ReconnectionLedger::n_after)
        .def_readonly("delta_tw", &wl::ReconnectionLedger::delta_tw)
        .def_readonly("delta_n", &wl::ReconnectionLedger::delta_n)
        .def_readonly("delta_h", &wl::ReconnectionLedger::delta_h)
        .def_readonly("h_before", &wl::ReconnectionLedger::h_before)
        .def_readonly("h_after", &wl::ReconnectionLedger::h_after)
        .def("to_json", [](const wl::ReconnectionLedger& l) { return wl::format_ledger(l); });

    py::class_<wl::Crossing>(m, "Crossing")
        .def_readonly("edge_a", &wl::Crossing::edge_a)
        .def_readonly("edge_b", &wl::Crossing::edge_b)
        .def_readonly("sign", &wl::Crossing::sign)
        .def_readonly("param_a", &wl::Crossing::param_a)
        .def_readonly("param_b", &wl::Crossing::param_b)
        .def_readonly("over", &wl::Crossing::over);

    py::class_<wl::ProjectionReport>(m, "ProjectionReport")
        .def_property_readonly(
            "direction", [](const wl::ProjectionReport& r) { return from_vec(r.direction); })
        .def_readonly("crossings", &wl::ProjectionReport::crossings)
        .def_readonly("directional_writhe", &wl::ProjectionReport::directional_writhe)
        .def_readonly("degenerate", &wl::ProjectionReport::degenerate);

    // generators and motions
    m.def(
        "make_circle",
        [](const PyVec& center, const PyVec& normal, double radius, std::size_t n) {
            return wl::make_circle(to_vec(center), to_vec(normal), radius, n);
        },
        py::arg("center"), py::arg("normal"), py::arg("radius"), py::arg("n"));
    m.def("make_torus_knot", &wl::make_torus_knot, py::arg("p"), py::arg("q"),
          py::arg("R"), py::arg("r"), py::arg("n"));
    m.def("make_hopf_link", &wl::make_hopf_link, py::arg("separation"),
          py::arg("radius"), py::arg("n"));
    m.def("make_random_closed_polygon", &wl::make_random_closed_polygon, py::arg("n"),
          py::arg("seed"));
    m.def(
        "translate",
        [](const wl::PolygonalCurve& c, const PyVec& v) {
            return wl::translate(c, to_vec(v));
        },
        py::arg("curve"), py::arg("displacement"));
    m.def("resample", &wl::resample, py::arg("curve"), py::arg("m"));
    m.def(
        "parallel_transport_frame",
        [](const wl::PolygonalCurve& c, const PyVec& v0) {
            return wl::parallel_transport_frame(c, to_vec(v0));
        },
        py::arg("curve"), py::arg("v0"));
    m.def(
        "twisted_frame",
        [](const wl::PolygonalCurve& c, const PyVec& v0, int turns) {
            return wl::twisted_frame(c, to_vec(v0), turns);
        },
        py::arg("curve"), py::arg("v0"), py::arg("turns"));

    // invariants
    m.def(
        "edge_pair_solid_angle",
        [](const PyVec& p1, const PyVec& p2, const PyVec& p3, const PyVec& p4) {
            return wl::edge_pair_solid_angle(to_vec(p1), to_vec(p2), to_vec(p3),
                                             to_vec(p4));
        },
        py::arg("p1"), py::arg("p2"), py::arg("p3"), py::arg("p4"));
    m.def("writhe", &wl::writhe, py::arg("curve"),
          py::call_guard<py::gil_scoped_release>());
    m.def("writhe_system", &wl::writhe_system, py::arg("system"),
          py::call_guard<py::gil_scoped_release>());
    m.def("linking_number_gauss", &wl::linking_number_gauss, py::arg("a"), py::arg("b"),
          py::call_guard<py::gil_scoped_release>());
    m.def("linking_number", &wl::linking_number, py::arg("a"), py::arg("b"),
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "linking_number_projection",
        [](const wl::PolygonalCurve& a, const wl::PolygonalCurve& b, const PyVec& nu) {
            return wl::linking_number_projection(a, b, to_vec(nu));
        },
        py::arg("a"), py::arg("b"), py::arg("nu"));
    m.def(
        "directional_writhe",
        [](const wl::CurveSystem& s, const PyVec& nu) {
            return wl::directional_writhe(s, to_vec(nu));
        },
        py::arg("system"), py::arg("nu"));
    m.def("writhe_monte_carlo", &wl::writhe_monte_carlo, py::arg("curve"),
          py::arg("samples"), py::arg("seed"), py::call_guard<py::gil_scoped_release>());
    m.def(
        "total_torsion",
        [](const wl::PolygonalCurve& c) { return wl::total_torsion(c).value; },
        py::arg("curve"));
    m.def("twist", &wl::twist, py::arg("ribbon"));
    m.def("intrinsic_twist", &wl::intrinsic_twist, py::arg("ribbon"));
    m.def("self_linking", &wl::self_linking, py::arg("ribbon"));
    m.def("self_linking_pushoff", &wl::self_linking_pushoff, py::arg("ribbon"),
          py::arg("eps"), py::arg("eps_min") = 1e-12);
    m.def("helicity_single", &wl::helicity_single, py::arg("tube"));
    m.def("helicity_pair", &wl::helicity_pair, py::arg("a"), py::arg("b"));
    m.def("set_kernel_threads", &wl::set_kernel_threads, py::arg("n"));

    // surgery
    m.def("reconnect", &wl::reconnect, py::arg("a"), py::arg("b"), py::arg("site"));
    m.def("self_reconnect", &wl::self_reconnect, py::arg("curve"), py::arg("site"));
    m.def("reconnect_tubes", &wl::reconnect_tubes, py::arg("a"), py::arg("b"),
          py::arg("site"));
    m.def("self_reconnect_tube", &wl::self_reconnect_tube, py::arg("tube"),
          py::arg("site"));

    // file I/O
    m.def("read_curve_file", [](const std::string& path) {
        const wl::StoredSystem stored = wl::read_curve_file(path);
        py::list comps;
        for (const auto& c : stored.components) {
            py::dict d;
            d["vertices"] = from_points(c.vertices);
            if (c.framing) d["framing"] = from_points(*c.framing);
            if (c.flux) d["flux"] = *c.flux;
            comps.append(d);
        }
        return comps;
    });
    m.def("write_curve_file", [](const std::string& path, const py::list& comps) {
        wl::StoredSystem stored;
        for (const auto& item : comps) {
            const py::dict d = item.cast<py::dict>();
            wl::StoredComponent comp;
            comp.vertices = to_points(d["vertices"].cast<std::vector<PyVec>>());
            if (d.contains("framing")) {
                comp.framing = to_points(d["framing"].cast<std::vector<PyVec>>());
            }
            if (d.contains("flux")) comp.flux = d["flux"].cast<double>();
            stored.components.push_back(std::move(comp));
        }
        wl::write_curve_file(path, stored);
    });
}
