#include <sstream>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cli.hpp"
#include "finsler/finsler.hpp"

namespace py = pybind11;
using namespace finsler;

namespace {

py::array_t<double> to_array(const Tensor& t) {
    std::vector<py::ssize_t> shape(static_cast<std::size_t>(t.rank()), t.dim());
    py::array_t<double> a(shape);
    std::copy(t.data().begin(), t.data().end(), a.mutable_data());
    return a;
}

nlohmann::json to_json(const py::object& obj) {
    if (obj.is_none()) return nlohmann::json::object();
    const auto dumps = py::module_::import("json").attr("dumps");
    return nlohmann::json::parse(dumps(obj).cast<std::string>());
}

py::object from_json(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

TangentPoint point(std::vector<double> x, std::vector<double> y) { return {std::move(x), std::move(y)}; }

EngineOptions engine() { return EngineOptions::from_environment(); }

py::dict geometry_dict(const PointGeometry& geo) {
    py::dict d;
    d["F"] = geo.F;
    d["g"] = to_array(geo.g);
    d["ginv"] = to_array(geo.ginv);
    d["spray"] = to_array(geo.spray);
    if (geo.has_connection()) {
        d["nonlinear"] = to_array(geo.nonlinear);
        d["christoffel"] = to_array(geo.christoffel);
        d["cartan"] = to_array(geo.cartan_low);
    }
    if (geo.has_curvature()) {
        d["chern"] = to_array(geo.chern);
        d["spray_curvature"] = to_array(geo.spray_curv);
        d["riemann"] = to_array(riemann_operator(geo));
        d["ricci"] = geo.ricci;
    }
    return d;
}

py::dict trajectory_dict(const Trajectory& t) {
    py::dict d = from_json(t.summary());
    d["s"] = t.s;
    d["x"] = t.x;
    d["v"] = t.v;
    if (!t.detJ.empty()) d["detJ"] = t.detJ;
    if (!t.p.empty()) {
        d["p"] = t.p;
        d["dp"] = t.dp;
        d["ddp"] = t.ddp;
    }
    return d;
}

TangentPoint unit(const MetricSpec& m, std::vector<double> x, std::vector<double> y) {
    return normalized(m, point(std::move(x), std::move(y)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Numerical Finsler geometry";

    py::class_<MetricSpec>(m, "Metric")
        .def_property_readonly("name", &MetricSpec::name)
        .def_property_readonly("dim", &MetricSpec::dim)
        .def_property_readonly("kind", [](const MetricSpec& s) { return to_string(s.kind()); })
        .def_property_readonly("domain_radius", &MetricSpec::domain_radius)
        .def("F", [](const MetricSpec& s, std::vector<double> x, std::vector<double> y) {
            return eval_F(s, point(std::move(x), std::move(y)));
        })
        .def("g", [](const MetricSpec& s, std::vector<double> x, std::vector<double> y) {
            return to_array(fundamental_tensor(s, point(std::move(x), std::move(y))));
        })
        .def("__repr__", [](const MetricSpec& s) { return "<Metric " + s.name() + " n=" + std::to_string(s.dim()) + ">"; });

    m.def("catalog", [](const std::string& name, int n, const py::object& params) { return catalog(name, n, to_json(params)); },
          py::arg("name"), py::arg("n") = 2, py::arg("params") = py::none());
    m.def("catalog_names", &catalog_names);
    m.def("metric_from_config", [](const py::object& cfg) { return metric_from_config(to_json(cfg)); });
    m.def("conformal_change", [](const MetricSpec& s, const std::string& phi) {
        return conformal_change(s, Expression::parse(phi, s.dim()).function());
    });

    m.def("geometry", [](const MetricSpec& s, std::vector<double> x, std::vector<double> y, int depth) {
        return geometry_dict(compute_geometry(s, point(std::move(x), std::move(y)), depth, engine()));
    }, py::arg("metric"), py::arg("x"), py::arg("y"), py::arg("depth") = 4);
    m.def("flag_curvature", [](const MetricSpec& s, std::vector<double> x, std::vector<double> y, std::vector<double> X) {
        return flag_curvature(s, point(std::move(x), std::move(y)), X, engine());
    });
    m.def("ricci_tensor", [](const MetricSpec& s, std::vector<double> x, std::vector<double> y) {
        return to_array(ricci_tensor(s, point(std::move(x), std::move(y)), engine()));
    });

    m.def("integrability_report", [](const MetricSpec& s, int samples, std::uint64_t seed, std::optional<std::string> phi, double tol) {
        std::optional<ScalarField> f;
        if (phi) f = Expression::parse(*phi, s.dim()).function();
        return from_json(integrability_report(s, sample_points(s, samples, seed), f, tol, engine()).to_json());
    }, py::arg("metric"), py::arg("samples") = 100, py::arg("seed") = kDefaultSeed, py::arg("phi") = py::none(),
       py::arg("tol") = kDefaultIntegrabilityTol);
    m.def("invariant_suite", [](const MetricSpec& s, int samples, std::uint64_t seed) {
        py::dict d;
        for (const auto& r : invariant_suite(s, sample_points(s, samples, seed), kInvariantTol, engine())) {
            py::dict e;
            e["value"] = r.value;
            e["tol"] = r.tol;
            e["pass"] = r.pass;
            d[py::str(r.name)] = e;
        }
        return d;
    }, py::arg("metric"), py::arg("samples") = 50, py::arg("seed") = kDefaultSeed);
    m.def("mobius_residual", [](const MetricSpec& s, const std::string& phi, int samples, std::uint64_t seed) {
        return mobius_residual(s, Expression::parse(phi, s.dim()).function(), sample_points(s, samples, seed), engine());
    }, py::arg("metric"), py::arg("phi"), py::arg("samples") = 50, py::arg("seed") = kDefaultSeed);
    m.def("schwarzian_1d", [](const std::string& g, double x) { return schwarzian_1d(Expression::parse(g, 1).function(), x); });

    m.def("geodesic", [](const MetricSpec& s, std::vector<double> x, std::vector<double> y, double length, double step) {
        const TangentPoint tp = unit(s, std::move(x), std::move(y));
        return trajectory_dict(geodesic(s, tp.x, tp.y, length, step, engine()));
    }, py::arg("metric"), py::arg("x"), py::arg("y"), py::arg("length"), py::arg("step") = kDefaultStep);
    m.def("conjugate_distance", [](const MetricSpec& s, std::vector<double> x, std::vector<double> y, double length, double step) {
        const TangentPoint tp = unit(s, std::move(x), std::move(y));
        return conjugate_search(s, geodesic(s, tp.x, tp.y, length, step, engine()), engine()).distance;
    }, py::arg("metric"), py::arg("x"), py::arg("y"), py::arg("length"), py::arg("step") = kDefaultStep);
    m.def("projective_parameter", [](const MetricSpec& s, std::vector<double> x, std::vector<double> y, double length, double step) {
        const TangentPoint tp = unit(s, std::move(x), std::move(y));
        const Trajectory t = geodesic(s, tp.x, tp.y, length, step, engine());
        const ProjectiveParameter pp = projective_parameter(s, t, {}, engine());
        py::dict d = trajectory_dict(pp.trajectory);
        d["schwarzian_residual"] = schwarzian_residual_of_p(s, t, pp, engine());
        return d;
    }, py::arg("metric"), py::arg("x"), py::arg("y"), py::arg("length"), py::arg("step") = kDefaultStep);
    m.def("bonnet", [](const MetricSpec& s, double lambda, int geodesics, std::uint64_t seed) {
        BonnetOptions bo;
        bo.n_geodesics = geodesics;
        bo.seed = seed;
        return from_json(bonnet_myers_check(s, lambda, bo, engine()).to_json());
    }, py::arg("metric"), py::arg("lam"), py::arg("geodesics") = 10, py::arg("seed") = kDefaultSeed);
    m.def("projective_factor", [](const MetricSpec& a, const MetricSpec& b, std::vector<double> x, std::vector<double> y) {
        return projective_factor(a, b, point(std::move(x), std::move(y)), engine());
    });

    m.def("run_cli", [](std::vector<std::string> args) {
        args.insert(args.begin(), "finsler");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}
