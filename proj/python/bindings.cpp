#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "symmkern/symmkern.hpp"

namespace py = pybind11;
using namespace symmkern;

namespace {

// KernelHandle is a std::variant, which pybind11 would convert member-wise.
struct Kernel {
  KernelHandle h;
};

Kernel kernel_from_string(const SpaceDescriptor& space, const std::string& spec) {
  return {make_kernel(space, parse_kernel_spec(spec))};
}

Point point_from_array(const SpaceDescriptor& space, const py::object& obj) {
  if (space.is_hyperbolic()) return HyperbolicPoint(obj.cast<Eigen::VectorXd>());
  if (space.algebra() == ScalarAlgebra::Quaternion) return ConePoint(space, obj.cast<Eigen::MatrixXcd>());
  const Eigen::MatrixXcd m = obj.cast<Eigen::MatrixXcd>();
  return space.algebra() == ScalarAlgebra::Real ? ConePoint::from_real(m.real()) : ConePoint::from_complex(m);
}

std::vector<Point> points_from_list(const SpaceDescriptor& space, const py::iterable& items) {
  std::vector<Point> out;
  for (const auto& item : items) {
    if (py::isinstance<ConePoint>(item)) out.emplace_back(item.cast<ConePoint>());
    else if (py::isinstance<HyperbolicPoint>(item)) out.emplace_back(item.cast<HyperbolicPoint>());
    else out.push_back(point_from_array(space, py::reinterpret_borrow<py::object>(item)));
  }
  return out;
}

py::list points_to_list(const std::vector<Point>& pts) {
  py::list out;
  for (const Point& p : pts) std::visit([&](const auto& x) { out.append(py::cast(x)); }, p);
  return out;
}

py::dict certificate_dict(const UniversalityCertificate& c) {
  py::dict d;
  d["positive_ae"] = c.positive_ae;
  d["bounded"] = c.bounded;
  d["integrable"] = c.integrable;
  d["decay_exponent_2s"] = c.decay_exponent_2s;
  d["dims_n"] = c.dims_n;
  d["c0_vanishing"] = c.c0_vanishing;
  d["claim_l2"] = c.claim_l2;
  d["claim_cc"] = c.claim_cc;
  d["claim_c0"] = c.claim_c0;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Positive-definite kernels on symmetric cones and hyperbolic spaces";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<SpaceDescriptor>(m, "Space")
      .def(py::init(&SpaceDescriptor::parse), py::arg("name"))
      .def_property_readonly("name", &SpaceDescriptor::name)
      .def_property_readonly("rank", &SpaceDescriptor::rank)
      .def_property_readonly("dim", &SpaceDescriptor::dim)
      .def_property_readonly("beta", &SpaceDescriptor::beta)
      .def_property_readonly("rho", &SpaceDescriptor::rho)
      .def_property_readonly("is_cone", &SpaceDescriptor::is_cone)
      .def("__eq__", [](const SpaceDescriptor& a, const SpaceDescriptor& b) { return a == b; })
      .def("__repr__", [](const SpaceDescriptor& s) { return "Space('" + s.name() + "')"; });

  py::class_<ConePoint>(m, "ConePoint")
      .def_property_readonly("matrix", &ConePoint::embedded)
      .def_property_readonly("log_det", &ConePoint::log_det)
      .def_property_readonly("space", &ConePoint::space);
  py::class_<HyperbolicPoint>(m, "HyperbolicPoint")
      .def_property_readonly("coords", &HyperbolicPoint::coords)
      .def_property_readonly("space", &HyperbolicPoint::space);

  py::class_<Kernel>(m, "Kernel")
      .def(py::init(&kernel_from_string), py::arg("space"), py::arg("spec"))
      .def_property_readonly("id", [](const Kernel& k) { return kernel_id(k.h); })
      .def_property_readonly("space", [](const Kernel& k) { return kernel_space(k.h); })
      .def("__call__",
           [](const Kernel& k, const py::object& x, const py::object& y) {
             const auto pts = points_from_list(kernel_space(k.h), py::make_tuple(x, y));
             return kernel_value(k.h, pts[0], pts[1]);
           })
      .def("radial", [](const Kernel& k, double r) { return synthesize_kernel(k.h, r); }, py::arg("r"))
      .def("__repr__", [](const Kernel& k) { return "Kernel('" + kernel_id(k.h) + "')"; });

  m.def("sample_points",
        [](const SpaceDescriptor& s, int n, std::uint64_t seed) { return points_to_list(sample_points(s, n, seed)); },
        py::arg("space"), py::arg("n"), py::arg("seed"));
  m.def("sample_ball",
        [](const SpaceDescriptor& s, int n, double radius, std::uint64_t seed) {
          return points_to_list(sample_ball(s, n, radius, seed));
        },
        py::arg("space"), py::arg("n"), py::arg("radius"), py::arg("seed"));
  m.def("point",
        [](const SpaceDescriptor& s, const py::object& a) {
          return std::visit([](const auto& x) { return py::cast(x); }, point_from_array(s, a));
        },
        py::arg("space"), py::arg("array"));
  m.def("distance",
        [](const SpaceDescriptor& s, const py::object& x, const py::object& y) {
          const auto pts = points_from_list(s, py::make_tuple(x, y));
          return geodesic_distance(pts[0], pts[1]);
        },
        py::arg("space"), py::arg("x"), py::arg("y"));

  m.def("gram",
        [](const Kernel& k, const py::iterable& pts, int threads) {
          const auto p = points_from_list(kernel_space(k.h), pts);
          py::gil_scoped_release release;
          return gram(p, k.h, 0, threads).values;
        },
        py::arg("kernel"), py::arg("points"), py::arg("threads") = 0);
  m.def("check_psd",
        [](const Eigen::MatrixXd& g, double tol) {
          const PsdReport r = check_psd(g, tol);
          py::dict d;
          d["min_eig"] = r.min_eig;
          d["max_eig"] = r.max_eig;
          d["pass"] = r.pass;
          return d;
        },
        py::arg("matrix"), py::arg("tol") = 1e-8);

  m.def("density",
        [](const SpaceDescriptor& s, const std::string& spec, const std::vector<double>& lambda) {
          return density_eval(make_density(s, parse_kernel_spec(spec)), lambda);
        },
        py::arg("space"), py::arg("spec"), py::arg("lambda_"));
  m.def("certify",
        [](const SpaceDescriptor& s, const std::string& spec) {
          return certificate_dict(certify_universality(make_density(s, parse_kernel_spec(spec))));
        },
        py::arg("space"), py::arg("spec"));
  m.def("log_gamma", &log_gamma_complex, py::arg("z"));
  m.def("spherical_function", &spherical_function, py::arg("space"), py::arg("lambda_"), py::arg("r"));
  m.def("plancherel_density", &plancherel_density, py::arg("space"), py::arg("lambda_"));

  m.def("krr_fit_predict",
        [](const Kernel& k, const py::iterable& train, const Eigen::VectorXd& y, const py::iterable& test,
           std::optional<double> mu) {
          const SpaceDescriptor& s = kernel_space(k.h);
          const RegressionModel model = krr_fit(points_from_list(s, train), y, k.h, mu);
          return krr_predict(model, points_from_list(s, test));
        },
        py::arg("kernel"), py::arg("train"), py::arg("y"), py::arg("test"), py::arg("mu") = py::none());
  m.def("experiment",
        [](const Kernel& k, const std::string& target, const std::vector<int>& sizes, std::uint64_t seed,
           double radius, int heldout) {
          ExperimentConfig cfg{kernel_space(k.h), k.h, {parse_target(target), std::nullopt}, sizes, seed};
          cfg.ball_radius = radius;
          cfg.heldout = heldout;
          ExperimentReport r;
          {
            py::gil_scoped_release release;
            r = universality_experiment(cfg);
          }
          py::dict d;
          d["sizes"] = r.sizes;
          d["rms"] = r.rms;
          d["sup"] = r.sup;
          return d;
        },
        py::arg("kernel"), py::arg("target"), py::arg("sizes"), py::arg("seed"), py::arg("radius") = 2.0,
        py::arg("heldout") = 1000);
}
