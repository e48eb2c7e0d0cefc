#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "nirom/bench.hpp"
#include "nirom/error.hpp"
#include "nirom/gpr.hpp"
#include "nirom/io.hpp"
#include "nirom/mls.hpp"
#include "nirom/pod.hpp"
#include "nirom/rom.hpp"

namespace py = pybind11;
using namespace nirom;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Non-intrusive reduced-order modelling: POD, GPR forecasting and MLS correction";

  auto base = py::register_exception<Error>(m, "NiromError", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<DegenerateError>(m, "DegenerateError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<HorizonError>(m, "HorizonError", base.ptr());

  py::class_<SpatialGrid>(m, "SpatialGrid")
      .def(py::init<Matrix, Vector>(), py::arg("coords"), py::arg("weights"))
      .def_static("uniform_1d", &SpatialGrid::uniform_1d, py::arg("a"), py::arg("b"), py::arg("n"))
      .def_property_readonly("coords", &SpatialGrid::coords)
      .def_property_readonly("weights", &SpatialGrid::weights)
      .def_property_readonly("size", &SpatialGrid::size)
      .def_property_readonly("dim", &SpatialGrid::dim);

  py::class_<SnapshotSet>(m, "SnapshotSet")
      .def(py::init([](SpatialGrid g, Vector t, Matrix f) { return SnapshotSet(std::move(g), std::move(t), std::move(f)); }),
           py::arg("grid"), py::arg("times"), py::arg("fields"))
      .def_property_readonly("grid", &SnapshotSet::grid)
      .def_property_readonly("times", &SnapshotSet::times)
      .def_property_readonly("fields", &SnapshotSet::fields)
      .def_property_readonly("mean", &SnapshotSet::mean)
      .def_property_readonly("has_moving_boundary", &SnapshotSet::has_moving_boundary);

  m.def("load_snapshots", &io::load_snapshots, py::arg("manifest"));
  m.def("write_dataset", &io::write_dataset, py::arg("dir"), py::arg("snapshots"));
  m.def("inner_product", [](const Vector& f, const Vector& g, const SpatialGrid& grid) {
    return inner_product(f, g, grid);
  });

  m.def(
      "burgers_snapshots",
      [](double re, double t1, double tm, Index count, Index nx) {
        BurgersConfig c;
        c.reynolds = re;
        c.nx = nx;
        return burgers_snapshots(c, t1, tm, count);
      },
      py::arg("reynolds") = 100.0, py::arg("t1") = 0.3, py::arg("tm") = 0.5, py::arg("m") = 20,
      py::arg("nx") = 1001);
  m.def(
      "burgers_field",
      [](const SpatialGrid& g, double t, double re) {
        BurgersConfig c;
        c.reynolds = re;
        return burgers_field(g, t, c);
      },
      py::arg("grid"), py::arg("t"), py::arg("reynolds") = 100.0);
  m.def(
      "bubble_snapshots",
      [](double t1, double tm, Index count, double t_horizon) {
        BubbleConfig c;
        c.t_horizon = t_horizon;
        return bubble_snapshots(c, t1, tm, count);
      },
      py::arg("t1") = 51.0, py::arg("tm") = 60.0, py::arg("m") = 10, py::arg("t_horizon") = 70.0);

  py::class_<PodBasis>(m, "PodBasis")
      .def_readonly("eigenvalues", &PodBasis::eigenvalues)
      .def_readonly("modes", &PodBasis::modes)
      .def_readonly("coeffs", &PodBasis::coeffs)
      .def_readonly("rank", &PodBasis::rank)
      .def_readonly("retained", &PodBasis::retained)
      .def_readonly("rrms_tail", &PodBasis::rrms_tail);
  m.def(
      "pod",
      [](const SnapshotSet& s, double alpha) { return truncate(decompose(correlation_matrix(s), s), alpha); },
      py::arg("snapshots"), py::arg("alpha_pod") = 0.01);
  m.def("correlation_matrix", &correlation_matrix);
  m.def("rrms_error", &rrms_error, py::arg("eigenvalues"), py::arg("r"));
  m.def(
      "pod_horizon",
      [](const PodBasis& b, double t1, double tm, double beta) {
        const PodHorizon h = pod_horizon(b, t1, tm, beta);
        return h.t_star;
      },
      py::arg("basis"), py::arg("t1"), py::arg("tm"), py::arg("beta_pod") = 0.3);

  py::class_<Kernel>(m, "Kernel")
      .def(py::init([](double f, double l) { return Kernel{f, l}; }), py::arg("theta_f"), py::arg("theta_l"))
      .def_readwrite("theta_f", &Kernel::theta_f)
      .def_readwrite("theta_l", &Kernel::theta_l);
  m.def(
      "nlml",
      [](const Kernel& k, double noise, const Vector& t, const Vector& y) {
        const NlmlResult r = nlml(k, noise, t, y);
        return py::make_tuple(r.value, Vector(r.grad));
      },
      py::arg("kernel"), py::arg("noise_var"), py::arg("t"), py::arg("y"));

  py::class_<GprModel>(m, "GprModel")
      .def_static(
          "train",
          [](const Vector& t, const Vector& y, int restarts, std::uint64_t seed) {
            GprOptions o;
            o.restarts = restarts;
            o.seed = seed;
            return GprModel::train(t, y, o);
          },
          py::arg("t"), py::arg("y"), py::arg("restarts") = 8, py::arg("seed") = 0)
      .def_static("from_hyperparameters", &GprModel::from_hyperparameters, py::arg("t"), py::arg("y"),
                  py::arg("kernel"), py::arg("noise_var"))
      .def(
          "predict",
          [](const GprModel& g, const Vector& tq) {
            const Prediction p = g.predict(tq);
            return py::make_tuple(p.mean, p.sd);
          },
          py::arg("t"))
      .def_property_readonly("kernel", &GprModel::kernel)
      .def_property_readonly("noise_var", &GprModel::noise_var)
      .def_property_readonly("nlml", &GprModel::nlml_value);

  m.def(
      "mls_fit",
      [](const Eigen::RowVectorXd& xp, const Matrix& pts, const Vector& vals, double h, int order) {
        MlsConfig c;
        c.order = order;
        return mls_fit(xp, pts, vals, h, c)(0);
      },
      py::arg("xp"), py::arg("points"), py::arg("values"), py::arg("h"), py::arg("order") = 3);

  py::class_<RomModel>(m, "RomModel")
      .def_readonly("basis", &RomModel::basis)
      .def_readonly("grid", &RomModel::grid)
      .def_readonly("warnings", &RomModel::warnings)
      .def_property_readonly("t_star", &RomModel::t_star)
      .def_property_readonly("binding", &RomModel::binding)
      .def_property_readonly("has_boundary", &RomModel::has_boundary)
      .def("report", [](const RomModel& r) { return build_report(r); });

  py::class_<RomForecast>(m, "RomForecast")
      .def_readonly("t_query", &RomForecast::t_query)
      .def_readonly("field", &RomForecast::field)
      .def_readonly("mode_mean", &RomForecast::mode_mean)
      .def_readonly("mode_sd", &RomForecast::mode_sd)
      .def_readonly("t_star", &RomForecast::t_star)
      .def_readonly("binding", &RomForecast::binding)
      .def_readonly("beyond_horizon", &RomForecast::beyond_horizon)
      .def_readonly("sigma_weighted", &RomForecast::sigma_weighted)
      .def_readonly("exposed_nodes", &RomForecast::exposed_nodes)
      .def_readonly("corrected_nodes", &RomForecast::corrected_nodes)
      .def("summary", [](const RomForecast& f) { return forecast_summary(f); });

  m.def(
      "build",
      [](const SnapshotSet& s, const std::string& settings_json) {
        const RomSettings st = settings_json.empty() ? RomSettings{} : settings_from_json(settings_json);
        py::gil_scoped_release release;
        return build(s, st);
      },
      py::arg("snapshots"), py::arg("settings") = std::string());
  m.def("forecast", &forecast, py::arg("model"), py::arg("t"), py::arg("force") = false);
  m.def("relative_error", [](const Vector& p, const Vector& t, const SpatialGrid& g) { return relative_error(p, t, g); },
        py::arg("pred"), py::arg("truth"), py::arg("grid"));
  m.def("save_model", &save_model, py::arg("dir"), py::arg("model"));
  m.def("load_model", &load_model, py::arg("dir"));
}
