#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bpreg/config.hpp"
#include "bpreg/csv.hpp"
#include "bpreg/oracle.hpp"
#include "bpreg/propagator.hpp"
#include "bpreg/sde.hpp"
#include "bpreg/solver.hpp"

namespace py = pybind11;
using namespace bpreg;

PYBIND11_MODULE(_core, m) {
  m.doc() = "penalized functional regression core";

  py::register_exception<Error>(m, "BpregError");

  py::enum_<Family>(m, "Family")
      .value("Lasso", Family::Lasso)
      .value("Ridge", Family::Ridge)
      .value("LpNorm", Family::LpNorm)
      .value("ElasticNet", Family::ElasticNet)
      .value("FusedLasso", Family::FusedLasso)
      .value("Bridge", Family::Bridge)
      .value("GroupLasso", Family::GroupLasso)
      .value("SplineCubic", Family::SplineCubic);

  py::enum_<BasisKind>(m, "BasisKind")
      .value("Identity", BasisKind::Identity)
      .value("Cubic", BasisKind::Cubic);

  py::enum_<Init>(m, "Init")
      .value("Zero", Init::Zero)
      .value("Ols", Init::Ols)
      .value("Warm", Init::Warm);

  py::class_<TimeGrid>(m, "TimeGrid")
      .def(py::init<std::vector<double>>())
      .def_static("uniform", &TimeGrid::uniform, py::arg("t_max"), py::arg("n_points"))
      .def_property_readonly("points", &TimeGrid::points)
      .def("__len__", &TimeGrid::size)
      .def("__getitem__", [](const TimeGrid& g, int i) {
        if (i < 0 || i >= g.size()) throw py::index_error();
        return g[i];
      });

  py::class_<Panel>(m, "Panel")
      .def(py::init<TimeGrid, std::vector<Vec>, std::vector<Mat>>())
      .def_property_readonly("grid", &Panel::grid)
      .def_property_readonly("n_cases", &Panel::n_cases)
      .def_property_readonly("n_covariates", &Panel::n_covariates)
      .def_property_readonly("n_times", &Panel::n_times)
      .def("y", &Panel::y, py::arg("t"))
      .def("x", &Panel::x, py::arg("t"));

  py::class_<PenaltySpec>(m, "PenaltySpec")
      .def(py::init<>())
      .def_readwrite("family", &PenaltySpec::family)
      .def_readwrite("lambda_star", &PenaltySpec::lambda_star)
      .def_readwrite("alpha", &PenaltySpec::alpha)
      .def_readwrite("p", &PenaltySpec::p)
      .def_readwrite("group_size", &PenaltySpec::group_size)
      .def("validate", &PenaltySpec::validate, py::arg("n_covariates"))
      .def_static("lasso", &PenaltySpec::lasso)
      .def_static("ridge", &PenaltySpec::ridge)
      .def_static("lp_norm", &PenaltySpec::lp_norm)
      .def_static("elastic_net", &PenaltySpec::elastic_net)
      .def_static("fused_lasso", &PenaltySpec::fused_lasso)
      .def_static("bridge", &PenaltySpec::bridge)
      .def_static("group_lasso", &PenaltySpec::group_lasso, py::arg("lambda"),
                  py::arg("group_size"), py::arg("ks") = std::vector<Mat>{})
      .def_static("spline_cubic", &PenaltySpec::spline_cubic);

  py::class_<SolveOptions>(m, "SolveOptions")
      .def(py::init<>())
      .def_readwrite("max_sweeps", &SolveOptions::max_sweeps)
      .def_readwrite("tol", &SolveOptions::tol)
      .def_readwrite("init", &SolveOptions::init);

  py::class_<PointDiagnostics>(m, "PointDiagnostics")
      .def_readonly("foc_residual_norm", &PointDiagnostics::foc_residual_norm)
      .def_readonly("iterations", &PointDiagnostics::iterations)
      .def_readonly("converged", &PointDiagnostics::converged)
      .def_readonly("objective", &PointDiagnostics::objective)
      .def_readonly("note", &PointDiagnostics::note);

  py::class_<CoefPath>(m, "CoefPath")
      .def_static("plain", &CoefPath::plain, py::arg("grid"), py::arg("betas"))
      .def_readonly("grid", &CoefPath::grid)
      .def_readonly("betas", &CoefPath::betas)
      .def_readonly("diagnostics", &CoefPath::diagnostics);

  py::class_<TimepointReport>(m, "TimepointReport")
      .def_readonly("converged", &TimepointReport::converged)
      .def_readonly("sweeps", &TimepointReport::sweeps)
      .def_readonly("max_residual", &TimepointReport::max_residual)
      .def_readonly("note", &TimepointReport::note);

  py::class_<FitReport>(m, "FitReport")
      .def_readonly("points", &FitReport::points)
      .def_readonly("objective_integral", &FitReport::objective_integral)
      .def_readonly("all_converged", &FitReport::all_converged);

  py::class_<FocContext>(m, "FocContext")
      .def(py::init<double, Vec, Mat, PenaltySpec, BasisKind>(), py::arg("s"),
           py::arg("y"), py::arg("x"), py::arg("spec"),
           py::arg("basis") = BasisKind::Identity);

  py::class_<WaveGrid>(m, "WaveGrid")
      .def(py::init<std::vector<double>, std::vector<double>, double>(),
           py::arg("nodes"), py::arg("values"), py::arg("s0") = 0.0)
      .def_readonly("x_nodes", &WaveGrid::x_nodes)
      .def_readonly("psi", &WaveGrid::psi)
      .def_readonly("s", &WaveGrid::s);

  py::class_<ErrorPaths>(m, "ErrorPaths")
      .def_readonly("grid", &ErrorPaths::grid)
      .def_readonly("paths", &ErrorPaths::paths);

  m.def("f_eval", &f_eval, py::arg("ctx"), py::arg("beta"));
  m.def("foc_residual", &foc_residual, py::arg("ctx"), py::arg("beta"), py::arg("k"));
  m.def("closed_update", &closed_update, py::arg("ctx"), py::arg("beta"), py::arg("k"),
        py::arg("branch"));
  m.def(
      "fit_timepoint",
      [](const FocContext& ctx, const SolveOptions& opts) {
        return fit_timepoint(ctx, opts);
      },
      py::arg("ctx"), py::arg("opts") = SolveOptions{});
  m.def("fit_path", &fit_path, py::arg("panel"), py::arg("spec"),
        py::arg("basis") = BasisKind::Identity, py::arg("opts") = SolveOptions{});
  m.def("generate_panel", &generate_panel, py::arg("beta_true"), py::arg("x"),
        py::arg("spec"), py::arg("basis"), py::arg("seed"), py::arg("noise_scale"),
        py::arg("u0") = 0.0);
  m.def("random_covariates", &random_covariates, py::arg("grid"), py::arg("n_cases"),
        py::arg("n_covariates"), py::arg("seed"));
  m.def("simulate_errors", &simulate_errors, py::arg("beta_path"), py::arg("x"),
        py::arg("spec"), py::arg("basis"), py::arg("n_paths"), py::arg("seed"),
        py::arg("u0") = 0.0);
  m.def("objective_eval", &objective_eval, py::arg("panel"), py::arg("beta_path"),
        py::arg("basis") = BasisKind::Identity);
  m.def("transition_step", &transition_step, py::arg("wave"), py::arg("f"),
        py::arg("epsilon"));
  m.def("schrodinger_residual", &schrodinger_residual, py::arg("before"),
        py::arg("after"), py::arg("f"), py::arg("epsilon"));
  m.def("minimize_f_scalar", &minimize_f_scalar, py::arg("ctx"), py::arg("beta_others"),
        py::arg("k"), py::arg("lo"), py::arg("hi"), py::arg("n_grid") = 400);
  m.def(
      "validate_family",
      [](const std::string& family, int n, std::uint64_t seed, double lam) {
        PenaltySpec spec;
        spec.family = family_from_name(family);
        spec.lambda_star = lam;
        if (spec.family == Family::GroupLasso) spec.group_size = 2;
        return validate_family(spec, BasisKind::Identity, n, seed).to_text();
      },
      py::arg("family"), py::arg("n") = 50, py::arg("seed") = 1,
      py::arg("lambda_star") = 0.05);
  m.def("read_panel_csv", &read_panel_csv, py::arg("path"));
  m.def("write_panel_csv", &write_panel_csv, py::arg("path"), py::arg("panel"),
        py::arg("header_comments") = std::vector<std::string>{});
  m.def("write_betas_csv", &write_betas_csv, py::arg("path"), py::arg("fit"));
  m.def("read_truth_csv", &read_truth_csv, py::arg("path"));
}
