#include "bvarkit/dynamics.hpp"
#include "bvarkit/error.hpp"
#include "bvarkit/lag_select.hpp"
#include "bvarkit/minnesota.hpp"
#include "bvarkit/report.hpp"
#include "bvarkit/series.hpp"
#include "bvarkit/var_ols.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace bvarkit;

namespace {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::bad_header: return "bad_header";
    case Errc::ragged_row: return "ragged_row";
    case Errc::missing_value: return "missing_value";
    case Errc::non_numeric: return "non_numeric";
    case Errc::duplicate_name: return "duplicate_name";
    case Errc::non_increasing_time: return "non_increasing_time";
    case Errc::too_few_periods: return "too_few_periods";
    case Errc::zero_range: return "zero_range";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::singular_design: return "singular_design";
    case Errc::degenerate_covariance: return "degenerate_covariance";
    case Errc::degenerate_scale: return "degenerate_scale";
    case Errc::non_positive_dof: return "non_positive_dof";
    case Errc::not_positive_definite: return "not_positive_definite";
    case Errc::insufficient_sample: return "insufficient_sample";
    case Errc::numerical_failure: return "numerical_failure";
    case Errc::config: return "config";
    case Errc::io: return "io";
  }
  return "unknown";
}

SeriesPanel panel_from_text(const std::string& text) {
  std::istringstream in(text);
  return load_panel(in);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "VAR and Minnesota-prior BVAR estimation";
  m.attr("__version__") = kVersion;

  // The module keeps the type alive; the translator only borrows it.
  static PyObject* error_type = py::exception<Error>(m, "BvarkitError", PyExc_ValueError).ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = errc_name(e.code());
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  py::class_<SeriesPanel>(m, "SeriesPanel")
      .def(py::init<std::vector<std::string>, std::vector<std::string>, Eigen::MatrixXd>(), py::arg("names"),
           py::arg("times"), py::arg("values"))
      .def_property_readonly("names", &SeriesPanel::names)
      .def_property_readonly("times", &SeriesPanel::times)
      .def_property_readonly("values", &SeriesPanel::values)
      .def_property_readonly("num_vars", &SeriesPanel::num_vars)
      .def_property_readonly("num_periods", &SeriesPanel::num_periods);

  py::class_<ValueRange>(m, "ValueRange").def_readonly("min", &ValueRange::min).def_readonly("max", &ValueRange::max);
  py::class_<NormalizationParams>(m, "NormalizationParams")
      .def_property_readonly("ranges", &NormalizationParams::ranges);

  py::class_<DesignMatrices>(m, "DesignMatrices")
      .def_readonly("Y", &DesignMatrices::Y)
      .def_readonly("X", &DesignMatrices::X)
      .def_readonly("lag_order", &DesignMatrices::lag_order)
      .def_readonly("constant", &DesignMatrices::constant)
      .def_readonly("first_period", &DesignMatrices::first_period);

  py::class_<VarSpec>(m, "VarSpec")
      .def(py::init([](int lag_order, bool constant) { return VarSpec{lag_order, constant, {}}; }),
           py::arg("lag_order") = 1, py::arg("constant") = true)
      .def_readwrite("lag_order", &VarSpec::lag_order)
      .def_readwrite("constant", &VarSpec::constant);

  py::class_<EquationFit>(m, "EquationFit")
      .def_readonly("r_squared", &EquationFit::r_squared)
      .def_readonly("se_equation", &EquationFit::se_equation);

  py::class_<VarEstimate>(m, "VarEstimate")
      .def_readonly("A", &VarEstimate::A)
      .def_readonly("c", &VarEstimate::c)
      .def_readonly("Sigma", &VarEstimate::Sigma)
      .def_readonly("T_eff", &VarEstimate::T_eff)
      .def_readonly("logL", &VarEstimate::logL)
      .def_readonly("per_equation", &VarEstimate::per_equation)
      .def_property_readonly("source", [](const VarEstimate& e) { return std::string(to_string(e.source)); });

  py::class_<MinnesotaHyper>(m, "MinnesotaHyper")
      .def(py::init([](double gamma, double decay, double cross, double constant_scale) {
             return MinnesotaHyper{gamma, decay, cross, constant_scale};
           }),
           py::arg("gamma") = 0.1, py::arg("decay_exponent") = 1.0, py::arg("cross_tightness") = 0.5,
           py::arg("constant_scale") = 1e3)
      .def_readwrite("gamma", &MinnesotaHyper::gamma)
      .def_readwrite("decay_exponent", &MinnesotaHyper::decay_exponent)
      .def_readwrite("cross_tightness", &MinnesotaHyper::cross_tightness)
      .def_readwrite("constant_scale", &MinnesotaHyper::constant_scale);

  py::class_<CriteriaRow>(m, "CriteriaRow")
      .def_readonly("lag", &CriteriaRow::lag)
      .def_readonly("logL", &CriteriaRow::logL)
      .def_readonly("lr", &CriteriaRow::lr)
      .def_readonly("fpe", &CriteriaRow::fpe)
      .def_readonly("aic", &CriteriaRow::aic)
      .def_readonly("sic", &CriteriaRow::sic)
      .def_readonly("hqic", &CriteriaRow::hqic)
      .def_readonly("n_total", &CriteriaRow::n_total);

  py::class_<SelectionTable>(m, "SelectionTable")
      .def_readonly("rows", &SelectionTable::rows)
      .def_readonly("T_eff", &SelectionTable::T_eff)
      .def_property_readonly("winners", [](const SelectionTable& t) {
        py::dict d;
        const char* names[] = {"lr", "fpe", "aic", "sic", "hqic"};
        for (const auto& [c, lag] : t.winners) d[names[static_cast<int>(c)]] = lag;
        return d;
      });

  py::class_<LrResult>(m, "LrResult")
      .def_readonly("stat", &LrResult::stat)
      .def_readonly("reject", &LrResult::reject)
      .def_readonly("critical_value", &LrResult::critical_value);

  py::class_<StabilityReport>(m, "StabilityReport")
      .def_readonly("roots", &StabilityReport::roots)
      .def_readonly("moduli", &StabilityReport::moduli)
      .def_readonly("stable", &StabilityReport::stable)
      .def_property_readonly("max_modulus", &StabilityReport::max_modulus);

  py::class_<ImpulseResponse>(m, "ImpulseResponse")
      .def_readonly("horizon", &ImpulseResponse::horizon)
      .def_readonly("psi", &ImpulseResponse::psi)
      .def_readonly("cumulative", &ImpulseResponse::cumulative)
      .def_readonly("orthogonalized", &ImpulseResponse::orthogonalized);

  py::class_<EffectVerdict>(m, "EffectVerdict")
      .def_readonly("source", &EffectVerdict::source)
      .def_readonly("target", &EffectVerdict::target)
      .def_property_readonly("direction", [](const EffectVerdict& v) { return std::string(to_string(v.direction)); })
      .def_readonly("share_positive", &EffectVerdict::share_positive)
      .def_readonly("peak_period", &EffectVerdict::peak_period)
      .def_readonly("settle_period", &EffectVerdict::settle_period);

  py::class_<ReportBundle>(m, "ReportBundle")
      .def_readonly("names", &ReportBundle::names)
      .def_readonly("lag_order", &ReportBundle::lag_order)
      .def_readonly("ols", &ReportBundle::ols)
      .def_readonly("ols_error", &ReportBundle::ols_error)
      .def_readonly("ols_stability", &ReportBundle::ols_stability)
      .def_readonly("bvar_stability", &ReportBundle::bvar_stability)
      .def_readonly("verdicts", &ReportBundle::verdicts)
      .def_readonly("headline_contrast", &ReportBundle::headline_contrast)
      .def_readonly("manifest", &ReportBundle::manifest)
      .def_property_readonly("bvar", [](const ReportBundle& b) -> std::optional<VarEstimate> {
        if (!b.bvar) return std::nullopt;
        return b.bvar->estimate;
      });

  m.def("load_panel", &load_panel_file, py::arg("path"));
  m.def("load_panel_text", &panel_from_text, py::arg("text"));
  m.def(
      "normalize",
      [](const SeriesPanel& p) {
        auto n = normalize(p);
        return py::make_tuple(n.panel, n.params);
      },
      py::arg("panel"));
  m.def("denormalize", &denormalize, py::arg("panel"), py::arg("params"));
  m.def("build_design", &build_design, py::arg("panel"), py::arg("lag_order"), py::arg("constant") = true,
        py::arg("common_max_lag") = std::nullopt);
  m.def("fit_ols", &fit_ols, py::arg("design"), py::arg("spec"));
  m.def("fit_bvar", &fit_bvar, py::arg("panel"), py::arg("spec"), py::arg("hyper") = MinnesotaHyper{});
  m.def("select_lag", &select_lag, py::arg("panel"), py::arg("spec"), py::arg("max_lag"));
  m.def("criteria_row", &criteria_row, py::arg("logL"), py::arg("ln_det_sigma"), py::arg("T"), py::arg("N"),
        py::arg("n_per_eq"));
  m.def("lr_test", &lr_test, py::arg("logL"), py::arg("logL_prev"), py::arg("T"), py::arg("n_per_eq"), py::arg("df"),
        py::arg("alpha") = 0.05);
  m.def("stability", py::overload_cast<const std::vector<Eigen::MatrixXd>&>(&stability), py::arg("A"));
  m.def("irf", py::overload_cast<const std::vector<Eigen::MatrixXd>&, const Eigen::MatrixXd&, int, bool>(&irf),
        py::arg("A"), py::arg("sigma"), py::arg("horizon"), py::arg("orthogonalized") = false);
  m.def("classify_effect", &classify_effect, py::arg("ir"), py::arg("target"), py::arg("source"),
        py::arg("tolerance") = 1e-3);
  m.def(
      "run_pipeline",
      [](const std::string& config_path, std::optional<std::string> output_dir) {
        RunConfig c = load_config_file(config_path);
        if (output_dir) c.output = std::filesystem::absolute(*output_dir).string();
        return run_pipeline(c);
      },
      py::arg("config"), py::arg("output_dir") = std::nullopt);
}
