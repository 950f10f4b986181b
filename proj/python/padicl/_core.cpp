#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "padicl/suites.hpp"

namespace py = pybind11;
using namespace padicl;

namespace {

Session session(const std::string& config, std::optional<int> precision, std::optional<int> moments,
                std::optional<std::string> out, std::optional<uint64_t> seed) {
  JobConfig cfg = config.empty() ? default_job() : load_job(config);
  apply_overrides(cfg, Overrides{precision, moments, out, seed});
  return Session(cfg);
}

template <class F>
void def_job(py::module_& m, const char* name, F f, const char* doc) {
  m.def(
      name,
      [f](const std::string& config, std::optional<int> precision, std::optional<int> moments,
          std::optional<std::string> out, std::optional<uint64_t> seed) {
        auto s = session(config, precision, moments, out, seed);
        return f(s).dump();
      },
      py::arg("config") = "", py::arg("precision") = py::none(), py::arg("moments") = py::none(),
      py::arg("out") = py::none(), py::arg("seed") = py::none(), doc);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "p-adic L-functions of small slope eigensymbols";

  static py::exception<Error> exc(m, "PadiclError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = exc;
      PyErr_SetObject(err.ptr(), py::make_tuple(err_code(e.code()), e.what()).ptr());
    }
  });

  m.def("field_validate", [](const std::string& path) { return cmd_field_validate(path).dump(); }, py::arg("path"));
  def_job(m, "symbol_build", [](Session& s) { return cmd_symbol_build(s); }, "Classical eigensymbol as JSON text.");
  def_job(m, "symbol_lift", [](Session& s) { return cmd_lift(s); }, "Overconvergent lift as JSON text.");
  def_job(m, "lfun_compute", [](Session& s) { return cmd_lfun_compute(s); }, "Ray class distribution as JSON text.");
  def_job(m, "lfun_eval", [](Session& s) { return cmd_lfun_eval(s); }, "Battery evaluations as JSON text.");
  m.def(
      "verify",
      [](const std::string& suite, const std::string& config, std::optional<int> precision, std::optional<int> moments,
         std::optional<std::string> out, std::optional<uint64_t> seed) {
        auto s = session(config, precision, moments, out, seed);
        return with_hash(run_suite(suite, s).to_json()).dump();
      },
      py::arg("suite"), py::arg("config") = "", py::arg("precision") = py::none(), py::arg("moments") = py::none(),
      py::arg("out") = py::none(), py::arg("seed") = py::none());
  m.def("suite_names", &suite_names);
  m.def("sha256", &sha256_hex, py::arg("data"));
  m.def("config_dir", [] { return std::string(PADICL_CONFIG_DIR); });
}
