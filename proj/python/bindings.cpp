#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pathlim/cli.hpp"
#include "pathlim/error.hpp"
#include "pathlim/io.hpp"
#include "pathlim/limits.hpp"
#include "pathlim/oracle.hpp"
#include "pathlim/residual.hpp"
#include "pathlim/sampling.hpp"
#include "pathlim/structure.hpp"

namespace py = pybind11;
using namespace pathlim;

namespace {

using Tokens = std::vector<std::string>;

Path to_path(const WeightedDigraph& g, const Tokens& u) { return path_from_tokens(g, u); }

Tokens to_tokens(const WeightedDigraph& g, const Path& u) { return names_of(g, u.vertices); }

Tokens support_names(const WeightedDigraph& g, const VertexSet& vs) { return names_of(g, vs); }

}  // namespace

PYBIND11_MODULE(pathlim, m) {
  m.doc() = "Limits of path distributions on weighted digraphs";

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  static py::exception<Error> input(m, "InputError", base.ptr());
  static py::exception<Error> degenerate(m, "DegenerateError", base.ptr());
  static py::exception<Error> precondition(m, "PreconditionError", base.ptr());
  static py::exception<Error> numeric(m, "NumericError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      switch (e.kind()) {
        case ErrorKind::input: py::set_error(input, e.what()); break;
        case ErrorKind::degenerate: py::set_error(degenerate, e.what()); break;
        case ErrorKind::precondition: py::set_error(precondition, e.what()); break;
        case ErrorKind::numeric: py::set_error(numeric, e.what()); break;
      }
    }
  });

  py::class_<WeightedDigraph>(m, "Digraph")
      .def(py::init<std::vector<std::string>, Matrix>(), py::arg("vertices"), py::arg("weights"))
      .def_property_readonly("vertices", &WeightedDigraph::vertices)
      .def_property_readonly("adjacency", &WeightedDigraph::adjacency)
      .def("__len__", &WeightedDigraph::size)
      .def("index_of", [](const WeightedDigraph& g, const std::string& v) { return g.index_of(v); })
      .def("__str__", [](const WeightedDigraph& g) { return serialize_digraph(g); });

  m.def("parse_digraph", [](const std::string& text) { return parse_digraph(text); }, py::arg("text"));
  m.def("read_digraph", &read_digraph_file, py::arg("path"));

  py::class_<AccessClass>(m, "AccessClass")
      .def_readonly("members", &AccessClass::members)
      .def_readonly("rho", &AccessClass::rho)
      .def_readonly("period", &AccessClass::period)
      .def_readonly("basic", &AccessClass::basic)
      .def_readonly("final", &AccessClass::final);

  py::class_<ClassDecomposition>(m, "ClassDecomposition")
      .def_readonly("classes", &ClassDecomposition::classes)
      .def_readonly("class_of", &ClassDecomposition::class_of)
      .def_readonly("rho", &ClassDecomposition::rho)
      .def("accessible", &ClassDecomposition::accessible)
      .def_property_readonly("height", [](const ClassDecomposition& dec) { return height(dec).height; })
      .def_property_readonly("dominant_chains",
                             [](const ClassDecomposition& dec) { return height(dec).dominant_chains; })
      .def_property_readonly("is_umbrella", &is_umbrella)
      .def_property_readonly("is_augmented_umbrella", &is_augmented_umbrella);

  m.def("analyze", &analyze, py::arg("g"));
  m.def("spectral_radius", py::overload_cast<const WeightedDigraph&>(&pathlim::spectral_radius), py::arg("g"));

  py::class_<ResidualResult>(m, "Residual")
      .def_readonly("height", &ResidualResult::height)
      .def_readonly("theta", &ResidualResult::theta)
      .def_readonly("support", &ResidualResult::support);

  m.def(
      "residual_matrix",
      [](const WeightedDigraph& g, const std::string& method) {
        if (method == "recursive") return residual_matrix(g);
        if (method == "umbrella") return residual_umbrella(g);
        throw precondition_error("unknown method '" + method + "'");
      },
      py::arg("g"), py::arg("method") = "recursive");
  m.def(
      "numeric_residual",
      [](const WeightedDigraph& g, int h) { return oracle::numeric_residual(g, h).extrapolated; }, py::arg("g"),
      py::arg("height"));

  m.def(
      "boltzmann_cylinder",
      [](const WeightedDigraph& g, const std::string& x, double s, const Tokens& u) {
        return boltzmann_cylinder(g, g.index_of(x), s, to_path(g, u));
      },
      py::arg("g"), py::arg("x"), py::arg("s"), py::arg("u"));
  m.def(
      "uniform_cylinder",
      [](const WeightedDigraph& g, const std::string& x, std::size_t k, const Tokens& u) {
        return uniform_cylinder(g, g.index_of(x), k, to_path(g, u));
      },
      py::arg("g"), py::arg("x"), py::arg("k"), py::arg("u"));
  m.def(
      "boltzmann_limit_cylinder",
      [](const WeightedDigraph& g, const std::string& x0, const Tokens& u) {
        return boltzmann_limit_cylinder(g, g.index_of(x0), to_path(g, u));
      },
      py::arg("g"), py::arg("x0"), py::arg("u"));

  m.def(
      "limit_kernel",
      [](const WeightedDigraph& g, const std::string& x0) {
        const auto k = limit_kernel(g, g.index_of(x0));
        py::dict out;
        out["support"] = support_names(g, k.support);
        out["rho"] = k.rho;
        out["gamma"] = k.gamma;
        out["q"] = k.q;
        out["valid"] = validate_cocycle_measure(g, k).valid();
        return out;
      },
      py::arg("g"), py::arg("x0"));

  m.def(
      "uniform_convergence",
      [](const WeightedDigraph& g, const std::string& x0, std::optional<int> max_len) {
        const auto r = uniform_convergence(g, g.index_of(x0), max_len);
        py::dict out;
        out["converges"] = r.converges;
        out["aperiodic"] = r.aperiodic;
        out["d"] = r.d;
        out["support"] = support_names(g, r.support);
        out["betas"] = r.betas;
        out["witness"] = r.witness ? py::cast(to_tokens(g, *r.witness)) : py::none();
        return out;
      },
      py::arg("g"), py::arg("x0"), py::arg("max_len") = py::none());

  m.def(
      "sample",
      [](const WeightedDigraph& g, const std::string& x, const std::string& mode, std::size_t count,
         std::uint64_t seed) {
        const auto paths = run_sampler(g, g.index_of(x), SamplerConfig{seed, parse_sampler_mode(mode), count});
        std::vector<Tokens> out;
        out.reserve(paths.size());
        for (const auto& p : paths) out.push_back(to_tokens(g, p));
        return out;
      },
      py::arg("g"), py::arg("x"), py::arg("mode"), py::arg("count") = 1, py::arg("seed") = 0);

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "pathlim");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
