// Python access to configs, catalog entries, frames and check runs. Reports
// cross the boundary as JSON text; the package wrapper decodes them.

#include "nullgeo/catalog.hpp"
#include "nullgeo/run.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace nullgeo;

namespace {

RunConfig resolve(const std::string& source, bool strict) {
    const std::string prefix = "catalog:";
    if (source.rfind(prefix, 0) == 0) return entry(source.substr(prefix.size()));
    return parse_config(source, strict);
}

}  // namespace

PYBIND11_MODULE(_nullgeo, m) {
    m.doc() = "Screen geometry of null hypersurfaces";

    // Translators run newest first, so the base class goes in first.
    py::register_exception<Error>(m, "NullgeoError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ExpressionError", PyExc_ValueError);

    m.def("catalog_names", &catalog_names);
    m.def("catalog_dump", [](const std::string& name) { return dump_config(entry(name)); });
    m.def("canonical", [](const std::string& text, bool strict) { return dump_config(resolve(text, strict)); },
          py::arg("config"), py::arg("strict") = true, "Parse and re-emit a config in canonical form.");
    m.def("config_hash", [](const std::string& text, bool strict) { return config_hash(resolve(text, strict)); },
          py::arg("config"), py::arg("strict") = true);
    m.def("transnormal_residual",
          [](const std::string& warp, int per_axis) { return transnormal_residual(transnormal_defaults(warp), per_axis); },
          py::arg("warp"), py::arg("per_axis") = 6);

    py::class_<Session>(m, "Session")
        .def(py::init([](const std::string& source, bool strict) { return Session(resolve(source, strict)); }),
             py::arg("config"), py::arg("strict") = true,
             "Build from config JSON text or 'catalog:NAME'.")
        .def("points", &Session::points)
        .def("point", [](const Session& s, const Vec& u) { return s.immersion()->point(u); })
        .def(
            "frame",
            [](const Session& s, const std::string& screen, const Vec& u) {
                const NullFrame f = s.screen(screen).at(u);
                py::dict d;
                d["x"] = f.x;
                d["xi"] = f.xi;
                d["N"] = f.nt;
                d["screen"] = f.screen;
                d["metric"] = f.g;
                return d;
            },
            py::arg("screen"), py::arg("u"))
        .def(
            "run",
            [](const Session& s, const std::vector<std::string>& only) { return report_json(run(s, only)); },
            py::arg("checks") = std::vector<std::string>{})
        .def(
            "check",
            [](const Session& s, const std::string& check, const std::string& screen, const std::string& field) {
                CheckRequest q;
                q.check = check;
                q.screen = screen;
                q.field = field;
                RunResult r;
                r.name = s.config().name;
                r.config_hash = config_hash(s.config());
                r.seed = s.config().seed;
                r.outcomes.push_back(run_check(s, q));
                return report_json(r);
            },
            py::arg("check"), py::arg("screen") = "", py::arg("field") = "")
        .def(
            "export_csv",
            [](const Session& s, const std::string& path, const std::string& screen,
               const std::vector<std::string>& columns, const std::vector<std::string>& checks) {
                export_csv(s, run(s, checks), screen, columns, path);
            },
            py::arg("path"), py::arg("screen") = "", py::arg("columns") = std::vector<std::string>{},
            py::arg("checks") = std::vector<std::string>{});
}
