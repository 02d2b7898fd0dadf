// Thin JSON-in, JSON-out bindings; the Python package decodes the strings.

#include <pybind11/pybind11.h>

#include <json.hpp>

#include "specfrob/frobenius.hpp"
#include "specfrob/hitchin.hpp"
#include "specfrob/json_io.hpp"
#include "specfrob/specialgeo.hpp"
#include "specfrob/suite.hpp"

namespace py = pybind11;
using json = nlohmann::json;
using namespace specfrob;

namespace {

json report(const CheckReport& r) { return {{"pass", r.all_pass()}, {"checks", to_json(r)}}; }

std::string frobenius_check(const std::string& input) {
    json j = json::parse(input);
    const int n = j.at("n").get<int>(), order = j.value("order", 5);
    auto psi = jet_from_json<Rational>(j.at("psi"), n, order);
    auto fs = frobenius::build(psi, n, order);
    return report(frobenius::verify_axioms(fs)).dump();
}

std::string sg_restrict(const std::string& input) {
    auto hp = specialgeo::from_json(json::parse(input));
    auto r = specialgeo::restrict(hp, false);
    json out = report(r.report);
    out["psi"] = jet_to_json(r.psi);
    return out.dump();
}

std::string combinatorics(const std::string& group, int genus) {
    return hitchin::to_json(hitchin::combinatorics(hitchin::root_system(group), {genus})).dump();
}

hitchin::Family family(const std::string& input) {
    return input.empty() ? hitchin::shipped_family() : hitchin::family_from_json(json::parse(input));
}

std::string periods(const std::string& input) {
    auto f = family(input);
    return hitchin::to_json(hitchin::periods(f, f.u_star)).dump();
}

std::string pipeline(const std::string& input) {
    auto res = hitchin::pipeline(family(input));
    json out = report(res.report);
    out["kappa"] = hitchin::cvec_to_json({res.kappa})[0];
    out["frobenius_residual"] = res.frobenius_residual;
    out["seconds"] = res.seconds;
    out["grid_csv"] = hitchin::grid_csv(res.grid);
    return out.dump();
}

std::string run_suite(const std::string& name, std::uint64_t seed) {
    auto r = suite::run(name, seed);
    json out = report(r.report);
    out["timings"] = r.timings;
    return out.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    m.def("frobenius_check", &frobenius_check);
    m.def("sg_restrict", &sg_restrict);
    m.def("combinatorics", &combinatorics);
    m.def("shipped_family", [] { return hitchin::family_to_json(hitchin::shipped_family()).dump(); });
    m.def("periods", &periods, py::arg("family") = "");
    m.def("pipeline", &pipeline, py::arg("family") = "");
    m.def("suite", &run_suite, py::arg("name"), py::arg("seed") = 0);
}
