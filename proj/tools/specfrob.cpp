// specfrob: command-line driver. Exit 0 when every check passes, 1 on a failed
// check, 2 on malformed input.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "specfrob/frobenius.hpp"
#include "specfrob/hitchin.hpp"
#include "specfrob/json_io.hpp"
#include "specfrob/specialgeo.hpp"
#include "specfrob/suite.hpp"
#include "specfrob/tep.hpp"
#include "specfrob/vhs.hpp"

using namespace specfrob;
using json = nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Options {
    std::string config, out, matrix, group = "A1";
    std::uint64_t seed = 0;
    int order = -1, genus = 2, fit_degree = -1;
};

struct Task {
    std::string name;
    json config = json::object();
    CheckReport report;
    json results = json::object();
    json timings = json::object();
    std::vector<std::pair<std::string, std::string>> files;  // extra outputs: name, contents
};

json read_json(const std::string& path) {
    if (path.empty()) throw InputError("this task needs --config <file>");
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

struct PsiInput {
    int n = 0, order = 0;
    Jet<Rational> psi;
};

PsiInput read_psi(const json& j, int order_override) {
    if (!j.is_object() || !j.contains("n") || !j.contains("psi")) throw InputError("expected {n, order, psi}");
    PsiInput p;
    p.n = j.at("n").get<int>();
    p.order = order_override > 0 ? order_override : j.value("order", 5);
    if (p.n < 1 || p.n > kMaxVars) throw InputError("unsupported n");
    if (p.order < 3 || p.order > kMaxOrder) throw InputError("order must be between 3 and " + std::to_string(kMaxOrder));
    p.psi = jet_from_json<Rational>(j.at("psi"), p.n, p.order);
    return p;
}

template <class F>
void timed(Task& t, const std::string& label, F&& body) {
    auto t0 = std::chrono::steady_clock::now();
    body();
    t.timings[label] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void task_frobenius(Task& t, const Options& o) {
    auto in = read_psi(t.config = read_json(o.config), o.order);
    timed(t, "frobenius", [&] {
        auto fs = frobenius::build(in.psi, in.n, in.order);
        t.report.merge(frobenius::verify_axioms(fs));
        t.report.merge(frobenius::euler_homogeneity(fs));
        t.results["coordinates"] = frobenius::coordinate_names(in.n);
        t.results["phi"] = jet_to_json(fs.phi);
    });
}

void task_vhs(Task& t, const Options& o) {
    auto in = read_psi(t.config = read_json(o.config), o.order);
    timed(t, "vhs", [&] {
        auto mod = vhs::build_frame(in.psi, in.n, in.order);
        t.report.merge(vhs::verify_vhf(mod));
        t.report.merge(vhs::period_map(mod).report, "period_map.");
        auto ex = vhs::extract_prepotential(mod.V, in.n);
        t.report.merge(ex.report, "extraction.");
        auto d = compare(ex.psi_hat, in.psi);
        t.report.add("roundtrip_prepotential", d.equal, d.max_abs);
        t.results["model"] = vhs::model_to_json(mod);
    });
}

void task_tep(Task& t, const Options& o, const std::string& mode) {
    auto in = read_psi(t.config = read_json(o.config), o.order);
    auto mod = vhs::build_frame(in.psi, in.n, in.order);
    if (mode == "verify") {
        timed(t, "tep", [&] { t.report.merge(tep::verify_tep(tep::build_tep(mod))); });
    } else if (mode == "extract") {
        timed(t, "tep", [&] {
            auto f = tep::extract_fmanifold(tep::build_tep(mod));
            t.report.merge(f.report);
            t.report.merge(tep::compare_with_frobenius(f, frobenius::build(in.psi, in.n, in.order)));
        });
    } else {
        json mj = read_json(o.matrix);
        t.config["matrix"] = mj;
        Mat<Rational> M = rational_matrix_from_json(mj);
        timed(t, "rechart", [&] {
            auto r = tep::rechart(mod, M);
            // the multiplication must survive every admissible frame change; the metric need not,
            // so its comparison goes to the results instead of the checks
            for (auto& c : r.report.checks)
                if (c.name == "metric_pullback")
                    t.results["metric_pullback"] = to_json(c);
                else
                    t.report.add(c);
            t.report.add("structure_constants_identical", r.constants_equal);
            t.results["metrics_equal"] = r.metrics_equal;
            t.results["psi_tilde"] = jet_to_json(r.psi_tilde);
        });
    }
}

void task_sg(Task& t, const Options& o) {
    t.config = read_json(o.config);
    json cfg = t.config;
    if (o.order > 0) cfg["order"] = o.order;
    if (!cfg.contains("order")) cfg["order"] = 5;
    auto hp = specialgeo::from_json(cfg);
    timed(t, "sg", [&] {
        t.report.merge(specialgeo::homogeneity_check(hp));
        t.report.merge(specialgeo::adjoint_coordinates(hp).report);
        t.report.merge(specialgeo::cubic_identity_check(hp));
        auto r = specialgeo::restrict(hp, false);
        t.report.merge(r.report, "restriction.");
        t.results["restricted"] = {{"n", hp.n}, {"order", r.psi.order()}, {"psi", jet_to_json(r.psi)}};
    });
}

hitchin::Family read_family(Task& t, const Options& o) {
    t.config = read_json(o.config);
    auto f = hitchin::family_from_json(t.config);
    if (o.fit_degree > 0) f.grid.fit_degree = o.fit_degree;
    f.validate();
    return f;
}

void task_hitchin(Task& t, const Options& o, const std::string& mode) {
    using namespace hitchin;
    if (mode == "combinatorics") {
        t.config = {{"group", o.group}, {"genus", o.genus}};
        auto c = combinatorics(root_system(o.group), {o.genus});
        t.report.merge(c.report);
        t.results = to_json(c);
        return;
    }
    Family f = read_family(t, o);
    if (mode == "periods") {
        timed(t, "periods", [&] {
            auto pd = periods(f, f.u_star);
            t.results["periods"] = to_json(pd);
            t.report.add("quadrature", pd.quad_error <= f.quad.rel_tol, pd.quad_error);
            auto cy = cy_check(f, f.u_star, {std::polar(1.0, 0.4), std::polar(1.0, -2.0), cd(0.5), cd(2.0)});
            t.report.merge(cy.report);
            if (f.genus() == f.dim()) {
                auto tr = period_matrix(pd, f.tol);
                t.results["tau"] = cmat_to_json(tr.tau);
                t.report.merge(tr.report);
                if (weighted_homogeneous(f)) {
                    auto ch = special_chart(f, f.u_star);
                    t.report.merge(ch.report, "chart.");
                    t.results["chart"] = {{"z1", cvec_to_json({ch.z1})[0]}, {"t", cvec_to_json(ch.t)},
                                          {"psi", cvec_to_json({ch.psi})[0]}};
                } else {
                    t.results["chart"] = "skipped: the family is not weighted homogeneous";
                }
            }
        });
    } else if (mode == "balduzzi") {
        timed(t, "balduzzi", [&] {
            auto direct = cubic_direct(f, f.u_star);
            auto bald = cubic_balduzzi(f, f.u_star);
            t.report.merge(direct.report);
            auto kf = fit_kappa(f, {f.u_star}, 10, o.seed);
            t.report.merge(kf.report, "kappa.");
            t.results["cubic_direct"] = cvec_to_json(direct.c_u.v);
            t.results["cubic_balduzzi"] = cvec_to_json(bald.v);
            t.results["kappa"] = cvec_to_json({kf.kappa})[0];
        });
    } else {
        auto res = pipeline(f);
        t.timings["pipeline"] = res.seconds;
        t.report.merge(res.report);
        t.results["t_star"] = cvec_to_json({res.t_star})[0];
        t.results["psi_star"] = cvec_to_json({res.psi_star})[0];
        t.results["psi_fit"] = jet_to_json(res.psi_fit);
        t.results["fit_condition"] = res.fit_condition;
        t.results["fit_residual"] = res.fit_residual;
        t.results["frobenius_residual"] = res.frobenius_residual;
        t.results["kappa"] = cvec_to_json({res.kappa})[0];
        t.results["psi3"] = {{"fit", cvec_to_json({res.psi3_fit})[0]},
                             {"direct", cvec_to_json({res.psi3_direct})[0]},
                             {"balduzzi", cvec_to_json({res.psi3_balduzzi})[0]}};
        t.files.push_back({"grid.csv", grid_csv(res.grid)});
    }
}

void task_suite(Task& t, const Options& o, const std::string& name) {
    t.config = {{"suite", name}, {"seed", o.seed}, {"order", o.order > 0 ? o.order : 5}};
    auto r = suite::run(name, o.seed, o.order > 0 ? o.order : 5);
    t.report = r.report;
    t.timings = r.timings;
}

json report_json(const Task& t, bool pass) {
    return {{"tool", "specfrob"}, {"version", kVersion},     {"task", t.name},
            {"config", t.config}, {"pass", pass},            {"checks", to_json(t.report)},
            {"results", t.results}, {"timings", t.timings}};
}

std::string file_stem(const std::string& task) {
    std::string s = task;
    for (auto& c : s)
        if (c == ' ') c = '_';
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frobenius manifolds, TEP-structures and special geometry from prepotentials"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--config", o.config, "input JSON");
    app.add_option("--out", o.out, "directory for the report and grids");
    app.add_option("--seed", o.seed, "seed for randomized suites");
    app.add_option("--order", o.order, "jet order override");

    auto* vhs_cmd = app.add_subcommand("vhs", "frame, VHS checks and extraction roundtrip for {n, order, psi}");
    auto* frob_cmd = app.add_subcommand("frobenius", "Frobenius axioms for {n, order, psi}");
    auto* tep_cmd = app.add_subcommand("tep", "TEP-structure tasks");
    tep_cmd->require_subcommand(1);
    auto* tep_verify = tep_cmd->add_subcommand("verify", "TEP checks");
    auto* tep_extract = tep_cmd->add_subcommand("extract", "F-manifold extraction against the Frobenius structure");
    auto* tep_rechart = tep_cmd->add_subcommand("rechart", "change of symplectic frame");
    tep_rechart->add_option("--matrix", o.matrix, "JSON rational matrix")->required();
    auto* sg_cmd = app.add_subcommand("sg", "special geometry for {n, order, psi} or a graded F");
    auto* hit = app.add_subcommand("hitchin", "Hitchin combinatorics and period numerics");
    hit->require_subcommand(1);
    auto* h_comb = hit->add_subcommand("combinatorics", "cameral cover and base dimensions");
    h_comb->add_option("--group", o.group, "root system label");
    h_comb->add_option("--genus", o.genus, "genus of the base curve");
    auto* h_per = hit->add_subcommand("periods", "periods, Gauss-Manin and Euler checks, tau");
    auto* h_bal = hit->add_subcommand("balduzzi", "residue cubic against the finite-difference cubic");
    auto* h_pipe = hit->add_subcommand("pipeline", "special chart, fitted prepotential, Frobenius structure");
    for (auto* s : {h_per, h_bal, h_pipe}) s->add_option("--family", o.config, "family JSON");
    h_pipe->add_option("--fit-degree", o.fit_degree, "degree of the fitted prepotential");
    auto* suite_cmd = app.add_subcommand("suite", "property suites");
    std::string suite_name = "all";
    suite_cmd->add_option("name", suite_name, "exact, numeric or all")->check(CLI::IsMember({"exact", "numeric", "all"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    Task t;
    int rc = 0;
    try {
        if (vhs_cmd->parsed()) {
            t.name = "vhs";
            task_vhs(t, o);
        } else if (frob_cmd->parsed()) {
            t.name = "frobenius";
            task_frobenius(t, o);
        } else if (tep_cmd->parsed()) {
            std::string mode = tep_verify->parsed() ? "verify" : tep_extract->parsed() ? "extract" : "rechart";
            t.name = "tep " + mode;
            task_tep(t, o, mode);
        } else if (sg_cmd->parsed()) {
            t.name = "sg";
            task_sg(t, o);
        } else if (hit->parsed()) {
            std::string mode = h_comb->parsed()  ? "combinatorics"
                               : h_per->parsed() ? "periods"
                               : h_bal->parsed() ? "balduzzi"
                                                 : "pipeline";
            t.name = "hitchin " + mode;
            task_hitchin(t, o, mode);
        } else {
            t.name = "suite " + suite_name;
            task_suite(t, o, suite_name);
        }
        rc = t.report.all_pass() ? 0 : 1;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        // numerical breakdowns (discriminant, quadrature, degenerate chart) are reported as failed checks
        t.report.add("error", false, 0.0, {}, e.what());
        rc = 1;
    }

    json rep = report_json(t, rc == 0);
    if (!o.out.empty()) {
        std::filesystem::create_directories(o.out);
        std::ofstream(std::filesystem::path(o.out) / (file_stem(t.name) + "_report.json")) << rep.dump(2) << "\n";
        for (auto& [name, body] : t.files) std::ofstream(std::filesystem::path(o.out) / name) << body;
    }
    std::cout << rep.dump(2) << "\n";
    return rc;
}
