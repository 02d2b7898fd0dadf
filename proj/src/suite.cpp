#include "specfrob/suite.hpp"

#include <chrono>
#include <cmath>
#include <map>

#include "specfrob/frobenius.hpp"
#include "specfrob/parallel.hpp"
#include "specfrob/specialgeo.hpp"
#include "specfrob/tep.hpp"
#include "specfrob/vhs.hpp"

namespace specfrob::suite {

namespace {

using T = ScalarTraits<Rational>;

Rational frac(long p, long q) { return T::frac(p, q); }

template <class F>
CheckReport per_sample(const std::vector<Sample>& pop, const std::string& prefix, F&& body) {
    std::vector<CheckReport> reps(pop.size());
    parallel_for(pop.size(), [&](std::size_t i) { reps[i] = body(pop[i]); });
    return fold(reps, prefix);
}

Mat<Rational> random_symmetric(std::mt19937_64& rng, int k) {
    std::uniform_int_distribution<int> d(-3, 3);
    Mat<Rational> a(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) a(i, j) = a(j, i) = frac(d(rng), 2);
    return a;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

RJet random_prepotential(std::mt19937_64& rng, int n, int order, double density) {
    RJet j(n, order);
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<int> e(n, 0);
    auto rec = [&](auto&& self, int v, int left) -> void {
        if (v == n) {
            int d = order - left;
            if (d >= 2 && coin(rng) < density) {
                int p = num(rng), q = den(rng);
                if (p != 0) j.add(mono::encode(e), frac(p, q));
            }
            return;
        }
        for (int x = 0; x <= left; ++x) {
            e[v] = x;
            self(self, v + 1, left - x);
        }
        e[v] = 0;
    };
    rec(rec, 0, order);
    return j;
}

std::vector<Sample> population(std::uint64_t seed, int count, int order) {
    std::mt19937_64 rng(seed);
    std::vector<Sample> pop;
    for (int i = 0; i < count; ++i) {
        int n = 1 + i % 3;
        pop.push_back({n, random_prepotential(rng, n, order)});
    }
    return pop;
}

CheckReport fold(const std::vector<CheckReport>& per, const std::string& prefix) {
    std::vector<std::string> order;
    std::map<std::string, Check> acc;
    std::map<std::string, int> failures, seen;
    for (std::size_t s = 0; s < per.size(); ++s)
        for (auto& c : per[s].checks) {
            auto it = acc.find(c.name);
            if (it == acc.end()) {
                order.push_back(c.name);
                Check first = c;
                first.pass = true;
                first.witness.reset();
                first.detail.clear();
                it = acc.emplace(c.name, first).first;
            }
            Check& a = it->second;
            ++seen[c.name];
            a.max_abs_error = std::max(a.max_abs_error, c.max_abs_error);
            if (c.validity_order >= 0)
                a.validity_order = a.validity_order < 0 ? c.validity_order : std::min(a.validity_order, c.validity_order);
            if (!c.pass) {
                if (a.pass) {
                    a.witness = "sample " + std::to_string(s) + (c.witness ? ": " + *c.witness : std::string());
                    a.detail = c.detail;
                }
                a.pass = false;
                ++failures[c.name];
            }
        }
    CheckReport out;
    for (auto& name : order) {
        Check c = acc[name];
        c.name = prefix + name;
        std::string tally = std::to_string(seen[name] - failures[name]) + "/" + std::to_string(seen[name]) + " samples";
        c.detail = c.detail.empty() ? tally : tally + "; first failure: " + c.detail;
        out.add(std::move(c));
    }
    return out;
}

CheckReport frobenius_axioms(const std::vector<Sample>& pop) {
    return per_sample(pop, "frobenius.", [](const Sample& s) {
        auto fs = frobenius::build(s.psi, s.n, s.psi.order());
        CheckReport r = frobenius::verify_axioms(fs);
        r.merge(frobenius::euler_homogeneity(fs));
        return r;
    });
}

CheckReport vhs_suite(const std::vector<Sample>& pop) {
    return per_sample(pop, "vhs.", [](const Sample& s) {
        auto mod = vhs::build_frame(s.psi, s.n, s.psi.order());
        CheckReport r = vhs::verify_vhf(mod);
        r.merge(vhs::period_map(mod).report, "period_map.");
        auto ex = vhs::extract_prepotential(mod.V, s.n);
        r.merge(ex.report, "extraction.");
        bool coords = true;
        for (int i = 0; i < s.n; ++i) coords = coords && compare(ex.t_hat[i], RJet::variable(s.n, s.psi.order(), i)).equal;
        auto d = compare(ex.psi_hat, s.psi);
        r.add("roundtrip_coordinates", coords);
        r.add("roundtrip_prepotential", d.equal, d.max_abs);
        return r;
    });
}

CheckReport tep_suite(const std::vector<Sample>& pop) {
    return per_sample(pop, "tep.", [](const Sample& s) {
        auto mod = vhs::build_frame(s.psi, s.n, s.psi.order());
        CheckReport r = tep::verify_tep(tep::build_tep(mod));
        tep::Perturbation top;
        top.x_top = 1;
        tep::Perturbation shift;
        shift.x_shift.assign(s.n, Rational(0));
        shift.x_shift[0] = 2;
        for (auto& [name, p] : {std::pair{"perturbed_top_rejected", top}, std::pair{"perturbed_shift_rejected", shift}}) {
            auto rep = tep::verify_tep(tep::build_tep(mod, p));
            bool rejected = !rep.all_pass();
            r.add(name, rejected, 0.0, {}, rejected ? "" : "perturbation passed the pairing check");
        }
        return r;
    });
}

CheckReport fmanifold_equality(const std::vector<Sample>& pop) {
    return per_sample(pop, "tep_extract.", [](const Sample& s) {
        auto t = tep::build_tep(vhs::build_frame(s.psi, s.n, s.psi.order()));
        auto f = tep::extract_fmanifold(t);
        CheckReport r = f.report;
        r.merge(tep::compare_with_frobenius(f, frobenius::build(s.psi, s.n, s.psi.order())));
        return r;
    });
}

CheckReport rechart_independence(int order) {
    RJet psi = RJet::monomial(1, order, {3}, frac(1, 6)) + RJet::monomial(1, order, {4}, frac(1, 4));
    auto mod = vhs::build_frame(psi, 1, order);
    std::vector<Mat<Rational>> linear, mixing;
    for (Rational c : {frac(1, 1), frac(-2, 3)}) {
        Mat<Rational> M = Mat<Rational>::identity(4);
        M(0, 1) = c;
        M(2, 3) = c;
        linear.push_back(M);
    }
    Mat<Rational> d = Mat<Rational>::identity(4);
    d(1, 1) = 2;
    d(2, 2) = frac(1, 2);
    linear.push_back(d);
    Mat<Rational> a = Mat<Rational>::identity(4);
    a(1, 2) = 1;
    Mat<Rational> b = Mat<Rational>::identity(4);
    b(0, 2) = 1;
    b(1, 3) = -1;
    mixing = {a, b};

    CheckReport r;
    int k = 0;
    for (auto& M : linear) {
        auto rc = tep::rechart(mod, M);
        std::string tag = "rechart.linear_" + std::to_string(++k) + ".";
        for (auto c : rc.report.checks)
            if (c.name != "metric_pullback") {
                c.name = tag + c.name;
                r.add(c);
            }
        r.add(tag + "constants_equal", rc.constants_equal);
    }
    k = 0;
    for (auto& M : mixing) {
        auto rc = tep::rechart(mod, M);
        std::string tag = "rechart.mixing_" + std::to_string(++k) + ".";
        r.add(tag + "constants_equal", rc.constants_equal);
        r.add(tag + "metrics_differ", !rc.metrics_equal);
    }
    return r;
}

CheckReport specialgeo_suite(const std::vector<Sample>& pop, std::uint64_t seed) {
    namespace sg = specialgeo;
    std::vector<std::uint64_t> seeds;
    std::mt19937_64 master(seed ^ 0x5eed);
    for (std::size_t i = 0; i < pop.size(); ++i) seeds.push_back(master());
    std::vector<CheckReport> reps(pop.size());
    parallel_for(pop.size(), [&](std::size_t i) {
        const Sample& s = pop[i];
        std::mt19937_64 rng(seeds[i]);
        auto hp = sg::homogenize(s.psi);
        CheckReport r = sg::homogeneity_check(hp);
        r.merge(sg::adjoint_coordinates(hp).report);
        r.merge(sg::cubic_identity_check(hp));
        auto res = sg::restrict(hp);
        r.merge(res.report, "restriction.");
        r.add("restriction_roundtrip", compare(res.psi, s.psi).equal);

        const int k = s.n + 1;
        Mat<Rational> A = random_symmetric(rng, k), B = random_symmetric(rng, k), AB(k, k);
        for (int x = 0; x < k; ++x)
            for (int y = 0; y < k; ++y) AB(x, y) = A(x, y) + B(x, y);
        auto two = sg::quadratic_action(sg::quadratic_action(hp, A), B);
        auto one = sg::quadratic_action(hp, AB);
        bool cubics = true;
        for (int x = 0; x < k; ++x)
            for (int y = x; y < k; ++y)
                for (int z = y; z < k; ++z) cubics = cubics && (sg::cubic(one, x, y, z) - sg::cubic(hp, x, y, z)).is_zero();
        r.add("torsor_composition", (two.F - one.F).is_zero());
        r.add("torsor_keeps_cubics", cubics);
        reps[i] = std::move(r);
    });
    CheckReport out = fold(reps, "specialgeo.");

    // beta is forced to 1 exactly when some third derivative survives
    auto check_forcing = [](const RJet& psi, int n, bool expect) {
        auto fs = frobenius::build(psi, n, psi.order());
        frobenius::AutomorphismCandidate<Rational> id{Rational(1),
                                                      std::vector<std::vector<RJet>>(n, std::vector<RJet>(n, RJet(n, psi.order())))};
        auto res = frobenius::automorphism_check(fs, id);
        return res.is_automorphism && res.consistent && res.beta_forced == expect &&
               (!expect || (res.forced_beta && *res.forced_beta == 1));
    };
    out.add("specialgeo.beta_forced_for_cubic", check_forcing(RJet::monomial(1, 5, {3}, frac(1, 6)), 1, true));
    out.add("specialgeo.beta_free_for_zero", check_forcing(RJet(2, 5), 2, false));
    return out;
}

CheckReport combinatorics_suite(const std::vector<int>& genera) {
    std::vector<CheckReport> reps;
    for (auto& label : hitchin::root_system_labels())
        for (int g : genera) reps.push_back(hitchin::combinatorics(hitchin::root_system(label), {g}).report);
    return fold(reps, "combinatorics.");
}

EllipticPeriods elliptic_periods(double e1, double e2, double e3) {
    auto agm = [](double a, double b) {
        for (int i = 0; i < 40 && a != b; ++i) {
            double m = 0.5 * (a + b);
            b = std::sqrt(a * b);
            a = m;
        }
        return a;
    };
    return {M_PI / (2 * agm(std::sqrt(e1 - e3), std::sqrt(e1 - e2))),
            M_PI / (2 * agm(std::sqrt(e1 - e3), std::sqrt(e2 - e3)))};
}

CheckReport elliptic_check(const hitchin::Tolerances& tol) {
    using namespace hitchin;
    const double e1 = 1.2, e2 = 0.3, e3 = -1.5;
    const double g2 = -4 * (e1 * e2 + e1 * e3 + e2 * e3), g3 = 4 * e1 * e2 * e3;
    Family f;
    f.q0 = {-g3, -g2, 0, 4};
    f.phis = {{1}};
    f.u_star = {0.0};
    f.tol = tol;
    auto ref = elliptic_periods(e1, e2, e3);
    auto bp = branch_points(f, f.u_star);
    auto p = cycle_periods(f.q(f.u_star), bp, holomorphic(0), f.quad);
    double da = std::abs(std::abs(p.a[0]) - 2 * ref.omega1) / (2 * ref.omega1);
    double db = std::abs(std::abs(p.b[0]) - 2 * ref.omega3) / (2 * ref.omega3);
    CheckReport r;
    r.add("elliptic_a_period", da <= tol.agm, da, {}, "against the AGM half-period");
    r.add("elliptic_b_period", db <= tol.agm, db);
    return r;
}

CheckReport numeric_ladder(const hitchin::Family& f, std::uint64_t seed) {
    using namespace hitchin;
    CheckReport r = elliptic_check(f.tol);
    const CVec& us = f.u_star;
    auto cy = cy_check(f, us, {std::polar(1.0, 0.4), std::polar(1.0, -2.0), cd(0.5), cd(2.0)});
    r.merge(cy.report);
    r.merge(period_matrix(f, us).report);
    r.merge(cubic_direct(f, us).report);
    if (weighted_homogeneous(f)) r.merge(special_chart(f, us).report, "chart.");
    const double rad = 0.1 * std::max(1.0, std::abs(us[0]));
    std::vector<CVec> bases = {us};
    if (f.dim() == 2) {
        bases.push_back({us[0] + rad, us[1] + cd(0, 0.5 * rad)});
        bases.push_back({us[0] + cd(-0.5 * rad, 0.5 * rad), us[1] + rad});
    }
    r.merge(fit_kappa(f, bases, 10, seed).report, "kappa.");
    if (f.genus() == 2 && f.dim() == 2 && weighted_homogeneous(f)) {
        auto pl = pipeline(f);
        r.merge(pl.report, "pipeline.");
    }
    return r;
}

SuiteRun run(const std::string& name, std::uint64_t seed, int order, int count) {
    if (name != "exact" && name != "numeric" && name != "all") throw InputError("suite must be exact, numeric or all");
    SuiteRun out;
    auto timed = [&](const std::string& label, auto&& body) {
        auto t0 = std::chrono::steady_clock::now();
        out.report.merge(body());
        out.timings[label] = elapsed(t0);
    };
    if (name != "numeric") {
        auto pop = population(seed, count, order);
        timed("frobenius", [&] { return frobenius_axioms(pop); });
        timed("vhs", [&] { return vhs_suite(pop); });
        timed("tep", [&] { return tep_suite(pop); });
        timed("tep_extract", [&] { return fmanifold_equality(pop); });
        timed("rechart", [&] { return rechart_independence(4); });
        timed("specialgeo", [&] { return specialgeo_suite(pop, seed); });
        timed("combinatorics", [&] { return combinatorics_suite(); });
    }
    if (name != "exact") timed("numeric", [&] { return numeric_ladder(hitchin::shipped_family(), seed); });
    return out;
}

}  // namespace specfrob::suite
