#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "oracles.hpp"
#include "specfrob/hitchin.hpp"

using namespace specfrob;
using namespace specfrob::hitchin;

namespace {

struct Elliptic {
    double e1, e2, e3;  // e1 > e2 > e3
    double omega1;      // real half-period
    double omega3;      // imaginary half-period divided by i
};

Elliptic elliptic(double g2, double g3) {
    auto r = oracle::weierstrass_roots(g2, g3);
    return {r[0], r[1], r[2], oracle::weierstrass_half_period(r[0], r[1], r[2]),
            oracle::weierstrass_imag_half_period(r[0], r[1], r[2])};
}

// Roots 1.2, 0.3, -1.5; u shifts the constant term, i.e. g3 -> g3 - u.
constexpr double kG2 = -4 * (1.2 * 0.3 - 1.2 * 1.5 - 0.3 * 1.5), kG3 = 4 * 1.2 * 0.3 * -1.5;

Family elliptic_family() {
    Family f;
    f.q0 = {-kG3, -kG2, 0, 4};
    f.phis = {{1}};
    f.u_star = {0.0};
    return f;
}

double rel(cd a, cd b) { return std::abs(a - b) / std::abs(b); }

CMat holomorphic_periods(const CVec& q, const BranchPoints& bp, bool b_cycles) {
    const int g = (int(bp.e.size()) - 1) / 2;
    CMat m(g, g);
    for (int k = 0; k < g; ++k) {
        auto p = cycle_periods(q, bp, holomorphic(k), QuadratureConfig{});
        for (int i = 0; i < g; ++i) m(i, k) = b_cycles ? p.b[i] : p.a[i];
    }
    return m;
}

CVec poly_from_roots(const CVec& roots) {
    CVec p = {1.0};
    for (auto r : roots) {
        CVec n(p.size() + 1, 0.0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            n[i + 1] += p[i];
            n[i] -= r * p[i];
        }
        p = n;
    }
    return p;
}

}  // namespace

TEST_CASE("cameral combinatorics") {
    auto a1 = combinatorics(root_system("A1"), {2});
    CHECK(a1.dim_B == 3);
    CHECK(a1.genus_cameral == 5);
    CHECK(a1.deg_D_int == 4);
    CHECK(a1.deg_D_br == 4);
    CHECK(a1.report.all_pass());

    auto a2 = combinatorics(root_system("A2"), {2});
    CHECK(a2.dim_B == 8);
    CHECK(a2.genus_cameral == 13);
    auto g2 = combinatorics(root_system("G2"), {2});
    CHECK(g2.dim_B == 14);
    CHECK(g2.genus_cameral == 25);

    for (auto& label : root_system_labels())
        for (int g : {2, 3, 4}) {
            auto rs = root_system(label);
            auto c = combinatorics(rs, {g});
            INFO(label << " g=" << g);
            CHECK(c.report.all_pass());
            // independent recount: h0(K^d) = (2d - 1)(g - 1), degrees sum to |roots|/2 + rank
            long h0 = 0;
            for (int d : rs.degrees) h0 += (2 * d - 1) * (g - 1);
            CHECK(c.dim_B == h0);
            CHECK(c.dim_B == long(rs.dim_group()) * (g - 1));
            CHECK(c.deg_D_int + c.deg_D_br == 2 * c.genus_cameral - 2);
            CHECK(c.deg_D_br == long(rs.roots) * (2 * g - 2));
        }
    CHECK_THROWS_AS(combinatorics(root_system("A1"), {1}), InputError);
    CHECK_THROWS_AS(root_system("E9"), InputError);
}

TEST_CASE("branch points") {
    auto bp = branch_points({-1, 0, 0, 0, 0, 0, 1}, 1e-6);
    REQUIRE(bp.e.size() == 6);
    for (int k = 0; k < 6; ++k) {
        cd root = std::polar(1.0, M_PI * k / 3);
        double best = 1e9;
        for (auto& e : bp.e) best = std::min(best, std::abs(e - root));
        CHECK(best < 1e-14);
    }
    for (std::size_t i = 1; i < bp.e.size(); ++i)
        CHECK((bp.e[i - 1].real() < bp.e[i].real() - 1e-9 ||
               (std::abs(bp.e[i - 1].real() - bp.e[i].real()) <= 1e-9 && bp.e[i - 1].imag() < bp.e[i].imag())));
    CHECK(bp.min_separation == doctest::Approx(1.0).epsilon(1e-12));

    // (z^2 - 1)^2 (z^2 - 4) = z^6 - 6z^4 + 9z^2 - 4
    CHECK_THROWS_AS(branch_points({-4, 0, 9, 0, -6, 0, 1}, 1e-6), DiscriminantError);

    auto f = shipped_family();
    auto at = branch_points(f, {-1.0, 0.0});
    for (int k = 0; k < 6; ++k) CHECK(std::abs(at.e[k] - bp.e[k]) < 1e-14);

    // tracking a small move keeps every root next to its predecessor
    auto moved = track(f, at, {cd(-1.0, 1e-3), 0.0});
    for (int k = 0; k < 6; ++k) CHECK(std::abs(moved.e[k] - at.e[k]) < 1e-3);
}

TEST_CASE("elliptic periods against the AGM") {
    auto ref = elliptic(kG2, kG3);
    CHECK(ref.e1 == doctest::Approx(1.2).epsilon(1e-14));
    CHECK(ref.e3 == doctest::Approx(-1.5).epsilon(1e-14));
    auto f = elliptic_family();
    auto bp = branch_points(f, f.u_star);
    auto p = cycle_periods(f.q(f.u_star), bp, holomorphic(0), f.quad);
    CHECK(rel(std::abs(p.a[0]), 2 * ref.omega1) <= f.tol.agm);
    CHECK(rel(std::abs(p.b[0]), 2 * ref.omega3) <= f.tol.agm);

    // real branch points: tau is purely imaginary
    auto tr = period_matrix(f, f.u_star);
    cd tau = tr.tau(0, 0);
    CHECK(std::abs(tau.real()) <= 1e-12 * std::abs(tau));
    CHECK(rel(cd(std::abs(tau)), ref.omega3 / ref.omega1) <= f.tol.agm);
    CHECK(tr.report.all_pass());

    // d tau / dz, z = a-period of lambda, against the AGM tau(u) by finite differences
    auto pd = periods(f, f.u_star);
    const double s_a = pd.dz(0, 0).real() / ref.omega1;
    const double s_t = tau.imag() / (ref.omega3 / ref.omega1);
    CHECK(std::abs(std::abs(s_a) - 1) < 1e-8);
    CHECK(std::abs(std::abs(s_t) - 1) < 1e-8);
    auto tau_ref = [&](double u) {
        auto e = elliptic(kG2, kG3 - u);
        return e.omega3 / e.omega1;
    };
    const double h = 1e-3;
    double dtau_du = (-tau_ref(2 * h) + 8 * tau_ref(h) - 8 * tau_ref(-h) + tau_ref(-2 * h)) / (12 * h);
    cd want = cd(0, std::copysign(1.0, s_t)) * dtau_du / (std::copysign(1.0, s_a) * ref.omega1);
    auto cub = cubic_direct(f, f.u_star);
    CHECK(rel(cub.c_z(0, 0, 0), want) <= 1e-5);
}

TEST_CASE("segment integrals: orientation, zero integrand, determinism") {
    auto f = shipped_family();
    const CVec q = f.q(f.u_star);
    auto bp = branch_points(f, f.u_star);
    for (auto w : {sw_differential(), holomorphic(1)})
        for (auto [a, b] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{2, 3}, std::pair{0, 3}}) {
            auto fwd = segment_integral(q, bp, w, a, b, 96);
            auto back = segment_integral(q, bp, w, b, a, 96);
            CHECK(std::abs(fwd.value + back.value) <= 1e-12 * std::abs(fwd.value));
        }
    Differential zero{{0.0}, -1};
    auto p0 = cycle_periods(q, bp, zero, f.quad);
    for (auto& x : p0.a) CHECK(x == cd(0));
    for (auto& x : p0.b) CHECK(x == cd(0));

    auto p1 = periods(f, f.u_star);
    auto p2 = periods(f, f.u_star);
    for (int i = 0; i < 2; ++i) {
        CHECK(p1.z[i] == p2.z[i]);
        CHECK(p1.w[i] == p2.w[i]);
    }
    CHECK(p1.quad_error <= f.quad.rel_tol);

    Family coarse = f;
    coarse.quad.nodes = 8;
    CHECK_THROWS_AS(periods(coarse, f.u_star), QuadratureError);
}

TEST_CASE("thread count does not change the numbers") {
    auto f = shipped_family();
    setenv("SPECFROB_THREADS", "1", 1);
    auto one = cy_check(f, f.u_star, {cd(0.5), std::polar(1.0, 0.7)});
    auto c1 = cubic_direct(f, f.u_star);
    setenv("SPECFROB_THREADS", "3", 1);
    auto three = cy_check(f, f.u_star, {cd(0.5), std::polar(1.0, 0.7)});
    auto c3 = cubic_direct(f, f.u_star);
    unsetenv("SPECFROB_THREADS");
    CHECK(one.fd_deviation == three.fd_deviation);
    CHECK(one.euler_deviation == three.euler_deviation);
    for (std::size_t i = 0; i < c1.c_z.v.size(); ++i) CHECK(c1.c_z.v[i] == c3.c_z.v[i]);
}

TEST_CASE("holomorphic periods satisfy the bilinear relations") {
    auto f = shipped_family();
    std::vector<CVec> curves = {f.q(f.u_star),
                                poly_from_roots({cd(-2, 0.3), cd(-1.1, -0.4), cd(0, 0.2), cd(0.9, -0.5), cd(2.1, 0.1),
                                                 cd(3, -0.2), cd(4.2, 0.4)}),
                                poly_from_roots({cd(-2, 0.3), cd(-1.1, -0.4), cd(0, 0.2), cd(0.9, -0.5), cd(2.1, 0.1),
                                                 cd(3, -0.2), cd(4.2, 0.4), cd(5, 0)})};
    for (auto& q : curves) {
        auto bp = branch_points(q, 1e-6);
        check_basis_geometry(bp);
        CMat A = holomorphic_periods(q, bp, false), B = holomorphic_periods(q, bp, true);
        CMat omega = B * A.inverse();
        INFO("degree " << q.size() - 1);
        double scale = omega.cwiseAbs().maxCoeff();
        CHECK((omega - omega.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale);
        Eigen::MatrixXd im = 0.5 * (omega.imag() + omega.imag().transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(im);
        auto ev = es.eigenvalues();
        CHECK(((ev.array() > 0).all() || (ev.array() < 0).all()));
    }
}

TEST_CASE("Gauss-Manin derivative and Euler scaling") {
    auto f = shipped_family();
    auto res = cy_check(f, f.u_star, {std::polar(1.0, 0.4), std::polar(1.0, -2.0), cd(0.5), cd(2.0)});
    CHECK(res.euler_applicable);
    CHECK(res.fd_deviation <= 1e-6);
    CHECK(res.euler_deviation <= 1e-8);
    CHECK(res.report.all_pass());

    // the derivative differentials of the linear family are the holomorphic basis, halved
    auto pd = periods(f, f.u_star);
    CMat A = holomorphic_periods(f.q(f.u_star), pd.bp, false);
    CHECK((pd.dz - 0.5 * A).cwiseAbs().maxCoeff() <= 1e-14 * A.cwiseAbs().maxCoeff());

    // unit scaling reproduces the periods up to root polishing
    auto same = scaled_periods(f, pd, 1.0);
    for (int i = 0; i < 2; ++i) CHECK(std::abs(same.z[i] - pd.z[i]) <= 1e-14 * std::abs(pd.z[i]));

    // no Euler check for a family that is not weighted homogeneous
    Family mixed = f;
    mixed.q0 = {0, 0, 0, 0.3, 0, 0, 1};
    auto rm = cy_check(mixed, f.u_star, {cd(2.0)});
    CHECK_FALSE(rm.euler_applicable);
    CHECK(rm.fd_deviation <= 1e-6);
    CHECK_THROWS_AS(scaled_periods(mixed, periods(mixed, f.u_star), 2.0), InputError);
}

TEST_CASE("period matrix") {
    auto f = shipped_family();
    auto tr = period_matrix(f, f.u_star);
    CHECK(tr.tau.rows() == 2);
    CHECK(tr.symmetry_defect <= 1e-8);
    CHECK(tr.report.all_pass());

    Family three = f;
    three.phis.push_back({0, 0, 1});
    three.u_star.push_back(0.1);
    CHECK_THROWS_AS(period_matrix(three, three.u_star), InputError);
}

TEST_CASE("cubic: symmetry, zero directions, scaling, kappa") {
    auto f = shipped_family();
    auto direct = cubic_direct(f, f.u_star);
    CHECK(direct.symmetry_defect <= 1e-5);
    CHECK(direct.report.all_pass());
    auto bald = cubic_balduzzi(f, f.u_star);
    CHECK(bald.symmetry_defect() == 0.0);

    CVec zero = {0.0, 0.0}, x = {cd(0.3, 1), cd(-1, 0.2)};
    CHECK(direct.c_u.contract(zero, x, x) == cd(0));
    CHECK(bald.contract(x, zero, x) == cd(0));

    // q -> 4q doubles lambda; both cubics pick up the same factor 4
    Family four = f;
    for (auto& c : four.q0) c *= 4.0;
    for (auto& p : four.phis)
        for (auto& c : p) c *= 4.0;
    auto direct4 = cubic_direct(four, f.u_star);
    auto bald4 = cubic_balduzzi(four, f.u_star);
    for (std::size_t i = 0; i < bald.v.size(); ++i) {
        CHECK(std::abs(bald4.v[i] - 4.0 * bald.v[i]) <= 1e-12 * bald.max_abs());
        CHECK(std::abs(direct4.c_u.v[i] - 4.0 * direct.c_u.v[i]) <= 1e-6 * direct.c_u.max_abs());
    }

    std::vector<CVec> bases = {f.u_star, {cd(-1.05, 0.1), cd(0.15, -0.05)}, {cd(-1.2, -0.05), cd(0.25, 0.0)}};
    auto kf = fit_kappa(f, bases, 10, 7);
    CHECK(kf.samples == 30);
    CHECK(kf.spread <= 1e-3);
    CHECK(kf.report.all_pass());

    // the same constant on a family without the weighted symmetry
    Family mixed = f;
    mixed.q0 = {0, 0, 0, 0.3, 0, 0, 1};
    auto km = fit_kappa(mixed, {f.u_star}, 10, 8);
    CHECK(km.spread <= 1e-3);
    CHECK(rel(km.kappa, kf.kappa) <= 1e-3);
}

TEST_CASE("special chart") {
    auto f = shipped_family();
    auto ch = special_chart(f, f.u_star);
    CHECK(std::abs(ch.z1) > 0.1);
    CHECK(ch.report.all_pass());
    CHECK(ch.report.passed("euler_w_relation"));

    // t is invariant under the Euler scaling
    auto pd = periods(f, f.u_star);
    for (cd xi : {cd(2.0), std::polar(1.0, 1.3)}) {
        auto s = scaled_periods(f, pd, xi);
        auto cs = chart_from_periods(s.z, s.w, s.dz, f.tol);
        CHECK(rel(cs.t[0], ch.t[0]) <= 1e-8);
        CHECK(rel(cs.psi, ch.psi) <= 1e-8);
    }

    // away from a cone F = z.w / 2 is no prepotential, and the relation tau z = w catches it
    Family mixed = f;
    mixed.q0 = {0, 0, 0, 0.3, 0, 0, 1};
    CHECK(weighted_homogeneous(f));
    CHECK_FALSE(weighted_homogeneous(mixed));
    CHECK_FALSE(special_chart(mixed, f.u_star).report.passed("euler_w_relation"));
    CHECK_THROWS_AS(pipeline(mixed), InputError);

    CVec z = {0.0, cd(1, 1)}, w = {cd(1), cd(2)};
    CHECK_THROWS_AS(chart_from_periods(z, w, CMat::Identity(2, 2), f.tol), DegenerateError);
    CMat singular(2, 2);
    singular << 1.0, 2.0, 2.0, 4.0;
    CHECK_THROWS_AS(chart_from_periods({cd(1), cd(2)}, w, singular, f.tol), DegenerateError);
}

TEST_CASE("pipeline on the shipped family") {
    auto f = shipped_family();
    auto res = pipeline(f);
    for (auto& c : res.report.checks) {
        INFO(c.name << " err=" << c.max_abs_error << " " << c.detail);
        CHECK(c.pass);
    }
    CHECK(res.grid.size() == 25);
    CHECK(res.frobenius_residual <= 1e-6);
    CHECK(res.seconds < 60);
    CHECK(rel(res.psi3_fit, res.psi3_balduzzi) <= 1e-3);
    CHECK(rel(res.psi3_direct, res.psi3_balduzzi) <= 1e-3);

    auto csv = grid_csv(res.grid);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 26);
    CHECK(csv.rfind("u1_re,u1_im,u2_re", 0) == 0);

    // a quadratic fit has no third derivative, so the product is constant
    Family low = f;
    low.grid.fit_degree = 2;
    auto r2 = pipeline(low);
    CHECK(r2.psi3_fit == cd(0));
    CHECK(r2.frobenius_residual <= 1e-6);
    for (auto& [k, c] : r2.psi_fit.terms()) CHECK(mono::degree(k) <= 2);

    Family g1 = elliptic_family();
    CHECK_THROWS_AS(pipeline(g1), InputError);
}

TEST_CASE("family JSON") {
    auto f = shipped_family();
    f.grid.radius = 0.01;
    f.tol.kappa = 2e-3;
    auto back = family_from_json(nlohmann::json::parse(family_to_json(f).dump()));
    CHECK(back.q0 == f.q0);
    CHECK(back.phis == f.phis);
    CHECK(back.u_star == f.u_star);
    CHECK(back.grid.radius == 0.01);
    CHECK(back.tol.kappa == 2e-3);
    CHECK(back.quad.nodes == f.quad.nodes);

    auto alt = family_from_json(nlohmann::json::parse(
        R"({"q0": [0,0,0,0,0,0,1], "phis": [[1], [0, 1]], "u_star": [{"re": -1.1, "im": 0.05}, [0.2, -0.1]],
            "quadrature": {"nodes": 64}})"));
    CHECK(alt.u_star == f.u_star);
    CHECK(alt.quad.nodes == 64);

    CHECK_THROWS_AS(family_from_json(nlohmann::json::parse(R"({"q0": [1, 1]})")), InputError);
    CHECK_THROWS_AS(family_from_json(nlohmann::json::parse(R"({"q0": [0,0,1], "phis": [], "u_star": []})")),
                    InputError);
    CHECK_THROWS_AS(family_from_json(nlohmann::json::parse(R"({"q0": [0,0,0,1], "phis": [[0,0,0,1]], "u_star": [0]})")),
                    InputError);
    CHECK_THROWS_AS(family_from_json(nlohmann::json::parse(R"({"q0": [0,0,0,1], "phis": [["x"]], "u_star": [0]})")),
                    InputError);
    CHECK_THROWS_AS(family_from_json(nlohmann::json::parse(R"({"q0": [0,0,0,1], "phis": [[1]], "u_star": [0, 1]})")),
                    InputError);
}
