#include <doctest.h>

#include <chrono>
#include <random>

#include "oracles.hpp"
#include "specfrob/json_io.hpp"
#include "specfrob/frobenius.hpp"
#include "specfrob/vhs.hpp"

using namespace specfrob;
using J = Jet<Rational>;

namespace {
Rational q(long p, long d = 1) { return ScalarTraits<Rational>::frac(p, d); }

J cubic(int ord) { return J::monomial(1, ord, {3}, q(1, 6)); }

// S written out by hand for n = 1, slot order (v1, v2, v3, v4).
Mat<Rational> s_n1() {
    Mat<Rational> s(4, 4);
    s(0, 3) = -1;
    s(3, 0) = 1;
    s(1, 2) = 1;
    s(2, 1) = -1;
    return s;
}

std::vector<J> linear_map(const Mat<Rational>& a, int ord) {
    const int n = a.rows;
    std::vector<J> out;
    for (int i = 0; i < n; ++i) {
        J acc(n, ord);
        for (int j = 0; j < n; ++j) acc += J::variable(n, ord, j) * a(i, j);
        out.push_back(acc);
    }
    return out;
}
}  // namespace

TEST_CASE("pairing and Hodge levels") {
    auto s = vhs::pairing_matrix(1);
    auto h = s_n1();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) CHECK(s(a, b) == h(a, b));
    CHECK(vhs::hodge_levels(2) == std::vector<int>{3, 2, 2, 1, 1, 0});
}

TEST_CASE("frame for a cubic prepotential matches the hand computation") {
    auto mod = vhs::build_frame(cubic(6), 1, 6);
    J t = J::variable(1, 6, 0);
    J one = J::constant(1, 6, 1);
    // v1 = (1, t, t^2/2, t^3/6), v2 = (0, 1, t, t^2/2), v3 = (0, 0, 1, t), v4 = e4
    std::vector<std::vector<J>> want = {{one, t, t * t * q(1, 2), t * t * t * q(1, 6)},
                                        {J(1, 6), one, t, t * t * q(1, 2)},
                                        {J(1, 6), J(1, 6), one, t},
                                        {J(1, 6), J(1, 6), J(1, 6), one}};
    for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 4; ++r) CHECK(compare(mod.V(r, c), want[c][r]).equal);
    auto rep = vhs::verify_vhf(mod);
    CHECK(rep.all_pass());
    CHECK(rep.checks.size() == 7);
}

TEST_CASE("VHS invariants hold for random prepotentials") {
    std::mt19937_64 rng(11);
    auto t0 = std::chrono::steady_clock::now();
    int count = 0;
    for (int n = 1; n <= 3; ++n)
        for (int k = 0; k < 6; ++k) {
            J psi = oracle::random_jet(rng, n, 6, 2, 0.4);
            auto mod = vhs::build_frame(psi, n, 6);
            auto rep = vhs::verify_vhf(mod);
            for (auto& c : rep.checks) {
                INFO(c.name << " n=" << n);
                CHECK(c.pass);
            }
            // isotropy of F^2, independent Gram computation
            auto pm = vhs::period_map(mod);
            CHECK(pm.report.all_pass());
            CHECK(pm.flag[2].cols == n + 1);
            CHECK(pm.flag[0].cols == 2 * n + 2);
            ++count;
        }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    MESSAGE("verified " << count << " frames in " << secs << " s");
}

TEST_CASE("prepotential roundtrip through the extraction") {
    std::mt19937_64 rng(5);
    for (int n = 1; n <= 3; ++n)
        for (int k = 0; k < 4; ++k) {
            J psi = oracle::random_jet(rng, n, 6, 2, 0.5);
            auto mod = vhs::build_frame(psi, n, 6);
            auto res = vhs::extract_prepotential(mod.V, n);
            CHECK(res.report.all_pass());
            for (int i = 0; i < n; ++i) CHECK(compare(res.t_hat[i], J::variable(n, 6, i)).equal);
            CHECK(compare(res.psi_hat, psi).equal);
        }
}

TEST_CASE("extraction is independent of the symplectic frame") {
    // M = blockdiag(1, A, A^{-T}, 1); W = M^{-1} V. Then t^ = A^{-1} t and Psi^(t^) = Psi(t).
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 4; ++trial) {
        const int n = 2, m = 6, ord = 6;
        J psi = oracle::random_jet(rng, n, ord, 3, 0.5);
        Mat<Rational> a(2, 2);
        a(0, 0) = 2;
        a(0, 1) = q(trial, 3);
        a(1, 0) = -1;
        a(1, 1) = 1;
        Mat<Rational> ai = inverse(a), ait = ai.transpose();
        Mat<Rational> M = Mat<Rational>::identity(m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                M(1 + i, 1 + j) = a(i, j);
                M(1 + n + i, 1 + n + j) = ait(i, j);
            }
        auto mod = vhs::build_frame(psi, n, ord);
        JetMatrix<Rational> W = JetMatrix<Rational>::from_constant(inverse(M), n, ord) * mod.V;
        auto res = vhs::extract_prepotential(W, n);
        CHECK(res.report.all_pass());
        auto want = linear_map(ai, ord);
        for (int i = 0; i < n; ++i) CHECK(compare(res.t_hat[i], want[i]).equal);
        CHECK(compare(compose(res.psi_hat, res.t_hat), psi).equal);
    }
}

TEST_CASE("rescaling the F^3 generator in the flat frame scales the prepotential by r^2") {
    // M = diag(r, 1, ..., 1, 1/r) is symplectic; t^ = r t and Psi^(t^) = r^2 Psi(t).
    J psi = cubic(6) + J::monomial(1, 6, {4}, q(2, 3));
    auto mod = vhs::build_frame(psi, 1, 6);
    Rational r = q(3, 2);
    Mat<Rational> M = Mat<Rational>::identity(4);
    M(0, 0) = r;
    M(3, 3) = 1 / r;
    JetMatrix<Rational> W = JetMatrix<Rational>::from_constant(inverse(M), 1, 6) * mod.V;
    auto res = vhs::extract_prepotential(W, 1);
    CHECK(compare(res.t_hat[0], J::variable(1, 6, 0) * r).equal);
    CHECK(compare(compose(res.psi_hat, res.t_hat), psi * (r * r)).equal);
}

TEST_CASE("extraction rejects malformed frames") {
    const int n = 2, m = 6, ord = 5;
    JetMatrix<Rational> f(m, m, n, ord);
    f(0, 0) = J::constant(n, ord, 1);
    f(1, 0) = J::variable(n, ord, 0);
    f(2, 0) = J::variable(n, ord, 1);
    f(3, 0) = J::variable(n, ord, 1);  // kappa_1 = t_3, kappa_2 = 0: not a gradient
    CHECK_THROWS_AS(vhs::extract_prepotential(f, n), ContextError);

    JetMatrix<Rational> g = f;
    g(0, 0) = J(n, ord);
    CHECK_THROWS_AS(vhs::extract_prepotential(g, n), InputError);

    JetMatrix<Rational> h = f;
    h(3, 0) = J(n, ord);
    h(2, 0) = J::variable(n, ord, 0) * J::variable(n, ord, 1);  // CY-condition fails
    CHECK_THROWS_AS(vhs::extract_prepotential(h, n), DegenerateError);
}

TEST_CASE("perturbed frames fail the checks") {
    auto mod = vhs::build_frame(cubic(6), 1, 6);
    auto bad = mod;
    bad.V(3, 0) += J::monomial(1, 6, {2}, q(1));
    auto rep = vhs::verify_vhf(bad);
    CHECK_FALSE(rep.all_pass());
    CHECK_FALSE(rep.passed("griffiths"));
    CHECK(rep.passed("s_flatness"));  // adding f v4 to v1 keeps the frame symplectic

    auto bad2 = mod;
    bad2.V(1, 0) = J(1, 6);  // no t-direction in F^2/F^3
    CHECK_FALSE(vhs::verify_vhf(bad2).all_pass());
}

TEST_CASE("graded algebra at the origin matches the Frobenius structure constants") {
    std::mt19937_64 rng(3);
    for (int n = 1; n <= 2; ++n) {
        J psi = oracle::random_jet(rng, n, 5, 3, 0.6);
        auto mod = vhs::build_frame(psi, n, 5);
        auto fs = frobenius::build(psi, n, 5);
        for (Rational lambda : {q(1), q(-2, 3)}) {
            auto alg = vhs::graded_algebra_at_origin(mod, lambda);
            const int m = 2 * n + 2;
            for (int g = 0; g < m; ++g)
                for (int a = 0; a < m; ++a)
                    for (int b = 0; b < m; ++b) {
                        INFO(g << " " << a << " " << b);
                        CHECK(alg.at(g, a, b) == fs.c(g, a, b).constant_term() / lambda);
                    }
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b) CHECK(alg.g(a, b) == fs.g(a, b));
        }
    }
}

TEST_CASE("model JSON roundtrip") {
    std::mt19937_64 rng(9);
    J psi = oracle::random_jet(rng, 2, 5, 3, 0.6);
    auto mod = vhs::build_frame(psi, 2, 5);
    auto j = vhs::model_to_json(mod);
    auto back = vhs::model_from_json(nlohmann::json::parse(j.dump()));
    CHECK(compare(back.psi, mod.psi).equal);
    CHECK(compare(back.V, mod.V).equal);
    CHECK_THROWS_AS(vhs::model_from_json(nlohmann::json{{"n", 1}}), InputError);
}
