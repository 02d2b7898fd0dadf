#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "specfrob/jet.hpp"
#include "specfrob/json_io.hpp"

using namespace specfrob;
using J = Jet<Rational>;

namespace {
Rational q(long p, long d = 1) { return ScalarTraits<Rational>::frac(p, d); }
J var(int nv, int ord, int v) { return J::variable(nv, ord, v); }
J cst(int nv, int ord, Rational c) { return J::constant(nv, ord, c); }
}  // namespace

TEST_CASE("jet arithmetic examples") {
    J t = var(1, 4, 0), one = cst(1, 4, 1);
    J p = (one + t) * (one - t);
    CHECK(p.coeff({0}) == 1);
    CHECK(p.coeff({2}) == -1);
    CHECK(p.size() == 2);

    J t1 = var(1, 1, 0);
    CHECK((t1 * t1).is_zero());

    J a = J::monomial(1, 5, {2}, q(1, 2)), b = J::monomial(1, 5, {3}, q(1, 6));
    auto expect = oracle::mul(oracle::from_jet(a), oracle::from_jet(b), 5);
    CHECK(oracle::from_jet(a * b) == expect);
    CHECK((a * b).coeff({5}) == q(1, 12));
}

TEST_CASE("jet diff examples") {
    J f = J::monomial(1, 6, {3}, q(1, 6));
    CHECK(f.diff(0).coeff({2}) == q(1, 2));
    CHECK(f.diff(0).order() == 5);
    CHECK(cst(1, 6, 7).diff(0).is_zero());
    J g = J::monomial(2, 6, {2, 1}, 1);
    CHECK(g.diff(0) == J::monomial(2, 5, {1, 1}, 2));
}

TEST_CASE("compose examples") {
    J x = var(1, 4, 0);
    J outer = x * x;
    J inner = var(1, 4, 0) + J::monomial(1, 4, {2}, 1);
    J r = compose(outer, {inner});
    CHECK(r.coeff({2}) == 1);
    CHECK(r.coeff({3}) == 2);
    CHECK(r.coeff({4}) == 1);
    CHECK(r.size() == 3);

    CHECK(compose(x, {inner}) == inner);

    J xy = var(2, 4, 0) + var(2, 4, 1);
    J t = var(1, 4, 0);
    CHECK(compose(xy, {t, -t}).is_zero());

    CHECK_THROWS_AS(compose(x, {cst(1, 4, 1) + t}), CompositionError);
}

TEST_CASE("invert_coordinates examples and oracle") {
    J f = var(1, 4, 0) + J::monomial(1, 4, {2}, 1);
    auto g = invert_coordinates<Rational>({f});
    auto ref = oracle::invert_univariate({q(0), q(1), q(1)}, 4);
    for (int k = 0; k <= 4; ++k) CHECK(g[0].coeff({k}) == ref[k]);
    CHECK(g[0].coeff({2}) == -1);
    CHECK(g[0].coeff({3}) == 2);
    CHECK(g[0].coeff({4}) == -5);

    J t = var(1, 4, 0);
    CHECK(invert_coordinates<Rational>({t})[0] == t);

    // linear map with matrix A -> A^{-1}
    J x = var(2, 3, 0), y = var(2, 3, 1);
    auto inv = invert_coordinates<Rational>({x * q(2) + y, y * q(3)});
    CHECK(inv[0] == x * q(1, 2) - y * q(1, 6));
    CHECK(inv[1] == y * q(1, 3));

    CHECK_THROWS_AS(invert_coordinates<Rational>({x + y, x + y}), DegenerateError);
}

TEST_CASE("lie bracket and lie derivative examples") {
    J t = var(1, 4, 0);
    VectorField<Rational> e{t}, d{cst(1, 4, 1)};
    auto br = lie_bracket(e, d);
    CHECK(br[0] == cst(1, 3, -1));

    // Lie_E g = -g for the n=1 antidiagonal metric
    const int m = 4, ord = 4;
    VectorField<Rational> E{var(m, ord, 0), J(m, ord), -var(m, ord, 2), var(m, ord, 3) * q(-2)};
    Tensor02<Rational> g(m, m, ord);
    g(0, 3) = g(3, 0) = cst(m, ord, 1);
    g(1, 2) = g(2, 1) = cst(m, ord, 1);
    auto lg = lie_derivative(E, g);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) CHECK(compare(lg(a, b), -g(a, b)).equal);

    VectorField<Rational> zero(m, J(m, ord));
    Tensor12<Rational> T(m, m, ord);
    T(0, 1, 2) = var(m, ord, 1);
    auto lz = lie_derivative(zero, T);
    for (auto& x : lz.t) CHECK(x.is_zero());
}

TEST_CASE("property: ring axioms and Leibniz against oracle") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 100; ++it) {
        int nv = 1 + it % 3, ord = 3 + it % 4;
        J a = oracle::random_jet(rng, nv, ord, 0), b = oracle::random_jet(rng, nv, ord, 0),
          c = oracle::random_jet(rng, nv, ord, 0);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK(oracle::from_jet(a * b) == oracle::mul(oracle::from_jet(a), oracle::from_jet(b), ord));
        for (int v = 0; v < nv; ++v) {
            J lhs = (a * b).diff(v);
            J rhs = a.diff(v) * b + a * b.diff(v);
            CHECK(compare(lhs, rhs).equal);
            CHECK(oracle::from_jet(a.diff(v)) == oracle::diff(oracle::from_jet(a), v));
        }
    }
}

TEST_CASE("property: compose(invert(f), f) = identity") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 30; ++it) {
        int nv = 1 + it % 3, ord = 5;
        std::vector<J> f(nv);
        for (int i = 0; i < nv; ++i) {
            f[i] = oracle::random_jet(rng, nv, ord, 2) + var(nv, ord, i) * q(1 + i);
            if (i > 0) f[i] += var(nv, ord, i - 1);
        }
        auto g = invert_coordinates(f);
        for (int i = 0; i < nv; ++i) {
            CHECK(compare(compose(g[i], f), var(nv, ord, i)).equal);
            CHECK(compare(compose(f[i], g), var(nv, ord, i)).equal);
        }
    }
}

TEST_CASE("property: Lie_[X,Y] = [Lie_X, Lie_Y] on tensors") {
    std::mt19937_64 rng(13);
    const int m = 2, ord = 6;
    for (int it = 0; it < 10; ++it) {
        VectorField<Rational> X(m), Y(m);
        for (int i = 0; i < m; ++i) {
            X[i] = oracle::random_jet(rng, m, ord, 0, 0.3);
            Y[i] = oracle::random_jet(rng, m, ord, 0, 0.3);
        }
        Tensor12<Rational> T(m, m, ord);
        for (auto& x : T.t) x = oracle::random_jet(rng, m, ord, 0, 0.3);
        auto lhs = lie_derivative(lie_bracket(X, Y), T);
        auto lx = lie_derivative(X, lie_derivative(Y, T));
        auto ly = lie_derivative(Y, lie_derivative(X, T));
        for (std::size_t i = 0; i < T.t.size(); ++i) CHECK(compare(lhs.t[i], lx.t[i] - ly.t[i]).equal);

        Tensor02<Rational> G(m, m, ord);
        for (auto& x : G.t) x = oracle::random_jet(rng, m, ord, 0, 0.3);
        auto gl = lie_derivative(lie_bracket(X, Y), G);
        auto gx = lie_derivative(X, lie_derivative(Y, G));
        auto gy = lie_derivative(Y, lie_derivative(X, G));
        for (std::size_t i = 0; i < G.t.size(); ++i) CHECK(compare(gl.t[i], gx.t[i] - gy.t[i]).equal);
    }
}

TEST_CASE("jet matrix inverse and json roundtrip") {
    std::mt19937_64 rng(17);
    JetMatrix<Rational> m(3, 3, 2, 4);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = oracle::random_jet(rng, 2, 4, 1) + cst(2, 4, i == j ? 1 + i : (i < j));
    auto mi = inverse(m);
    CHECK(compare(m * mi, JetMatrix<Rational>::identity(3, 2, 4)).equal);

    J f = oracle::random_jet(rng, 2, 4, 0);
    auto js = jet_to_json(f);
    CHECK(jet_from_json<Rational>(js, 2, 4) == f);
    CHECK_THROWS_AS(jet_from_json<Rational>(nlohmann::json::parse(R"([{"exp":[1],"num":1}])"), 2, 4), InputError);
}
