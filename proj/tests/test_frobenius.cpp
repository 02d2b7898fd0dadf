#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "specfrob/frobenius.hpp"

using namespace specfrob;
using J = Jet<Rational>;
using CJ = Jet<Complex>;

namespace {
Rational q(long p, long d = 1) { return ScalarTraits<Rational>::frac(p, d); }

CJ to_complex_jet(const J& j) {
    CJ r(j.nvars(), j.order());
    for (auto& [k, c] : j.terms()) r.add(k, Complex(c.get_d(), 0.0));
    return r;
}
}  // namespace

TEST_CASE("structure constants of the cubic example") {
    J psi = J::monomial(1, 6, {3}, q(1, 6));
    auto fs = frobenius::build(psi, 1, 6);
    CHECK(fs.m == 4);
    CHECK(fs.p == std::vector<int>{0, 1, 2, 3});
    // d2 o d2 = Psi''' d3 = d3, d2 o d3 = d4, d1 is the unit
    CHECK(fs.c(2, 1, 1).constant_term() == 1);
    CHECK(fs.c(3, 1, 2).constant_term() == 1);
    CHECK(fs.c(3, 2, 1).constant_term() == 1);
    for (int b = 0; b < 4; ++b) CHECK(fs.c(b, 0, b).constant_term() == 1);
    CHECK(fs.c(3, 2, 2).is_zero());
    CHECK(fs.g(0, 3) == 1);
    CHECK(fs.g(1, 2) == 1);
    CHECK(frobenius::coordinate_names(1) == std::vector<std::string>{"t1", "t2", "t3", "t4"});
    auto rep = frobenius::verify_axioms(fs);
    CHECK(rep.checks.size() == 8);
    CHECK(rep.all_pass());
    CHECK(frobenius::euler_homogeneity(fs).all_pass());
}

TEST_CASE("potential route agrees with the closed-form constants") {
    std::mt19937_64 rng(21);
    for (int n = 1; n <= 3; ++n) {
        J psi = oracle::random_jet(rng, n, 6, 2, 0.5);
        auto fs = frobenius::build(psi, n, 6);
        auto fp = frobenius::from_potential(fs.phi, n);
        // third derivatives of the potential computed on the oracle side
        auto phi = oracle::from_jet(fs.phi);
        const int m = 2 * n + 2;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                for (int c = 0; c < m; ++c) {
                    // g(d_a o d_b, d_c) = sum_d c^d_ab g_dc
                    J lhs(m, 3);
                    for (int d = 0; d < m; ++d)
                        if (fs.g(d, c) != 0) lhs += fs.c(d, a, b) * fs.g(d, c);
                    auto rhs = oracle::diff(oracle::diff(oracle::diff(phi, a), b), c);
                    auto lp = oracle::from_jet(lhs.with_order(3));
                    for (auto it = rhs.begin(); it != rhs.end();)
                        it = oracle::total(it->first) > 3 ? rhs.erase(it) : std::next(it);
                    CHECK(lp == rhs);
                    CHECK(compare(fs.c(a, b, c), fp.c(a, b, c)).equal);
                }
    }
}

TEST_CASE("Frobenius axioms hold for random prepotentials") {
    std::mt19937_64 rng(4);
    for (int n = 1; n <= 3; ++n)
        for (int k = 0; k < 3; ++k) {
            J psi = oracle::random_jet(rng, n, 6, 2, 0.4);
            auto fs = frobenius::build(psi, n, 6);
            auto rep = frobenius::verify_axioms(fs);
            for (auto& c : rep.checks) {
                INFO(c.name << " n=" << n << " " << c.detail);
                CHECK(c.pass);
            }
            CHECK(frobenius::euler_homogeneity(fs).all_pass());
        }
}

TEST_CASE("complex scalars run through the same checks") {
    std::mt19937_64 rng(8);
    J psi = oracle::random_jet(rng, 2, 5, 3, 0.6);
    auto fs = frobenius::build(to_complex_jet(psi), 2, 5);
    CHECK(frobenius::verify_axioms(fs, 1e-12).all_pass());
}

TEST_CASE("a broken multiplication is detected") {
    J psi = J::monomial(2, 6, {2, 1}, q(1, 2));
    auto fs = frobenius::build(psi, 2, 6);
    auto bad = fs;
    bad.c(3, 1, 1) += J::constant(6, 3, q(1));  // breaks potentiality and associativity
    CHECK_FALSE(frobenius::verify_axioms(bad).all_pass());
    auto bad_e = fs;
    bad_e.E[1] = J::variable(6, 6, 1);  // wrong weight on t2
    CHECK_FALSE(frobenius::verify_axioms(bad_e).all_pass());
}

TEST_CASE("quadratic shifts leave the structure unchanged") {
    std::mt19937_64 rng(2);
    J psi = oracle::random_jet(rng, 2, 6, 3, 0.5);
    auto fs = frobenius::build(psi, 2, 6);
    J qd = oracle::random_jet(rng, 6, 2, 0, 0.7);
    auto r = frobenius::quadratic_shift(fs, qd);
    CHECK(r.identical);
    CHECK_THROWS_AS(frobenius::quadratic_shift(fs, J::monomial(6, 6, {1, 1, 1, 0, 0, 0}, q(1))), InputError);
}

TEST_CASE("automorphisms of the normal form") {
    // Psi with a nonzero third derivative forces beta = 1 and kills gamma.
    J cub = J::monomial(1, 6, {3}, q(1, 6));
    auto fs = frobenius::build(cub, 1, 6);
    frobenius::AutomorphismCandidate<Rational> id{q(1), {{J(1, 6)}}};
    auto r = frobenius::automorphism_check(fs, id);
    CHECK(r.is_automorphism);
    CHECK(r.consistent);
    CHECK(r.beta_forced);
    CHECK(*r.forced_beta == 1);

    frobenius::AutomorphismCandidate<Rational> b2{q(2), {{J(1, 6)}}};
    auto r2 = frobenius::automorphism_check(fs, b2);
    CHECK_FALSE(r2.is_automorphism);
    CHECK(r2.consistent);

    frobenius::AutomorphismCandidate<Rational> g1{q(1), {{J::constant(1, 6, q(1))}}};
    auto r3 = frobenius::automorphism_check(fs, g1);
    CHECK_FALSE(r3.is_automorphism);
    CHECK(r3.consistent);

    // Psi = 0: any beta and constant gamma work.
    auto flat = frobenius::build(J(2, 6), 2, 6);
    frobenius::AutomorphismCandidate<Rational> any{q(3), {{J::constant(2, 6, q(1)), J::variable(2, 6, 0)},
                                                          {J::variable(2, 6, 0), J::constant(2, 6, q(-1))}}};
    auto r4 = frobenius::automorphism_check(flat, any);
    CHECK(r4.is_automorphism);
    CHECK(r4.consistent);
    CHECK_FALSE(r4.beta_forced);

    // quadratic Psi also has vanishing third derivatives
    J quad = J::monomial(1, 6, {2}, q(5));
    auto rq = frobenius::automorphism_check(frobenius::build(quad, 1, 6), b2);
    CHECK(rq.is_automorphism);
}

TEST_CASE("malformed inputs are rejected") {
    CHECK_THROWS_AS(frobenius::build(J::constant(1, 4, q(1)), 1, 4), InputError);
    CHECK_THROWS_AS(frobenius::build(J(2, 4), 1, 4), InputError);
    auto fs = frobenius::build(J(1, 4), 1, 4);
    frobenius::AutomorphismCandidate<Rational> z{q(0), {{J(1, 4)}}};
    CHECK_THROWS_AS(frobenius::automorphism_check(fs, z), InputError);
}
