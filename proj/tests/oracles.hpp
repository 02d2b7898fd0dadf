#pragma once
// Independent reference computations for tests. Nothing here uses the
// library's jet arithmetic.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "specfrob/jet.hpp"

namespace oracle {

using specfrob::Rational;
using Poly = std::map<std::vector<int>, Rational>;

inline int total(const std::vector<int>& e) {
    int d = 0;
    for (int x : e) d += x;
    return d;
}

inline Poly from_jet(const specfrob::Jet<Rational>& j) {
    Poly p;
    for (auto& [k, c] : j.terms()) p[specfrob::mono::decode(k, j.nvars())] = c;
    return p;
}

inline void clean(Poly& p) {
    for (auto it = p.begin(); it != p.end();)
        it = (it->second == 0) ? p.erase(it) : std::next(it);
}

// Schoolbook product keeping total degree <= order.
inline Poly mul(const Poly& a, const Poly& b, int order) {
    Poly r;
    for (auto& [ea, ca] : a)
        for (auto& [eb, cb] : b) {
            std::vector<int> e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            if (total(e) <= order) r[e] += ca * cb;
        }
    clean(r);
    return r;
}

inline Poly add(Poly a, const Poly& b) {
    for (auto& [e, c] : b) a[e] += c;
    clean(a);
    return a;
}

inline Poly diff(const Poly& a, int v) {
    Poly r;
    for (auto& [e, c] : a) {
        if (e[v] == 0) continue;
        auto f = e;
        f[v] -= 1;
        r[f] += c * e[v];
    }
    clean(r);
    return r;
}

// Univariate series inversion by repeated substitution t = s - N(t).
inline std::vector<Rational> invert_univariate(const std::vector<Rational>& f, int order) {
    // f[k] = coefficient of t^k, f[0] = 0, f[1] != 0
    std::vector<Rational> g(order + 1, Rational(0));
    g[1] = Rational(1) / f[1];
    for (int it = 0; it < order; ++it) {
        // compute f(g) and correct g by (s - f(g))/f1
        std::vector<Rational> acc(order + 1, Rational(0)), pw(order + 1, Rational(0));
        pw[0] = 1;
        for (int k = 1; k < int(f.size()) && k <= order; ++k) {
            std::vector<Rational> np(order + 1, Rational(0));
            for (int i = 0; i <= order; ++i)
                for (int j = 0; i + j <= order; ++j) np[i + j] += pw[i] * g[j];
            pw = np;
            for (int i = 0; i <= order; ++i) acc[i] += f[k] * pw[i];
        }
        acc[1] -= 1;
        for (int i = 0; i <= order; ++i) g[i] -= acc[i] / f[1];
    }
    return g;
}

// Arithmetic-geometric mean.
inline double agm(double a, double b) {
    for (int i = 0; i < 60 && std::fabs(a - b) > 1e-16 * std::fabs(a); ++i) {
        double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return a;
}

// Real half-period of the Weierstrass cubic 4z^3 - g2 z - g3 with real roots e1 > e2 > e3:
// omega1 = pi / (2 AGM(sqrt(e1 - e3), sqrt(e1 - e2))) = integral over [e1, inf) of dz / y.
inline double weierstrass_half_period(double e1, double e2, double e3) {
    return M_PI / (2.0 * agm(std::sqrt(e1 - e3), std::sqrt(e1 - e2)));
}

// Imaginary half-period: omega3 / i = pi / (2 AGM(sqrt(e1 - e3), sqrt(e2 - e3))).
inline double weierstrass_imag_half_period(double e1, double e2, double e3) {
    return M_PI / (2.0 * agm(std::sqrt(e1 - e3), std::sqrt(e2 - e3)));
}

// Real roots of 4z^3 - g2 z - g3 (three of them assumed), descending, by the trigonometric formula.
inline std::vector<double> weierstrass_roots(double g2, double g3) {
    const double p = -g2 / 4, q = -g3 / 4;
    const double r = 2 * std::sqrt(-p / 3);
    const double phi = std::acos(3 * q / (2 * p) * std::sqrt(-3 / p)) / 3;
    std::vector<double> x;
    for (int k = 0; k < 3; ++k) x.push_back(r * std::cos(phi - 2 * M_PI * k / 3));
    std::sort(x.rbegin(), x.rend());
    return x;
}

// Random rational jet with small coefficients, zero constant term.
inline specfrob::Jet<Rational> random_jet(std::mt19937_64& rng, int nvars, int order, int min_degree = 1,
                                          double density = 0.5) {
    specfrob::Jet<Rational> j(nvars, order);
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<int> e(nvars, 0);
    auto rec = [&](auto&& self, int v, int left) -> void {
        if (v == nvars) {
            int d = total(e);
            if (d >= min_degree && coin(rng) < density) {
                Rational c(num(rng), den(rng));
                c.canonicalize();
                j.add(specfrob::mono::encode(e), c);
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

}  // namespace oracle
