#include "specfrob/specialgeo.hpp"

#include "specfrob/check_util.hpp"
#include "specfrob/json_io.hpp"
#include "specfrob/vhs.hpp"

namespace specfrob::specialgeo {

namespace {

using T = ScalarTraits<Rational>;

RLaurent zvar(int n, int ord, int i) {  // the coordinate z_{i+1} as a graded function
    if (i == 0) return RLaurent::monomial(n, ord, 1, Rational(1));
    return RLaurent::from_jet(RJet::variable(n, ord, i - 1));
}

JetDiff compare_laurent(const RLaurent& a, const RLaurent& b) {
    LaurentMatrix<Rational> x(1, 1, a.nvars, a.order), y(1, 1, b.nvars, b.order);
    x(0, 0) = a;
    y(0, 0) = b;
    return compare(x, y);
}

}  // namespace

std::vector<std::string> z_names(int n) {
    std::vector<std::string> v;
    for (int i = 2; i <= n + 1; ++i) v.push_back("z" + std::to_string(i));
    return v;
}

HomogeneousPrepotential homogenize(const RJet& psi) {
    if (!T::is_zero(psi.constant_term())) throw InputError("psi(0) must vanish");
    HomogeneousPrepotential hp;
    hp.n = psi.nvars();
    hp.order = psi.order();
    hp.F = RLaurent(hp.n, hp.order);
    for (int k = 0; k <= hp.order; ++k) {
        RJet part = psi.homogeneous_part(k);
        if (!part.is_zero()) hp.F.set(2 - k, part);
    }
    return hp;
}

RLaurent partial(const RLaurent& f, int i) { return i == 0 ? f.z_diff() : f.diff(i - 1); }

RLaurent euler(const RLaurent& f, int n) {
    RLaurent r = f.z_diff().shift(1);
    for (int i = 1; i <= n; ++i) r += partial(f, i) * RJet::variable(n, f.order, i - 1);
    return r;
}

CheckReport homogeneity_check(const HomogeneousPrepotential& hp) {
    const auto names = z_names(hp.n);
    CheckReport rep;
    CheckAccumulator acc(hp.n, &names);
    acc.take(compare_laurent(euler(hp.F, hp.n), hp.F * Rational(2)), "eps(F) = 2F");
    rep.add(acc.finish("homogeneity"));
    return rep;
}

SigmaTaut adjoint_coordinates(const HomogeneousPrepotential& hp) {
    const int n = hp.n, ord = hp.order;
    const auto names = z_names(n);
    SigmaTaut st;
    for (int i = 0; i <= n; ++i) {
        st.z.push_back(zvar(n, ord, i));
        st.w.push_back(partial(hp.F, i));
    }
    CheckAccumulator eu(n, &names), curl(n, &names), hom(n, &names);
    RLaurent pairing(n, ord);
    for (int i = 0; i <= n; ++i) pairing += st.z[i] * st.w[i];
    eu.take(compare_laurent(pairing, hp.F * Rational(2)), "sum z_i w_i = 2F");
    for (int i = 0; i <= n; ++i) {
        hom.take(compare_laurent(euler(st.w[i], n), st.w[i]), "eps(w_i) = w_i");
        for (int j = i + 1; j <= n; ++j)
            curl.take(compare_laurent(partial(st.w[i], j), partial(st.w[j], i)), "dw_i/dz_j = dw_j/dz_i");
    }
    st.report.add(eu.finish("euler_identity"));
    st.report.add(curl.finish("curl_symmetry"));
    st.report.add(hom.finish("w_homogeneity"));
    return st;
}

HomogeneousPrepotential quadratic_action(const HomogeneousPrepotential& hp, const Mat<Rational>& A) {
    const int n = hp.n;
    if (A.rows != n + 1 || A.cols != n + 1) throw InputError("A must be (n+1) x (n+1)");
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            if (A(i, j) != A(j, i)) throw InputError("A must be symmetric");
    HomogeneousPrepotential r = hp;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            if (T::is_zero(A(i, j))) continue;
            r.F -= zvar(n, hp.order, i) * zvar(n, hp.order, j) * (A(i, j) / 2);
        }
    return r;
}

RLaurent cubic(const HomogeneousPrepotential& hp, int i, int j, int k) {
    for (int x : {i, j, k})
        if (x < 0 || x > hp.n) throw InputError("cubic index out of range");
    return partial(partial(partial(hp.F, i), j), k);
}

CheckReport cubic_identity_check(const HomogeneousPrepotential& hp) {
    const int n = hp.n, m = 2 * n + 2;
    const auto names = z_names(n);
    SigmaTaut st = adjoint_coordinates(hp);
    Mat<Rational> S = vhs::pairing_matrix(n);
    // coefficient vector in the flat frame: a_1 = v_1, a_i = v_i, b_i = v_{n+i}, b_1 = -v_{2n+2}
    auto frame_coeffs = [&](const std::vector<RLaurent>& z, const std::vector<RLaurent>& w) {
        std::vector<RLaurent> c(m);
        c[0] = z[0];
        for (int i = 1; i <= n; ++i) {
            c[i] = z[i];
            c[n + i] = w[i];
        }
        c[m - 1] = -w[0];
        return c;
    };
    std::vector<RLaurent> sig = frame_coeffs(st.z, st.w);
    CheckAccumulator acc(n, &names);
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j)
            for (int k = j; k <= n; ++k) {
                std::vector<RLaurent> dz, dw;
                for (int a = 0; a <= n; ++a) {
                    dz.push_back(partial(partial(partial(st.z[a], i), j), k));
                    dw.push_back(partial(partial(partial(st.w[a], i), j), k));
                }
                std::vector<RLaurent> d3 = frame_coeffs(dz, dw);
                RLaurent lhs(n, hp.order);
                for (int a = 0; a < m; ++a)
                    for (int b = 0; b < m; ++b)
                        if (!T::is_zero(S(a, b)) && !d3[b].is_zero()) lhs -= sig[a] * d3[b] * S(a, b);
                acc.take(compare_laurent(lhs, cubic(hp, i, j, k)),
                         "triple (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," + std::to_string(k + 1) + ")");
            }
    CheckReport rep;
    rep.add(acc.finish("cubic_identity"));
    return rep;
}

Restriction restrict(const HomogeneousPrepotential& hp, bool strict) {
    const int n = hp.n;
    Restriction r;
    r.psi = RJet(n, hp.F.order);
    for (auto& [k, j] : hp.F.c) r.psi += j;
    bool normalized = T::is_zero(r.psi.constant_term());
    if (strict && !normalized) throw InputError("normalization: F(1, 0, ..., 0) must vanish");
    r.report.add("normalization", normalized);

    // z_a z_b restricted to z_1 = 1 must span the polynomials of degree <= 2 in t
    std::vector<RJet> images;
    for (int a = 0; a <= n; ++a)
        for (int b = a; b <= n; ++b) {
            RLaurent q = zvar(n, 2, a) * zvar(n, 2, b);
            RJet img(n, 2);
            for (auto& [k, j] : q.c) img += j;
            images.push_back(img);
        }
    std::vector<mono::Key> keys;
    keys.push_back(0);
    for (int a = 0; a < n; ++a) keys.push_back(mono::unit(a));
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) keys.push_back(mono::unit(a) + mono::unit(b));
    Mat<Rational> M(int(keys.size()), int(images.size()));
    for (std::size_t c = 0; c < images.size(); ++c)
        for (std::size_t k = 0; k < keys.size(); ++k) M(int(k), int(c)) = images[c].coeff_key(keys[k]);
    bool bij = images.size() == keys.size() && rank(M) == int(keys.size());
    r.report.add("quadratic_class_bijection", bij);
    return r;
}

RJet restrict_affine(const HomogeneousPrepotential& hp, const Mat<Rational>& A) {
    const int n = hp.n, ord = hp.F.order;
    if (A.rows != n + 1 || A.cols != n + 1) throw InputError("A must be (n+1) x (n+1)");
    if (T::is_zero(A(0, 0))) throw InputError("A(0,0) must be nonzero");
    for (int i = 1; i <= n; ++i)
        if (!T::is_zero(A(i, 0))) throw InputError("A must map the base point to z = 0");
    RJet z1 = RJet::constant(n, ord, A(0, 0));
    for (int j = 1; j <= n; ++j) z1 += RJet::variable(n, ord, j - 1) * A(0, j);
    std::vector<RJet> z;
    for (int i = 1; i <= n; ++i) {
        RJet zi(n, ord);
        for (int j = 1; j <= n; ++j) zi += RJet::variable(n, ord, j - 1) * A(i, j);
        z.push_back(zi);
    }
    RJet out(n, ord);
    for (auto& [power, piece] : hp.F.c) out += compose(piece, z) * z1.pow(power);
    return out;
}

nlohmann::json to_json(const HomogeneousPrepotential& hp) {
    nlohmann::json g = nlohmann::json::array();
    for (auto& [k, j] : hp.F.c) g.push_back({{"z1_exp", k}, {"jet", jet_to_json(j)}});
    return {{"n", hp.n}, {"order", hp.order}, {"graded", g}};
}

HomogeneousPrepotential from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("order")) throw InputError("prepotential needs n and order");
    const int n = j.at("n").get<int>(), ord = j.at("order").get<int>();
    if (n < 1 || n > kMaxVars) throw InputError("unsupported n");
    if (ord < 0 || ord > kMaxOrder) throw InputError("unsupported order");
    if (j.contains("psi")) return homogenize(jet_from_json<Rational>(j.at("psi"), n, ord));
    if (!j.contains("graded")) throw InputError("prepotential needs psi or graded");
    HomogeneousPrepotential hp;
    hp.n = n;
    hp.order = ord;
    hp.F = RLaurent(n, ord);
    for (auto& piece : j.at("graded")) {
        int e = piece.at("z1_exp").get<int>();
        RJet jet = jet_from_json<Rational>(piece.at("jet"), n, ord);
        for (auto& [k, c] : jet.terms())
            if (mono::degree(k) + e != 2) throw InputError("graded piece is not of total degree 2");
        hp.F.add(e, jet);
    }
    return hp;
}

}  // namespace specfrob::specialgeo
