#include "specfrob/vhs.hpp"

#include "specfrob/check_util.hpp"
#include "specfrob/json_io.hpp"

namespace specfrob::vhs {

namespace {
using T = ScalarTraits<Rational>;

RJet zero(int nv, int ord) { return RJet(nv, ord); }
RJet one(int nv, int ord) { return RJet::constant(nv, ord, Rational(1)); }

void require_psi(const RJet& psi, int n) {
    if (psi.nvars() != n) throw InputError("psi must be a jet in n variables");
    if (!T::is_zero(psi.constant_term())) throw InputError("psi(0) must vanish");
}
}  // namespace

Mat<Rational> pairing_matrix(int n) {
    const int m = 2 * n + 2;
    Mat<Rational> s(m, m);
    s(0, m - 1) = -1;
    s(m - 1, 0) = 1;
    for (int k = 1; k <= n; ++k) {
        s(k, k + n) = 1;
        s(k + n, k) = -1;
    }
    return s;
}

std::vector<int> hodge_levels(int n) {
    std::vector<int> p(2 * n + 2);
    p[0] = 3;
    for (int k = 1; k <= n; ++k) {
        p[k] = 2;
        p[k + n] = 1;
    }
    p[2 * n + 1] = 0;
    return p;
}

std::vector<std::string> base_names(int n) {
    std::vector<std::string> v;
    for (int i = 0; i < n; ++i) v.push_back("t" + std::to_string(i + 2));
    return v;
}

RJet euler_shift(const RJet& f, int c) {
    RJet r(f.nvars(), f.order());
    for (auto& [k, v] : f.terms()) r.add(k, v * Rational(mono::degree(k) - c));
    return r;
}

FlatFrameModel build_frame(const RJet& psi, int n, int order) {
    if (n < 1) throw InputError("n must be positive");
    if (order < 3) throw InputError("order must be at least 3");
    require_psi(psi, n);
    const int m = 2 * n + 2;
    RJet p = psi.with_order(std::min(order, psi.order()));
    FlatFrameModel mod;
    mod.n = n;
    mod.order = order;
    mod.psi = p;
    mod.S = pairing_matrix(n);
    mod.hodge_ranks = {1, n, n, 1};
    RMatrix V(m, m, n, order);
    // column of v_1: (1, t_i, d_i Psi, (E - 2) Psi)
    V(0, 0) = one(n, order);
    for (int i = 0; i < n; ++i) {
        V(1 + i, 0) = RJet::variable(n, order, i);
        V(1 + n + i, 0) = p.diff(i);
    }
    V(m - 1, 0) = euler_shift(p, 2);
    // columns of v_i: e_i + sum_j d_i d_j Psi e_{n+j} + (E - 1) d_i Psi e_{2n+2}
    for (int i = 0; i < n; ++i) {
        RJet di = p.diff(i);
        V(1 + i, 1 + i) = one(n, order);
        for (int j = 0; j < n; ++j) V(1 + n + j, 1 + i) = di.diff(j);
        V(m - 1, 1 + i) = euler_shift(di, 1);
    }
    // columns of v_a: e_a + t_{a-n} e_{2n+2}
    for (int i = 0; i < n; ++i) {
        V(1 + n + i, 1 + n + i) = one(n, order);
        V(m - 1, 1 + n + i) = RJet::variable(n, order, i);
    }
    V(m - 1, m - 1) = one(n, order);
    mod.V = V;
    return mod;
}

std::vector<RMatrix> connection(const FlatFrameModel& mod) {
    const int n = mod.n, m = 2 * n + 2, ord = mod.order;
    std::vector<RMatrix> g;
    for (int i = 0; i < n; ++i) {
        RMatrix G(m, m, n, ord - 3);
        G(1 + i, 0) = one(n, ord);
        RJet di = mod.psi.diff(i);
        for (int j = 0; j < n; ++j) {
            RJet dij = di.diff(j);
            for (int k = 0; k < n; ++k) G(1 + n + k, 1 + j) = dij.diff(k);
        }
        G(m - 1, 1 + n + i) = one(n, ord);
        g.push_back(G);
    }
    return g;
}

std::vector<RMatrix> connection_from_frame(const FlatFrameModel& mod) {
    RMatrix vi = inverse(mod.V);
    std::vector<RMatrix> g;
    for (int i = 0; i < mod.n; ++i) g.push_back(vi * mod.V.diff(i));
    return g;
}

CheckReport verify_vhf(const FlatFrameModel& mod) {
    const int n = mod.n, m = 2 * n + 2;
    const auto names = base_names(n);
    const auto p = hodge_levels(n);
    CheckReport rep;

    std::vector<RMatrix> gf;
    try {
        gf = connection_from_frame(mod);
    } catch (const DegenerateError&) {
        rep.add("flatness", false, 0.0, {}, "frame matrix not invertible");
        return rep;
    }
    std::vector<RMatrix> gc = connection(mod);

    // (i) curvature of both the frame connection and the closed-form connection
    {
        CheckAccumulator acc(n, &names);
        for (auto* gam : {&gf, &gc})
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    const RMatrix& a = (*gam)[i];
                    const RMatrix& b = (*gam)[j];
                    RMatrix curv = b.diff(i) - a.diff(j) + a * b - b * a;
                    acc.take(compare(curv, RMatrix(m, m, n, curv.order())), "curvature");
                }
        rep.add(acc.finish("flatness"));
    }
    // closed-form entries agree with the frame: d_i V = V Gamma_i
    {
        CheckAccumulator acc(n, &names);
        for (int i = 0; i < n; ++i) acc.take(compare(mod.V.diff(i), mod.V * gc[i]), "connection entries");
        rep.add(acc.finish("connection_formula"));
    }
    // (ii) Griffiths transversality: Gamma maps slot level p into levels >= p-1
    {
        CheckAccumulator acc(n, &names);
        for (int i = 0; i < n; ++i)
            for (int b = 0; b < m; ++b)
                for (int a = 0; a < m; ++a)
                    if (p[b] < p[a] - 1 && !gf[i](b, a).is_zero())
                        acc.take(compare(gf[i](b, a), zero(n, gf[i](b, a).order())),
                                 "Gamma_" + std::to_string(i + 2) + " entry (" + std::to_string(b + 1) + "," +
                                     std::to_string(a + 1) + ")");
        rep.add(acc.finish("griffiths"));
    }
    // flat opposite filtration: only the Higgs part acts (level drops by exactly one)
    {
        CheckAccumulator acc(n, &names);
        for (int i = 0; i < n; ++i)
            for (int b = 0; b < m; ++b)
                for (int a = 0; a < m; ++a)
                    if (p[b] != p[a] - 1 && !gf[i](b, a).is_zero())
                        acc.take(compare(gf[i](b, a), zero(n, gf[i](b, a).order())), "opposite pattern");
        rep.add(acc.finish("opposite_pattern"));
    }
    // (iii) S-flatness: V^T S V = S and Gamma^T S + S Gamma = 0
    RMatrix Sj = RMatrix::from_constant(mod.S, n, mod.order);
    RMatrix gram = mod.V.transpose() * Sj * mod.V;
    {
        CheckAccumulator acc(n, &names);
        acc.take(compare(gram, Sj), "V^T S V");
        for (int i = 0; i < n; ++i) {
            RMatrix c = gf[i].transpose() * Sj + Sj * gf[i];
            acc.take(compare(c, RMatrix(m, m, n, c.order())), "Gamma compatibility");
        }
        rep.add(acc.finish("s_flatness"));
    }
    // (iv) isotropy S(F^p, F^{4-p}) = 0
    {
        CheckAccumulator acc(n, &names);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                if (p[a] + p[b] >= 4) acc.take(compare(gram(a, b), zero(n, gram(a, b).order())), "isotropy");
        rep.add(acc.finish("isotropy"));
    }
    // (v) CY-condition: ranks (1, n, n, 1) of the flag at 0 and t-directions -> F^2/F^3 invertible
    {
        CheckAccumulator acc(n, &names);
        Mat<Rational> v0 = mod.V.constant_part();
        int cum = 0;
        const int expect[4] = {1, n, n, 1};
        for (int lev = 3; lev >= 0; --lev) {
            cum += expect[3 - lev];
            Mat<Rational> cols(m, cum);
            int c = 0;
            for (int a = 0; a < m; ++a)
                if (p[a] >= lev) {
                    for (int r = 0; r < m; ++r) cols(r, c) = v0(r, a);
                    ++c;
                }
            if (c != cum || rank(cols) != cum) acc.fail("rank of F^" + std::to_string(lev));
        }
        Mat<Rational> q(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) q(j, i) = gf[i](1 + j, 0).constant_term();
        if (determinant(q) == 0) acc.fail("Higgs map T -> F^2/F^3 singular at 0");
        rep.add(acc.finish("cy_condition"));
    }
    return rep;
}

FrameExtraction extract_prepotential(const RMatrix& frame, int n) {
    const int m = 2 * n + 2;
    if (frame.rows != m || frame.cols < 1) throw InputError("frame has wrong shape");
    const int nv = frame.nvars();
    if (nv != n) throw InputError("frame must be a jet matrix in n variables");
    FrameExtraction res;
    const auto names = base_names(n);

    RJet u = frame(0, 0);
    if (T::is_zero(u.constant_term())) throw InputError("F^3 generator has no v0_1 component at 0");
    RJet ui = u.reciprocal();
    std::vector<RJet> c(m);
    for (int r = 0; r < m; ++r) c[r] = frame(r, 0) * ui;

    for (int i = 0; i < n; ++i) {
        if (!T::is_zero(c[1 + i].constant_term())) throw InputError("opposite block pattern mismatch");
        res.t_hat.push_back(c[1 + i]);
    }
    std::vector<RJet> x;
    try {
        x = invert_coordinates(res.t_hat);
    } catch (const DegenerateError&) {
        throw DegenerateError("CY-condition fails");
    }
    std::vector<RJet> kappa(n);
    for (int i = 0; i < n; ++i) {
        if (!T::is_zero(c[1 + n + i].constant_term())) throw InputError("opposite block pattern mismatch");
        kappa[i] = compose(c[1 + n + i], x);
    }
    RJet klast = compose(c[m - 1], x);

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!compare(kappa[i].diff(j), kappa[j].diff(i)).equal)
                throw ContextError("not flat/not isotropic input: curl of kappa is not symmetric");

    // straight-line integration: Psi = sum_i t_i kappa_i(t) / (deg + 1) termwise
    int ord = klast.order();
    for (auto& k : kappa) ord = std::min(ord, k.order() + 1);
    RJet psi(n, ord);
    for (int i = 0; i < n; ++i)
        for (auto& [k, v] : kappa[i].terms()) {
            if (mono::degree(k) + 1 > ord) continue;
            psi.add(k + mono::unit(i), v / Rational(mono::degree(k) + 1));
        }
    res.psi_hat = psi;

    CheckAccumulator acc(n, &names);
    acc.take(compare(klast, euler_shift(psi, 2)), "last coefficient vs (E-2)Psi");
    res.report.add(acc.finish("kappa_last"));
    CheckAccumulator acc2(n, &names);
    for (int i = 0; i < n; ++i) acc2.take(compare(psi.diff(i), kappa[i]), "gradient");
    res.report.add(acc2.finish("potential_gradient"));
    return res;
}

PeriodMap period_map(const FlatFrameModel& mod) {
    const int n = mod.n, m = 2 * n + 2;
    const auto p = hodge_levels(n);
    const auto names = base_names(n);
    PeriodMap pm;
    for (int lev = 0; lev <= 3; ++lev) {
        std::vector<int> cols;
        for (int a = 0; a < m; ++a)
            if (p[a] >= lev) cols.push_back(a);
        RMatrix f(m, int(cols.size()), n, mod.order);
        for (int c = 0; c < int(cols.size()); ++c)
            for (int r = 0; r < m; ++r) f(r, c) = mod.V(r, cols[c]);
        pm.flag.push_back(f);
    }
    RMatrix Sj = RMatrix::from_constant(mod.S, n, mod.order);
    RMatrix f2 = pm.flag[2];
    RMatrix gram = f2.transpose() * Sj * f2;
    CheckAccumulator acc(n, &names);
    acc.take(compare(gram, RMatrix(gram.rows, gram.cols, n, gram.order())), "S(F2,F2)");
    pm.report.add(acc.finish("lagrangian"));
    return pm;
}

GradedAlgebra graded_algebra_at_origin(const FlatFrameModel& mod, const Rational& lambda) {
    if (lambda == 0) throw InputError("lambda_scale must be nonzero");
    const int n = mod.n, m = 2 * n + 2;
    const auto p = hodge_levels(n);
    auto gam = connection_from_frame(mod);
    std::vector<Mat<Rational>> g0;
    for (auto& g : gam) g0.push_back(g.constant_part());

    // Q(j, i): component of C_{d_i} v0_1 along v0_j
    Mat<Rational> q(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) q(j, i) = g0[i](1 + j, 0);
    Mat<Rational> qi = inverse(q);
    // v0_j corresponds to (1/lambda) sum_i qi(i, j) C_{d_i} lambda_0
    auto higgs_of_slot = [&](int j) {  // C acting as v0_j (up to 1/lambda)
        Mat<Rational> c(m, m);
        for (int i = 0; i < n; ++i) {
            Mat<Rational> t = g0[i];
            for (auto& x : t.a) x *= qi(i, j);
            c = c + t;
        }
        return c;
    };

    GradedAlgebra alg;
    alg.m = m;
    alg.c.assign(std::size_t(m) * m * m, Rational(0));
    Rational inv = Rational(1) / lambda;
    auto set_sym = [&](int g_, int a, int b, const Rational& v) {
        alg.at(g_, a, b) = v;
        alg.at(g_, b, a) = v;
    };
    // unit lambda v0_1: v0_1 o X = X / lambda
    for (int b = 0; b < m; ++b) set_sym(b, 0, b, inv);
    std::vector<Mat<Rational>> ch;
    for (int j = 0; j < n; ++j) ch.push_back(higgs_of_slot(j));
    for (int j = 0; j < n; ++j) {
        // v0_j o v0_k = (1/lambda) C_j C_k v0_1
        for (int k = 0; k < n; ++k) {
            Mat<Rational> prod = ch[j] * ch[k];
            for (int g_ = 0; g_ < m; ++g_)
                if (p[g_] == 1) set_sym(g_, 1 + j, 1 + k, prod(g_, 0) * inv);
        }
        // v0_j o W = (1/lambda) C_j W, W in F^1/F^2
        for (int a = n + 1; a <= 2 * n; ++a)
            for (int g_ = 0; g_ < m; ++g_)
                if (p[g_] == 0) set_sym(g_, 1 + j, a, ch[j](g_, a) * inv);
    }
    alg.g = Mat<Rational>(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) alg.g(a, b) = (p[a] % 2 ? Rational(-1) : Rational(1)) * mod.S(a, b);
    return alg;
}

nlohmann::json model_to_json(const FlatFrameModel& mod) {
    return {{"n", mod.n}, {"order", mod.order}, {"psi", jet_to_json(mod.psi)}, {"V", matrix_to_json(mod.V)}};
}

FlatFrameModel model_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("order") || !j.contains("psi"))
        throw InputError("model needs n, order, psi");
    int n = j.at("n").get<int>(), order = j.at("order").get<int>();
    if (n < 1 || 2 * n + 2 > kMaxVars) throw InputError("unsupported n");
    if (order < 3 || order > kMaxOrder) throw InputError("unsupported order");
    RJet psi = jet_from_json<Rational>(j.at("psi"), n, order);
    FlatFrameModel mod = build_frame(psi, n, order);
    if (j.contains("V")) {
        RMatrix V = matrix_from_json<Rational>(j.at("V"), n, order);
        if (V.rows != 2 * n + 2 || V.cols != 2 * n + 2) throw InputError("V has wrong shape");
        mod.V = V;
    }
    return mod;
}

}  // namespace specfrob::vhs
