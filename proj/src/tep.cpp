#include "specfrob/tep.hpp"

#include "specfrob/check_util.hpp"

namespace specfrob::tep {

namespace {

using T = ScalarTraits<Rational>;

std::vector<int> shift_map(int n) {
    std::vector<int> map(n);
    for (int i = 0; i < n; ++i) map[i] = i + 1;
    return map;
}

RJet embed_base(const RJet& j, int n) { return j.embed(2 * n + 2, shift_map(n)); }

RMatrix embed_base(const RMatrix& a, int n) {
    RMatrix r(a.rows, a.cols, 2 * n + 2, a.order());
    for (std::size_t i = 0; i < a.e.size(); ++i) r.e[i] = embed_base(a.e[i], n);
    return r;
}

RLaurent lconst(int nv, int ord, int power, const Rational& c) { return RLaurent::monomial(nv, ord, power, c); }

LMatrix diag_z(const std::vector<int>& powers, int nv, int ord) {
    const int m = int(powers.size());
    LMatrix d(m, m, nv, ord);
    for (int a = 0; a < m; ++a) d(a, a) = lconst(nv, ord, powers[a], Rational(1));
    return d;
}

LMatrix constant_diag(const std::vector<Rational>& v, int nv, int ord) {
    const int m = int(v.size());
    LMatrix d(m, m, nv, ord);
    for (int a = 0; a < m; ++a) d(a, a) = lconst(nv, ord, 0, v[a]);
    return d;
}

LMatrix fiber_matrix(int n, int ord, const Perturbation& pert) {
    const int m = 2 * n + 2;
    LMatrix y = LMatrix::identity(m, m, ord);
    for (int a = n + 1; a <= 2 * n; ++a) y(a, 0) = RLaurent::from_jet(RJet::variable(m, ord, a), -1);
    y(m - 1, 0) = RLaurent::from_jet(RJet::variable(m, ord, m - 1), -1);
    if (!T::is_zero(pert.x_top)) y(m - 1, 0) += lconst(m, ord, -2, pert.x_top);
    for (int i = 1; i <= n; ++i) {
        RJet x = RJet::variable(m, ord, n + i);
        if (i - 1 < int(pert.x_shift.size())) x += RJet::constant(m, ord, pert.x_shift[i - 1]);
        y(m - 1, i) = RLaurent::from_jet(x, -1);
    }
    return y;
}

// Y is unipotent with N^2 = 0 in every model considered here.
LMatrix fiber_inverse(const LMatrix& y) {
    const int m = y.rows;
    LMatrix id = LMatrix::identity(m, y.nvars(), y.order());
    return id - (y - id);
}

LMatrix closed_form_A(const TEPModel& t, int x) {
    const int n = t.n, m = t.m, ord = t.order;
    LMatrix a(m, m, m, ord);
    auto one = [&](int r, int c) { a(r, c) = lconst(m, ord, 0, Rational(1)); };
    if (x == 0) {
        for (int k = 0; k < m; ++k) one(k, k);
    } else if (x <= n) {
        one(x, 0);
        RJet pe = embed_base(t.base.psi, n);
        RJet px = pe.diff(x);
        for (int i = 1; i <= n; ++i) {
            RJet pxi = px.diff(i);
            for (int k = 1; k <= n; ++k) a(n + k, i) = RLaurent::from_jet(pxi.diff(k));
        }
        one(m - 1, x + n);
    } else if (x <= 2 * n) {
        one(x, 0);
        one(m - 1, x - n);
    } else {
        one(m - 1, 0);
    }
    return a;
}

LMatrix closed_form_Az(const TEPModel& t) {
    const int n = t.n, m = t.m, ord = t.order;
    const auto p = vhs::hodge_levels(n);
    LMatrix a(m, m, m, ord);
    RJet y1 = RJet::variable(m, ord, 0);
    for (int k = 0; k < m; ++k) {
        a(k, k) = lconst(m, ord, 0, Rational(3 - p[k]));
        a(k, k) -= RLaurent::from_jet(y1, -1);
    }
    for (int b = n + 1; b <= 2 * n; ++b) a(b, 0) += RLaurent::from_jet(RJet::variable(m, ord, b), -1);
    a(m - 1, 0) += RLaurent::from_jet(RJet::variable(m, ord, m - 1) * Rational(2), -1);
    for (int i = 1; i <= n; ++i) a(m - 1, i) += RLaurent::from_jet(RJet::variable(m, ord, n + i), -1);
    return a;
}

// A from the sections: z d Sigma = Sigma A, with the y_1 twist added back.
void connection_from_sections(TEPModel& t) {
    const int m = t.m, ord = t.order;
    const auto p = vhs::hodge_levels(t.n);
    std::vector<Rational> w(m);
    for (int a = 0; a < m; ++a) w[a] = 3 - p[a];
    LMatrix yi = fiber_inverse(t.Y);
    LMatrix id = LMatrix::identity(m, m, ord);
    // Sigma^{-1} d_x Sigma = Y^{-1} D^{-1} (V^{-1} d_x V) D Y + Y^{-1} d_x Y
    RMatrix vi = inverse(t.Vm);
    std::vector<int> negp(m), posp(m);
    for (int a = 0; a < m; ++a) {
        posp[a] = 3 - p[a];
        negp[a] = p[a] - 3;
    }
    LMatrix d = diag_z(posp, m, ord), di = diag_z(negp, m, ord);
    t.A.assign(m, LMatrix());
    for (int x = 0; x < m; ++x) {
        LMatrix gam = LMatrix::from_jets(vi * t.Vm.diff(x));
        LMatrix a = yi * (di * gam * d) * t.Y + yi * t.Y.diff(x);
        a = a.shift(1);
        if (x == 0) a = a + id;
        t.A[x] = a;
    }
    RJet y1 = RJet::variable(m, ord, 0);
    LMatrix zdz = yi * constant_diag(w, m, ord) * t.Y + yi * t.Y.z_diff().shift(1);
    t.Az = zdz - id.shift(-1) * y1;
}

LMatrix twisted_derivative(const TEPModel& t, int x) {
    LMatrix lhs = t.sigma.diff(x).shift(1);
    if (x == 0) lhs = lhs + t.sigma;
    return lhs;
}

LMatrix omega(const TEPModel& t, int x) { return x < t.m ? t.A[x].shift(-1) : t.Az.shift(-1); }

LMatrix partial(const TEPModel& t, const LMatrix& a, int x) { return x < t.m ? a.diff(x) : a.z_diff(); }

struct Pushforward {
    CheckReport report;
    bool metric = false;
};

// phi maps U-coordinates to tilde coordinates; (c, e, E) live on U, the tilde
// versions on the target.
Pushforward pushforward(const FManifold& src, const FManifold& dst, const std::vector<RJet>& phi, const Mat<Rational>& g,
                        const std::vector<std::string>& names) {
    const int m = int(phi.size());
    const int ord = phi[0].order();
    std::vector<RJet> J(std::size_t(m) * m);
    for (int mu = 0; mu < m; ++mu)
        for (int a = 0; a < m; ++a) J[mu * m + a] = phi[mu].diff(a);
    auto composed = [&](const RJet& j) { return j.is_zero() ? j : compose(j, phi); };

    CheckAccumulator unit(m, &names), euler(m, &names), mult(m, &names), met(m, &names);
    for (int mu = 0; mu < m; ++mu) {
        RJet lu(m, ord), le(m, ord);
        for (int a = 0; a < m; ++a) {
            lu += J[mu * m + a] * src.e[a];
            le += J[mu * m + a] * src.E[a];
        }
        unit.take(compare(lu, composed(dst.e[mu])), "unit");
        euler.take(compare(le, composed(dst.E[mu])), "Euler field");
    }
    std::vector<RJet> cphi(dst.c.t.size());
    for (std::size_t i = 0; i < cphi.size(); ++i) cphi[i] = composed(dst.c.t[i]);
    auto cp = [&](int g_, int a, int b) -> const RJet& { return cphi[(std::size_t(g_) * m + a) * m + b]; };
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b)
            for (int mu = 0; mu < m; ++mu) {
                RJet lhs(m, ord);
                for (int g_ = 0; g_ < m; ++g_)
                    if (!src.c(g_, a, b).is_zero() && !J[mu * m + g_].is_zero()) lhs += src.c(g_, a, b) * J[mu * m + g_];
                RJet rhs(m, ord);
                for (int r = 0; r < m; ++r) {
                    if (J[r * m + a].is_zero()) continue;
                    for (int s = 0; s < m; ++s)
                        if (!J[s * m + b].is_zero() && !cp(mu, r, s).is_zero()) rhs += J[r * m + a] * J[s * m + b] * cp(mu, r, s);
                }
                mult.take(compare(lhs, rhs), "multiplication");
            }
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            RJet acc(m, ord - 1);
            for (int mu = 0; mu < m; ++mu)
                for (int nu = 0; nu < m; ++nu)
                    if (!T::is_zero(g(mu, nu))) acc += J[mu * m + a] * J[nu * m + b] * g(mu, nu);
            met.take(compare(acc, RJet::constant(m, ord - 1, g(a, b))), "metric");
        }
    Pushforward r;
    r.report.add(unit.finish("pushforward_unit"));
    r.report.add(euler.finish("pushforward_euler"));
    r.report.add(mult.finish("pushforward_multiplication"));
    Check mc = met.finish("metric_pullback");
    r.metric = mc.pass;
    r.report.add(mc);
    return r;
}

}  // namespace

bool Perturbation::active() const {
    if (!T::is_zero(x_top)) return true;
    for (auto& s : x_shift)
        if (!T::is_zero(s)) return true;
    return false;
}

std::vector<std::string> m_names(int n) {
    std::vector<std::string> v;
    v.push_back("y1");
    for (int i = 2; i <= n + 1; ++i) v.push_back("t" + std::to_string(i));
    for (int a = n + 2; a <= 2 * n + 2; ++a) v.push_back("y" + std::to_string(a));
    return v;
}

TEPModel build_tep(const vhs::FlatFrameModel& model, const Perturbation& pert) {
    TEPModel t;
    t.n = model.n;
    t.m = 2 * model.n + 2;
    t.order = model.psi.order();
    t.base = model;
    t.perturbation = pert;
    if (int(pert.x_shift.size()) > t.n) throw InputError("x_shift has more than n entries");
    const int m = t.m, ord = t.order;
    const auto p = vhs::hodge_levels(t.n);
    t.Vm = embed_base(model.V, t.n);
    std::vector<int> powers(m);
    for (int a = 0; a < m; ++a) powers[a] = 3 - p[a];
    t.D = diag_z(powers, m, ord);
    t.Y = fiber_matrix(t.n, ord, pert);
    t.sigma = LMatrix::from_jets(t.Vm) * t.D * t.Y;
    if (pert.active()) {
        connection_from_sections(t);
    } else {
        for (int x = 0; x < m; ++x) t.A.push_back(closed_form_A(t, x));
        t.Az = closed_form_Az(t);
    }
    LMatrix s = LMatrix::from_jets(RMatrix::from_constant(model.S, m, ord));
    t.P = t.sigma.transpose() * s * t.sigma.reflect();
    return t;
}

LMatrix sigma_in_s_basis(const TEPModel& t) {
    const auto p = vhs::hodge_levels(t.n);
    std::vector<int> negp(t.m);
    for (int a = 0; a < t.m; ++a) negp[a] = p[a] - 3;
    return diag_z(negp, t.m, t.order) * t.sigma;
}

CheckReport verify_tep(const TEPModel& t) {
    const int m = t.m, ord = t.order;
    const auto names = m_names(t.n);
    CheckReport rep;

    CheckAccumulator cons(m, &names);
    for (int x = 0; x < m; ++x) cons.take(compare(twisted_derivative(t, x), t.sigma * t.A[x]), "direction " + names[x]);
    {
        RJet y1 = RJet::variable(m, ord, 0);
        LMatrix lhs = t.sigma.z_diff().shift(1) - (t.sigma * y1).shift(-1);
        cons.take(compare(lhs, t.sigma * t.Az), "direction z");
    }
    rep.add(cons.finish("sections_consistency"));

    CheckAccumulator flat(m, &names);
    std::vector<LMatrix> w;
    for (int x = 0; x <= m; ++x) w.push_back(omega(t, x));
    for (int x = 0; x <= m; ++x)
        for (int y = x + 1; y <= m; ++y) {
            LMatrix curv = partial(t, w[x], y) - partial(t, w[y], x) + w[y] * w[x] - w[x] * w[y];
            LMatrix zero(m, m, m, curv.order(), curv.zmax());
            flat.take(compare(curv, zero), "pair " + (x < m ? names[x] : "z") + "," + (y < m ? names[y] : "z"));
        }
    rep.add(flat.finish("flatness"));

    bool rank = true;
    std::string where;
    for (int x = 0; x < m; ++x)
        if (t.A[x].valuation() < 0) {
            rank = false;
            where = "pole along " + names[x];
            break;
        }
    if (rank && t.Az.valuation() < -1) {
        rank = false;
        where = "pole of order above two in z";
    }
    rep.add("poincare_rank_one", rank, 0.0, {}, where);

    {
        Mat<Rational> g = frobenius::metric<Rational>(t.n);
        LMatrix want = LMatrix::from_jets(RMatrix::from_constant(g, m, ord), 3);
        CheckAccumulator pa(m, &names);
        pa.take(compare(t.P, want), "P = z^3 g");
        rep.add(pa.finish("pairing_normal_form"));
    }

    CheckAccumulator pf(m, &names);
    for (int x = 0; x <= m; ++x) {
        LMatrix lhs = partial(t, t.P, x);
        LMatrix rhs = x < m ? w[x].transpose() * t.P + t.P * w[x].reflect() : w[x].transpose() * t.P - t.P * w[x].reflect();
        pf.take(compare(lhs, rhs), x < m ? names[x] : "z");
    }
    rep.add(pf.finish("pairing_flat"));

    // Leading z-orders of the sections and their leading coefficients.
    const auto p = vhs::hodge_levels(t.n);
    bool spec = true;
    RMatrix lead(m, m, m, ord);
    for (int a = 0; a < m; ++a) {
        int v = kZExact;
        for (int r = 0; r < m; ++r) v = std::min(v, t.sigma(r, a).valuation());
        if (v != 3 - p[a]) spec = false;
        for (int r = 0; r < m; ++r) lead(r, a) = t.sigma(r, a).coeff(v);
    }
    rep.add("spectrum", spec);
    bool lead_ok = !T::is_zero(determinant(lead.constant_part()));
    rep.add("leading_invertible", lead_ok);
    CheckAccumulator hf(m, &names);
    hf.take(compare(lead, t.Vm), "leading terms");
    rep.add(hf.finish("hodge_filtration"));
    return rep;
}

FManifold extract_fmanifold(const TEPModel& t) {
    const int m = t.m;
    const auto names = m_names(t.n);
    FManifold f;
    for (int x = 0; x < m; ++x)
        if (t.A[x].valuation() < 0) throw ContextError("connection has a pole along " + names[x]);
    std::vector<RMatrix> C;
    for (int x = 0; x < m; ++x) C.push_back(t.A[x].coeff(0));
    RMatrix U = t.Az.coeff(-1);
    int ord = U.order();
    for (auto& c : C) ord = std::min(ord, c.order());
    RMatrix xi(m, m, m, ord);
    for (int x = 0; x < m; ++x)
        for (int r = 0; r < m; ++r) xi(r, x) = C[x](r, 0);
    RMatrix xii = inverse(xi);
    f.report.add("generator_condition", true);

    f.c = Tensor12<Rational>(m, m, ord);
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
            std::vector<RJet> w(m, RJet(m, ord));
            for (int r = 0; r < m; ++r)
                for (int k = 0; k < m; ++k)
                    if (!C[a](r, k).is_zero() && !xi(k, b).is_zero()) w[r] += C[a](r, k) * xi(k, b);
            for (int g = 0; g < m; ++g) {
                RJet acc(m, ord);
                for (int r = 0; r < m; ++r)
                    if (!xii(g, r).is_zero() && !w[r].is_zero()) acc += xii(g, r) * w[r];
                f.c(g, a, b) = acc;
                f.c(g, b, a) = acc;
            }
        }
    f.e.assign(m, RJet(m, ord));
    f.E.assign(m, RJet(m, ord));
    for (int g = 0; g < m; ++g) {
        f.e[g] = xii(g, 0);
        for (int r = 0; r < m; ++r)
            if (!xii(g, r).is_zero() && !U(r, 0).is_zero()) f.E[g] -= xii(g, r) * U(r, 0);
    }

    CheckAccumulator comm(m, &names);
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) comm.take(compare(C[a] * C[b], C[b] * C[a]), names[a] + "," + names[b]);
    for (int a = 0; a < m; ++a) comm.take(compare(C[a] * U, U * C[a]), names[a] + ",U");
    f.report.add(comm.finish("higgs_commute"));
    return f;
}

CheckReport compare_with_frobenius(const FManifold& f, const frobenius::FrobeniusStructure<Rational>& fs) {
    const int m = fs.m;
    const auto names = m_names(fs.n);
    CheckReport rep;
    CheckAccumulator cc(m, &names), ee(m, &names);
    for (std::size_t i = 0; i < f.c.t.size(); ++i) cc.take(compare(f.c.t[i], fs.c.t[i]), "structure constants");
    for (int a = 0; a < m; ++a) {
        ee.take(compare(f.e[a], fs.e[a]), "unit");
        ee.take(compare(f.E[a], fs.E[a]), "Euler field");
    }
    rep.add(cc.finish("multiplication_matches"));
    rep.add(ee.finish("unit_euler_match"));
    return rep;
}

CStarResult cstar_action(const TEPModel& t, const Rational& r) {
    if (T::is_zero(r)) throw InputError("r must be nonzero");
    const int n = t.n, m = t.m, ord = t.order;
    const auto names = m_names(n);
    const auto p = vhs::hodge_levels(n);
    CStarResult res;
    res.fiber_scaling.assign(m, Rational(1));
    for (int a = n + 1; a <= 2 * n; ++a) res.fiber_scaling[a] = r;
    res.fiber_scaling[m - 1] = r * r;
    res.sigma = t.sigma.scale_z(r);

    auto rescale = [&](const RJet& j) {
        RJet out(j.nvars(), j.order());
        for (auto& [k, c] : j.terms()) {
            Rational f = c;
            for (int v = 0; v < m; ++v)
                for (int e = 0; e < mono::exponent(k, v); ++e) f *= res.fiber_scaling[v];
            out.add(k, f);
        }
        return out;
    };
    LMatrix moved = t.sigma.map([&](const RLaurent& l) {
        RLaurent o(l.nvars, l.order, l.zmax);
        for (auto& [k, j] : l.c) o.set(k, rescale(j));
        return o;
    });
    std::vector<Rational> wr(m), w(m);
    for (int a = 0; a < m; ++a) {
        w[a] = 3 - p[a];
        Rational f = 1;
        for (int e = 0; e < 3 - p[a]; ++e) f *= r;
        wr[a] = f;
    }
    CheckAccumulator sc(m, &names);
    sc.take(compare(res.sigma, moved * constant_diag(wr, m, ord)), "pulled sections");
    res.report.add(sc.finish("scaling_identity"));

    // infinitesimal form: z d_z Sigma - E_BL(Sigma) = Sigma diag(3 - p)
    LMatrix ebl(m, m, m, ord - 1);
    for (int a = n + 1; a <= 2 * n; ++a) ebl = ebl + t.sigma.diff(a) * RJet::variable(m, ord, a);
    ebl = ebl + t.sigma.diff(m - 1) * (RJet::variable(m, ord, m - 1) * Rational(2));
    CheckAccumulator gen(m, &names);
    gen.take(compare(t.sigma.z_diff().shift(1) - ebl, t.sigma * constant_diag(w, m, ord)), "generator");
    res.report.add(gen.finish("generator_identity"));
    return res;
}

void validate_frame_change(const Mat<Rational>& M, int n) {
    const int m = 2 * n + 2;
    if (M.rows != m || M.cols != m) throw InputError("frame change must be (2n+2) x (2n+2)");
    Mat<Rational> s = vhs::pairing_matrix(n);
    Mat<Rational> pulled = M.transpose() * s * M;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (pulled(a, b) != s(a, b)) throw InputError("frame change does not preserve the pairing");
    for (int a = 0; a < m; ++a)
        if (M(a, 0) != (a == 0 ? 1 : 0)) throw InputError("frame change must fix the first flat vector");
    const auto p = vhs::hodge_levels(n);
    for (int b = 0; b < m; ++b)
        for (int a = 0; a < m; ++a)
            if (p[b] < p[a] && M(b, a) != 0) throw InputError("frame change must preserve the limiting filtration");
}

RechartResult rechart(const vhs::FlatFrameModel& model, const Mat<Rational>& M, int zmax) {
    const int n = model.n, m = 2 * n + 2;
    validate_frame_change(M, n);
    const auto names = m_names(n);
    const auto p = vhs::hodge_levels(n);
    RechartResult res;
    res.report.add("frame_change_valid", true);
    const int ord = model.psi.order();

    RMatrix Mj = RMatrix::from_constant(M, n, ord);
    RMatrix w = RMatrix::from_constant(inverse(M), n, ord) * model.V;
    vhs::FrameExtraction lr = vhs::extract_prepotential(w, n);
    res.t_tilde = lr.t_hat;
    res.psi_tilde = lr.psi_hat;
    res.report.merge(lr.report, "extract.");

    vhs::FlatFrameModel tilde = vhs::build_frame(res.psi_tilde, n, res.psi_tilde.order());
    RMatrix vt(m, m, n, ord);
    for (std::size_t i = 0; i < vt.e.size(); ++i)
        vt.e[i] = tilde.V.e[i].is_zero() ? RJet(n, ord) : compose(tilde.V.e[i], res.t_tilde);
    RMatrix R = inverse(model.V) * Mj * vt;
    bool adapted = true;
    for (int b = 0; b < m; ++b)
        for (int a = 0; a < m; ++a)
            if (p[b] < p[a] && !R(b, a).is_zero()) adapted = false;
    res.report.add("adapted_transition", adapted);
    if (!adapted) return res;

    // H = D^{-1} R D is holomorphic in z; B = H^{-1} Y = Y~ G.
    LMatrix H(m, m, m, R.max_order());
    for (int b = 0; b < m; ++b)
        for (int a = 0; a < m; ++a) H(b, a) = RLaurent::from_jet(embed_base(R(b, a), n), p[b] - p[a]);
    LMatrix Y = fiber_matrix(n, ord, {});
    LMatrix B = series_inverse(H, std::max(zmax, 2)) * Y;

    // Birkhoff step with the ansatz Y~^{-1} = I + M1 z^{-1}: the z^{-1} part of
    // (I + M1/z) B vanishes iff M1 = -B_{-1} B_0^{-1}; the z^{-2} part must vanish too.
    RMatrix b0 = B.coeff(0), bm1 = B.coeff(-1);
    RMatrix M1 = bm1 * inverse(b0) * Rational(-1);
    bool consistent = B.valuation() >= -1;
    CheckAccumulator bc(m, &names);
    RMatrix resid = M1 * bm1;
    bc.take(compare(resid, RMatrix(m, m, m, resid.order())), "z^-2 part");
    if (!consistent) bc.fail("B has poles of order above one");
    res.report.add(bc.finish("birkhoff_consistent"));

    // Y~ = I - M1 z^{-1}; its nilpotent part N = -M1.
    RMatrix N = M1 * Rational(-1);
    bool pattern = true;
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) {
            bool allowed = (c == 0 && r >= n + 1) || (r == m - 1 && c >= 1 && c <= n);
            if (!allowed && !N(r, c).is_zero()) pattern = false;
        }
    CheckAccumulator pc(m, &names);
    for (int i = 1; i <= n; ++i) pc.take(compare(N(m - 1, i), N(n + i, 0)), "fiber coordinates agree");
    if (!pattern) pc.fail("entries outside the normal form");
    res.report.add(pc.finish("normal_form_pattern"));

    res.phi.assign(m, RJet(m, ord));
    res.phi[0] = RJet::variable(m, ord, 0);
    for (int i = 0; i < n; ++i) res.phi[i + 1] = embed_base(res.t_tilde[i], n);
    for (int a = n + 1; a < m; ++a) res.phi[a] = N(a, 0);

    FManifold src = extract_fmanifold(build_tep(model));
    FManifold dst = extract_fmanifold(build_tep(tilde));
    Pushforward pf = pushforward(src, dst, res.phi, frobenius::metric<Rational>(n), names);
    res.report.merge(pf.report);
    res.constants_equal = pf.report.passed("pushforward_unit") && pf.report.passed("pushforward_euler") &&
                          pf.report.passed("pushforward_multiplication");
    res.metrics_equal = pf.metric;
    return res;
}

}  // namespace specfrob::tep
