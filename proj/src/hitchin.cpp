#include "specfrob/hitchin.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "specfrob/linalg.hpp"
#include "specfrob/parallel.hpp"

namespace specfrob::hitchin {

namespace {

const cd I(0.0, 1.0);

double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double max_abs(const CVec& v) {
    double r = 0.0;
    for (auto& x : v) r = std::max(r, std::abs(x));
    return r;
}

double cond(const CMat& m) {
    Eigen::JacobiSVD<CMat> svd(m);
    auto s = svd.singularValues();
    if (s.size() == 0) return 0.0;
    double lo = s(s.size() - 1);
    return lo == 0.0 ? INFINITY : s(0) / lo;
}

Check make_check(const std::string& name, bool pass, double err, const std::string& detail = {}) {
    Check c;
    c.name = name;
    c.pass = pass;
    c.max_abs_error = err;
    c.detail = detail;
    return c;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
}

// Monomial degree of a polynomial, or -1 if it has more than one term.
int monomial_degree(const CVec& p) {
    int deg = -1;
    for (int i = 0; i < int(p.size()); ++i)
        if (p[i] != 0.0) {
            if (deg >= 0) return -1;
            deg = i;
        }
    return deg;
}

int poly_degree(const CVec& p) {
    for (int i = int(p.size()) - 1; i >= 0; --i)
        if (p[i] != 0.0) return i;
    return -1;
}

cd newton_polish(const CVec& q, const CVec& dq, cd z) {
    for (int it = 0; it < 60; ++it) {
        cd d = poly_eval(dq, z);
        if (d == 0.0) break;
        cd step = poly_eval(q, z) / d;
        z -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
    }
    return z;
}

double min_separation(const CVec& e) {
    double s = INFINITY;
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j) s = std::min(s, std::abs(e[i] - e[j]));
    return s;
}

BranchPoints finish_roots(CVec e, double sep_min) {
    BranchPoints bp;
    bp.e = std::move(e);
    bp.scale = std::max(1.0, max_abs(bp.e));
    bp.min_separation = min_separation(bp.e);
    if (bp.min_separation < sep_min * bp.scale)
        throw DiscriminantError("branch points closer than " + fmt(sep_min * bp.scale) +
                                ": near the discriminant locus");
    return bp;
}

// The branch of y = sqrt(q) that is analytic off the cuts and ~ sqrt(lc) z^{D/2}
// at infinity; for odd degree the last root is joined to infinity along the ray
// pointing away from the centroid of the roots.
struct Branch {
    cd sqrt_lc;
    std::vector<std::pair<cd, cd>> cuts;
    bool odd = false;
    cd inf_root, dir, sqrt_dir;

    Branch(const CVec& q, const BranchPoints& bp) {
        const int D = poly_degree(q);
        sqrt_lc = std::sqrt(q[D]);
        for (int k = 0; k + 1 < D; k += 2) cuts.emplace_back(bp.e[k], bp.e[k + 1]);
        odd = D % 2 == 1;
        if (odd) {
            inf_root = bp.e[D - 1];
            cd centroid = 0.0;
            for (auto& x : bp.e) centroid += x;
            centroid /= double(D);
            dir = inf_root - centroid;
            dir = std::abs(dir) > 0 ? dir / std::abs(dir) : cd(1.0);
            sqrt_dir = std::sqrt(dir);
        }
    }
    static cd cut_factor(const std::pair<cd, cd>& ab, cd z) {
        cd c = 0.5 * (ab.first + ab.second);
        cd zc = z - c;
        return zc * std::sqrt((z - ab.first) * (z - ab.second) / (zc * zc));
    }
    cd inf_factor(cd z) const { return I * sqrt_dir * std::sqrt(-(z - inf_root) / dir); }
    cd y(cd z, int skip_cut = -1) const {
        cd r = sqrt_lc;
        for (int k = 0; k < int(cuts.size()); ++k)
            if (k != skip_cut) r *= cut_factor(cuts[k], z);
        if (odd) r *= inf_factor(z);
        return r;
    }
};

struct Segment {
    cd a, b;
};

double cross(cd u, cd v) { return u.real() * v.imag() - u.imag() * v.real(); }

bool segments_meet(const Segment& s, const Segment& t) {
    auto orient = [](cd p, cd q, cd r) { return cross(q - p, r - p); };
    double d1 = orient(t.a, t.b, s.a), d2 = orient(t.a, t.b, s.b);
    double d3 = orient(s.a, s.b, t.a), d4 = orient(s.a, s.b, t.b);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
    auto on = [&](cd p, cd q, cd r, double d) {  // r on segment pq, collinear
        return d == 0 && std::min(p.real(), q.real()) <= r.real() && r.real() <= std::max(p.real(), q.real()) &&
               std::min(p.imag(), q.imag()) <= r.imag() && r.imag() <= std::max(p.imag(), q.imag());
    };
    return on(t.a, t.b, s.a, d1) || on(t.a, t.b, s.b, d2) || on(s.a, s.b, t.a, d3) || on(s.a, s.b, t.b, d4);
}

CVec real_unit(int d, int j) {
    CVec v(d, 0.0);
    v[j] = 1.0;
    return v;
}

CVec add(const CVec& u, const CVec& v, cd s = 1.0) {
    CVec r = u;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += s * v[i];
    return r;
}

double u_scale(const CVec& u) { return std::max(1.0, max_abs(u)); }

// Only the lambda periods, at roots continued from `from`.
CyclePeriods lambda_at(const Family& f, const BranchPoints& from, const CVec& u) {
    BranchPoints bp = track(f, from, u);
    return cycle_periods(f.q(u), bp, sw_differential(), f.quad);
}

}  // namespace

// ---------------- combinatorics ----------------

std::vector<std::string> root_system_labels() { return {"A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4"}; }

RootSystemData root_system(const std::string& label) {
    static const std::map<std::string, RootSystemData> table = {
        {"A1", {"A1", 1, {2}, 2, 2}},
        {"A2", {"A2", 2, {2, 3}, 6, 6}},
        {"A3", {"A3", 3, {2, 3, 4}, 24, 12}},
        {"B2", {"B2", 2, {2, 4}, 8, 8}},
        {"B3", {"B3", 3, {2, 4, 6}, 48, 18}},
        {"C3", {"C3", 3, {2, 4, 6}, 48, 18}},
        {"D4", {"D4", 4, {2, 4, 4, 6}, 192, 24}},
        {"G2", {"G2", 2, {2, 6}, 12, 12}},
        {"F4", {"F4", 4, {2, 6, 8, 12}, 1152, 48}},
    };
    auto it = table.find(label);
    if (it == table.end()) throw InputError("unknown root system: " + label);
    return it->second;
}

Combinatorics combinatorics(const RootSystemData& group, const CurveData& curve) {
    if (curve.genus < 2) throw InputError("curve genus must be at least 2");
    Combinatorics c;
    c.group = group;
    c.curve = curve;
    const long K = curve.canonical_degree();
    // h^0(K^d) = (2d - 1)(g - 1) for d >= 2
    for (int d : group.degrees) c.dim_B += long(2 * d - 1) * (curve.genus - 1);
    c.deg_D_int = group.weyl_order * K;
    c.deg_D_br = long(group.roots) * K;
    c.genus_cameral = group.weyl_order * K / 2 + K * group.roots / 2 + 1;
    c.half_dim_ok = c.dim_B == long(group.dim_group()) * (curve.genus - 1);

    long sum_d = 0, prod_d = 1;
    for (int d : group.degrees) {
        sum_d += d;
        prod_d *= d;
    }
    c.report.add(make_check("degree_sum", sum_d == group.roots / 2 + group.rank, 0.0,
                            "sum d_i = " + std::to_string(sum_d)));
    c.report.add(make_check("degree_product", prod_d == group.weyl_order, 0.0,
                            "prod d_i = " + std::to_string(prod_d)));
    c.report.add(make_check("divisor_degree", c.deg_D_int + c.deg_D_br == 2 * c.genus_cameral - 2, 0.0,
                            std::to_string(c.deg_D_int) + " + " + std::to_string(c.deg_D_br) + " vs 2*" +
                                std::to_string(c.genus_cameral) + " - 2"));
    c.report.add(make_check("half_dimension", c.half_dim_ok, 0.0,
                            "dim B = " + std::to_string(c.dim_B) + ", dim G (g-1) = " +
                                std::to_string(long(group.dim_group()) * (curve.genus - 1))));
    return c;
}

nlohmann::json to_json(const Combinatorics& c) {
    return {{"group", c.group.label},
            {"genus", c.curve.genus},
            {"rank", c.group.rank},
            {"degrees", c.group.degrees},
            {"weyl_order", c.group.weyl_order},
            {"roots", c.group.roots},
            {"dim_G", c.group.dim_group()},
            {"dim_B", c.dim_B},
            {"genus_cameral", c.genus_cameral},
            {"deg_D_int", c.deg_D_int},
            {"deg_D_br", c.deg_D_br},
            {"half_dim_ok", c.half_dim_ok},
            {"checks", specfrob::to_json(c.report)}};
}

// ---------------- polynomials and families ----------------

cd poly_eval(const CVec& p, cd z) {
    cd r = 0.0;
    for (int i = int(p.size()) - 1; i >= 0; --i) r = r * z + p[i];
    return r;
}

CVec poly_deriv(const CVec& p) {
    CVec r;
    for (std::size_t i = 1; i < p.size(); ++i) r.push_back(double(i) * p[i]);
    if (r.empty()) r.push_back(0.0);
    return r;
}

int Family::degree() const { return poly_degree(q0); }

CVec Family::q(const CVec& u) const {
    if (u.size() != phis.size()) throw InputError("parameter count does not match the deformation directions");
    CVec r = q0;
    for (std::size_t j = 0; j < phis.size(); ++j) {
        if (phis[j].size() > r.size()) r.resize(phis[j].size(), 0.0);
        for (std::size_t i = 0; i < phis[j].size(); ++i) r[i] += u[j] * phis[j][i];
    }
    return r;
}

void Family::validate() const {
    const int D = degree();
    if (D < 3) throw InputError("q0 must have degree at least 3");
    for (auto& p : phis)
        if (poly_degree(p) >= D) throw InputError("deformation directions must have degree below deg q0");
    if (u_star.size() != phis.size()) throw InputError("u_star must have one entry per deformation direction");
    if (quad.nodes < 8) throw InputError("quadrature needs at least 8 nodes");
    if (!(quad.fd_step > 0)) throw InputError("fd_step must be positive");
    if (grid.points < 1 || grid.fit_degree < 1) throw InputError("grid needs points >= 1 and fit_degree >= 1");
}

cd complex_from_json(const nlohmann::json& j) {
    if (j.is_number()) return cd(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cd(j[0].get<double>(), j[1].get<double>());
    if (j.is_object() && j.contains("re")) return cd(j.at("re").get<double>(), j.value("im", 0.0));
    throw InputError("complex numbers are written as x, [re, im] or {re, im}");
}

nlohmann::json cvec_to_json(const CVec& v) {
    nlohmann::json a = nlohmann::json::array();
    for (auto& x : v) a.push_back({x.real(), x.imag()});
    return a;
}

nlohmann::json cmat_to_json(const CMat& m) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        a.push_back(row);
    }
    return a;
}

namespace {
CVec cvec_from_json(const nlohmann::json& j, const char* what) {
    if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
    CVec v;
    for (auto& x : j) v.push_back(complex_from_json(x));
    return v;
}
}  // namespace

Family family_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("q0") || !j.contains("phis") || !j.contains("u_star"))
        throw InputError("family needs q0, phis and u_star");
    Family f;
    try {
        f.q0 = cvec_from_json(j.at("q0"), "q0");
        for (auto& p : j.at("phis")) f.phis.push_back(cvec_from_json(p, "phi"));
        f.u_star = cvec_from_json(j.at("u_star"), "u_star");
        if (j.contains("quadrature")) {
            auto& q = j.at("quadrature");
            f.quad.nodes = q.value("nodes_per_segment", q.value("nodes", f.quad.nodes));
            f.quad.fd_step = q.value("fd_step", f.quad.fd_step);
            f.quad.rel_tol = q.value("rel_tol", f.quad.rel_tol);
        }
        if (j.contains("tolerances")) {
            auto& t = j.at("tolerances");
            Tolerances& o = f.tol;
            o.sep_min = t.value("sep_min", o.sep_min);
            o.agm = t.value("agm", o.agm);
            o.cy = t.value("cy", o.cy);
            o.tau_symmetry = t.value("tau_symmetry", o.tau_symmetry);
            o.euler = t.value("euler", o.euler);
            o.cubic_symmetry = t.value("cubic_symmetry", o.cubic_symmetry);
            o.kappa = t.value("kappa", o.kappa);
            o.frobenius = t.value("frobenius", o.frobenius);
            o.consistency = t.value("consistency", o.consistency);
            o.z1_min = t.value("z1_min", o.z1_min);
            o.jacobian_cond = t.value("jacobian_cond", o.jacobian_cond);
        }
        if (j.contains("grid")) {
            auto& g = j.at("grid");
            f.grid.points = g.value("points", f.grid.points);
            f.grid.radius = g.value("radius", f.grid.radius);
            f.grid.fit_degree = g.value("fit_degree", f.grid.fit_degree);
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("family: ") + e.what());
    }
    f.validate();
    return f;
}

nlohmann::json family_to_json(const Family& f) {
    nlohmann::json phis = nlohmann::json::array();
    for (auto& p : f.phis) phis.push_back(cvec_to_json(p));
    const Tolerances& t = f.tol;
    return {{"q0", cvec_to_json(f.q0)},
            {"phis", phis},
            {"u_star", cvec_to_json(f.u_star)},
            {"quadrature", {{"nodes_per_segment", f.quad.nodes}, {"fd_step", f.quad.fd_step}, {"rel_tol", f.quad.rel_tol}}},
            {"tolerances",
             {{"sep_min", t.sep_min},
              {"agm", t.agm},
              {"cy", t.cy},
              {"tau_symmetry", t.tau_symmetry},
              {"euler", t.euler},
              {"cubic_symmetry", t.cubic_symmetry},
              {"kappa", t.kappa},
              {"frobenius", t.frobenius},
              {"consistency", t.consistency},
              {"z1_min", t.z1_min},
              {"jacobian_cond", t.jacobian_cond}}},
            {"grid", {{"points", f.grid.points}, {"radius", f.grid.radius}, {"fit_degree", f.grid.fit_degree}}}};
}

Family shipped_family() {
    Family f;
    f.q0 = {0, 0, 0, 0, 0, 0, 1};
    f.phis = {{1}, {0, 1}};
    // (-1, 0) itself carries extra automorphisms and a vanishing cubic
    f.u_star = {cd(-1.1, 0.05), cd(0.2, -0.1)};
    return f;
}

// ---------------- branch points ----------------

BranchPoints branch_points(const CVec& q, double sep_min) {
    const int D = poly_degree(q);
    if (D < 1) throw InputError("polynomial has no roots");
    CMat comp = CMat::Zero(D, D);
    for (int i = 1; i < D; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < D; ++i) comp(i, D - 1) = -q[i] / q[D];
    Eigen::ComplexEigenSolver<CMat> es(comp, false);
    if (es.info() != Eigen::Success) throw DiscriminantError("companion eigenvalues did not converge");
    CVec qq(q.begin(), q.begin() + D + 1), dq = poly_deriv(qq);
    CVec e;
    for (int i = 0; i < D; ++i) {
        cd z = newton_polish(qq, dq, es.eigenvalues()(i));
        double norm = 0.0;
        for (int k = 0; k <= D; ++k) norm += std::abs(qq[k]) * std::pow(std::abs(z), k);
        if (std::abs(poly_eval(qq, z)) > 1e-13 * norm) throw DiscriminantError("root polish did not reach 1e-13");
        e.push_back(z);
    }
    double scale = std::max(1.0, max_abs(e));
    std::sort(e.begin(), e.end(), [scale](cd a, cd b) {
        if (std::abs(a.real() - b.real()) > 1e-9 * scale) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return finish_roots(std::move(e), sep_min);
}

BranchPoints branch_points(const Family& f, const CVec& u) { return branch_points(f.q(u), f.tol.sep_min); }

BranchPoints track(const Family& f, const BranchPoints& from, const CVec& u) {
    CVec q = f.q(u), dq = poly_deriv(q);
    CVec e;
    for (auto& z : from.e) {
        cd p = newton_polish(q, dq, z);
        if (std::abs(p - z) >= 0.5 * from.min_separation) throw DiscriminantError("root tracking lost the ordering");
        e.push_back(p);
    }
    return finish_roots(std::move(e), f.tol.sep_min);
}

void check_basis_geometry(const BranchPoints& bp) {
    const int D = int(bp.e.size());
    const int g = (D - 1) / 2;
    std::vector<Segment> segs;
    std::vector<std::string> names;
    for (int k = 0; k + 1 < D; k += 2) {
        segs.push_back({bp.e[k], bp.e[k + 1]});
        names.push_back("cut " + std::to_string(k / 2 + 1));
    }
    for (int j = 0; j < g; ++j) {
        segs.push_back({bp.e[2 * j + 1], bp.e[2 * j + 2]});
        names.push_back("b-segment " + std::to_string(j + 1));
    }
    if (D % 2 == 1) {
        cd centroid = 0.0;
        for (auto& x : bp.e) centroid += x;
        centroid /= double(D);
        cd dir = bp.e[D - 1] - centroid;
        dir = std::abs(dir) > 0 ? dir / std::abs(dir) : cd(1.0);
        segs.push_back({bp.e[D - 1], bp.e[D - 1] + 1e6 * bp.scale * dir});
        names.push_back("ray");
    }
    auto shares = [](const Segment& s, const Segment& t) {
        return s.a == t.a || s.a == t.b || s.b == t.a || s.b == t.b;
    };
    for (std::size_t i = 0; i < segs.size(); ++i)
        for (std::size_t j = i + 1; j < segs.size(); ++j) {
            if (shares(segs[i], segs[j])) continue;
            if (segments_meet(segs[i], segs[j]))
                throw InputError("cycle basis: " + names[i] + " meets " + names[j]);
        }
}

// ---------------- quadrature ----------------

Differential sw_differential() { return {{1.0}, 1}; }

Differential dlambda(const Family& f, int j) {
    if (j < 0 || j >= f.dim()) throw InputError("direction out of range");
    Differential w{f.phis[j], -1};
    for (auto& c : w.r) c *= 0.5;
    return w;
}

Differential holomorphic(int k) {
    CVec r(k + 1, 0.0);
    r[k] = 1.0;
    return {r, -1};
}

PathIntegral segment_integral(const CVec& q, const BranchPoints& bp, const Differential& w, int from, int to,
                              int nodes) {
    const int D = int(bp.e.size());
    if (from < 0 || to < 0 || from >= D || to >= D || from == to) throw InputError("segment endpoints out of range");
    if (w.power != 1 && w.power != -1) throw InputError("differential power must be +1 or -1");
    Branch br(q, bp);
    const int lo = std::min(from, to), hi = std::max(from, to);
    const bool on_cut = lo % 2 == 0 && hi == lo + 1 && hi < 2 * int(br.cuts.size());
    const double sigma = on_cut && from > to ? -1.0 : 1.0;
    const cd a = bp.e[from], b = bp.e[to];
    const cd c = 0.5 * (a + b), h = 0.5 * (b - a);

    // y(z(s)) = sigma i h sqrt(1 - s^2) G(s) with G smooth on [-1, 1]
    auto G = [&](double s) -> cd {
        cd z = c + h * s;
        if (on_cut) return br.y(z, lo / 2);
        return br.y(z) / (I * h * std::sqrt(1.0 - s * s));
    };
    auto rule = [&](int N, double& l1) -> cd {
        cd sum = 0.0;
        l1 = 0.0;
        for (int k = 1; k <= N; ++k) {
            double s, wt;
            if (w.power == 1) {  // second kind: weight sqrt(1 - s^2)
                double th = k * M_PI / (N + 1);
                s = std::cos(th);
                wt = M_PI / (N + 1) * std::sin(th) * std::sin(th);
            } else {  // first kind: weight 1 / sqrt(1 - s^2)
                s = std::cos((2.0 * k - 1.0) * M_PI / (2.0 * N));
                wt = M_PI / N;
            }
            cd r = poly_eval(w.r, c + h * s);
            cd term = w.power == 1 ? r * G(s) : r / G(s);
            sum += wt * term;
            l1 += wt * std::abs(term);
        }
        if (w.power == 1) {
            l1 *= std::norm(h);
            return sigma * I * h * h * sum;
        }
        return sum / (sigma * I);
    };
    double l1a, l1b;
    cd coarse = rule(nodes, l1a);
    cd fine = rule(2 * nodes, l1b);
    PathIntegral out;
    out.value = fine;
    out.error = l1b > 0 ? std::abs(fine - coarse) / l1b : 0.0;
    return out;
}

CyclePeriods cycle_periods(const CVec& q, const BranchPoints& bp, const Differential& w, const QuadratureConfig& qc) {
    const int D = int(bp.e.size());
    const int g = (D - 1) / 2;
    CyclePeriods p;
    p.a.resize(g);
    p.b.assign(g, 0.0);
    CVec gamma(g);
    for (int k = 0; k < g; ++k) {
        auto ak = segment_integral(q, bp, w, 2 * k, 2 * k + 1, qc.nodes);
        auto gk = segment_integral(q, bp, w, 2 * k + 1, 2 * k + 2, qc.nodes);
        p.a[k] = 2.0 * ak.value;
        gamma[k] = 2.0 * gk.value;
        p.error = std::max({p.error, ak.error, gk.error});
    }
    for (int k = 0; k < g; ++k)
        for (int j = g - 1; j >= k; --j) p.b[k] += gamma[j];
    if (p.error > qc.rel_tol)
        throw QuadratureError("node doubling changed a period by " + fmt(p.error) + " (relative) with " +
                              std::to_string(qc.nodes) + " nodes; tolerance " + fmt(qc.rel_tol));
    return p;
}

// ---------------- periods ----------------

PeriodData periods(const Family& f, const CVec& u) { return periods(f, u, branch_points(f, u)); }

PeriodData periods(const Family& f, const CVec& u, const BranchPoints& bp) {
    check_basis_geometry(bp);
    const CVec q = f.q(u);
    PeriodData pd;
    pd.u = u;
    pd.bp = bp;
    auto lam = cycle_periods(q, bp, sw_differential(), f.quad);
    pd.z = lam.a;
    pd.w = lam.b;
    pd.quad_error = lam.error;
    const int g = int(pd.z.size()), d = f.dim();
    pd.dz = CMat::Zero(g, d);
    pd.dw = CMat::Zero(g, d);
    for (int j = 0; j < d; ++j) {
        auto pj = cycle_periods(q, bp, dlambda(f, j), f.quad);
        for (int i = 0; i < g; ++i) {
            pd.dz(i, j) = pj.a[i];
            pd.dw(i, j) = pj.b[i];
        }
        pd.quad_error = std::max(pd.quad_error, pj.error);
    }
    return pd;
}

namespace {
// u-weights making q weighted homogeneous with z of weight 1, if any.
bool euler_weights(const Family& f, std::vector<int>& weights) {
    const int D = f.degree();
    if (D % 2 != 0 || monomial_degree(f.q0) != D) return false;
    weights.clear();
    for (auto& p : f.phis) {
        int d = monomial_degree(p);
        if (d < 0) return false;
        weights.push_back(D - d);
    }
    return true;
}
}  // namespace

bool weighted_homogeneous(const Family& f) {
    std::vector<int> w;
    return euler_weights(f, w);
}

PeriodData scaled_periods(const Family& f, const PeriodData& base, cd xi) {
    std::vector<int> wts;
    if (!euler_weights(f, wts)) throw InputError("family is not weighted homogeneous");
    const int D = f.degree();
    const cd kappa = std::pow(xi, 2.0 / (D + 2));
    CVec u = base.u;
    for (std::size_t j = 0; j < u.size(); ++j) u[j] *= std::pow(kappa, wts[j]);
    CVec q = f.q(u), dq = poly_deriv(q);
    CVec e;
    for (auto& x : base.bp.e) e.push_back(newton_polish(q, dq, kappa * x));
    return periods(f, u, finish_roots(std::move(e), f.tol.sep_min));
}

CYResult cy_check(const Family& f, const CVec& u, const CVec& xis) {
    CYResult res;
    PeriodData pd = periods(f, u);
    const int g = int(pd.z.size()), d = f.dim();
    const double h = f.quad.fd_step * u_scale(u);
    CMat fd_z(g, d), fd_w(g, d), half_z(g, d), half_w(g, d);
    std::vector<CyclePeriods> evals(4 * d);
    parallel_for(evals.size(), [&](std::size_t idx) {
        const int j = int(idx / 4), kind = int(idx % 4);
        const double step = (kind < 2 ? h : 0.5 * h) * (kind % 2 == 0 ? 1.0 : -1.0);
        evals[idx] = lambda_at(f, pd.bp, add(u, real_unit(d, j), step));
    });
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < g; ++i) {
            auto& p = evals[4 * j];
            auto& m = evals[4 * j + 1];
            auto& p2 = evals[4 * j + 2];
            auto& m2 = evals[4 * j + 3];
            fd_z(i, j) = (p.a[i] - m.a[i]) / (2 * h);
            fd_w(i, j) = (p.b[i] - m.b[i]) / (2 * h);
            half_z(i, j) = (p2.a[i] - m2.a[i]) / h;
            half_w(i, j) = (p2.b[i] - m2.b[i]) / h;
        }
    const double ref = std::max(max_abs(pd.dz), max_abs(pd.dw));
    res.fd_deviation = std::max(max_abs(CMat(fd_z - pd.dz)), max_abs(CMat(fd_w - pd.dw))) / ref;
    res.richardson = std::max(max_abs(CMat(fd_z - half_z)), max_abs(CMat(fd_w - half_w))) / ref;
    res.report.add(make_check("gauss_manin_derivative", res.fd_deviation <= f.tol.cy, res.fd_deviation,
                              "central differences with step " + fmt(h) + "; Richardson gap " + fmt(res.richardson)));

    std::vector<int> wts;
    res.euler_applicable = euler_weights(f, wts);
    if (res.euler_applicable && !xis.empty()) {
        std::vector<PeriodData> scaled(xis.size());
        parallel_for(xis.size(), [&](std::size_t i) { scaled[i] = scaled_periods(f, pd, xis[i]); });
        const double zref = std::max(max_abs(pd.z), max_abs(pd.w));
        for (std::size_t i = 0; i < xis.size(); ++i) {
            for (int k = 0; k < g; ++k) {
                double dz = std::abs(scaled[i].z[k] - xis[i] * pd.z[k]);
                double dw = std::abs(scaled[i].w[k] - xis[i] * pd.w[k]);
                res.euler_deviation = std::max(res.euler_deviation, std::max(dz, dw) / (std::abs(xis[i]) * zref));
            }
        }
        res.report.add(make_check("euler_scaling", res.euler_deviation <= f.tol.euler, res.euler_deviation,
                                  std::to_string(xis.size()) + " scalings"));
    }
    return res;
}

TauResult period_matrix(const PeriodData& pd, const Tolerances& tol) {
    const int g = int(pd.dz.rows()), d = int(pd.dz.cols());
    if (g != d) throw InputError("period matrix needs as many parameters as the genus");
    double c = cond(pd.dz);
    if (!(c <= tol.jacobian_cond))
        throw DegenerateError("special-coordinate degeneracy: dz/du has condition " + fmt(c));
    TauResult r;
    r.tau = pd.dw * pd.dz.inverse();
    r.symmetry_defect = max_abs(CMat(r.tau - r.tau.transpose())) / max_abs(r.tau);
    r.report.add(make_check("tau_symmetry", r.symmetry_defect <= tol.tau_symmetry, r.symmetry_defect));
    Eigen::MatrixXd im = 0.5 * (r.tau.imag() + r.tau.imag().transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(im);
    auto ev = es.eigenvalues();
    bool definite = (ev.array() > 0).all() || (ev.array() < 0).all();
    r.report.add(make_check("im_tau_definite", definite, 0.0,
                            "eigenvalues of Im tau in [" + fmt(ev.minCoeff()) + ", " + fmt(ev.maxCoeff()) + "]"));
    return r;
}

TauResult period_matrix(const Family& f, const CVec& u) { return period_matrix(periods(f, u), f.tol); }

// ---------------- cubic ----------------

double Tensor3::max_abs() const {
    double m = 0.0;
    for (auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

double Tensor3::symmetry_defect() const {
    double m = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                cd x = (*this)(i, j, k);
                for (cd y : {(*this)(j, i, k), (*this)(i, k, j), (*this)(k, j, i), (*this)(j, k, i), (*this)(k, i, j)})
                    m = std::max(m, std::abs(x - y));
            }
    double s = max_abs();
    return s > 0 ? m / s : 0.0;
}

cd Tensor3::contract(const CVec& x, const CVec& y, const CVec& z) const {
    cd r = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) r += (*this)(i, j, k) * x[i] * y[j] * z[k];
    return r;
}

Tensor3 Tensor3::pullback(const CMat& m) const {
    Tensor3 t(int(m.cols()));
    for (int a = 0; a < t.d; ++a)
        for (int b = 0; b < t.d; ++b)
            for (int c = 0; c < t.d; ++c) {
                cd s = 0.0;
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j)
                        for (int k = 0; k < d; ++k) s += (*this)(i, j, k) * m(i, a) * m(j, b) * m(k, c);
                t(a, b, c) = s;
            }
    return t;
}

CubicResult cubic_direct(const Family& f, const CVec& u) {
    PeriodData pd = periods(f, u);
    const int g = int(pd.z.size()), d = f.dim();
    if (g != d) throw InputError("cubic needs as many parameters as the genus");
    const double h = f.quad.fd_step * u_scale(u);
    std::vector<CMat> taus(4 * d);
    parallel_for(taus.size(), [&](std::size_t idx) {
        const int j = int(idx / 4), kind = int(idx % 4);
        const double step = (kind < 2 ? h : 0.5 * h) * (kind % 2 == 0 ? 1.0 : -1.0);
        CVec v = add(u, real_unit(d, j), step);
        taus[idx] = period_matrix(periods(f, v, track(f, pd.bp, v)), f.tol).tau;
    });
    CMat dzi = pd.dz.inverse();
    CubicResult r;
    r.c_z = Tensor3(g);
    double gap = 0.0, ref = 0.0;
    for (int l = 0; l < d; ++l) {
        CMat dt = (taus[4 * l] - taus[4 * l + 1]) / (2 * h);
        CMat dt2 = (taus[4 * l + 2] - taus[4 * l + 3]) / h;
        gap = std::max(gap, max_abs(CMat(dt - dt2)));
        ref = std::max(ref, max_abs(dt));
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j)
                for (int k = 0; k < g; ++k) r.c_z(i, j, k) += dt(i, j) * dzi(l, k);
    }
    r.richardson = ref > 0 ? gap / ref : 0.0;
    r.c_u = r.c_z.pullback(pd.dz);
    r.symmetry_defect = r.c_z.symmetry_defect();
    r.report.add(make_check("cubic_symmetry", r.symmetry_defect <= f.tol.cubic_symmetry, r.symmetry_defect,
                            "Richardson gap " + fmt(r.richardson)));
    return r;
}

Tensor3 cubic_balduzzi(const Family& f, const CVec& u, const BranchPoints& bp) {
    const int d = f.dim();
    const CVec dq = poly_deriv(f.q(u));
    Tensor3 t(d);
    for (auto& p : bp.e) {
        cd qp = poly_eval(dq, p);
        CVec phi(d);
        for (int j = 0; j < d; ++j) phi[j] = poly_eval(f.phis[j], p);
        cd w = 1.0 / (2.0 * qp * qp);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                for (int c = 0; c < d; ++c) t(a, b, c) += phi[a] * phi[b] * phi[c] * w;
    }
    return t;
}

Tensor3 cubic_balduzzi(const Family& f, const CVec& u) { return cubic_balduzzi(f, u, branch_points(f, u)); }

KappaFit fit_kappa(const Family& f, const std::vector<CVec>& base_points, int triples_per_point, std::uint64_t seed) {
    KappaFit fit;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    const int d = f.dim();
    auto direction = [&] {
        CVec v(d);
        for (auto& x : v) x = cd(nd(rng), nd(rng));
        return v;
    };
    std::vector<std::array<CVec, 3>> dirs;
    for (std::size_t b = 0; b < base_points.size(); ++b)
        for (int t = 0; t < triples_per_point; ++t) dirs.push_back({direction(), direction(), direction()});
    std::vector<CubicResult> direct(base_points.size());
    std::vector<Tensor3> bald(base_points.size());
    parallel_for(base_points.size(), [&](std::size_t b) {
        direct[b] = cubic_direct(f, base_points[b]);
        bald[b] = cubic_balduzzi(f, base_points[b]);
    });
    cd sum = 0.0;
    for (std::size_t b = 0; b < base_points.size(); ++b)
        for (int t = 0; t < triples_per_point; ++t) {
            auto& x = dirs[b * triples_per_point + t];
            cd ratio = bald[b].contract(x[0], x[1], x[2]) / direct[b].c_u.contract(x[0], x[1], x[2]);
            fit.ratios.push_back(ratio);
            sum += ratio;
        }
    fit.samples = int(fit.ratios.size());
    if (fit.samples == 0) throw InputError("kappa fit needs at least one sample");
    fit.kappa = sum / double(fit.samples);
    for (auto& r : fit.ratios) fit.spread = std::max(fit.spread, std::abs(r - fit.kappa) / std::abs(fit.kappa));
    fit.report.add(make_check("kappa_stability", fit.spread <= f.tol.kappa, fit.spread,
                              std::to_string(fit.samples) + " samples at " + std::to_string(base_points.size()) +
                                  " base points"));
    double sym = 0.0;
    for (auto& c : direct) sym = std::max(sym, c.symmetry_defect);
    fit.report.add(make_check("cubic_symmetry", sym <= f.tol.cubic_symmetry, sym));
    return fit;
}

// ---------------- special coordinates ----------------

Chart chart_from_periods(const CVec& z, const CVec& w, const CMat& dz, const Tolerances& tol) {
    if (z.empty() || z.size() != w.size()) throw InputError("chart needs matching a- and b-periods");
    Chart ch;
    ch.z1 = z[0];
    const double zmax = max_abs(z);
    if (std::abs(ch.z1) <= tol.z1_min * zmax)
        throw DegenerateError("opposedness fails: the first a-period of lambda vanishes");
    ch.jacobian_cond = cond(dz);
    if (!(ch.jacobian_cond <= tol.jacobian_cond))
        throw DegenerateError("CY-condition fails: dz/du has condition " + fmt(ch.jacobian_cond));
    for (std::size_t i = 1; i < z.size(); ++i) ch.t.push_back(z[i] / ch.z1);
    for (std::size_t i = 0; i < z.size(); ++i) ch.F += 0.5 * z[i] * w[i];
    ch.psi = ch.F / (ch.z1 * ch.z1);
    ch.report.add(make_check("opposedness", true, std::abs(ch.z1) / zmax, "|z1| / max |z|"));
    ch.report.add(make_check("jacobian_invertible", true, ch.jacobian_cond, "condition number"));
    return ch;
}

Chart special_chart(const Family& f, const CVec& u) {
    PeriodData pd = periods(f, u);
    Chart ch = chart_from_periods(pd.z, pd.w, pd.dz, f.tol);
    if (pd.dz.rows() == pd.dz.cols()) {
        // w is homogeneous of degree one in z: tau z = w
        TauResult tr = period_matrix(pd, f.tol);
        Eigen::VectorXcd zv(pd.z.size()), wv(pd.w.size());
        for (std::size_t i = 0; i < pd.z.size(); ++i) {
            zv(i) = pd.z[i];
            wv(i) = pd.w[i];
        }
        double dev = (tr.tau * zv - wv).cwiseAbs().maxCoeff() / wv.cwiseAbs().maxCoeff();
        ch.report.add(make_check("euler_w_relation", dev <= f.tol.euler, dev));
        ch.report.merge(tr.report);
    }
    return ch;
}

// ---------------- pipeline ----------------

PipelineResult pipeline(const Family& f) {
    auto t0 = std::chrono::steady_clock::now();
    f.validate();
    if (f.genus() != 2 || f.dim() != 2) throw InputError("pipeline expects a genus-2 family with two parameters");
    if (!weighted_homogeneous(f)) throw InputError("pipeline needs a weighted-homogeneous family (F = z.w / 2 relies on it)");
    PipelineResult res;
    const CVec& us = f.u_star;
    PeriodData base = periods(f, us);
    Chart ch0 = chart_from_periods(base.z, base.w, base.dz, f.tol);
    res.t_star = ch0.t[0];
    res.psi_star = ch0.psi;

    const int P = f.grid.points;
    const double rad = f.grid.radius * u_scale(us);
    auto offset = [&](int a) { return P == 1 ? 0.0 : rad * (-1.0 + 2.0 * a / (P - 1)); };
    res.grid.resize(std::size_t(P) * P);
    parallel_for(res.grid.size(), [&](std::size_t idx) {
        const int a = int(idx / P), b = int(idx % P);
        CVec u = {us[0] + offset(a), us[1] + offset(b)};
        PeriodData pd = periods(f, u, track(f, base.bp, u));
        Chart ch = chart_from_periods(pd.z, pd.w, pd.dz, f.tol);
        res.grid[idx] = {u, pd.z, pd.w, ch.t[0], ch.psi};
    });

    // least squares for Psi(t) - Psi(t*) = sum_k c_k delta^k, delta = t - t*
    const int deg = f.grid.fit_degree;
    const int S = int(res.grid.size());
    double rho = 0.0;
    for (auto& s : res.grid) rho = std::max(rho, std::abs(s.t - res.t_star));
    if (rho == 0.0 || S < deg) throw InputError("grid too small for the requested fit degree");
    CMat V(S, deg);
    Eigen::VectorXcd rhs(S);
    for (int s = 0; s < S; ++s) {
        cd x = (res.grid[s].t - res.t_star) / rho, p = 1.0;
        for (int k = 0; k < deg; ++k) {
            p *= x;
            V(s, k) = p;
        }
        rhs(s) = res.grid[s].psi - res.psi_star;
    }
    Eigen::JacobiSVD<CMat> svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXcd coef = svd.solve(rhs);
    auto sv = svd.singularValues();
    res.fit_condition = sv(0) / sv(sv.size() - 1);
    res.fit_residual = (V * coef - rhs).cwiseAbs().maxCoeff() / rhs.cwiseAbs().maxCoeff();
    res.psi_fit = Jet<Complex>(1, deg);
    for (int k = 0; k < deg; ++k) res.psi_fit.add(mono::encode({k + 1}), coef(k) / std::pow(rho, k + 1));
    res.report.add(make_check("fit_conditioning", res.fit_condition <= 1e10, res.fit_condition,
                              "fit residual " + fmt(res.fit_residual)));

    res.fs = frobenius::build(res.psi_fit, 1, deg);
    CheckReport ax = frobenius::verify_axioms(res.fs, f.tol.frobenius);
    for (auto& c : ax.checks) res.frobenius_residual = std::max(res.frobenius_residual, c.max_abs_error);
    res.report.merge(ax, "frobenius.");

    // third derivative of Psi against the cubic of the period map
    std::vector<CVec> bases = {us, {us[0] + 5.0 * rad, us[1] + cd(0, 2.5 * rad)},
                               {us[0] + cd(-2.5 * rad, 2.5 * rad), us[1] + 5.0 * rad}};
    KappaFit kf = fit_kappa(f, bases, 10, 0);
    res.kappa = kf.kappa;
    res.report.merge(kf.report);
    CubicResult direct = cubic_direct(f, us);
    Tensor3 bz = cubic_balduzzi(f, us).pullback(base.dz.inverse());
    res.psi3_direct = ch0.z1 * direct.c_z(1, 1, 1);
    res.psi3_balduzzi = ch0.z1 * bz(1, 1, 1) / res.kappa;
    res.psi3_fit = deg >= 3 ? 6.0 * res.psi_fit.coeff({3}) : cd(0.0);
    double dev = std::abs(res.psi3_fit - res.psi3_balduzzi) / std::abs(res.psi3_balduzzi);
    res.report.add(make_check("psi3_fit_vs_balduzzi", dev <= f.tol.consistency, dev));
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

std::string grid_csv(const std::vector<GridSample>& grid) {
    std::ostringstream os;
    os.precision(17);
    if (grid.empty()) return {};
    const std::size_t d = grid[0].u.size(), g = grid[0].z.size();
    for (std::size_t j = 0; j < d; ++j) os << "u" << j + 1 << "_re,u" << j + 1 << "_im,";
    for (std::size_t i = 0; i < g; ++i) os << "z" << i + 1 << "_re,z" << i + 1 << "_im,";
    for (std::size_t i = 0; i < g; ++i) os << "w" << i + 1 << "_re,w" << i + 1 << "_im,";
    os << "t_re,t_im,psi_re,psi_im\n";
    for (auto& s : grid) {
        for (auto& x : s.u) os << x.real() << ',' << x.imag() << ',';
        for (auto& x : s.z) os << x.real() << ',' << x.imag() << ',';
        for (auto& x : s.w) os << x.real() << ',' << x.imag() << ',';
        os << s.t.real() << ',' << s.t.imag() << ',' << s.psi.real() << ',' << s.psi.imag() << '\n';
    }
    return os.str();
}

nlohmann::json to_json(const PeriodData& pd) {
    return {{"u", cvec_to_json(pd.u)},
            {"branch_points", cvec_to_json(pd.bp.e)},
            {"min_separation", pd.bp.min_separation},
            {"z", cvec_to_json(pd.z)},
            {"w", cvec_to_json(pd.w)},
            {"dz_du", cmat_to_json(pd.dz)},
            {"dw_du", cmat_to_json(pd.dw)},
            {"quadrature_error", pd.quad_error}};
}

}  // namespace specfrob::hitchin
