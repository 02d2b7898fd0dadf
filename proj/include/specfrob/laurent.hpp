#pragma once
// Finite Laurent series in an auxiliary variable z with jet coefficients.
// zmax is the highest z-exponent known (kZExact for exact Laurent polynomials).

#include <climits>
#include <map>
#include <vector>

#include "specfrob/jet.hpp"

namespace specfrob {

constexpr int kZExact = INT_MAX / 4;

template <class S>
struct Laurent {
    int nvars = 0, order = 0, zmax = kZExact;
    std::map<int, Jet<S>> c;

    Laurent() = default;
    Laurent(int nv, int ord, int zm = kZExact) : nvars(nv), order(ord), zmax(zm) {}

    static Laurent from_jet(const Jet<S>& j, int power = 0) {
        Laurent l(j.nvars(), j.order());
        l.set(power, j);
        return l;
    }
    static Laurent monomial(int nv, int ord, int power, const S& coeff) {
        return from_jet(Jet<S>::constant(nv, ord, coeff), power);
    }

    void set(int k, const Jet<S>& j) {
        if (k > zmax) return;
        Jet<S> t = j.truncated(order);
        if (t.is_zero()) c.erase(k);
        else c[k] = t;
    }
    void add(int k, const Jet<S>& j) {
        if (k > zmax || j.is_zero()) return;
        auto it = c.find(k);
        if (it == c.end()) {
            set(k, j);
            return;
        }
        it->second += j;
        if (it->second.is_zero()) c.erase(it);
    }
    Jet<S> coeff(int k) const {
        auto it = c.find(k);
        return it == c.end() ? Jet<S>(nvars, order) : it->second;
    }
    int jet_valuation() const {
        int v = kMaxOrder + 1;
        for (auto& [k, j] : c) v = std::min(v, j.valuation());
        return v;
    }
    int max_order() const {
        int o = order;
        for (auto& [k, j] : c) o = std::max(o, j.order());
        return o;
    }
    // Validity of a product, as for jets: absent coefficients are zero only up to order.
    static int product_order(const Laurent& a, const Laurent& b) {
        int o = std::max(a.order, b.order);
        o = std::min(o, a.order + b.jet_valuation());
        o = std::min(o, b.order + a.jet_valuation());
        return o;
    }
    bool is_zero() const { return c.empty(); }
    int valuation() const { return c.empty() ? kZExact : c.begin()->first; }
    int top() const { return c.empty() ? -kZExact : c.rbegin()->first; }

    Laurent with_order(int ord) const {
        Laurent r(nvars, std::min(ord, order), zmax);
        for (auto& [k, j] : c) r.set(k, j);
        return r;
    }
    Laurent z_truncated(int zm) const {
        Laurent r(nvars, order, std::min(zm, zmax));
        for (auto& [k, j] : c) r.set(k, j);
        return r;
    }

    Laurent& operator+=(const Laurent& o) {
        *this = combine(o, 1);
        return *this;
    }
    Laurent& operator-=(const Laurent& o) {
        *this = combine(o, -1);
        return *this;
    }
    friend Laurent operator+(const Laurent& a, const Laurent& b) { return a.combine(b, 1); }
    friend Laurent operator-(const Laurent& a, const Laurent& b) { return a.combine(b, -1); }
    Laurent operator-() const {
        Laurent r = *this;
        for (auto& [k, j] : r.c) j = -j;
        return r;
    }
    friend Laurent operator*(Laurent a, const S& s) {
        if (ScalarTraits<S>::is_zero(s)) a.c.clear();
        for (auto& [k, j] : a.c) j *= s;
        return a;
    }
    friend Laurent operator*(const Laurent& a, const Jet<S>& j) { return a * from_jet(j); }

    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        int zm = kZExact;
        if (a.zmax != kZExact) zm = std::min(zm, a.zmax + (b.is_zero() ? 0 : b.valuation()));
        if (b.zmax != kZExact) zm = std::min(zm, b.zmax + (a.is_zero() ? 0 : a.valuation()));
        Laurent r(a.nvars, product_order(a, b), zm);
        for (auto& [ka, ja] : a.c)
            for (auto& [kb, jb] : b.c) {
                if (ka + kb > zm) continue;
                r.add(ka + kb, ja * jb);
            }
        return r;
    }

    Laurent diff(int v) const {
        Laurent r(nvars, order - 1, zmax);
        for (auto& [k, j] : c) r.set(k, j.diff(v));
        return r;
    }
    Laurent z_diff() const {  // d/dz
        Laurent r(nvars, order, zmax == kZExact ? kZExact : zmax - 1);
        for (auto& [k, j] : c)
            if (k) r.set(k - 1, j * ScalarTraits<S>::from_int(k));
        return r;
    }
    Laurent shift(int p) const {  // multiply by z^p
        Laurent r(nvars, order, zmax == kZExact ? kZExact : zmax + p);
        for (auto& [k, j] : c) r.set(k + p, j);
        return r;
    }
    Laurent scale_z(const S& s) const {  // f(z) -> f(s z)
        Laurent r(nvars, order, zmax);
        for (auto& [k, j] : c) {
            S f = ScalarTraits<S>::one();
            if (k >= 0)
                for (int i = 0; i < k; ++i) f *= s;
            else
                for (int i = 0; i < -k; ++i) f /= s;
            r.set(k, j * f);
        }
        return r;
    }
    Laurent reflect() const { return scale_z(-ScalarTraits<S>::one()); }  // f(z) -> f(-z)

private:
    Laurent combine(const Laurent& o, int sign) const {
        if (nvars != o.nvars) throw ContextError("Laurent series in different contexts");
        Laurent r(nvars, std::min(order, o.order), std::min(zmax, o.zmax));
        for (auto& [k, j] : c) r.add(k, j);
        for (auto& [k, j] : o.c) r.add(k, sign > 0 ? j : -j);
        return r;
    }
};

template <class S>
struct LaurentMatrix {
    int rows = 0, cols = 0;
    std::vector<Laurent<S>> e;

    LaurentMatrix() = default;
    LaurentMatrix(int r, int c, int nv, int ord, int zm = kZExact)
        : rows(r), cols(c), e(std::size_t(r) * c, Laurent<S>(nv, ord, zm)) {}

    static LaurentMatrix identity(int n, int nv, int ord) {
        LaurentMatrix m(n, n, nv, ord);
        for (int i = 0; i < n; ++i) m(i, i) = Laurent<S>::monomial(nv, ord, 0, ScalarTraits<S>::one());
        return m;
    }
    static LaurentMatrix from_jets(const JetMatrix<S>& j, int power = 0) {
        LaurentMatrix m(j.rows, j.cols, j.nvars(), j.order());
        for (int r = 0; r < j.rows; ++r)
            for (int c = 0; c < j.cols; ++c) m(r, c) = Laurent<S>::from_jet(j(r, c), power);
        return m;
    }

    Laurent<S>& operator()(int i, int j) { return e[std::size_t(i) * cols + j]; }
    const Laurent<S>& operator()(int i, int j) const { return e[std::size_t(i) * cols + j]; }

    int nvars() const { return e.empty() ? 0 : e[0].nvars; }
    int order() const {
        int o = kMaxOrder;
        for (auto& x : e) o = std::min(o, x.order);
        return o;
    }
    int max_order() const {
        int o = 0;
        for (auto& x : e) o = std::max(o, x.max_order());
        return o;
    }
    int zmax() const {
        int z = kZExact;
        for (auto& x : e) z = std::min(z, x.zmax);
        return z;
    }
    int valuation() const {
        int v = kZExact;
        for (auto& x : e) v = std::min(v, x.valuation());
        return v;
    }
    int top() const {
        int t = -kZExact;
        for (auto& x : e) t = std::max(t, x.top());
        return t;
    }
    JetMatrix<S> coeff(int k) const {
        JetMatrix<S> j(rows, cols, nvars(), order());
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) j(r, c) = (*this)(r, c).coeff(k);
        return j;
    }

    template <class F>
    LaurentMatrix map(F f) const {
        LaurentMatrix r = *this;
        for (auto& x : r.e) x = f(x);
        return r;
    }
    LaurentMatrix transpose() const {
        LaurentMatrix t;
        t.rows = cols;
        t.cols = rows;
        t.e.resize(e.size());
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }
    LaurentMatrix diff(int v) const {
        return map([v](const Laurent<S>& x) { return x.diff(v); });
    }
    LaurentMatrix z_diff() const {
        return map([](const Laurent<S>& x) { return x.z_diff(); });
    }
    LaurentMatrix shift(int p) const {
        return map([p](const Laurent<S>& x) { return x.shift(p); });
    }
    LaurentMatrix reflect() const {
        return map([](const Laurent<S>& x) { return x.reflect(); });
    }
    LaurentMatrix scale_z(const S& s) const {
        return map([&s](const Laurent<S>& x) { return x.scale_z(s); });
    }
    LaurentMatrix z_truncated(int zm) const {
        return map([zm](const Laurent<S>& x) { return x.z_truncated(zm); });
    }

    friend LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b) {
        if (a.cols != b.rows) throw ContextError("Laurent matrix shape mismatch");
        const int zm = std::min(a.zmax() == kZExact ? kZExact : a.zmax() + std::min(0, b.valuation()),
                                b.zmax() == kZExact ? kZExact : b.zmax() + std::min(0, a.valuation()));
        const int cap = std::max(a.max_order(), b.max_order());
        LaurentMatrix r;
        r.rows = a.rows;
        r.cols = b.cols;
        r.e.reserve(std::size_t(r.rows) * r.cols);
        for (int i = 0; i < a.rows; ++i)
            for (int j = 0; j < b.cols; ++j) {
                int o = cap;
                for (int k = 0; k < a.cols; ++k) o = std::min(o, Laurent<S>::product_order(a(i, k), b(k, j)));
                r.e.emplace_back(a.nvars(), o, zm);
            }
        for (int i = 0; i < a.rows; ++i)
            for (int k = 0; k < a.cols; ++k) {
                if (a(i, k).is_zero()) continue;
                for (int j = 0; j < b.cols; ++j)
                    if (!b(k, j).is_zero()) r(i, j) += a(i, k) * b(k, j);
            }
        return r;
    }
    friend LaurentMatrix operator+(LaurentMatrix a, const LaurentMatrix& b) {
        for (std::size_t i = 0; i < a.e.size(); ++i) a.e[i] += b.e[i];
        return a;
    }
    friend LaurentMatrix operator-(LaurentMatrix a, const LaurentMatrix& b) {
        for (std::size_t i = 0; i < a.e.size(); ++i) a.e[i] -= b.e[i];
        return a;
    }
    friend LaurentMatrix operator*(LaurentMatrix a, const S& s) {
        for (auto& x : a.e) x = x * s;
        return a;
    }
    friend LaurentMatrix operator*(LaurentMatrix a, const Jet<S>& j) {
        for (auto& x : a.e) x = x * j;
        return a;
    }
};

// Inverse of a z-holomorphic matrix with invertible z^0 part, valid through z^zmax.
template <class S>
LaurentMatrix<S> series_inverse(const LaurentMatrix<S>& h, int zmax) {
    if (h.valuation() < 0) throw ContextError("series_inverse needs a holomorphic matrix");
    const int n = h.rows, nv = h.nvars(), ord = h.max_order();
    JetMatrix<S> h0i = inverse(h.coeff(0));
    // X_k = -H0^{-1} sum_{j=1..k} H_j X_{k-j}
    std::vector<JetMatrix<S>> hk, xk;
    for (int k = 0; k <= zmax; ++k) hk.push_back(h.coeff(k));
    xk.push_back(h0i);
    for (int k = 1; k <= zmax; ++k) {
        JetMatrix<S> acc(n, n, nv, ord);
        for (int j = 1; j <= k; ++j) acc = acc + hk[j] * xk[k - j];
        xk.push_back(h0i * acc * ScalarTraits<S>::from_int(-1));
    }
    LaurentMatrix<S> r(n, n, nv, ord, zmax);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int o = ord;
            for (int k = 0; k <= zmax; ++k) o = std::min(o, xk[k](i, j).order());
            r(i, j) = Laurent<S>(nv, o, zmax);
            for (int k = 0; k <= zmax; ++k) r(i, j).set(k, xk[k](i, j));
        }
    return r;
}

// Compare entrywise up to the common validity order and common z-range.
template <class S>
JetDiff compare(const LaurentMatrix<S>& a, const LaurentMatrix<S>& b, double tol = 0.0) {
    if (a.rows != b.rows || a.cols != b.cols) throw ContextError("Laurent matrix shape mismatch");
    JetDiff d;
    d.order = kMaxOrder;
    const int zm = std::min(a.zmax(), b.zmax());
    for (std::size_t i = 0; i < a.e.size(); ++i) {
        std::map<int, bool> keys;
        for (auto& [k, j] : a.e[i].c) keys[k] = true;
        for (auto& [k, j] : b.e[i].c) keys[k] = true;
        for (auto& [k, unused] : keys) {
            if (k > zm) continue;
            JetDiff di = compare(a.e[i].coeff(k), b.e[i].coeff(k), tol);
            d.order = std::min(d.order, di.order);
            d.max_abs = std::max(d.max_abs, di.max_abs);
            if (!di.equal && d.equal) {
                d.equal = false;
                d.witness = di.witness;
            }
        }
    }
    return d;
}

}  // namespace specfrob
