#pragma once
// Truncated multivariate power series ("jets") over an exact or complex scalar.
//
// A monomial is packed into a 64-bit key: four bits per variable (at most 15
// variables) and the total degree in the top nibble, so std::map iterates in
// graded order. The stored order is the validity order: coefficients of total
// degree <= order are known, everything above is unknown and never stored.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "specfrob/linalg.hpp"
#include "specfrob/scalar.hpp"

namespace specfrob {

constexpr int kMaxVars = 15;
constexpr int kMaxOrder = 15;
constexpr int kDefaultOrder = 6;

struct CompositionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace mono {
using Key = std::uint64_t;

inline int degree(Key k) { return int(k >> 60); }
inline int exponent(Key k, int v) { return int((k >> (4 * v)) & 0xFu); }
inline Key unit(int v) { return (Key(1) << (4 * v)) | (Key(1) << 60); }

inline Key encode(const std::vector<int>& e) {
    if (int(e.size()) > kMaxVars) throw ContextError("too many variables");
    Key k = 0;
    int d = 0;
    for (std::size_t v = 0; v < e.size(); ++v) {
        if (e[v] < 0) throw InputError("negative exponent");
        d += e[v];
        if (e[v] > kMaxOrder || d > kMaxOrder) throw ContextError("degree exceeds supported order");
        k |= Key(e[v]) << (4 * v);
    }
    return k | (Key(d) << 60);
}

inline std::vector<int> decode(Key k, int nvars) {
    std::vector<int> e(nvars);
    for (int v = 0; v < nvars; ++v) e[v] = exponent(k, v);
    return e;
}

inline std::string to_string(Key k, int nvars, const std::vector<std::string>* names = nullptr) {
    std::string s;
    for (int v = 0; v < nvars; ++v) {
        int e = exponent(k, v);
        if (!e) continue;
        if (!s.empty()) s += "*";
        s += names && v < int(names->size()) ? (*names)[v] : "x" + std::to_string(v + 1);
        if (e > 1) s += "^" + std::to_string(e);
    }
    return s.empty() ? "1" : s;
}
}  // namespace mono

template <class S>
class Jet {
public:
    using Key = mono::Key;
    using Terms = std::map<Key, S>;
    using T = ScalarTraits<S>;

    Jet() = default;
    Jet(int nvars, int order) : nvars_(nvars), order_(std::max(order, -1)) {
        if (nvars < 0 || nvars > kMaxVars) throw ContextError("unsupported variable count");
        if (order > kMaxOrder) throw ContextError("unsupported order");
    }

    static Jet constant(int nvars, int order, const S& c) {
        Jet j(nvars, order);
        j.add(0, c);
        return j;
    }
    static Jet variable(int nvars, int order, int v, const S& c = T::one()) {
        if (v < 0 || v >= nvars) throw ContextError("variable index out of range");
        Jet j(nvars, order);
        j.add(mono::unit(v), c);
        return j;
    }
    static Jet monomial(int nvars, int order, const std::vector<int>& e, const S& c) {
        if (int(e.size()) != nvars) throw ContextError("exponent length mismatch");
        Jet j(nvars, order);
        j.add(mono::encode(e), c);
        return j;
    }

    int nvars() const { return nvars_; }
    int order() const { return order_; }
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    S coeff_key(Key k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? T::zero() : it->second;
    }
    S coeff(const std::vector<int>& e) const { return coeff_key(mono::encode(e)); }
    S constant_term() const { return coeff_key(Key(0)); }

    // Accumulate c into the coefficient of k; keeps the canonical sparse form.
    void add(Key k, const S& c) {
        if (mono::degree(k) > order_ || T::is_zero(c)) return;
        auto [it, fresh] = terms_.emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (T::is_zero(it->second)) terms_.erase(it);
        }
    }

    Jet truncated(int order) const {
        Jet r(nvars_, std::min(order, order_));
        for (auto& [k, c] : terms_)
            if (mono::degree(k) <= r.order_) r.terms_.emplace(k, c);
        return r;
    }
    Jet with_order(int order) const {  // raise or lower the recorded validity
        Jet r(nvars_, order);
        for (auto& [k, c] : terms_)
            if (mono::degree(k) <= r.order_) r.terms_.emplace(k, c);
        return r;
    }

    Jet homogeneous_part(int d) const {
        Jet r(nvars_, order_);
        for (auto& [k, c] : terms_)
            if (mono::degree(k) == d) r.terms_.emplace(k, c);
        return r;
    }
    int valuation() const { return terms_.empty() ? kMaxOrder + 1 : mono::degree(terms_.begin()->first); }

    Jet& operator+=(const Jet& o) {
        check(o);
        if (o.order_ < order_) *this = truncated(o.order_);
        for (auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        check(o);
        if (o.order_ < order_) *this = truncated(o.order_);
        for (auto& [k, c] : o.terms_) add(k, -c);
        return *this;
    }
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    Jet operator-() const {
        Jet r = *this;
        for (auto& [k, c] : r.terms_) c = -c;
        return r;
    }
    Jet& operator*=(const S& s) {
        if (T::is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, c] : terms_) c *= s;
        return *this;
    }
    friend Jet operator*(Jet a, const S& s) { return a *= s; }
    friend Jet operator*(const S& s, Jet a) { return a *= s; }

    // Validity of a product: the unknown tail of a (degree > order) meets b at
    // its valuation, and vice versa; never beyond the larger input order.
    static int product_order(const Jet& a, const Jet& b) {
        int o = std::max(a.order_, b.order_);
        o = std::min(o, a.order_ + b.valuation());
        o = std::min(o, b.order_ + a.valuation());
        return o;
    }

    friend Jet operator*(const Jet& a, const Jet& b) {
        a.check(b);
        Jet r(a.nvars_, product_order(a, b));
        for (auto& [ka, ca] : a.terms_) {
            int room = r.order_ - mono::degree(ka);
            if (room < 0) break;
            for (auto& [kb, cb] : b.terms_) {
                if (mono::degree(kb) > room) break;
                r.add(ka + kb, ca * cb);
            }
        }
        return r;
    }
    Jet& operator*=(const Jet& o) { return *this = *this * o; }

    // Structural equality (same context, order and coefficients); use compare()
    // for comparisons up to validity order.
    friend bool operator==(const Jet& a, const Jet& b) {
        return a.nvars_ == b.nvars_ && a.order_ == b.order_ && a.terms_ == b.terms_;
    }

    Jet diff(int v) const {
        if (v < 0 || v >= nvars_) throw ContextError("variable index out of range");
        Jet r(nvars_, order_ - 1);
        const Key step = mono::unit(v);
        for (auto& [k, c] : terms_) {
            int e = mono::exponent(k, v);
            if (e == 0) continue;
            r.add(k - step, c * T::from_int(e));
        }
        return r;
    }

    // Antiderivative in variable v with zero integration constant; the
    // result is valid to one order higher.
    Jet integrate(int v) const {
        if (v < 0 || v >= nvars_) throw ContextError("variable index out of range");
        Jet r(nvars_, std::min(order_ + 1, kMaxOrder));
        const Key step = mono::unit(v);
        for (auto& [k, c] : terms_) {
            int e = mono::exponent(k, v);
            if (e + 1 > kMaxOrder || mono::degree(k) + 1 > r.order_) continue;
            r.add(k + step, c / T::from_int(e + 1));
        }
        return r;
    }

    // Substitute a scalar for each variable (only meaningful for polynomial data).
    S evaluate(const std::vector<S>& x) const {
        S acc = T::zero();
        for (auto& [k, c] : terms_) {
            S m = c;
            for (int v = 0; v < nvars_; ++v) {
                int e = mono::exponent(k, v);
                for (int i = 0; i < e; ++i) m *= x[v];
            }
            acc += m;
        }
        return acc;
    }

    // Multiplicative inverse of a jet with invertible constant term.
    Jet reciprocal() const {
        S c0 = constant_term();
        if (T::is_zero(c0)) throw DegenerateError("jet with zero constant term is not a unit");
        Jet n = *this;
        n.add(0, -c0);
        n *= S(T::one() / c0);  // this = c0 (1 + n)
        Jet sum = constant(nvars_, order_, T::one());
        Jet pw = sum;
        for (int k = 1; k <= order_; ++k) {
            pw = pw * n;
            if (pw.is_zero()) break;
            if (k % 2) sum -= pw;
            else sum += pw;
        }
        return sum * S(T::one() / c0);
    }

    Jet pow(int e) const {
        if (e < 0) return reciprocal().pow(-e);
        Jet r = constant(nvars_, order_, T::one());
        for (int i = 0; i < e; ++i) r *= *this;
        return r;
    }

    // Replace variable layout: old variable v becomes new variable map[v].
    Jet embed(int new_nvars, const std::vector<int>& map) const {
        Jet r(new_nvars, order_);
        for (auto& [k, c] : terms_) {
            std::vector<int> e(new_nvars, 0);
            for (int v = 0; v < nvars_; ++v) {
                int ex = mono::exponent(k, v);
                if (!ex) continue;
                if (map[v] < 0) throw ContextError("dropped variable carries an exponent");
                e[map[v]] += ex;
            }
            r.add(mono::encode(e), c);
        }
        return r;
    }

    double max_abs() const {
        double m = 0.0;
        for (auto& [k, c] : terms_) m = std::max(m, T::abs(c));
        return m;
    }

private:
    void check(const Jet& o) const {
        if (nvars_ != o.nvars_) throw ContextError("jets live in different variable contexts");
    }

    int nvars_ = 0;
    int order_ = 0;
    Terms terms_;
};

// Outcome of comparing two jets up to their common validity order.
struct JetDiff {
    bool equal = true;
    double max_abs = 0.0;
    std::optional<mono::Key> witness;
    int order = 0;
};

template <class S>
JetDiff compare(const Jet<S>& a, const Jet<S>& b, double tol = 0.0) {
    JetDiff d;
    d.order = std::min(a.order(), b.order());
    Jet<S> diff = a.truncated(d.order) - b.truncated(d.order);
    for (auto& [k, c] : diff.terms()) {
        double v = ScalarTraits<S>::abs(c);
        if (v > d.max_abs) d.max_abs = v;
        if ((ScalarTraits<S>::exact || v > tol) && d.equal) {
            d.equal = false;
            d.witness = k;
        }
    }
    return d;
}

// outer(inner_1, ..., inner_m); every inner jet must have zero constant term.
template <class S>
Jet<S> compose(const Jet<S>& outer, const std::vector<Jet<S>>& inner) {
    if (int(inner.size()) != outer.nvars()) throw ContextError("compose: inner count != outer variables");
    if (inner.empty()) return outer;
    const int nv = inner[0].nvars();
    int order = outer.order();
    for (auto& f : inner) {
        if (f.nvars() != nv) throw ContextError("compose: inner jets disagree on variables");
        if (!ScalarTraits<S>::is_zero(f.constant_term()))
            throw CompositionError("compose: inner jet has nonzero constant term");
        order = std::min(order, f.order());
    }
    std::vector<std::vector<Jet<S>>> powers(inner.size());
    auto power = [&](std::size_t v, int e) -> const Jet<S>& {
        auto& p = powers[v];
        if (p.empty()) p.push_back(Jet<S>::constant(nv, order, ScalarTraits<S>::one()));
        while (int(p.size()) <= e) p.push_back(p.back() * inner[v].truncated(order));
        return p[e];
    };
    Jet<S> r(nv, order);
    for (auto& [k, c] : outer.terms()) {
        if (mono::degree(k) > order) break;
        Jet<S> m = Jet<S>::constant(nv, order, c);
        for (int v = 0; v < outer.nvars(); ++v) {
            int e = mono::exponent(k, v);
            if (e) m = m * power(v, e);
        }
        r += m;
    }
    return r;
}

// Compositional inverse of a square system with invertible linear part.
template <class S>
std::vector<Jet<S>> invert_coordinates(const std::vector<Jet<S>>& f) {
    const int m = int(f.size());
    if (m == 0) return {};
    const int nv = f[0].nvars();
    if (nv != m) throw ContextError("invert_coordinates: system is not square");
    int order = f[0].order();
    Mat<S> lin(m, m);
    for (int i = 0; i < m; ++i) {
        if (f[i].nvars() != nv) throw ContextError("invert_coordinates: mixed contexts");
        if (!ScalarTraits<S>::is_zero(f[i].constant_term()))
            throw CompositionError("invert_coordinates: nonzero constant term");
        order = std::min(order, f[i].order());
        for (int j = 0; j < m; ++j) lin(i, j) = f[i].coeff_key(mono::unit(j));
    }
    Mat<S> li;
    try {
        li = inverse(lin);
    } catch (const DegenerateError&) {
        throw DegenerateError("degenerate coordinates");
    }
    // nonlinear remainder N = f - L x
    std::vector<Jet<S>> nl(m);
    for (int i = 0; i < m; ++i) {
        nl[i] = f[i].truncated(order);
        for (int j = 0; j < m; ++j) nl[i].add(mono::unit(j), -lin(i, j));
    }
    // g <- L^{-1}(y - N(g)); each sweep fixes one more degree
    std::vector<Jet<S>> g(m, Jet<S>(nv, order));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) g[i].add(mono::unit(j), li(i, j));
    for (int sweep = 1; sweep < order; ++sweep) {
        std::vector<Jet<S>> ng(m);
        for (int i = 0; i < m; ++i) ng[i] = compose(nl[i], g);
        for (int i = 0; i < m; ++i) {
            Jet<S> gi(nv, order);
            for (int j = 0; j < m; ++j) {
                gi.add(mono::unit(j), li(i, j));
                gi -= ng[j] * li(i, j);
            }
            g[i] = gi;
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Matrices of jets

template <class S>
struct JetMatrix {
    int rows = 0, cols = 0;
    std::vector<Jet<S>> e;

    JetMatrix() = default;
    JetMatrix(int r, int c, int nvars, int order) : rows(r), cols(c), e(std::size_t(r) * c, Jet<S>(nvars, order)) {}

    static JetMatrix identity(int n, int nvars, int order) {
        JetMatrix m(n, n, nvars, order);
        for (int i = 0; i < n; ++i) m(i, i) = Jet<S>::constant(nvars, order, ScalarTraits<S>::one());
        return m;
    }
    static JetMatrix from_constant(const Mat<S>& c, int nvars, int order) {
        JetMatrix m(c.rows, c.cols, nvars, order);
        for (int i = 0; i < c.rows; ++i)
            for (int j = 0; j < c.cols; ++j) m(i, j) = Jet<S>::constant(nvars, order, c(i, j));
        return m;
    }

    Jet<S>& operator()(int i, int j) { return e[std::size_t(i) * cols + j]; }
    const Jet<S>& operator()(int i, int j) const { return e[std::size_t(i) * cols + j]; }

    int nvars() const { return e.empty() ? 0 : e[0].nvars(); }
    int order() const {
        int o = kMaxOrder;
        for (auto& x : e) o = std::min(o, x.order());
        return o;
    }
    int max_order() const {
        int o = 0;
        for (auto& x : e) o = std::max(o, x.order());
        return o;
    }

    Mat<S> constant_part() const {
        Mat<S> c(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) c(i, j) = (*this)(i, j).constant_term();
        return c;
    }

    JetMatrix transpose() const {
        JetMatrix t;
        t.rows = cols;
        t.cols = rows;
        t.e.resize(e.size());
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }
    JetMatrix diff(int v) const {
        JetMatrix r = *this;
        for (auto& x : r.e) x = x.diff(v);
        return r;
    }
    JetMatrix truncated(int order) const {
        JetMatrix r = *this;
        for (auto& x : r.e) x = x.truncated(order);
        return r;
    }
    std::vector<Jet<S>> column(int j) const {
        std::vector<Jet<S>> c(rows);
        for (int i = 0; i < rows; ++i) c[i] = (*this)(i, j);
        return c;
    }

    friend JetMatrix operator*(const JetMatrix& a, const JetMatrix& b) {
        if (a.cols != b.rows) throw ContextError("jet matrix shape mismatch");
        JetMatrix r;
        r.rows = a.rows;
        r.cols = b.cols;
        const int nv = a.nvars();
        const int cap = std::max(a.max_order(), b.max_order());
        r.e.reserve(std::size_t(r.rows) * r.cols);
        for (int i = 0; i < a.rows; ++i)
            for (int j = 0; j < b.cols; ++j) {
                int o = cap;
                for (int k = 0; k < a.cols; ++k) o = std::min(o, Jet<S>::product_order(a(i, k), b(k, j)));
                r.e.emplace_back(nv, o);
            }
        for (int i = 0; i < a.rows; ++i)
            for (int k = 0; k < a.cols; ++k) {
                const Jet<S>& x = a(i, k);
                if (x.is_zero()) continue;
                for (int j = 0; j < b.cols; ++j)
                    if (!b(k, j).is_zero()) r(i, j) += x * b(k, j);
            }
        return r;
    }
    friend JetMatrix operator+(JetMatrix a, const JetMatrix& b) {
        for (std::size_t i = 0; i < a.e.size(); ++i) a.e[i] += b.e[i];
        return a;
    }
    friend JetMatrix operator-(JetMatrix a, const JetMatrix& b) {
        for (std::size_t i = 0; i < a.e.size(); ++i) a.e[i] -= b.e[i];
        return a;
    }
    friend JetMatrix operator*(JetMatrix a, const S& s) {
        for (auto& x : a.e) x *= s;
        return a;
    }
};

// Inverse of a jet matrix whose constant part is invertible.
template <class S>
JetMatrix<S> inverse(const JetMatrix<S>& m) {
    if (m.rows != m.cols) throw ContextError("inverse of non-square jet matrix");
    const int n = m.rows, nv = m.nvars(), ord = m.max_order();
    Mat<S> c0i = inverse(m.constant_part());
    JetMatrix<S> c0ij = JetMatrix<S>::from_constant(c0i, nv, ord);
    JetMatrix<S> a = c0ij * m;  // = 1 + N, N without constant terms
    JetMatrix<S> nmat = a;
    for (int i = 0; i < n; ++i) nmat(i, i).add(0, -ScalarTraits<S>::one());
    JetMatrix<S> sum = JetMatrix<S>::identity(n, nv, ord);
    JetMatrix<S> pw = sum;
    for (int k = 1; k <= ord; ++k) {
        pw = pw * nmat;
        bool zero = true;
        for (auto& x : pw.e) zero = zero && x.is_zero();
        // a vanishing power still carries the validity of its unknown tail
        sum = (k % 2) ? sum - pw : sum + pw;
        if (zero) break;
    }
    return sum * c0ij;
}

template <class S>
JetDiff compare(const JetMatrix<S>& a, const JetMatrix<S>& b, double tol = 0.0) {
    if (a.rows != b.rows || a.cols != b.cols) throw ContextError("jet matrix shape mismatch");
    JetDiff d;
    d.order = kMaxOrder;
    for (std::size_t i = 0; i < a.e.size(); ++i) {
        JetDiff di = compare(a.e[i], b.e[i], tol);
        d.order = std::min(d.order, di.order);
        d.max_abs = std::max(d.max_abs, di.max_abs);
        if (!di.equal && d.equal) {
            d.equal = false;
            d.witness = di.witness;
        }
    }
    return d;
}

// ---------------------------------------------------------------------------
// Vector fields and tensors in coordinates

template <class S>
using VectorField = std::vector<Jet<S>>;

template <class S>
Jet<S> apply(const VectorField<S>& x, const Jet<S>& f) {
    Jet<S> r(f.nvars(), f.order() - 1);
    for (int j = 0; j < int(x.size()); ++j)
        if (!x[j].is_zero()) r += x[j] * f.diff(j);
    return r;
}

template <class S>
VectorField<S> lie_bracket(const VectorField<S>& x, const VectorField<S>& y) {
    VectorField<S> r(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) r[k] = specfrob::apply(x, y[k]) - specfrob::apply(y, x[k]);
    return r;
}

// (1,2)-tensor T^g_{ab}, stored at (g*m + a)*m + b.
template <class S>
struct Tensor12 {
    int m = 0;
    std::vector<Jet<S>> t;
    Tensor12() = default;
    Tensor12(int dim, int nvars, int order) : m(dim), t(std::size_t(dim) * dim * dim, Jet<S>(nvars, order)) {}
    Jet<S>& operator()(int g, int a, int b) { return t[(std::size_t(g) * m + a) * m + b]; }
    const Jet<S>& operator()(int g, int a, int b) const { return t[(std::size_t(g) * m + a) * m + b]; }
};

// (0,2)-tensor, stored row-major.
template <class S>
struct Tensor02 {
    int m = 0;
    std::vector<Jet<S>> t;
    Tensor02() = default;
    Tensor02(int dim, int nvars, int order) : m(dim), t(std::size_t(dim) * dim, Jet<S>(nvars, order)) {}
    Jet<S>& operator()(int a, int b) { return t[std::size_t(a) * m + b]; }
    const Jet<S>& operator()(int a, int b) const { return t[std::size_t(a) * m + b]; }
};

template <class S>
Tensor12<S> lie_derivative(const VectorField<S>& x, const Tensor12<S>& tt) {
    const int m = tt.m;
    const int nv = x.empty() ? 0 : x[0].nvars();
    std::vector<Jet<S>> dx(std::size_t(m) * m);  // dx[d*m + g] = d_d X^g
    int ord = kMaxOrder;
    for (int d = 0; d < m; ++d)
        for (int g = 0; g < m; ++g) {
            dx[std::size_t(d) * m + g] = x[g].diff(d);
            ord = std::min(ord, dx[std::size_t(d) * m + g].order());
        }
    for (auto& j : tt.t) ord = std::min(ord, j.order() - 1);
    Tensor12<S> r(m, nv, ord);
    for (int g = 0; g < m; ++g)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                Jet<S> acc = specfrob::apply(x, tt(g, a, b));
                for (int d = 0; d < m; ++d) {
                    const Jet<S>& dxg = dx[std::size_t(d) * m + g];
                    if (!dxg.is_zero() && !tt(d, a, b).is_zero()) acc -= tt(d, a, b) * dxg;
                    const Jet<S>& dad = dx[std::size_t(a) * m + d];
                    if (!dad.is_zero() && !tt(g, d, b).is_zero()) acc += tt(g, d, b) * dad;
                    const Jet<S>& dbd = dx[std::size_t(b) * m + d];
                    if (!dbd.is_zero() && !tt(g, a, d).is_zero()) acc += tt(g, a, d) * dbd;
                }
                r(g, a, b) = acc;
            }
    return r;
}

template <class S>
Tensor02<S> lie_derivative(const VectorField<S>& x, const Tensor02<S>& tt) {
    const int m = tt.m;
    const int nv = x.empty() ? 0 : x[0].nvars();
    int ord = kMaxOrder;
    for (auto& j : tt.t) ord = std::min(ord, j.order() - 1);
    for (auto& xi : x) ord = std::min(ord, xi.order() - 1);
    Tensor02<S> r(m, nv, ord);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            Jet<S> acc = specfrob::apply(x, tt(a, b));
            for (int d = 0; d < m; ++d) {
                if (!tt(d, b).is_zero()) acc += tt(d, b) * x[d].diff(a);
                if (!tt(a, d).is_zero()) acc += tt(a, d) * x[d].diff(b);
            }
            r(a, b) = acc;
        }
    return r;
}

}  // namespace specfrob
