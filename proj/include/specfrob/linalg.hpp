#pragma once
// Dense matrices over an exact or floating scalar field.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "specfrob/scalar.hpp"

namespace specfrob {

struct DegenerateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class S>
struct Mat {
    int rows = 0, cols = 0;
    std::vector<S> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c, ScalarTraits<S>::zero()) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = ScalarTraits<S>::one();
        return m;
    }

    S& operator()(int i, int j) { return a[std::size_t(i) * cols + j]; }
    const S& operator()(int i, int j) const { return a[std::size_t(i) * cols + j]; }

    Mat transpose() const {
        Mat t(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend Mat operator*(const Mat& x, const Mat& y) {
        if (x.cols != y.rows) throw ContextError("matrix shape mismatch");
        Mat r(x.rows, y.cols);
        for (int i = 0; i < x.rows; ++i)
            for (int k = 0; k < x.cols; ++k) {
                if (ScalarTraits<S>::is_zero(x(i, k))) continue;
                for (int j = 0; j < y.cols; ++j) r(i, j) += x(i, k) * y(k, j);
            }
        return r;
    }
    friend Mat operator+(Mat x, const Mat& y) {
        for (std::size_t i = 0; i < x.a.size(); ++i) x.a[i] += y.a[i];
        return x;
    }
    friend Mat operator-(Mat x, const Mat& y) {
        for (std::size_t i = 0; i < x.a.size(); ++i) x.a[i] -= y.a[i];
        return x;
    }
    friend bool operator==(const Mat& x, const Mat& y) {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }
};

namespace detail {
template <class S>
int pick_pivot(const Mat<S>& m, int col, int from) {
    int best = -1;
    double best_abs = 0.0;
    for (int r = from; r < m.rows; ++r) {
        if (ScalarTraits<S>::is_zero(m(r, col))) continue;
        if constexpr (ScalarTraits<S>::exact) return r;
        double v = ScalarTraits<S>::abs(m(r, col));
        if (v > best_abs) {
            best_abs = v;
            best = r;
        }
    }
    return best;
}
}  // namespace detail

template <class S>
Mat<S> inverse(Mat<S> m) {
    if (m.rows != m.cols) throw ContextError("inverse of non-square matrix");
    const int n = m.rows;
    Mat<S> inv = Mat<S>::identity(n);
    for (int c = 0; c < n; ++c) {
        int p = detail::pick_pivot(m, c, c);
        if (p < 0) throw DegenerateError("singular matrix");
        if (p != c)
            for (int j = 0; j < n; ++j) {
                std::swap(m(p, j), m(c, j));
                std::swap(inv(p, j), inv(c, j));
            }
        S piv = m(c, c);
        for (int j = 0; j < n; ++j) {
            m(c, j) /= piv;
            inv(c, j) /= piv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || ScalarTraits<S>::is_zero(m(r, c))) continue;
            S f = m(r, c);
            for (int j = 0; j < n; ++j) {
                m(r, j) -= f * m(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

template <class S>
S determinant(Mat<S> m) {
    if (m.rows != m.cols) throw ContextError("determinant of non-square matrix");
    const int n = m.rows;
    S det = ScalarTraits<S>::one();
    for (int c = 0; c < n; ++c) {
        int p = detail::pick_pivot(m, c, c);
        if (p < 0) return ScalarTraits<S>::zero();
        if (p != c) {
            for (int j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        for (int r = c + 1; r < n; ++r) {
            if (ScalarTraits<S>::is_zero(m(r, c))) continue;
            S f = m(r, c) / m(c, c);
            for (int j = c; j < n; ++j) m(r, j) -= f * m(c, j);
        }
    }
    return det;
}

// Coefficients of det(x I - m), highest degree first (Faddeev-LeVerrier).
template <class S>
std::vector<S> characteristic_polynomial(const Mat<S>& m) {
    const int n = m.rows;
    std::vector<S> c(n + 1, ScalarTraits<S>::zero());
    c[0] = ScalarTraits<S>::one();
    Mat<S> mk(n, n);
    for (int k = 1; k <= n; ++k) {
        Mat<S> shifted = mk;
        for (int i = 0; i < n; ++i) shifted(i, i) += c[k - 1];
        mk = m * shifted;
        S tr = ScalarTraits<S>::zero();
        for (int i = 0; i < n; ++i) tr += mk(i, i);
        c[k] = -tr / ScalarTraits<S>::from_int(k);
    }
    return c;
}

template <class S>
int rank(Mat<S> m) {
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int p = detail::pick_pivot(m, c, r);
        if (p < 0) continue;
        if constexpr (!ScalarTraits<S>::exact) {
            if (ScalarTraits<S>::abs(m(p, c)) < 1e-12) continue;
        }
        for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
        for (int i = r + 1; i < m.rows; ++i) {
            if (ScalarTraits<S>::is_zero(m(i, c))) continue;
            S f = m(i, c) / m(r, c);
            for (int j = c; j < m.cols; ++j) m(i, j) -= f * m(r, j);
        }
        ++r;
    }
    return r;
}

}  // namespace specfrob
