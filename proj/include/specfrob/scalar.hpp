#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace specfrob {

using Rational = mpq_class;
using Complex = std::complex<double>;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ContextError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static constexpr const char* kind = "rational";
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_int(long v) { return Rational(v); }
    static Rational frac(long p, long q) {
        if (q == 0) throw InputError("zero denominator");
        Rational r{mpz_class(p), mpz_class(q)};
        r.canonicalize();
        return r;
    }
    static bool is_zero(const Rational& r) { return sgn(r) == 0; }
    static double abs(const Rational& r) { return std::fabs(r.get_d()); }
    static std::string str(const Rational& r) { return r.get_str(); }
};

template <>
struct ScalarTraits<Complex> {
    static constexpr bool exact = false;
    static constexpr const char* kind = "complex";
    static Complex zero() { return Complex(0.0, 0.0); }
    static Complex one() { return Complex(1.0, 0.0); }
    static Complex from_int(long v) { return Complex(double(v), 0.0); }
    static Complex frac(long p, long q) {
        if (q == 0) throw InputError("zero denominator");
        return Complex(double(p) / double(q), 0.0);
    }
    static bool is_zero(const Complex& c) { return c.real() == 0.0 && c.imag() == 0.0; }
    static double abs(const Complex& c) { return std::abs(c); }
    static std::string str(const Complex& c) {
        return "(" + std::to_string(c.real()) + "," + std::to_string(c.imag()) + ")";
    }
};

inline Complex to_complex(const Rational& r) { return Complex(r.get_d(), 0.0); }
inline Complex to_complex(const Complex& c) { return c; }

}  // namespace specfrob
