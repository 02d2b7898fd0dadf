#pragma once
// Jet literals: [{"exp":[..],"num":p,"den":q}] or [{"exp":[..],"re":x,"im":y}].

#include <json.hpp>

#include "specfrob/jet.hpp"

namespace specfrob {

namespace detail {
inline mpz_class json_integer(const nlohmann::json& j, const char* what) {
    if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
    if (j.is_string()) {
        mpz_class z;
        if (z.set_str(j.get<std::string>(), 10) != 0) throw InputError(std::string("bad integer for ") + what);
        return z;
    }
    throw InputError(std::string("expected integer for ") + what);
}

inline nlohmann::json integer_json(const mpz_class& z) {
    if (z.fits_slong_p()) return nlohmann::json(z.get_si());
    return nlohmann::json(z.get_str());
}
}  // namespace detail

inline nlohmann::json scalar_to_json(const Rational& r) {
    return {{"num", detail::integer_json(r.get_num())}, {"den", detail::integer_json(r.get_den())}};
}
inline nlohmann::json scalar_to_json(const Complex& c) { return {{"re", c.real()}, {"im", c.imag()}}; }

inline Rational rational_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) {
        Rational r;
        if (r.set_str(j.get<std::string>(), 10) != 0) throw InputError("bad rational literal");
        r.canonicalize();
        return r;
    }
    if (!j.is_object() || !j.contains("num")) throw InputError("rational literal needs num/den");
    mpz_class num = detail::json_integer(j.at("num"), "num");
    mpz_class den = j.contains("den") ? detail::json_integer(j.at("den"), "den") : mpz_class(1);
    if (den == 0) throw InputError("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Complex complex_from_json(const nlohmann::json& j) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2) return Complex(j[0].get<double>(), j[1].get<double>());
    if (!j.is_object()) throw InputError("complex literal must be an object");
    double re = j.value("re", 0.0), im = j.value("im", 0.0);
    return Complex(re, im);
}

template <class S>
S scalar_from_json(const nlohmann::json& j);
template <>
inline Rational scalar_from_json<Rational>(const nlohmann::json& j) {
    return rational_from_json(j);
}
template <>
inline Complex scalar_from_json<Complex>(const nlohmann::json& j) {
    return complex_from_json(j);
}

template <class S>
nlohmann::json jet_to_json(const Jet<S>& f) {
    nlohmann::json a = nlohmann::json::array();
    for (auto& [k, c] : f.terms()) {
        nlohmann::json t = scalar_to_json(c);
        t["exp"] = mono::decode(k, f.nvars());
        a.push_back(t);
    }
    return a;
}

template <class S>
Jet<S> jet_from_json(const nlohmann::json& j, int nvars, int order) {
    if (!j.is_array()) throw InputError("jet literal must be an array of terms");
    Jet<S> f(nvars, order);
    for (auto& t : j) {
        if (!t.is_object() || !t.contains("exp")) throw InputError("jet term needs an exp field");
        auto e = t.at("exp").get<std::vector<int>>();
        if (int(e.size()) != nvars) throw InputError("jet term exponent has wrong length");
        S c = scalar_from_json<S>(t);
        int d = 0;
        for (int x : e) d += x;
        if (d > order) continue;
        f.add(mono::encode(e), c);
    }
    return f;
}

template <class S>
nlohmann::json matrix_to_json(const JetMatrix<S>& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows; ++i) {
        nlohmann::json r = nlohmann::json::array();
        for (int j = 0; j < m.cols; ++j) r.push_back(jet_to_json(m(i, j)));
        rows.push_back(r);
    }
    return rows;
}

template <class S>
JetMatrix<S> matrix_from_json(const nlohmann::json& j, int nvars, int order) {
    if (!j.is_array() || j.empty()) throw InputError("matrix must be a nonempty array of rows");
    JetMatrix<S> m(int(j.size()), int(j[0].size()), nvars, order);
    for (int i = 0; i < m.rows; ++i) {
        if (int(j[i].size()) != m.cols) throw InputError("ragged matrix");
        for (int k = 0; k < m.cols; ++k) m(i, k) = jet_from_json<S>(j[i][k], nvars, order);
    }
    return m;
}

inline Mat<Rational> rational_matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw InputError("matrix must be a nonempty array of rows");
    Mat<Rational> m(int(j.size()), int(j[0].size()));
    for (int i = 0; i < m.rows; ++i) {
        if (!j[i].is_array() || int(j[i].size()) != m.cols) throw InputError("ragged matrix");
        for (int k = 0; k < m.cols; ++k) m(i, k) = rational_from_json(j[i][k]);
    }
    return m;
}

}  // namespace specfrob
