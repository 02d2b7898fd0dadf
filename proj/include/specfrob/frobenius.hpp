#pragma once
// Semihomogeneous Frobenius manifolds of block shape
//   Phi = Psi(t_2..t_{n+1}) + t_1^2 t_{2n+2} / 2 + t_1 sum_i t_i t_{n+i}
// on coordinates t_1..t_{2n+2} (jet variables 0..2n+1).

#include <optional>
#include <string>
#include <vector>

#include "specfrob/jet.hpp"
#include "specfrob/report.hpp"

namespace specfrob::frobenius {

template <class S>
struct FrobeniusStructure {
    int n = 0, m = 0, order = 0;
    Jet<S> psi;  // in n variables
    Jet<S> phi;  // in m variables
    Mat<S> g;
    Tensor12<S> c;  // c(gamma, alpha, beta)
    VectorField<S> e, E;
    std::vector<int> p;  // (0, 1 x n, 2 x n, 3)
};

std::vector<std::string> coordinate_names(int n);
std::vector<int> degrees(int n);
template <class S>
Mat<S> metric(int n);

template <class S>
FrobeniusStructure<S> build(const Jet<S>& psi, int n, int order);

// Multiplication read off from a potential through g(X o Y, Z) = XYZ(Phi).
template <class S>
FrobeniusStructure<S> from_potential(const Jet<S>& phi, int n);

// The eight axiom checks; tol = 0 demands exact equality.
template <class S>
CheckReport verify_axioms(const FrobeniusStructure<S>& fs, double tol = 0.0);

// E(Phi) = 0 and E(Psi) = 0.
template <class S>
CheckReport euler_homogeneity(const FrobeniusStructure<S>& fs, double tol = 0.0);

template <class S>
struct QuadraticShift {
    FrobeniusStructure<S> shifted;
    bool identical = false;
    CheckReport report;
};
template <class S>
QuadraticShift<S> quadratic_shift(const FrobeniusStructure<S>& fs, const Jet<S>& q);

template <class S>
struct AutomorphismCandidate {
    S beta;
    std::vector<std::vector<Jet<S>>> gamma;  // n x n, jets in n variables
};

template <class S>
struct AutomorphismResult {
    bool is_automorphism = false;
    bool conditions_hold = false;  // the closed-form conditions on beta and gamma
    bool consistent = false;       // both routes agree
    bool beta_forced = false;      // some third derivative of Psi is nonzero
    std::optional<S> forced_beta;
    CheckReport report;
};
template <class S>
AutomorphismResult<S> automorphism_check(const FrobeniusStructure<S>& fs, const AutomorphismCandidate<S>& cand);

}  // namespace specfrob::frobenius
