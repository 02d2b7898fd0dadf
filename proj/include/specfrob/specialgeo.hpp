#pragma once
// Homogeneous prepotentials of projective special geometry in the graded form
//   F = sum_k z_1^{2-k} Psi_k(z_2, ..., z_{n+1}),  Psi_k = degree-k part of Psi,
// stored as a Laurent series in z_1 whose coefficients are jets in z_2..z_{n+1}.

#include <string>
#include <vector>

#include <json.hpp>

#include "specfrob/laurent.hpp"
#include "specfrob/report.hpp"

namespace specfrob::specialgeo {

using RJet = Jet<Rational>;
using RLaurent = Laurent<Rational>;

struct HomogeneousPrepotential {
    int n = 0, order = 0;
    RLaurent F;
};

// Coefficients of sigma_taut = sum z_i a_i + sum w_i b_i; index 0 is z_1.
struct SigmaTaut {
    std::vector<RLaurent> z, w;
    CheckReport report;
};

std::vector<std::string> z_names(int n);  // names of the jet variables z_2..z_{n+1}

HomogeneousPrepotential homogenize(const RJet& psi);
// z_i d/dz_i summed; every graded piece of a homogeneous F has degree 2.
RLaurent euler(const RLaurent& f, int n);
RLaurent partial(const RLaurent& f, int i);  // i = 0 is z_1
CheckReport homogeneity_check(const HomogeneousPrepotential& hp);

SigmaTaut adjoint_coordinates(const HomogeneousPrepotential& hp);

// F - (1/2) sum A_ij z_i z_j for symmetric A of size n+1.
HomogeneousPrepotential quadratic_action(const HomogeneousPrepotential& hp, const Mat<Rational>& A);

RLaurent cubic(const HomogeneousPrepotential& hp, int i, int j, int k);
// -S(sigma_taut, d_i d_j d_k sigma_taut) = d_i d_j d_k F for all triples, with
// sigma_taut written in the flat frame as (z_1, z_i, w_i, -w_1).
CheckReport cubic_identity_check(const HomogeneousPrepotential& hp);

struct Restriction {
    RJet psi;
    CheckReport report;  // normalization and the bijection of quadratic classes
};
// F restricted to z_1 = 1; strict mode rejects F(1, 0) != 0.
Restriction restrict(const HomogeneousPrepotential& hp, bool strict = true);

// Psi~(t~) = F(A (1, t~)) for a constant (n+1) x (n+1) matrix A with A(i, 0) = 0
// for i >= 1 and A(0, 0) != 0.
RJet restrict_affine(const HomogeneousPrepotential& hp, const Mat<Rational>& A);

nlohmann::json to_json(const HomogeneousPrepotential& hp);
HomogeneousPrepotential from_json(const nlohmann::json& j);

}  // namespace specfrob::specialgeo
