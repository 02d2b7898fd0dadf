#pragma once
// Weight-3 filtrations with pairing and CY-condition built from a prepotential,
// and the inverse extraction of flat coordinates and prepotential.
//
// Slot convention (0-based): slot 0 spans F^3, slots 1..n the F^2/F^3 part,
// slots n+1..2n the F^1/F^2 part, slot 2n+1 the F^0/F^1 part. Base variables
// are t_2..t_{n+1}, stored as jet variables 0..n-1.

#include <string>
#include <vector>

#include <json.hpp>

#include "specfrob/jet.hpp"
#include "specfrob/report.hpp"

namespace specfrob::vhs {

using RJet = Jet<Rational>;
using RMatrix = JetMatrix<Rational>;

// Antisymmetric pairing: S(v_1, v_{2n+2}) = -1, S(v_k, v_{k+n}) = 1.
Mat<Rational> pairing_matrix(int n);
// Hodge level p of each slot: (3, 2 x n, 1 x n, 0).
std::vector<int> hodge_levels(int n);
std::vector<std::string> base_names(int n);

// (sum_k t_k d_k - c) f, computed degree-wise so the validity order is kept.
RJet euler_shift(const RJet& f, int c);

struct FlatFrameModel {
    int n = 0, order = 0;
    RJet psi;
    RMatrix V;  // column alpha = v_alpha(t) in the flat frame
    Mat<Rational> S;
    std::vector<int> hodge_ranks;
};

FlatFrameModel build_frame(const RJet& psi, int n, int order);

// Gamma_i with d_i V = V Gamma_i, from the closed-form entries.
std::vector<RMatrix> connection(const FlatFrameModel& model);
// Gamma_i = V^{-1} d_i V computed from the frame itself.
std::vector<RMatrix> connection_from_frame(const FlatFrameModel& model);

CheckReport verify_vhf(const FlatFrameModel& model);

struct FrameExtraction {
    std::vector<RJet> t_hat;  // new coordinates as jets in the input variables
    RJet psi_hat;             // prepotential in the new coordinates
    CheckReport report;
};

// frame: (2n+2) x (2n+2) jet matrix in the flat frame; only its first column
// (a generator of F^3) is consumed.
FrameExtraction extract_prepotential(const RMatrix& frame, int n);

struct PeriodMap {
    std::vector<RMatrix> flag;  // flag[p] spans F^p, p = 0..3
    CheckReport report;
};
PeriodMap period_map(const FlatFrameModel& model);

struct GradedAlgebra {
    int m = 0;
    std::vector<Rational> c;  // c[(gamma * m + alpha) * m + beta], basis v^0
    Mat<Rational> g;
    Rational& at(int g_, int a, int b) { return c[(std::size_t(g_) * m + a) * m + b]; }
    const Rational& at(int g_, int a, int b) const { return c[(std::size_t(g_) * m + a) * m + b]; }
};
GradedAlgebra graded_algebra_at_origin(const FlatFrameModel& model, const Rational& lambda);

nlohmann::json model_to_json(const FlatFrameModel& model);
FlatFrameModel model_from_json(const nlohmann::json& j);

}  // namespace specfrob::vhs
