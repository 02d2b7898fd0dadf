#pragma once
// (TEP)-structures over M = C x B_2 built from a flat-frame model.
//
// M-coordinates (jet variables 0..2n+1): y_1, t_2..t_{n+1}, y_{n+2}..y_{2n+1},
// y_{2n+2}, in the same slot order as the Frobenius coordinates t_1..t_{2n+2}.
// Section matrices are stored in the flat frame v0: column alpha holds sigma_alpha.
// The z-connection is encoded as matrices A_x with z d_x Sigma = Sigma A_x
// (connection form omega_x = A_x / z), the y_1-exponential twist included.

#include <optional>
#include <vector>

#include "specfrob/frobenius.hpp"
#include "specfrob/laurent.hpp"
#include "specfrob/vhs.hpp"

namespace specfrob::tep {

using RJet = Jet<Rational>;
using RMatrix = JetMatrix<Rational>;
using RLaurent = Laurent<Rational>;
using LMatrix = LaurentMatrix<Rational>;

// Deliberate departures from the normal form of the sections, used to probe
// the pairing constraints: sigma_1 gains x_top z^-2 s_{2n+2}, and the
// z^-1 s_{2n+2} coefficient of sigma_{1+i} becomes y_{n+1+i} + x_shift[i].
struct Perturbation {
    Rational x_top = 0;
    std::vector<Rational> x_shift;
    bool active() const;
};

struct TEPModel {
    int n = 0, m = 0, order = 0;
    vhs::FlatFrameModel base;
    RMatrix Vm;                // base frame embedded into M-variables
    LMatrix D;                 // diag(z^{3 - p})
    LMatrix Y;                 // fiber normal form
    LMatrix sigma;             // V D Y (flat frame coordinates)
    std::vector<LMatrix> A;    // A[x] for x = 0..m-1 (M-directions)
    LMatrix Az;                // z d_z component
    LMatrix P;                 // Sigma(z)^T S Sigma(-z)
    Perturbation perturbation;
};

std::vector<std::string> m_names(int n);

TEPModel build_tep(const vhs::FlatFrameModel& model, const Perturbation& pert = {});
LMatrix sigma_in_s_basis(const TEPModel& tep);

CheckReport verify_tep(const TEPModel& tep);

struct FManifold {
    Tensor12<Rational> c;
    VectorField<Rational> e, E;
    CheckReport report;
};
FManifold extract_fmanifold(const TEPModel& tep);

// Compare an extracted F-manifold with a Frobenius structure under t_1 = y_1,
// t_a = y_a, t_{2n+2} = y_{2n+2}.
CheckReport compare_with_frobenius(const FManifold& f, const frobenius::FrobeniusStructure<Rational>& fs);

struct CStarResult {
    LMatrix sigma;            // pulled back sections
    std::vector<Rational> fiber_scaling;  // factor on each M-coordinate
    CheckReport report;
};
CStarResult cstar_action(const TEPModel& tep, const Rational& r);

struct RechartResult {
    std::vector<RJet> t_tilde;  // jets in t
    RJet psi_tilde;             // jet in the new coordinates
    std::vector<RJet> phi;      // (y_1, t~, y~) as jets in M-variables
    bool constants_equal = false;
    bool metrics_equal = false;
    CheckReport report;
};
RechartResult rechart(const vhs::FlatFrameModel& model, const Mat<Rational>& M, int zmax = 6);

// Validation of a frame change: symplectic, fixes v0_1, adapted to F_0.
void validate_frame_change(const Mat<Rational>& M, int n);

}  // namespace specfrob::tep
