#pragma once
// Hitchin-base combinatorics and Seiberg-Witten periods of hyperelliptic local
// models y^2 = q(z; u) = q0(z) + sum_j u_j phi_j(z).
//
// Polynomials are ascending coefficient vectors. Branch points are sorted by
// (real, imaginary); cut k joins e_{2k}, e_{2k+1} (0-based) and, for odd degree,
// the last root is joined to infinity. The a-cycle a_k is twice the integral
// along the left side of cut k; b_k is the sum over j >= k of twice the
// integral along the segment from e_{2j+1} to e_{2j+2}.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "specfrob/frobenius.hpp"
#include "specfrob/report.hpp"

namespace specfrob::hitchin {

using cd = std::complex<double>;
using CVec = std::vector<cd>;
using CMat = Eigen::MatrixXcd;

struct DiscriminantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- combinatorics ----

struct RootSystemData {
    std::string label;
    int rank = 0;
    std::vector<int> degrees;  // of the basic invariants
    long weyl_order = 0;
    int roots = 0;
    int dim_group() const { return roots + rank; }
};
RootSystemData root_system(const std::string& label);
std::vector<std::string> root_system_labels();

struct CurveData {
    int genus = 2;
    int canonical_degree() const { return 2 * genus - 2; }
};

struct Combinatorics {
    RootSystemData group;
    CurveData curve;
    long dim_B = 0, genus_cameral = 0, deg_D_int = 0, deg_D_br = 0;
    bool half_dim_ok = false;
    CheckReport report;
};
Combinatorics combinatorics(const RootSystemData& group, const CurveData& curve);
nlohmann::json to_json(const Combinatorics& c);

// ---- families ----

cd poly_eval(const CVec& p, cd z);
CVec poly_deriv(const CVec& p);

struct QuadratureConfig {
    int nodes = 96;         // per segment; doubled for the error estimate
    double fd_step = 1e-4;  // relative to max(1, |u|)
    double rel_tol = 1e-9;
};
struct Tolerances {
    double sep_min = 1e-6;
    double agm = 1e-8;
    double cy = 1e-6;
    double tau_symmetry = 1e-8;
    double euler = 1e-8;
    double cubic_symmetry = 1e-5;
    double kappa = 1e-3;
    double frobenius = 1e-6;
    double consistency = 1e-3;
    double z1_min = 1e-8;
    double jacobian_cond = 1e12;
};
struct GridConfig {
    int points = 5;  // per u-direction
    double radius = 0.005;
    int fit_degree = 4;
};

struct Family {
    CVec q0;
    std::vector<CVec> phis;
    CVec u_star;
    QuadratureConfig quad;
    Tolerances tol;
    GridConfig grid;

    int degree() const;  // of q, taken from q0
    int genus() const { return (degree() - 1) / 2; }
    int dim() const { return int(phis.size()); }
    CVec q(const CVec& u) const;
    void validate() const;  // throws InputError
};
Family family_from_json(const nlohmann::json& j);
nlohmann::json family_to_json(const Family& f);
// q = z^6 + u_1 + u_2 z at a generic point near (-1, 0).
Family shipped_family();

struct BranchPoints {
    CVec e;
    double min_separation = 0.0;
    double scale = 1.0;  // max(1, max |e|)
};
// Companion eigenvalues polished by Newton and sorted; DiscriminantError when
// two roots are closer than sep_min * scale.
BranchPoints branch_points(const CVec& q, double sep_min);
BranchPoints branch_points(const Family& f, const CVec& u);
// Continues each root of `from` to the polynomial at u, keeping the order.
BranchPoints track(const Family& f, const BranchPoints& from, const CVec& u);
// InputError if a cut or a b-segment meets another one away from shared endpoints.
void check_basis_geometry(const BranchPoints& bp);

// The differential r(z) y^power dz with power = +1 or -1.
struct Differential {
    CVec r;
    int power = 1;
};
Differential sw_differential();                          // y dz
Differential dlambda(const Family& f, int j);            // phi_j dz / (2y)
Differential holomorphic(int k);                         // z^k dz / y

struct PathIntegral {
    cd value;
    double error = 0.0;  // node-doubling estimate, relative to the integral's L1 size
};
// Integral from e_from to e_to along the straight segment. On a cut the left side
// of the cut's own orientation is used, so swapping the endpoints negates.
PathIntegral segment_integral(const CVec& q, const BranchPoints& bp, const Differential& w, int from, int to,
                              int nodes);

struct CyclePeriods {
    CVec a, b;
    double error = 0.0;
};
CyclePeriods cycle_periods(const CVec& q, const BranchPoints& bp, const Differential& w, const QuadratureConfig& qc);

// Periods of lambda and their u-Jacobians from the derivative differentials.
struct PeriodData {
    CVec u;
    BranchPoints bp;
    CVec z, w;      // a- and b-periods of lambda
    CMat dz, dw;    // genus x dim, (i, j) = period of d lambda / d u_j
    double quad_error = 0.0;
};
PeriodData periods(const Family& f, const CVec& u);
PeriodData periods(const Family& f, const CVec& u, const BranchPoints& bp);

struct CYResult {
    double fd_deviation = 0.0;    // |FD - Gauss-Manin| / max |Gauss-Manin|
    double richardson = 0.0;      // |D(h) - D(h/2)| relative
    double euler_deviation = 0.0;
    bool euler_applicable = false;
    CheckReport report;
};
// q0 = c z^D with D even and every phi_j a single monomial, so that lambda scales
// with weighted u; the special chart and the pipeline need this.
bool weighted_homogeneous(const Family& f);
// Euler scaling is only tested when q0 is a single monomial z^D and each phi_j
// a single monomial; xi are the sampled scalings of lambda.
CYResult cy_check(const Family& f, const CVec& u, const CVec& xis);
// Periods at the point u' with z -> kappa z, u_j -> kappa^{D - deg phi_j} u_j,
// where kappa = xi^{2/(D+2)}. Roots are carried along, not re-sorted.
PeriodData scaled_periods(const Family& f, const PeriodData& base, cd xi);

struct TauResult {
    CMat tau;  // tau(i, j) = d w_i / d z_j
    double symmetry_defect = 0.0;
    CheckReport report;
};
TauResult period_matrix(const PeriodData& pd, const Tolerances& tol);
TauResult period_matrix(const Family& f, const CVec& u);

struct Tensor3 {
    int d = 0;
    CVec v;
    Tensor3() = default;
    explicit Tensor3(int dim) : d(dim), v(std::size_t(dim) * dim * dim) {}
    cd& operator()(int i, int j, int k) { return v[(std::size_t(i) * d + j) * d + k]; }
    const cd& operator()(int i, int j, int k) const { return v[(std::size_t(i) * d + j) * d + k]; }
    double max_abs() const;
    double symmetry_defect() const;  // max over index permutations, relative to max_abs
    cd contract(const CVec& x, const CVec& y, const CVec& z) const;
    Tensor3 pullback(const CMat& m) const;  // T'(a,b,c) = sum T(i,j,k) m(i,a) m(j,b) m(k,c)
};

struct CubicResult {
    Tensor3 c_z;  // d tau_ij / d z_k
    Tensor3 c_u;  // the same tensor on u-directions
    double symmetry_defect = 0.0;
    double richardson = 0.0;
    CheckReport report;
};
CubicResult cubic_direct(const Family& f, const CVec& u);

// sum_p dq_X dq_Y dq_Z / (2 q'(p)^2) over the branch points, on u-directions.
Tensor3 cubic_balduzzi(const Family& f, const CVec& u);
Tensor3 cubic_balduzzi(const Family& f, const CVec& u, const BranchPoints& bp);

struct KappaFit {
    cd kappa;
    double spread = 0.0;  // max |ratio - kappa| / |kappa|
    int samples = 0;
    std::vector<cd> ratios;
    CheckReport report;
};
// Balduzzi = kappa * direct on random direction triples at each base point.
KappaFit fit_kappa(const Family& f, const std::vector<CVec>& base_points, int triples_per_point, std::uint64_t seed);

struct Chart {
    cd z1;
    CVec t;        // z_i / z_1, i >= 2
    cd F = 0.0;    // (1/2) sum z_i w_i
    cd psi = 0.0;  // F / z_1^2 = F(1, t)
    double jacobian_cond = 0.0;
    CheckReport report;
};
// DegenerateError if z_1 vanishes or dz/du is singular.
Chart chart_from_periods(const CVec& z, const CVec& w, const CMat& dz, const Tolerances& tol);
Chart special_chart(const Family& f, const CVec& u);

struct GridSample {
    CVec u, z, w;
    cd t, psi;
};
struct PipelineResult {
    std::vector<GridSample> grid;
    cd t_star, psi_star;
    Jet<Complex> psi_fit;  // in delta = t - t_star, without constant term
    double fit_residual = 0.0;
    double fit_condition = 0.0;
    frobenius::FrobeniusStructure<Complex> fs;
    double frobenius_residual = 0.0;
    cd kappa;
    cd psi3_fit, psi3_direct, psi3_balduzzi;
    CheckReport report;
    double seconds = 0.0;
};
// Genus-2 weighted-homogeneous families only (one chart variable t).
PipelineResult pipeline(const Family& f);
std::string grid_csv(const std::vector<GridSample>& grid);

nlohmann::json to_json(const PeriodData& pd);
nlohmann::json cvec_to_json(const CVec& v);
nlohmann::json cmat_to_json(const CMat& m);
cd complex_from_json(const nlohmann::json& j);

}  // namespace specfrob::hitchin
