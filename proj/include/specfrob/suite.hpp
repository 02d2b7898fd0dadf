#pragma once
// Property suites over seeded random prepotentials and the shipped numeric
// family. Each function folds its per-sample reports into one check per name.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "specfrob/hitchin.hpp"
#include "specfrob/jet.hpp"
#include "specfrob/report.hpp"

namespace specfrob::suite {

using RJet = Jet<Rational>;

struct Sample {
    int n = 0;
    RJet psi;
};

// Terms of degree 2..order with small rational coefficients; n cycles 1, 2, 3.
RJet random_prepotential(std::mt19937_64& rng, int n, int order, double density = 0.4);
std::vector<Sample> population(std::uint64_t seed, int count, int order);

// One check per name: pass iff every sample passed, worst error, first failing sample as witness.
CheckReport fold(const std::vector<CheckReport>& per_sample, const std::string& prefix = {});

CheckReport frobenius_axioms(const std::vector<Sample>& pop);
CheckReport vhs_suite(const std::vector<Sample>& pop);       // frame checks and the extraction roundtrip
CheckReport tep_suite(const std::vector<Sample>& pop);       // TEP checks and the two rejected perturbations
CheckReport fmanifold_equality(const std::vector<Sample>& pop);
CheckReport rechart_independence(int order = 4);
CheckReport specialgeo_suite(const std::vector<Sample>& pop, std::uint64_t seed);
CheckReport combinatorics_suite(const std::vector<int>& genera = {2, 3, 4});

// Half-periods of 4z^3 - g2 z - g3 with real roots e1 > e2 > e3, by the AGM.
struct EllipticPeriods {
    double omega1 = 0.0, omega3 = 0.0;
};
EllipticPeriods elliptic_periods(double e1, double e2, double e3);
CheckReport elliptic_check(const hitchin::Tolerances& tol);
CheckReport numeric_ladder(const hitchin::Family& f, std::uint64_t seed);

struct SuiteRun {
    CheckReport report;
    nlohmann::json timings = nlohmann::json::object();
};
// name is exact, numeric or all.
SuiteRun run(const std::string& name, std::uint64_t seed, int order = 5, int count = 50);

}  // namespace specfrob::suite
