#pragma once

#include <array>
#include <string>
#include <vector>

#include "dqm/amplitude.hpp"
#include "dqm/common.hpp"
#include "dqm/qseries.hpp"
#include "dqm/solvable.hpp"

namespace dqm {

// ---------------------------------------------------------------------------
// Connection formula for 2phi1(e^lambda, e^mu; e^nu; q; e^z) at |q| = 1.

struct ConnectionInput {
    double gamma;
    cplx lambda, mu, nu, z;
    // DegenerateError when lambda - mu lies on i gamma Z.
    void validate() const;
};

// One term C_j(z) * 2phi1(...) of the right-hand side.
struct ConnectionBranch {
    Phi21Params params;   // exponents of the branch series
    cplx log_arg;         // exponent of its argument, nu - lambda - mu - z - i gamma
    bool vanishes = false;  // a Phi+ factor in a denominator sits on a pole
    cplx log_coefficient;   // log C_j (meaningless when vanishes)
    SeriesResult series;
    cplx value;             // C_j * series.value
};

struct ConnectionRhs {
    std::array<ConnectionBranch, 2> branch;
    cplx value;
};

// log C_1, log C_2. Throws PoleError from a numerator; a pole in a
// denominator sets the flag and leaves the log at -inf.
struct BranchCoefficient {
    cplx log_value;
    bool vanishes = false;
};
BranchCoefficient connection_coefficient(const ConnectionInput& ci, int branch);

ConnectionRhs connection_rhs_detail(const ConnectionInput& ci, const SeriesOptions& opts = {});
cplx connection_rhs(const ConnectionInput& ci, double tol = 1e-12);
SeriesResult connection_lhs(const ConnectionInput& ci, const SeriesOptions& opts = {});

struct ConnectionReport {
    cplx lhs, rhs;
    double abs_diff = 0.0;
    double tol = 0.0;
    bool passed = false;
    SeriesResult lhs_series;
    std::array<SeriesResult, 2> rhs_series;
    std::array<bool, 2> branch_vanishes{};
};
// PASS iff |lhs - rhs| < tol * max(|lhs|, 1). InconclusiveError when neither
// side's series stabilizes.
ConnectionReport connection_verify(const ConnectionInput& ci, double tol);

// Terminating case lambda = i n gamma (a = q^{-n}), evaluated three ways.
struct TerminatingCheck {
    cplx lhs;          // finite 2phi1
    cplx rhs;          // connection formula (second branch vanishes)
    cplx finite_form;  // q-Chu-Vandermonde type finite-sum reduction
    bool second_branch_vanished = false;
};
TerminatingCheck terminating_check(double gamma, int n, cplx mu, cplx nu, cplx z);

// Applying the formula to its own right side. Returns the two combinations
// that must equal 1 and 0.
struct DoubleApplication {
    cplx same;   // C1(P) C1(P1) + C2(P) C1(P2)
    cplx other;  // C1(P) C2(P1) + C2(P) C2(P2)
};
DoubleApplication double_application(const ConnectionInput& ci);

// The q-Euler transformation with the Phi+ ratio in place of the infinite
// products: lhs 2phi1(e^lambda, e^mu; e^nu; e^z), rhs
// Phi+(z)/Phi+(z + lambda + mu - nu) 2phi1(e^{nu-lambda}, e^{nu-mu}; e^nu; e^{z+lambda+mu-nu}).
struct QEulerCheck {
    cplx lhs, rhs;
    cplx exact_rhs;  // the same with the 1phi0 series in place of the ratio
    double deviation_scale;  // exp(2 pi Re z / gamma)
};
QEulerCheck qeuler_check(const ConnectionInput& ci, const SeriesOptions& opts = {});

// q-difference residual of branch j (0 or 1) of the right-hand side,
// including its z-dependent factor.
Residual branch_difference_residual(const ConnectionInput& ci, int branch,
                                    const SeriesOptions& opts = {});

// ---------------------------------------------------------------------------
// Scattering for the generic coupling.

// Exponents (lambda, mu, nu, z) of the 2phi1 in the plane-wave solution.
ConnectionInput wave_connection_input(const Coupling& c, cplx k, cplx x);

// The plane wave Psi_k(x), unit right-moving amplitude at x -> +inf. Uses the
// series directly for Re x >= 0 and the connection formula otherwise.
cplx wave_psi(const Coupling& c, cplx k, cplx x);

// t(k), r(k) from the closed dilogarithm forms. r is exactly 0 when its
// denominator sits on a pole (integer h).
AmplitudeResult closed_form_amplitudes(double gamma, double h, cplx k);
AmplitudeResult amplitudes(const Coupling& c, cplx k);
// The same amplitudes written with Phi+ factors (parameter gamma), an
// independent evaluation route.
AmplitudeResult closed_form_amplitudes_plus(double gamma, double h, cplx k);

// A(k), B(k) of Psi_k -> A e^{ikx} + B e^{-ikx} at x -> -inf, extracted from
// the connection formula at x = x_probe.
struct AsymptoticPair {
    cplx A, B;
    bool B_vanishes = false, A_vanishes = false;
};
AsymptoticPair asymptotic_coefficients(const Coupling& c, cplx k, double x_probe = -15.0);
// t = 1/A, r = B/A.
AmplitudeResult amplitudes_from_connection(const Coupling& c, cplx k, double x_probe = -15.0);

// Zeros of 1/t(i kappa) for 0 < kappa <= pi/gamma.
struct CensusEntry {
    double kappa;
    int n;  // matched bound-state index, -1 if unmatched
    double position_error;
};
struct PoleCensus {
    std::vector<CensusEntry> zeros;
    std::vector<double> spurious;  // zeros with no bound-state match
    std::vector<int> missing;      // expected n not found
    int scan_points = 0;
    bool clean() const { return spurious.empty() && missing.empty(); }
};
PoleCensus pole_census(const Coupling& c, double step = 1e-3);

// Minimum of |r(k)| over a real grid, refined around local minima.
struct ReflectionZeroScan {
    double min_abs_r;
    double argmin;
};
ReflectionZeroScan reflection_zero_scan(double gamma, double h, double k_lo, double k_hi, int n);

// ---------------------------------------------------------------------------
// Ordinary quantum mechanics oracle, V = -h(h+1)/cosh^2 x.

struct ClassicalAmplitudes {
    cplx t, r;
};
ClassicalAmplitudes classical_amplitudes(double h, double k);

// Both sides of the Gauss connection formula between z = 0 and z = 1.
struct ConnectionPair {
    cplx lhs, rhs;
};
ConnectionPair classical_connection_2F1(cplx alpha, cplx beta, cplx gam, cplx z);

// (2 cosh x)^{ik} 2F1(-h-ik, 1+h-ik; 1-ik; (1 - tanh x)/2), unit amplitude
// right-moving wave of the classical problem.
cplx classical_unit_wave(double h, double k, double x);
// Its x -> -inf coefficients A e^{ikx} + B e^{-ikx} from the Gamma ratios.
AsymptoticPair classical_wave_asymptotics(double h, double k);

}  // namespace dqm
