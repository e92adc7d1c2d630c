#pragma once

#include <array>
#include <string>
#include <vector>

#include "dqm/common.hpp"

namespace dqm {

// The base q = exp(-i (gamma - i epsilon)). epsilon = 0 is the unit-circle
// case; epsilon > 0 is only used to regularize.
class Base {
public:
    explicit Base(double gamma, double epsilon = 0.0);
    double gamma() const noexcept { return gamma_; }
    double epsilon() const noexcept { return epsilon_; }
    cplx log_q() const noexcept { return {-epsilon_, -gamma_}; }
    cplx q() const { return std::exp(log_q()); }
    cplx pow(cplx s) const { return std::exp(log_q() * s); }  // q^s
    Base regularized(double eps) const { return Base(gamma_, eps); }

private:
    double gamma_, epsilon_;
};

// 2phi1 parameters a = e^lambda, b = e^mu, c = e^nu. The exponents are the
// authoritative representation.
struct Phi21Params {
    cplx log_a, log_b, log_c;
    cplx a() const { return std::exp(log_a); }
    cplx b() const { return std::exp(log_b); }
    cplx c() const { return std::exp(log_c); }
    static Phi21Params from_values(cplx a, cplx b, cplx c) {
        return {std::log(a), std::log(b), std::log(c)};
    }
};

enum class SeriesMethod { direct, terminating, regularized };

struct SeriesResult {
    cplx value;
    int terms_used = 0;
    bool converged = false;
    double tail_bound = 0.0;  // relative to |value|
    SeriesMethod method = SeriesMethod::direct;
};

struct SeriesOptions {
    double tol = 1e-12;
    int max_terms = 200000;
    int window = 20;         // minimum block length of the tail monitor
    int growth_limit = 50;   // consecutive growing terms that mean divergence
    bool regularize = true;  // epsilon fallback when the direct sum stalls
};

// (x; q)_n for integer n >= 0, with x = e^{log_x}.
cplx qpochhammer_finite(const Base& base, cplx log_x, int n);
// Same for a plain value x (allows x = 0).
cplx qpochhammer_value(const Base& base, cplx x, int n);

// 2phi1(a, b; c; q; Z). Terminating sums are exact; otherwise the term
// recurrence is summed with compensation until the tail monitor is satisfied.
// Throws DivergenceError when terms grow for growth_limit consecutive
// indices, ParamError when a denominator vanishes.
SeriesResult phi21(const Base& base, const Phi21Params& p, cplx Z, const SeriesOptions& opts = {});

// The q-difference equation satisfied by f(Z) = 2phi1(a, b; c; q; Z):
// (c - abZ) f(qZ) + ((a+b)Z - c - q) f(Z) + (q - Z) f(Z/q) = 0.
struct Residual {
    cplx value;
    double scale;  // sum of the magnitudes of the three terms
    double relative() const { return std::abs(value) / std::max(scale, 1e-300); }
};
Residual q_difference_residual(const Base& base, const Phi21Params& p, const CFunc& f, cplx Z);
// Same equation with f given as a function of the exponent z, Z = e^z.
Residual q_difference_residual_exp(const Base& base, const Phi21Params& p, const CFunc& F, cplx z);

// Terminating balanced r+1 phi r with first numerator q^{-n}:
// sum_{k=0}^n prod (num_j; q)_k / prod (den_j; q)_k / (q; q)_k * arg^k.
// num excludes q^{-n}; den entries may be 0. ParamError if a denominator
// factor vanishes.
cplx terminating_phi(const Base& base, int n, const std::vector<cplx>& num,
                     const std::vector<cplx>& den, cplx arg);

enum class Coordinate { cos_x, i_sinh_x };

// e^{i theta} of the sinusoidal coordinate: e^{ix} or i e^{x}.
cplx coordinate_phase(Coordinate c, cplx x);

// Askey-Wilson p_n(eta; a1..a4 | q) at eta = cos x or i sinh x. Evaluated in
// the denominator-free form, so it is finite for all parameters.
cplx askey_wilson(const Base& base, int n, const std::array<cplx, 4>& a, cplx x,
                  Coordinate coord = Coordinate::cos_x);
// The literal prefactor-times-4phi3 form; ParamError if a lower parameter
// makes the 4phi3 ill-defined.
cplx askey_wilson_4phi3(const Base& base, int n, const std::array<cplx, 4>& a, cplx x,
                        Coordinate coord = Coordinate::cos_x);

enum class UltraLine { askey_wilson, phi43, phi32, phi21 };

// Continuous q-ultraspherical C_n(eta; beta | q), beta = e^{log_beta}.
cplx q_ultraspherical(const Base& base, int n, cplx log_beta, cplx x,
                      Coordinate coord = Coordinate::cos_x, UltraLine line = UltraLine::phi21);

std::string to_string(SeriesMethod m);

}  // namespace dqm
