#pragma once

#include <optional>
#include <vector>

#include "dqm/amplitude.hpp"
#include "dqm/common.hpp"

namespace dqm {

struct SeedOptions {
    int max_seeds = 12;  // determinant conditioning degrades beyond this
};

// N exponential seeds psi_j(x) = e^{k_j x} + c~_j e^{-k_j x}, with
// 0 < k_1 < ... < k_N < pi/gamma and (-1)^{j-1} c~_j > 0. Immutable.
class SeedSystem {
public:
    double gamma() const noexcept { return gamma_; }
    int N() const noexcept { return static_cast<int>(k_.size()); }
    const std::vector<double>& k() const noexcept { return k_; }
    const std::vector<double>& c_tilde() const noexcept { return c_tilde_; }
    const std::vector<double>& c() const noexcept { return c_; }

    // psi_j for 1-based j.
    cplx seed(int j, cplx x) const;
    CFunc seed_fn(int j) const;
    // The system of the first m seeds (c recomputed for that size).
    SeedSystem truncated(int m) const;

private:
    friend SeedSystem seeds_build(double, std::vector<double>, std::vector<double>, const SeedOptions&);
    double gamma_ = 0.0;
    std::vector<double> k_, c_tilde_, c_;
};

// Throws ValidationError naming the violated constraint.
SeedSystem seeds_build(double gamma, std::vector<double> k, std::vector<double> c_tilde,
                       const SeedOptions& opts = {});

// k_j = j, c~_j = (-1)^{j-1}.
SeedSystem soliton_seeds(double gamma, int N);

// i^{n(n-1)/2} det(f_k(x + i((n+1)/2 - j) gamma)).
cplx casoratian(double gamma, const std::vector<CFunc>& fns, cplx x);

// u_N(x) = det(delta + c_m e^{-(k_m+k_n) x} / sin(gamma (k_m+k_n)/2)).
struct TauResult {
    cplx value;
    double condition;   // 1 / rcond
    bool ill_conditioned;  // condition > 1e12
};
TauResult tau_u_detail(const SeedSystem& s, cplx x);
cplx tau_u(const SeedSystem& s, cplx x);
// u_{N,j}: c_m -> sin(gamma (k_j-k_m)/2) / sin(gamma (k_j+k_m)/2) c_m.
TauResult tau_u_excl_detail(const SeedSystem& s, int j, cplx x);
cplx tau_u_excl(const SeedSystem& s, int j, cplx x);

// The same functions from the Casoratian normalizations and the 2^N
// expansion; independent routes used for cross-checks.
cplx tau_u_casoratian(const SeedSystem& s, cplx x);
cplx tau_u_excl_casoratian(const SeedSystem& s, int j, cplx x);
cplx tau_u_expansion(const SeedSystem& s, cplx x);

// V^[N] from Casoratian ratios; potential_V_tau uses the tau form.
cplx potential_V(const SeedSystem& s, cplx x);
cplx potential_V_tau(const SeedSystem& s, cplx x);
// sqrt(u(x + i gamma) u(x - i gamma)) / u(x).
cplx potential_calU(const SeedSystem& s, cplx x);

// Eigenvalue -4 sin^2(gamma k_j / 2) of Phi_j.
double bound_energy(const SeedSystem& s, int j);
// Phi^[N]_j in tau form; bound_state_casoratian is the Casoratian form.
cplx bound_state(const SeedSystem& s, int j, cplx x);
cplx bound_state_casoratian(const SeedSystem& s, int j, cplx x);
// phi^[N]_n = const * Phi^[N]_{N-n} with the soliton normalization constant.
cplx relabeled_state(const SeedSystem& s, int n, cplx x);

// Right-moving wave Psi^[N]_k.
cplx wave_solution(const SeedSystem& s, cplx k, cplx x);

// t = prod sinh(gamma (k + i k_j)/2) / sinh(gamma (k - i k_j)/2), r = 0.
AmplitudeResult amplitude_product(const SeedSystem& s, cplx k);

// Minimum of |u_N| over a grid of the strip |Im x| < gamma/2.
struct StripScan {
    double min_abs;
    cplx argmin;
    bool zero_free;  // min_abs above 1e-8 * |u_N| scale
};
StripScan strip_zero_scan(const SeedSystem& s, double x_lo, double x_hi, int nx = 200, int ny = 21);

// Gram matrix of Phi_1..Phi_N over [-L, L] (real x).
std::vector<std::vector<double>> bound_state_overlaps(const SeedSystem& s, double L);

// Ordinary-QM limit: tau function with frak c_j = 2 k_j c~_j prod (k_i+k_j)/(k_i-k_j).
double classical_tau(const std::vector<double>& k, const std::vector<double>& c_tilde, double x);

}  // namespace dqm
