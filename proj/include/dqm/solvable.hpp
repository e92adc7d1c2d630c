#pragma once

#include <array>
#include <string>
#include <vector>

#include "dqm/common.hpp"
#include "dqm/qdilog.hpp"
#include "dqm/reflectionless.hpp"

namespace dqm {

enum class PotentialKind { free, generic_h, reflectionless_N, custom };

// V(x) together with the additive constant of its Hamiltonian,
// H = A^dagger A + energy_shift.
struct PotentialFn {
    PotentialKind kind;
    CFunc eval;
    double energy_shift = 0.0;
    cplx operator()(cplx x) const { return eval(x); }
};

// Generic coupling h > 0 with h + 2 < pi/gamma. Immutable.
class Coupling {
public:
    Coupling(double gamma, double h);
    double gamma() const noexcept { return gamma_; }
    double h() const noexcept { return h_; }
    cplx a1() const { return I * std::exp(0.5 * I * gamma_ * h_); }
    cplx a2() const { return I * std::exp(0.5 * I * gamma_ * (h_ - 1.0)); }
    double alpha1() const { return -pi / (2.0 * gamma_) - 0.5 * h_; }
    double alpha2() const { return alpha1() + 0.5; }
    // [h]': greatest integer strictly below h.
    int nmax() const { return static_cast<int>(std::ceil(h_)) - 1; }
    // The additive constant in H = H' + E~_h, equal to -4 sin^2(gamma h / 2).
    double energy_shift() const;
    double energy(int n) const;  // -4 sin^2(gamma (h - n)/2)

private:
    double gamma_, h_;
};

PotentialFn free_potential();
PotentialFn generic_potential(const Coupling& c);
PotentialFn reflectionless_potential(const SeedSystem& s);
PotentialFn custom_potential(CFunc v, double energy_shift = 0.0);

// sqrt(V(x) V*(x - i g)) f(x - i g) + sqrt(V*(x) V(x + i g)) f(x + i g)
//   - (V(x) + V*(x)) f(x),
// with sqrt(V) continued from the real axis. BranchError if V vanishes on
// the continuation path.
cplx apply_hamiltonian(const PotentialFn& V, double gamma, const CFunc& f, cplx x);
// The same plus V.energy_shift * f(x).
cplx apply_full_hamiltonian(const PotentialFn& V, double gamma, const CFunc& f, cplx x);

cplx potential_generic(const Coupling& c, cplx x);

// The four-parameter family: a_j = exp(-i gamma (alpha_j + i beta_j)).
struct GeneralParams {
    double gamma;
    std::array<double, 2> alpha;
    std::array<double, 2> beta;
    void validate() const;  // ParamError unless the range conditions hold
    cplx a(int j) const { return std::exp(-I * gamma * cplx(alpha[j], beta[j])); }
};
GeneralParams general_params(const Coupling& c);
cplx potential_general(const GeneralParams& p, cplx x);
cplx ground_state_general(const GeneralParams& p, cplx x);

enum class GroundForm { half_product, gamma_pair, reduced };

// phi_0 from quantum dilogarithms; reduced is the single gamma/2 ratio.
cplx ground_state(const Coupling& c, cplx x, GroundForm form = GroundForm::reduced);

// P_n(sinh x), the phase-dressed Askey-Wilson polynomial.
cplx eigen_polynomial(const Coupling& c, int n, cplx x);

struct Eigenpair {
    int n;
    double energy;
    CFunc wavefunction;
};
// RangeError if n > nmax.
Eigenpair eigenpair(const Coupling& c, int n);

struct IdentificationReport {
    double gamma;
    int N;
    double potential_dev;            // generic V at h = N vs soliton V^[N]
    std::vector<double> polynomial_dev;  // per n: Casoratian ratio vs Askey-Wilson
    std::vector<double> energies;    // E_n^[N]
    double energy_dev;               // vs E~_{k_{N-n}}
    double ground_state_dev;         // generic phi_0 at h = N vs elementary form
    double max_dev() const;
};
IdentificationReport reflectionless_identification(double gamma, int N);

}  // namespace dqm
