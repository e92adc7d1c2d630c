#pragma once

#include <string>
#include <vector>

#include "dqm/common.hpp"

namespace dqm {

// Parameter of the quantum dilogarithm Phi_gamma. Immutable once built.
class QdilogParam {
public:
    explicit QdilogParam(double gamma);
    double gamma() const noexcept { return gamma_; }
    // Half-width of the strip |Im z| < gamma + pi where the integral converges.
    double strip_halfwidth() const noexcept { return gamma_ + pi; }

private:
    double gamma_;
};

enum class QdilogMethod { integral, continued };

struct QdilogValue {
    cplx z;
    cplx value;       // Phi_gamma(z); may be inf if only the log is finite
    cplx log_value;   // continuous logarithm (see eval_log)
    QdilogMethod method;
    double est_error; // relative error estimate of value
};

// Which functional relation moves Im z back toward the real axis.
enum class ShiftRule { automatic, gamma_shifts, pi_shifts };

struct QdilogOptions {
    double tol = 1e-13;            // target error of log_value
    double margin_fraction = 1e-3; // eval_integral needs |Im z| < (1 - f)(gamma + pi)
    double pole_guard = 1e-8;      // distance to a pole/zero that raises PoleError
    ShiftRule shifts = ShiftRule::automatic;
};

// Direct contour integral. Valid only inside the strip (minus the margin);
// throws DomainError otherwise.
QdilogValue eval_integral(const QdilogParam& p, cplx z, const QdilogOptions& opts = {});

// Phi_gamma(z) on the whole plane minus its poles/zeros. Uses the integral in
// a reduced band and the functional relations elsewhere. Throws PoleError
// near lattice points and OverflowError when |Phi| is not representable.
QdilogValue eval(const QdilogParam& p, cplx z, const QdilogOptions& opts = {});

// log Phi_gamma(z). Analytic in the strip, and continuous on each closed
// half-plane Re z <= 0, Re z >= 0 away from poles/zeros. Never overflows.
cplx eval_log(const QdilogParam& p, cplx z, const QdilogOptions& opts = {});

// Phi^+_{gamma/2}(z) = Phi_{gamma/2}(z + i gamma/2 + i pi), built from the
// parameter gamma (not gamma/2).
QdilogValue eval_plus(const QdilogParam& p, cplx z, const QdilogOptions& opts = {});
cplx eval_plus_log(const QdilogParam& p, cplx z, const QdilogOptions& opts = {});

// exp(i/(4 gamma) (z^2 + (gamma^2 + pi^2)/3)), the right side of the
// inversion relation Phi(z) Phi(-z).
cplx inversion_log(double gamma, cplx z);

// Both sides of the two duplication relations at z.
struct DuplicationPair {
    cplx pi_lhs, pi_rhs;        // Phi_g(z+i pi/2) Phi_g(z-i pi/2)  vs Phi_2g(2z)
    cplx gamma_lhs, gamma_rhs;  // Phi_g(z+i g/2) Phi_g(z-i g/2)    vs Phi_g/2(z)
};
DuplicationPair duplication_pair(const QdilogParam& p, cplx z, const QdilogOptions& opts = {});

struct LatticePoint {
    cplx location;
    int n1, n2;
    bool is_pole;
};

// Poles i((2n1-1)g + (2n2-1)pi) and zeros (their negatives), n1, n2 >= 1,
// with modulus <= radius. Sorted by modulus, poles before zeros on ties.
std::vector<LatticePoint> pole_zero_enumerate(const QdilogParam& p, double radius);

std::string to_string(QdilogMethod m);

}  // namespace dqm
