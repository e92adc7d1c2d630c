#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace dqm {

using cplx = std::complex<double>;
using CFunc = std::function<cplx(cplx)>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// e^w - 1 without cancellation for small |w|.
inline cplx expm1c(cplx w) {
    const double x = w.real(), y = w.imag();
    const double em1 = std::expm1(x);
    const double s = std::sin(0.5 * y);
    const double re = em1 * std::cos(y) - 2.0 * s * s;
    const double im = std::exp(x) * std::sin(y);
    return {re, im};
}

// 1 - e^w, the building block of every q-Pochhammer factor.
inline cplx one_minus_exp(cplx w) { return -expm1c(w); }

// Compensated summation for long complex series.
class KahanSum {
public:
    void add(cplx v) {
        const cplx y = v - c_;
        const cplx t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    cplx value() const { return s_; }

private:
    cplx s_{0.0, 0.0};
    cplx c_{0.0, 0.0};
};

// Square root of g continued along the vertical segment Re x -> x, starting
// from the principal root at Re x. Throws BranchError if the path passes too
// close to a zero of g.
cplx continued_sqrt(const CFunc& g, cplx x, int steps = 16);

// Same, with the value of g at x already known (avoids one evaluation).
cplx continued_sqrt(const CFunc& g, cplx x, cplx gx, int steps);

}  // namespace dqm
