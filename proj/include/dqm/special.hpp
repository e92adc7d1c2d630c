#pragma once

#include "dqm/common.hpp"

namespace dqm {

// Complex Gamma by the Lanczos approximation (g = 7, 9 terms) with the
// reflection formula for Re z < 1/2. PoleError-free: returns inf at poles.
cplx gamma_fn(cplx z);
// log Gamma(z) modulo 2 pi i; finite for large |z| where Gamma overflows.
cplx log_gamma(cplx z);
// 1/Gamma(z), exactly 0 at non-positive integers.
cplx rgamma(cplx z);

// Gauss 2F1(a, b; c; z) for z off the cut [1, inf): direct series for
// |z| < 1, or the Pfaff transformation when |z/(z-1)| is smaller.
// CutError on the cut or outside the implemented region.
cplx hyp2f1(cplx a, cplx b, cplx c, cplx z);

}  // namespace dqm
