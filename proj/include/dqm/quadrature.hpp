#pragma once

#include "dqm/common.hpp"

namespace dqm {

struct QuadResult {
    cplx value;
    double error;   // estimated absolute error
    int evaluations;
};

struct TanhSinhOptions {
    double abs_tol = 1e-15;
    double rel_tol = 1e-14;
    int min_level = 3;
    int max_level = 10;
};

// Tanh-sinh quadrature of a complex-valued f over the finite interval [a, b].
// Assumes f is analytic near the interval; endpoint singularities are
// tolerated. Throws QuadratureError if max_level is reached without meeting
// the tolerance.
QuadResult tanh_sinh(const std::function<cplx(double)>& f, double a, double b,
                     const TanhSinhOptions& opts = {});

}  // namespace dqm
