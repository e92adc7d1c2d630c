#pragma once

#include <string>
#include <vector>

#include "dqm/common.hpp"

namespace dqm {

// Transmission/reflection pair at wave number k.
struct AmplitudeResult {
    cplx k;
    cplx t;
    cplx r;
    double unitarity_defect = 0.0;    // | |t|^2 + |r|^2 - 1 |
    std::vector<double> bound_kappa;  // expected poles k = i kappa of t
    std::vector<std::string> flags;   // diagnostics, e.g. "r_exact_zero"
};

inline double unitarity_defect(cplx t, cplx r) {
    return std::abs(std::norm(t) + std::norm(r) - 1.0);
}

}  // namespace dqm
