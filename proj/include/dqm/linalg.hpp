#pragma once

#include <vector>

#include "dqm/common.hpp"

namespace dqm {

// Square complex matrix in row-major order.
struct CMatrix {
    int n = 0;
    std::vector<cplx> a;
    explicit CMatrix(int size) : n(size), a(static_cast<std::size_t>(size) * size) {}
    cplx& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    cplx operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

struct Determinant {
    cplx value;
    double rcond;  // reciprocal condition estimate (1 for n = 0)
};

// Partial-pivot LU determinant with a condition estimate.
Determinant determinant(const CMatrix& m);

}  // namespace dqm
