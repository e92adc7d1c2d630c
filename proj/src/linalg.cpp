#include "dqm/linalg.hpp"

#include <Eigen/Dense>

namespace dqm {

Determinant determinant(const CMatrix& m) {
    if (m.n == 0) return {1.0, 1.0};
    Eigen::MatrixXcd e(m.n, m.n);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) e(i, j) = m(i, j);
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(e);
    return {lu.determinant(), lu.rcond()};
}

}  // namespace dqm
