#include "dqm/special.hpp"

#include <array>
#include <limits>
#include <sstream>

#include "dqm/errors.hpp"

namespace dqm {

namespace {

constexpr double kG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

cplx lanczos_sum(cplx zm1) {
    cplx x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (zm1 + static_cast<double>(i));
    return x;
}

cplx series(cplx a, cplx b, cplx c, cplx z, int max_terms) {
    KahanSum sum;
    sum.add(1.0);
    cplx term = 1.0;
    int quiet = 0;
    for (int n = 0; n < max_terms; ++n) {
        const double dn = n;
        term *= (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * z;
        sum.add(term);
        if (term == cplx(0.0)) break;
        quiet = std::abs(term) < 1e-17 * std::abs(sum.value()) ? quiet + 1 : 0;
        if (quiet >= 3) break;
    }
    return sum.value();
}

}  // namespace

cplx gamma_fn(cplx z) {
    if (is_nonpositive_integer(z)) return {std::numeric_limits<double>::infinity(), 0.0};
    if (z.real() < 0.5) return pi / (std::sin(pi * z) * gamma_fn(1.0 - z));
    const cplx zm1 = z - 1.0;
    const cplx t = zm1 + kG + 0.5;
    return std::sqrt(2.0 * pi) * std::pow(t, zm1 + 0.5) * std::exp(-t) * lanczos_sum(zm1);
}

cplx log_gamma(cplx z) {
    if (is_nonpositive_integer(z)) return {std::numeric_limits<double>::infinity(), 0.0};
    if (z.real() < 0.5) return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
    const cplx zm1 = z - 1.0;
    const cplx t = zm1 + kG + 0.5;
    return 0.5 * std::log(2.0 * pi) + (zm1 + 0.5) * std::log(t) - t + std::log(lanczos_sum(zm1));
}

cplx rgamma(cplx z) {
    if (is_nonpositive_integer(z)) return 0.0;
    return std::exp(-log_gamma(z));
}

cplx hyp2f1(cplx a, cplx b, cplx c, cplx z) {
    if (is_nonpositive_integer(c)) throw DomainError("2F1 lower parameter is a non-positive integer");
    if (z.imag() == 0.0 && z.real() >= 1.0) {
        std::ostringstream os;
        os << "2F1 argument " << z.real() << " lies on the branch cut [1, inf)";
        throw CutError(os.str());
    }
    const double r = std::abs(z);
    const double rp = std::abs(z / (z - 1.0));
    if (r <= 0.9 || (r < 1.0 && r <= rp)) return series(a, b, c, z, 2000000);
    if (rp < 1.0) return std::pow(1.0 - z, -a) * series(a, c - b, c, z / (z - 1.0), 2000000);
    throw CutError("2F1 argument outside the implemented region |z| < 1 or Re z < 1/2");
}

}  // namespace dqm
