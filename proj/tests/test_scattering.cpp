#include <doctest.h>

#include "dqm/errors.hpp"
#include "dqm/reflectionless.hpp"
#include "dqm/scattering.hpp"
#include "dqm/solvable.hpp"
#include "oracles.hpp"

using namespace dqm;
using oracle::Rng;
using oracle::rel;

namespace {

// log Gamma by recurrence up to Re z >= 10 and the Stirling series.
cplx lgamma_stirling(cplx z) {
    if (z.real() < 0.5) return std::log(pi / std::sin(pi * z)) - lgamma_stirling(1.0 - z);
    cplx shift = 0.0;
    while (z.real() < 10.0) {
        shift -= std::log(z);
        z += 1.0;
    }
    const cplx iz = 1.0 / z, iz2 = iz * iz;
    const cplx series =
        iz * (1.0 / 12 + iz2 * (-1.0 / 360 + iz2 * (1.0 / 1260 + iz2 * (-1.0 / 1680 + iz2 * (1.0 / 1188)))));
    return shift + (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * pi) + series;
}
cplx gamma_o(cplx z) { return std::exp(lgamma_stirling(z)); }

// Classical plane wave integrated by RK4 from the right, then split into
// A e^{ikx} + B e^{-ikx} on the left.
std::pair<cplx, cplx> classical_rk4(double h, double k) {
    const double L = 20.0, step = 1e-3;
    auto acc = [&](double x, cplx psi) { return (-h * (h + 1.0) / std::pow(std::cosh(x), 2) - k * k) * psi; };
    double x = L;
    cplx psi = std::exp(I * k * x), dpsi = I * k * psi;
    const int n = static_cast<int>(2.0 * L / step + 0.5);
    for (int i = 0; i < n; ++i) {
        const double s = -step;
        const cplx k1 = dpsi, l1 = acc(x, psi);
        const cplx k2 = dpsi + 0.5 * s * l1, l2 = acc(x + 0.5 * s, psi + 0.5 * s * k1);
        const cplx k3 = dpsi + 0.5 * s * l2, l3 = acc(x + 0.5 * s, psi + 0.5 * s * k2);
        const cplx k4 = dpsi + s * l3, l4 = acc(x + s, psi + s * k3);
        psi += s / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        dpsi += s / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
        x += s;
    }
    const cplx A = (I * k * psi + dpsi) / (2.0 * I * k) * std::exp(-I * k * x);
    const cplx B = (I * k * psi - dpsi) / (2.0 * I * k) * std::exp(I * k * x);
    return {A, B};
}

}  // namespace

TEST_CASE("connection formula: terminating family") {
    Rng rng(1);
    for (int n = 0; n <= 6; ++n) {
        for (int s = 0; s < 3; ++s) {
            const double g = rng(0.3, 0.9);
            const cplx mu(rng(-0.5, 0.5), rng(-2, 2)), nu(rng(-0.5, 0.5), rng(-2, 2)), z(rng(-1, 1), rng(-2, 2));
            const auto t = terminating_check(g, n, mu, nu, z);
            const double scale = std::max(std::abs(t.lhs), 1.0);
            CHECK(t.second_branch_vanished);
            CHECK(std::abs(t.lhs - t.rhs) < 1e-9 * scale);
            CHECK(std::abs(t.lhs - t.finite_form) < 1e-9 * scale);
            const auto rep = connection_verify(ConnectionInput{g, I * (g * n), mu, nu, z}, 1e-9);
            CHECK(rep.passed);
            CHECK(rep.branch_vanishes[1]);
        }
    }
}

TEST_CASE("connection formula: double application") {
    Rng rng(2);
    for (int s = 0; s < 20; ++s) {
        const double g = rng(0.3, 1.5);
        auto rc = [&] { return cplx(rng(-1, 1), rng(-2, 2)); };
        const auto d = double_application(ConnectionInput{g, rc(), rc(), rc(), rc()});
        CHECK(std::abs(d.same - 1.0) < 1e-6);
        CHECK(std::abs(d.other) < 1e-6);
    }
}

TEST_CASE("connection formula: q-Euler counterpart and its deviation law") {
    Rng rng(3);
    for (int s = 0; s < 20; ++s) {
        const double g = rng(0.3, 0.6);
        const ConnectionInput ci{g, I * rng(-2, 2), I * rng(-2, 2), I * rng(-2, 2), cplx(rng(-3, -2), rng(-2, 2))};
        const auto q = qeuler_check(ci);
        CHECK(std::abs(q.lhs - q.rhs) < 1e-6 * std::max(std::abs(q.lhs), 1.0));
        // The infinite-product form differs from the dilogarithm ratio by
        // terms of relative size exp(2 pi Re z / gamma).
        CHECK(std::abs(q.exact_rhs - q.lhs) < 1e3 * q.deviation_scale * std::max(std::abs(q.lhs), 1.0) + 1e-12);
    }
}

TEST_CASE("connection formula: branch q-difference residuals") {
    Rng rng(4);
    for (int s = 0; s < 10; ++s) {
        const double g = rng(0.3, 0.9);
        const ConnectionInput ci{g, I * rng(-2, 2), I * rng(-2, 2), I * rng(-2, 2), cplx(rng(0.3, 1.5), rng(-2, 2))};
        for (int j = 0; j < 2; ++j) CHECK(branch_difference_residual(ci, j).relative() < 1e-6);
    }
}

TEST_CASE("connection formula: input validation and asymptotics") {
    CHECK_THROWS_AS(ConnectionInput({0.5, cplx(0.1, 0.3), cplx(0.1, 0.3 - 1.0), cplx(0.2), cplx(0.0)}).validate(),
                    DegenerateError);
    const ConnectionInput far{0.5, cplx(0.1, 0.3), cplx(-0.2, 0.7), cplx(0.3, -0.4), cplx(-40.0, 0.3)};
    CHECK(std::abs(connection_lhs(far).value - 1.0) < 1e-12);
    // Both sides diverging is inconclusive rather than a pass or a fail.
    const ConnectionInput bad{0.5, cplx(0.458583, 1.64505), cplx(-2.85363, 1.69548), cplx(1.49526, 1.05967),
                              cplx(2.92138, 1.05423)};
    CHECK_THROWS_AS(connection_verify(bad, 1e-6), InconclusiveError);
}

TEST_CASE("plane wave") {
    const Coupling c(0.5, 1.5);
    const auto V = generic_potential(c);
    for (double k : {0.4, 1.3}) {
        CHECK(std::abs(wave_psi(c, k, 30.0) * std::exp(-I * k * 30.0) - 1.0) < 1e-6);
        const auto psi = [&](cplx x) { return wave_psi(c, k, x); };
        const double Es = 4.0 * std::pow(std::sinh(0.5 * c.gamma() * k), 2);
        for (double x : {-1.5, -0.4, 0.5, 1.5}) {
            const cplx v = psi(x);
            CHECK(std::abs(apply_full_hamiltonian(V, c.gamma(), psi, x) - Es * v) < 1e-6 * std::max(std::abs(v), 1.0));
        }
    }
}

TEST_CASE("plane wave at k = i(h - n) is proportional to the bound state") {
    const Coupling c(0.4, 2.6);
    for (int n = 0; n <= c.nmax(); ++n) {
        const cplx k = I * (c.h() - n);
        const auto ep = eigenpair(c, n);
        const cplx ratio0 = wave_psi(c, k, 0.3) / ep.wavefunction(0.3);
        // Grid avoids x = 0, a node of the odd levels.
        for (double x : {0.15, 0.8, 1.6, 2.4}) CHECK(rel(wave_psi(c, k, x) / ep.wavefunction(x), ratio0) < 1e-8);
    }
}

TEST_CASE("amplitudes: reflectionless reduction") {
    for (int N = 1; N <= 3; ++N) {
        const double g = 0.4;
        const Coupling c(g, N);
        for (double k : {0.2, 1.0, 3.5, 7.0}) {
            const auto a = amplitudes(c, k);
            CHECK(std::abs(a.r) < 1e-9);
            cplx t = 1.0;
            for (int j = 1; j <= N; ++j) t *= std::sinh(0.5 * g * (k + I * double(j))) / std::sinh(0.5 * g * (k - I * double(j)));
            CHECK(std::abs(a.t - t) < 1e-9);
            CHECK(std::abs(a.t - amplitude_product(soliton_seeds(g, N), k).t) < 1e-9);
            const auto ab = asymptotic_coefficients(c, k);
            CHECK((ab.B_vanishes || std::abs(ab.B) < 1e-9 * std::abs(ab.A)));
        }
    }
}

TEST_CASE("amplitudes: unitarity, inversion and the two routes") {
    Rng rng(6);
    for (int s = 0; s < 10; ++s) {
        const double g = rng(0.2, 0.8);
        const double h = rng(0.2, pi / g - 2.2);
        for (int i = 0; i < 10; ++i) {
            const double k = rng(0.05, pi / g);
            const auto a = closed_form_amplitudes(g, h, k);
            CHECK(std::abs(std::norm(a.t) + std::norm(a.r) - 1.0) < 1e-8);
            CHECK(a.unitarity_defect == doctest::Approx(std::abs(std::norm(a.t) + std::norm(a.r) - 1.0)));
            const auto b = closed_form_amplitudes_plus(g, -(h + 1.0), k);
            CHECK(std::abs(a.t - b.t) < 1e-10);
            CHECK(std::abs(a.r - b.r) < 1e-10);
        }
    }
}

TEST_CASE("amplitudes from the connection formula") {
    Rng rng(7);
    for (int s = 0; s < 10; ++s) {
        const double g = rng(0.3, 0.8);
        const double h = rng(0.2, pi / g - 2.2);
        const double k = rng(0.1, pi / g);
        const Coupling c(g, h);
        const auto a = amplitudes(c, k);
        const auto b = amplitudes_from_connection(c, k);
        CHECK(std::abs(a.t - b.t) < 1e-6);
        CHECK(std::abs(a.r - b.r) < 1e-6);
    }
}

TEST_CASE("A(i kappa) decreases toward a bound state") {
    const Coupling c(0.5, 1.6);
    for (int n = 0; n <= c.nmax(); ++n) {
        const double target = c.h() - n;
        double prev = std::numeric_limits<double>::infinity();
        for (double d : {0.2, 0.1, 0.05, 0.01}) {
            const double a = std::abs(asymptotic_coefficients(c, I * (target - d)).A);
            CHECK(a < prev);
            prev = a;
        }
        CHECK(prev < 0.1);
    }
}

TEST_CASE("pole census and reflection zeros") {
    const Coupling c(0.7, 2.3);
    const auto census = pole_census(c, 5e-3);
    CHECK(census.clean());
    CHECK(static_cast<int>(census.zeros.size()) == c.nmax() + 1);
    for (const auto& z : census.zeros) CHECK(z.position_error < 1e-6);

    // |r| decays with k but has no zero: its minimum over the grid sits at the
    // right end.
    for (double h : {0.3, 1.7, 4.1}) {
        const auto scan = reflection_zero_scan(0.5, h, 0.05, pi / 0.5, 200);
        CHECK(scan.min_abs_r > 0.0);
        CHECK(scan.argmin == doctest::Approx(pi / 0.5).epsilon(1e-9));
    }
}

TEST_CASE("classical amplitudes against a Gamma oracle and an ODE integration") {
    for (double h : {0.7, 1.3, 2.0}) {
        for (double k : {0.5, 1.4}) {
            const auto a = classical_amplitudes(h, k);
            CHECK(std::abs(std::norm(a.t) + std::norm(a.r) - 1.0) < 1e-10);
            const cplx ik = I * k;
            const cplx t = gamma_o(-h - ik) * gamma_o(1.0 + h - ik) / (gamma_o(1.0 - ik) * gamma_o(-ik));
            CHECK(rel(a.t, t) < 1e-10);
            const auto [A, B] = classical_rk4(h, k);
            CHECK(std::abs(a.t - 1.0 / A) < 1e-7);
            CHECK(std::abs(a.r - B / A) < 1e-7);
        }
    }
    const double k = 0.9;
    const auto two = classical_amplitudes(2.0, k);
    CHECK(std::abs(two.r) < 1e-12);
    CHECK(std::abs(two.t - (k + I) / (k - I) * (k + 2.0 * I) / (k - 2.0 * I)) < 1e-12);
}

TEST_CASE("classical limit of the amplitudes") {
    const double h = 2.0, k = 1.0;
    const cplx target = (k + I) / (k - I) * (k + 2.0 * I) / (k - 2.0 * I);
    std::vector<double> defect;
    for (double g : {0.2, 0.1, 0.05}) {
        const auto a = amplitudes(Coupling(g, h), k);
        defect.push_back(std::abs(a.t - target) + std::abs(a.r));
    }
    CHECK(defect[1] < defect[0]);
    CHECK(defect[2] < defect[1]);
    // Non-integer h against the Gamma oracle.
    const double hn = 1.4;
    const auto cl = classical_amplitudes(hn, k);
    std::vector<double> d2;
    for (double g : {0.1, 0.05}) {
        const auto a = amplitudes(Coupling(g, hn), k);
        d2.push_back(std::abs(a.t - cl.t) + std::abs(a.r - cl.r));
    }
    CHECK(d2[1] < 0.5 * d2[0]);
}

TEST_CASE("Gauss connection formula") {
    Rng rng(8);
    for (int s = 0; s < 20; ++s) {
        auto rc = [&] { return cplx(rng(-0.9, 0.9), rng(-0.9, 0.9)); };
        const cplx a = rc(), b = rc(), c = rc() + 1.5;
        const auto p = classical_connection_2F1(a, b, c, 0.5);
        CHECK(std::abs(p.lhs - p.rhs) < 1e-9 * std::max(std::abs(p.lhs), 1.0));
    }
    for (int n = 0; n <= 5; ++n) {
        const auto p = classical_connection_2F1(double(-n), cplx(0.3, 0.2), cplx(1.7, -0.4), cplx(0.3, 0.1));
        CHECK(std::abs(p.lhs - p.rhs) < 1e-9 * std::max(std::abs(p.lhs), 1.0));
    }
    for (double h : {0.6, 1.3}) {
        for (double k : {0.4, 1.1}) {
            const auto ab = classical_wave_asymptotics(h, k);
            const auto [A, B] = classical_rk4(h, k);
            CHECK(std::abs(ab.A - A) < 1e-7);
            CHECK(std::abs(ab.B - B) < 1e-7);
            const double x = -18.0;
            CHECK(std::abs(classical_unit_wave(h, k, x) - (ab.A * std::exp(I * k * x) + ab.B * std::exp(-I * k * x))) <
                  1e-9);
        }
    }
}
