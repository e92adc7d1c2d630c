#include <doctest.h>

#include "dqm/errors.hpp"
#include "dqm/qseries.hpp"
#include "oracles.hpp"

using namespace dqm;
using oracle::Rng;
using oracle::rel;

TEST_CASE("finite q-shifted factorials") {
    const Base base(0.6);
    CHECK(qpochhammer_finite(base, cplx(0.3, 0.2), 0) == cplx(1.0));
    // a = q^{-2}: the j = 2 factor vanishes.
    CHECK(std::abs(qpochhammer_finite(base, I * 2.0 * 0.6, 4)) < 1e-14);
    CHECK(std::abs(qpochhammer_value(base, 0.0, 5) - 1.0) < 1e-15);

    // Ratio against the product of (1 - e^{mu - i j gamma}).
    const cplx mu(0.2, 0.4), nu(-0.3, 1.1);
    cplx expect = 1.0;
    for (int j = 0; j < 6; ++j) expect *= (1.0 - std::exp(mu - I * (j * 0.6))) / (1.0 - std::exp(nu - I * (j * 0.6)));
    CHECK(rel(qpochhammer_finite(base, mu, 6) / qpochhammer_finite(base, nu, 6), expect) < 1e-13);
}

TEST_CASE("2phi1 trivial cases") {
    const Base base(0.5);
    const auto p = Phi21Params::from_values(cplx(0.3, 0.1), 0.7, cplx(1.4, 0.2));
    CHECK(phi21(base, p, 0.0).value == cplx(1.0));

    // Terminating a = q^{-n} against the explicit n+1 term sum.
    Rng rng(3);
    for (int n = 0; n <= 8; ++n) {
        const Phi21Params t{I * (n * 0.5), cplx(rng(-0.5, 0.5), rng(-2, 2)), cplx(rng(-0.5, 0.5), rng(-2, 2))};
        const cplx Z(rng(-2, 2), rng(-2, 2));
        const cplx q = base.q();
        cplx sum = 0.0;
        for (int k = 0; k <= n; ++k) {
            cplx term = std::pow(Z, k);
            for (int j = 0; j < k; ++j)
                term *= (1.0 - t.a() * std::pow(q, j)) * (1.0 - t.b() * std::pow(q, j)) /
                        ((1.0 - t.c() * std::pow(q, j)) * (1.0 - std::pow(q, j + 1)));
            sum += term;
        }
        const auto r = phi21(base, t, Z);
        CHECK(r.method == SeriesMethod::terminating);
        CHECK(rel(r.value, sum) < 1e-13);
    }
}

TEST_CASE("2phi1 against an epsilon-extrapolated brute-force sum") {
    const double g = 0.4;
    const cplx a = std::exp(I * 0.2), b = std::exp(-0.3), c = std::exp(0.5), z = 0.1;
    const auto r = phi21(Base(g), Phi21Params::from_values(a, b, c), z);
    REQUIRE(r.converged);
    const double e1 = 1e-8, e2 = 1e-9;
    const cplx f1 = oracle::phi21_brute(a, b, c, std::exp(cplx(-e1, -g)), z, 10000);
    const cplx f2 = oracle::phi21_brute(a, b, c, std::exp(cplx(-e2, -g)), z, 10000);
    const cplx f0 = f2 + (f2 - f1) * e2 / (e1 - e2);
    CHECK(rel(r.value, f0) < 1e-12);
}

TEST_CASE("converged results never exceed their tail bound") {
    Rng rng(5);
    int converged = 0;
    for (int s = 0; s < 40; ++s) {
        const double g = rng(0.3, 1.2);
        const Phi21Params p{cplx(rng(-0.5, 0.5), rng(-2, 2)), cplx(rng(-0.5, 0.5), rng(-2, 2)),
                            cplx(rng(-0.5, 0.5), rng(-2, 2))};
        const cplx Z = std::polar(rng(0.05, 0.6), rng(-pi, pi));
        SeriesOptions opts;
        opts.tol = 1e-12;
        const auto r = phi21(Base(g), p, Z, opts);
        if (!r.converged) continue;
        ++converged;
        CHECK(r.tail_bound <= opts.tol);
        const cplx ref = oracle::phi21_brute(p.a(), p.b(), p.c(), Base(g).q(), Z, 4000);
        CHECK(rel(r.value, ref) < 1e-10);
    }
    CHECK(converged > 30);
}

TEST_CASE("q-difference equation of the series") {
    Rng rng(9);
    for (double eps : {1e-6, 0.0}) {
        for (int s = 0; s < 50; ++s) {
            const Base base(rng(0.3, 1.0), eps);
            const Phi21Params p{cplx(rng(-0.5, 0.5), rng(-2, 2)), cplx(rng(-0.5, 0.5), rng(-2, 2)),
                                cplx(rng(-0.5, 0.5), rng(-2, 2))};
            const cplx Z = std::polar(rng(0.05, 0.4), rng(-pi, pi));
            const auto f = [&](cplx w) { return phi21(base, p, w).value; };
            CHECK(q_difference_residual(base, p, f, Z).relative() < 1e-8);
        }
    }
    // f = 1 with a = b = c = q is checked against the plain algebra.
    const Base base(0.7);
    const cplx q = base.q(), Z(0.3, 0.4);
    const Phi21Params p = Phi21Params::from_values(q, q, q);
    const auto one = [](cplx) { return cplx(1.0); };
    const cplx expect = (q - q * q * Z) + ((q + q) * Z - q - q) + (q - Z);
    CHECK(std::abs(q_difference_residual(base, p, one, Z).value - expect) < 1e-14);
}

TEST_CASE("epsilon continuity") {
    const Phi21Params p{cplx(0.1, 0.7), cplx(-0.2, 1.3), cplx(0.3, -0.4)};
    const cplx Z(0.2, -0.1);
    const auto a = phi21(Base(0.5, 1e-6), p, Z).value;
    const auto b = phi21(Base(0.5, 1e-7), p, Z).value;
    CHECK(std::abs(a - b) < 1e-4 * std::abs(a));
}

TEST_CASE("divergence and degenerate denominators") {
    const Base base(0.5);
    CHECK_THROWS_AS(phi21(base, Phi21Params::from_values(0.5, 0.3, 0.2), 3.0), DivergenceError);
    // c = q^{-1}: (c; q)_2 vanishes.
    CHECK_THROWS_AS(phi21(base, Phi21Params{cplx(0.1, 0.2), cplx(0.3), I * 0.5}, 0.1), ParamError);
}

TEST_CASE("q-ultraspherical polynomials: all lines and the defining sum") {
    Rng rng(21);
    for (int s = 0; s < 10; ++s) {
        const Base base(rng(0.3, 0.9));
        const cplx log_beta(rng(-0.5, 0.5), rng(-1.5, 1.5));
        const double x = rng(-1.0, 1.0);
        for (int n = 0; n <= 10; ++n) {
            const cplx ref = oracle::q_ultraspherical_sum(n, std::exp(log_beta), base.q(), std::exp(I * x));
            const double scale = std::max(std::abs(ref), 1.0);
            for (auto line : {UltraLine::askey_wilson, UltraLine::phi43, UltraLine::phi32, UltraLine::phi21}) {
                const cplx v = q_ultraspherical(base, n, log_beta, x, Coordinate::cos_x, line);
                CHECK(std::abs(v - ref) / scale < 1e-10);
            }
        }
    }
    CHECK(q_ultraspherical(Base(0.5), 0, cplx(0.2, 0.1), 0.3) == cplx(1.0));
}

TEST_CASE("parity in the i sinh coordinate") {
    const Base base(0.45);
    const cplx log_beta(0.0, -0.9);
    for (int n = 0; n <= 6; ++n) {
        for (double x : {0.3, 1.1}) {
            const cplx plus = q_ultraspherical(base, n, log_beta, x, Coordinate::i_sinh_x);
            const cplx minus = q_ultraspherical(base, n, log_beta, -x, Coordinate::i_sinh_x);
            CHECK(std::abs(minus - (n % 2 ? -1.0 : 1.0) * plus) < 1e-10 * std::max(std::abs(plus), 1.0));
        }
    }
}

TEST_CASE("Askey-Wilson forms") {
    const Base base(0.6);
    const std::array<cplx, 4> a{cplx(0.3, 0.2), cplx(-0.4, 0.1), cplx(0.5, -0.3), cplx(0.1, 0.6)};
    CHECK(askey_wilson(base, 0, a, 0.4) == cplx(1.0));
    for (int n = 1; n <= 5; ++n) {
        CHECK(rel(askey_wilson(base, n, a, 0.4), askey_wilson_4phi3(base, n, a, 0.4)) < 1e-10);
    }
    // n = 1 with a1 <-> a2 swapped.
    std::array<cplx, 4> b = a;
    std::swap(b[0], b[1]);
    CHECK(rel(askey_wilson(base, 1, a, 0.7), askey_wilson(base, 1, b, 0.7)) < 1e-12);
}
