#include <doctest.h>

#include <algorithm>

#include "dqm/errors.hpp"
#include "dqm/reflectionless.hpp"
#include "dqm/solvable.hpp"
#include "oracles.hpp"

using namespace dqm;
using oracle::Rng;
using oracle::rel;

namespace {

SeedSystem random_seeds(Rng& rng, double gamma, int N) {
    std::vector<double> k(N), ct(N);
    for (;;) {
        for (auto& v : k) v = rng(0.15, 0.9 * pi / gamma);
        std::sort(k.begin(), k.end());
        bool spaced = true;
        for (int j = 1; j < N; ++j) spaced = spaced && k[j] - k[j - 1] > 0.15;
        if (spaced) break;
    }
    for (int j = 0; j < N; ++j) ct[j] = (j % 2 == 0 ? 1.0 : -1.0) * rng(0.3, 3.0);
    return seeds_build(gamma, k, ct);
}

// 2^N expansion of u_N built directly from c_j, k_j.
cplx expansion_oracle(const SeedSystem& s, cplx x) {
    const int N = s.N();
    const auto& k = s.k();
    const auto& c = s.c();
    const double g = s.gamma();
    cplx sum = 0.0;
    for (unsigned mask = 0; mask < (1u << N); ++mask) {
        cplx term = 1.0;
        for (int j = 0; j < N; ++j) {
            if (!(mask >> j & 1u)) continue;
            term *= c[j] / std::sin(g * k[j]) * std::exp(-2.0 * k[j] * x);
            for (int i = 0; i < j; ++i) {
                if (!(mask >> i & 1u)) continue;
                const double r = std::sin(0.5 * g * (k[j] - k[i])) / std::sin(0.5 * g * (k[j] + k[i]));
                term *= r * r;
            }
        }
        sum += term;
    }
    return sum;
}

}  // namespace

TEST_CASE("Casoratian small cases") {
    const double g = 0.7;
    const auto f1 = [](cplx x) { return std::sin(x) + 0.3 * x * x; };
    const auto f2 = [](cplx x) { return std::exp(0.4 * x) * std::cos(2.0 * x); };
    const cplx x(0.3, 0.1);
    CHECK(casoratian(g, {}, x) == cplx(1.0));
    CHECK(rel(casoratian(g, {f1}, x), f1(x)) < 1e-15);
    const cplx up = x + 0.5 * I * g, dn = x - 0.5 * I * g;
    const cplx expect = I * (f1(up) * f2(dn) - f2(up) * f1(dn));
    CHECK(rel(casoratian(g, {f1, f2}, x), expect) < 1e-13);
}

TEST_CASE("Casoratian of exponentials") {
    Rng rng(2);
    for (int n = 1; n <= 5; ++n) {
        const double g = rng(0.2, 1.0);
        std::vector<double> k(n);
        std::vector<CFunc> fns;
        double sum = 0.0;
        for (auto& v : k) {
            v = rng(-3.0, 3.0);
            sum += v;
            const double kv = v;
            fns.push_back([kv](cplx y) { return std::exp(kv * y); });
        }
        const cplx x(rng(-1, 1), rng(-0.3, 0.3));
        cplx expect = std::exp(sum * x);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) expect *= 2.0 * std::sin(0.5 * g * (k[j] - k[i]));
        CHECK(rel(casoratian(g, fns, x), expect) < 1e-10);
    }
}

TEST_CASE("Wronskian limit of the Casoratian") {
    const auto f1 = [](cplx x) { return std::sin(x) + 0.3 * x * x; };
    const auto f2 = [](cplx x) { return std::exp(0.4 * x) * std::cos(2.0 * x); };
    const auto d1 = [](cplx x) { return std::cos(x) + 0.6 * x; };
    const auto d2 = [](cplx x) { return std::exp(0.4 * x) * (0.4 * std::cos(2.0 * x) - 2.0 * std::sin(2.0 * x)); };
    const cplx x = 0.4;
    const cplx W = f1(x) * d2(x) - d1(x) * f2(x);
    std::vector<double> err;
    for (double g : {0.1, 0.05, 0.025}) err.push_back(std::abs(casoratian(g, {f1, f2}, x) / g - W));
    CHECK(err[1] < err[0]);
    CHECK(err[2] < err[1]);
    CHECK(std::log2(err[1] / err[2]) > 1.9);
}

TEST_CASE("seed construction") {
    const auto one = seeds_build(0.5, {1.0}, {1.0});
    CHECK(std::abs(one.c()[0] - std::sin(0.5)) < 1e-15);
    CHECK_NOTHROW(soliton_seeds(0.5, 5));
    CHECK_THROWS_AS(seeds_build(0.5, {1.0, 1.0}, {1.0, -1.0}), ValidationError);
    CHECK_THROWS_AS(seeds_build(0.5, {1.0, 2.0}, {1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(seeds_build(0.5, {1.0, 7.0}, {1.0, -1.0}), ValidationError);
    const auto empty = seeds_build(0.5, {}, {});
    CHECK(empty.N() == 0);
    CHECK(tau_u(empty, 0.3) == cplx(1.0));
    CHECK(potential_V(empty, cplx(0.3, 0.2)) == cplx(1.0));
    CHECK(potential_calU(empty, 0.3) == cplx(1.0));
}

TEST_CASE("tau function routes and positivity") {
    Rng rng(4);
    for (int N = 1; N <= 5; ++N) {
        for (int trial = 0; trial < 4; ++trial) {
            const auto s = random_seeds(rng, rng(0.2, 1.0), N);
            for (int i = 0; i < 5; ++i) {
                const cplx x(rng(-2, 2), rng(-0.2, 0.2));
                const cplx u = tau_u(s, x);
                CHECK(rel(tau_u_casoratian(s, x), u) < 1e-9);
                if (N <= 4) {
                    CHECK(rel(tau_u_expansion(s, x), u) < 1e-9);
                    CHECK(rel(expansion_oracle(s, x), u) < 1e-9);
                }
            }
            for (int i = 0; i < 50; ++i) {
                const cplx u = tau_u(s, rng(-8, 8));
                CHECK(u.real() > 0.0);
                CHECK(std::abs(u.imag()) <= 1e-10 * u.real());
            }
        }
    }
}

TEST_CASE("excluded-seed tau functions") {
    const auto one = seeds_build(0.6, {1.2}, {0.8});
    CHECK(std::abs(tau_u_excl(one, 1, cplx(0.3, 0.1)) - 1.0) < 1e-15);
    Rng rng(6);
    const auto s = random_seeds(rng, 0.5, 3);
    for (int j = 1; j <= 3; ++j) {
        for (double x : {-1.0, 0.2, 1.5}) {
            const cplx u = tau_u_excl(s, j, x);
            CHECK(rel(tau_u_excl_casoratian(s, j, x), u) < 1e-9);
            CHECK(std::abs(u.imag()) < 1e-12 * std::abs(u));
        }
    }
}

TEST_CASE("potential routes and the soliton closed form") {
    Rng rng(8);
    const auto s = random_seeds(rng, 0.6, 3);
    for (int i = 0; i < 50; ++i) {
        const cplx x(rng(-3, 3), rng(-0.1, 0.1));
        CHECK(rel(potential_V(s, x), potential_V_tau(s, x)) < 1e-10);
    }
    // The generic potential at h = 2 is the two-soliton potential.
    const double g = 0.5;
    const auto sol = soliton_seeds(g, 2);
    for (double x : {-2.0, -0.3, 0.0, 0.8, 2.5}) {
        const cplx e2x = std::exp(2.0 * x);
        const cplx closed = std::exp(-I * g * 2.0) * (1.0 + std::exp(I * g * 2.0) * e2x) *
                            (1.0 + std::exp(I * g) * e2x) / ((1.0 + e2x) * (1.0 + std::exp(-I * g) * e2x));
        CHECK(rel(potential_V(sol, x), closed) < 1e-10);
    }
}

TEST_CASE("calU is real and has the classical limit") {
    Rng rng(10);
    const auto s = random_seeds(rng, 0.5, 2);
    for (double x : {-1.0, 0.0, 0.9}) CHECK(std::abs(potential_calU(s, x).imag()) < 1e-13);

    // Classical N = 2 tau from the explicit 2x2 determinant.
    const std::vector<double> k{0.8, 1.5}, ct{1.3, -0.7};
    auto frak_c = [&](int j) {
        double c = 2.0 * k[j] * ct[j];
        for (int i = 0; i < 2; ++i)
            if (i != j) c *= (k[i] + k[j]) / (k[i] - k[j]);
        return c;
    };
    auto tau_cl = [&](double x) {
        double m[2][2];
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                m[a][b] = (a == b ? 1.0 : 0.0) + frak_c(a) * std::exp(-(k[a] + k[b]) * x) / (k[a] + k[b]);
        return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    };
    const double x = 0.3;
    const double U = -2.0 * oracle::d2([&](double y) { return std::log(tau_cl(y)); }, x, 1e-3);
    CHECK(std::abs(classical_tau(k, ct, x) - tau_cl(x)) < 1e-12 * tau_cl(x));

    std::vector<double> gs{0.1, 0.05, 0.025}, vals;
    for (double g : gs) {
        const auto sg = seeds_build(g, k, ct);
        vals.push_back(((2.0 / g) * (2.0 / g) * (potential_calU(sg, x) - 1.0)).real());
    }
    // Richardson in gamma^2.
    const double extrap = (4.0 * vals[2] - vals[1]) / 3.0;
    CHECK(std::abs(extrap - U) < 1e-4 * std::max(std::abs(U), 1.0));
    CHECK(std::abs(vals[2] - U) < std::abs(vals[0] - U));
}

TEST_CASE("bound states") {
    Rng rng(12);
    const double g = 0.5;
    const auto s = random_seeds(rng, g, 3);
    const auto V = reflectionless_potential(s);
    for (int j = 1; j <= 3; ++j) {
        const auto f = [&](cplx x) { return bound_state(s, j, x); };
        const double E = bound_energy(s, j);
        CHECK(std::abs(E + 4.0 * std::pow(std::sin(0.5 * g * s.k()[j - 1]), 2)) < 1e-15);
        for (double x : {-2.0, -0.5, 0.4, 1.7}) {
            const cplx fx = f(x);
            CHECK(std::abs(apply_full_hamiltonian(V, g, f, x) - E * fx) < 1e-8 * std::abs(fx));
            CHECK(rel(bound_state_casoratian(s, j, x), fx) < 1e-9);
        }
        // Decay rate toward +inf.
        const double x1 = 30.0, x2 = 35.0;
        const double rate = (std::log(std::abs(f(x2))) - std::log(std::abs(f(x1)))) / (x2 - x1);
        CHECK(std::abs(rate + s.k()[j - 1]) < 1e-6);
    }
    // Energies ordered under n = N - j.
    CHECK(bound_energy(s, 3) < bound_energy(s, 2));
    CHECK(bound_energy(s, 2) < bound_energy(s, 1));
    CHECK(bound_energy(s, 1) < 0.0);

    // N = 1 closed form up to a constant.
    const auto one = seeds_build(g, {1.1}, {0.9});
    auto closed = [&](double x) {
        return std::exp(-1.1 * x) / std::sqrt(tau_u(one, x - 0.5 * I * g) * tau_u(one, x + 0.5 * I * g));
    };
    const cplx ratio0 = bound_state(one, 1, 0.0) / closed(0.0);
    for (double x : {-1.5, 0.7, 2.0}) CHECK(rel(bound_state(one, 1, x) / closed(x), ratio0) < 1e-12);
}

TEST_CASE("bound-state orthogonality") {
    const auto s = soliton_seeds(0.5, 3);
    const auto G = bound_state_overlaps(s, 40.0 / s.k()[0]);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) CHECK(std::abs(G[i][j]) < 1e-6 * std::sqrt(G[i][i] * G[j][j]));
}

TEST_CASE("scattering wave and the product amplitude") {
    const double g = 0.5;
    const auto s = soliton_seeds(g, 2);
    const auto V = reflectionless_potential(s);
    const double k = 0.9;
    const auto psi = [&](cplx x) { return wave_solution(s, k, x); };
    const double Es = 4.0 * std::pow(std::sinh(0.5 * g * k), 2);
    for (double x : {-1.0, 0.0, 1.3}) {
        CHECK(std::abs(apply_full_hamiltonian(V, g, psi, x) - Es * psi(x)) < 1e-8 * std::abs(psi(x)));
    }
    const auto empty = seeds_build(g, {}, {});
    CHECK(rel(wave_solution(empty, k, 0.7), std::exp(I * k * 0.7)) < 1e-15);

    // Amplitude ratio between the two ends is the transmission amplitude.
    const cplx right = psi(40.0) * std::exp(-I * k * 40.0);
    const cplx left = psi(-40.0) * std::exp(I * k * 40.0);
    const auto a = amplitude_product(s, k);
    CHECK(rel(left / right, 1.0 / a.t) < 1e-8);

    CHECK(std::abs(std::abs(a.t) - 1.0) < 1e-14);
    CHECK(a.r == cplx(0.0));
    const auto a0 = amplitude_product(empty, k);
    CHECK(a0.t == cplx(1.0));

    // Small gamma: t -> prod (k + i j)/(k - i j).
    const cplx cl = (k + I) / (k - I) * (k + 2.0 * I) / (k - 2.0 * I);
    std::vector<double> err;
    for (double gg : {0.1, 0.05}) err.push_back(std::abs(amplitude_product(soliton_seeds(gg, 2), k).t - cl));
    CHECK(err[1] < 0.3 * err[0]);
}

TEST_CASE("zero-free strip for admissible seeds") {
    const auto s = soliton_seeds(0.4, 3);
    const auto scan = strip_zero_scan(s, -6.0, 6.0);
    CHECK(scan.zero_free);
}
