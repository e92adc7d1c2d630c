#include "dqm/solvable.hpp"

#include <algorithm>
#include <sstream>

#include "dqm/errors.hpp"
#include "dqm/qseries.hpp"

namespace dqm {

Coupling::Coupling(double gamma, double h) : gamma_(gamma), h_(h) {
    std::ostringstream os;
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        os << "gamma must be positive, got " << gamma;
        throw ParamError(os.str());
    }
    if (!(h > 0.0) || !std::isfinite(h)) {
        os << "coupling h must be positive, got " << h;
        throw ParamError(os.str());
    }
    if (!(h + 2.0 < pi / gamma)) {
        os << "coupling needs h + 2 < pi/gamma; h = " << h << ", pi/gamma = " << pi / gamma;
        throw ParamError(os.str());
    }
}

double Coupling::energy_shift() const {
    const double s = std::sin(0.5 * gamma_ * h_);
    return -4.0 * s * s;
}

double Coupling::energy(int n) const {
    const double s = std::sin(0.5 * gamma_ * (h_ - n));
    return -4.0 * s * s;
}

PotentialFn free_potential() {
    return {PotentialKind::free, [](cplx) { return cplx(1.0); }};
}

PotentialFn generic_potential(const Coupling& c) {
    return {PotentialKind::generic_h, [c](cplx x) { return potential_generic(c, x); }, c.energy_shift()};
}

PotentialFn reflectionless_potential(const SeedSystem& s) {
    const double shift = s.N() > 0 ? bound_energy(s, s.N()) : 0.0;
    return {PotentialKind::reflectionless_N, [s](cplx x) { return potential_V_tau(s, x); }, shift};
}

PotentialFn custom_potential(CFunc v, double energy_shift) {
    return {PotentialKind::custom, std::move(v), energy_shift};
}

cplx apply_hamiltonian(const PotentialFn& V, double gamma, const CFunc& f, cplx x) {
    const cplx g = I * gamma;
    const cplx xc = std::conj(x);
    auto root = [&](cplx y) { return continued_sqrt(V.eval, y); };
    const cplx s_x = root(x), s_xc = x.imag() == 0.0 ? s_x : root(xc);
    const cplx c_minus = s_x * std::conj(root(xc + g));
    const cplx c_plus = std::conj(s_xc) * root(x + g);
    const cplx diag = V(x) + std::conj(V(xc));
    return c_minus * f(x - g) + c_plus * f(x + g) - diag * f(x);
}

cplx apply_full_hamiltonian(const PotentialFn& V, double gamma, const CFunc& f, cplx x) {
    return apply_hamiltonian(V, gamma, f, x) + V.energy_shift * f(x);
}

cplx potential_generic(const Coupling& c, cplx x) {
    const double g = c.gamma(), h = c.h();
    const cplx e2 = std::exp(2.0 * x);
    const cplx den = (1.0 + e2) * (1.0 + std::exp(-I * g) * e2);
    if (std::abs(den) < 1e-300 * (1.0 + std::norm(e2))) {
        std::ostringstream os;
        os << "generic potential is singular at x = " << x;
        throw SingularPointError(os.str());
    }
    return std::exp(-I * g * h) * (1.0 + std::exp(I * g * h) * e2) *
           (1.0 + std::exp(I * g * (h - 1.0)) * e2) / den;
}

void GeneralParams::validate() const {
    for (int j = 0; j < 2; ++j) {
        const double ga = gamma * alpha[j];
        if (!(gamma - pi < ga && ga < 0.0)) {
            std::ostringstream os;
            os << "need gamma - pi < gamma alpha_" << j + 1 << " < 0, got " << ga;
            throw ParamError(os.str());
        }
    }
    if (!(-gamma * (alpha[0] + alpha[1]) > pi - 0.5 * gamma))
        throw ParamError("need -gamma (alpha_1 + alpha_2) > pi - gamma/2");
}

GeneralParams general_params(const Coupling& c) {
    return {c.gamma(), {c.alpha1(), c.alpha2()}, {0.0, 0.0}};
}

cplx potential_general(const GeneralParams& p, cplx x) {
    const cplx a1 = p.a(0), a2 = p.a(1);
    const cplx ex = std::exp(x), e2 = ex * ex;
    cplx num = std::exp(I * pi) * std::exp(-0.5 * I * p.gamma) * std::conj(a1) * std::conj(a2) /
               std::abs(a1 * a2);
    for (cplx a : {a1, a2}) num *= (1.0 + a * ex) * (1.0 - ex / std::conj(a));
    return num / ((1.0 + e2) * (1.0 + std::exp(-I * p.gamma) * e2));
}

cplx ground_state_general(const GeneralParams& p, cplx x) {
    const QdilogParam half(0.5 * p.gamma);
    const double g = p.gamma;
    const double alpha = p.alpha[0] + p.alpha[1];
    cplx acc = 0.0;
    for (int j = 0; j < 2; ++j) {
        const double b = g * p.beta[j];
        const double s = g * (0.5 - p.alpha[j]);
        acc += eval_log(half, x + b + I * s) + eval_log(half, x - b + I * s - I * pi);
        acc -= eval_log(half, x + b - I * s) + eval_log(half, x - b - I * s + I * pi);
    }
    return std::exp((0.5 - alpha - pi / g) * x + 0.5 * acc) * std::sqrt(1.0 + std::exp(2.0 * x));
}

cplx ground_state(const Coupling& c, cplx x, GroundForm form) {
    const double g = c.gamma(), h = c.h();
    cplx acc = 0.0;
    switch (form) {
        case GroundForm::half_product: {
            const QdilogParam half(0.5 * g);
            for (double m : {h + 1.0, h}) {
                const double s = 0.5 * g * m;
                acc += eval_log(half, x + I * s + 0.5 * I * pi) + eval_log(half, x + I * s - 0.5 * I * pi);
                acc -= eval_log(half, x - I * s - 0.5 * I * pi) + eval_log(half, x - I * s + 0.5 * I * pi);
            }
            break;
        }
        case GroundForm::gamma_pair: {
            const QdilogParam full(g);
            for (double m : {h + 1.0, h})
                acc += eval_log(full, 2.0 * x + I * g * m) - eval_log(full, 2.0 * x - I * g * m);
            break;
        }
        case GroundForm::reduced: {
            const QdilogParam half(0.5 * g);
            acc = eval_log(half, 2.0 * x + I * g * (h + 0.5)) - eval_log(half, 2.0 * x - I * g * (h + 0.5));
            break;
        }
    }
    return std::exp(h * x + 0.5 * acc) * std::sqrt(1.0 + std::exp(2.0 * x));
}

cplx eigen_polynomial(const Coupling& c, int n, cplx x) {
    const double g = c.gamma(), h = c.h();
    const Base base(g);
    const cplx e1 = std::exp(0.5 * I * g * h), e2 = std::exp(0.5 * I * g * (h - 1.0));
    const cplx p = askey_wilson(base, n, {e1, e2, -e1, -e2}, x, Coordinate::i_sinh_x);
    return std::exp(-I * g * (h - 0.25 * (3.0 * n - 1.0)) * static_cast<double>(n)) * p;
}

Eigenpair eigenpair(const Coupling& c, int n) {
    if (n < 0 || n > c.nmax()) {
        std::ostringstream os;
        os << "level " << n << " outside 0.." << c.nmax() << " for h = " << c.h();
        throw RangeError(os.str());
    }
    return {n, c.energy(n), [c, n](cplx x) { return ground_state(c, x) * eigen_polynomial(c, n, x); }};
}

double IdentificationReport::max_dev() const {
    double m = std::max({potential_dev, energy_dev, ground_state_dev});
    for (double d : polynomial_dev) m = std::max(m, d);
    return m;
}

IdentificationReport reflectionless_identification(double gamma, int N) {
    if (N < 1 || !(N + 2.0 < pi / gamma)) {
        std::ostringstream os;
        os << "identification needs N >= 1 and N + 2 < pi/gamma (N = " << N << ", gamma = " << gamma << ")";
        throw ParamError(os.str());
    }
    const Coupling c(gamma, N);
    const SeedSystem s = soliton_seeds(gamma, N);
    IdentificationReport rep{gamma, N, 0.0, {}, {}, 0.0, 0.0};

    std::vector<double> xs;
    for (int i = 0; i <= 16; ++i) xs.push_back(-2.0 + 0.25 * i);

    for (double x : xs) {
        const cplx a = potential_generic(c, x), b = potential_V(s, x);
        rep.potential_dev = std::max(rep.potential_dev, std::abs(a - b));
        // phi_0 of the generic family against the elementary closed form.
        cplx prod = 1.0;
        for (int j = 1; j <= N; ++j)
            prod *= 4.0 * std::cosh(x - 0.5 * I * gamma * double(j)) * std::cosh(x + 0.5 * I * gamma * double(j));
        const cplx elementary = 1.0 / std::sqrt(prod);
        const cplx generic = ground_state(c, x);
        rep.ground_state_dev = std::max(rep.ground_state_dev, std::abs(generic / elementary - 1.0));
    }

    const Base base(gamma);
    const cplx e1 = std::exp(0.5 * I * gamma * double(N)), e2 = std::exp(0.5 * I * gamma * (N - 1.0));
    std::vector<CFunc> first;
    for (int j = 1; j < N; ++j) first.push_back(s.seed_fn(j));
    for (int n = 0; n < N; ++n) {
        std::vector<CFunc> excl;
        for (int j = 1; j <= N; ++j)
            if (j != N - n) excl.push_back(s.seed_fn(j));
        double pref = 1.0;
        for (int l = 1; l <= n; ++l)
            pref *= 2.0 * std::sin(0.5 * gamma * l) * std::sin(0.5 * gamma * (2 * N - 2 * n + l)) /
                    std::sin(0.5 * gamma * (N - l));
        const cplx phase = std::exp(-I * gamma * (N - 0.25 * (3.0 * n - 1.0)) * double(n));
        double dev = 0.0;
        for (double x : xs) {
            const cplx lhs = casoratian(gamma, excl, x) / casoratian(gamma, first, x) * pref;
            const cplx rhs = phase * askey_wilson(base, n, {e1, e2, -e1, -e2}, x, Coordinate::i_sinh_x);
            dev = std::max(dev, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
        rep.polynomial_dev.push_back(dev);
        const double en = c.energy(n);
        rep.energies.push_back(en);
        rep.energy_dev = std::max(rep.energy_dev, std::abs(en - bound_energy(s, N - n)));
    }
    return rep;
}

}  // namespace dqm
