#include "dqm/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dqm/errors.hpp"
#include "dqm/qdilog.hpp"
#include "dqm/special.hpp"

namespace dqm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(1 + e^w) without overflow for large Re w.
cplx log1pexp(cplx w) {
    if (w.real() > 0.0) return w + std::log(1.0 + std::exp(-w));
    return std::log(1.0 + std::exp(w));
}

// Accumulates a product of Phi+ factors in log space. A zero in the
// numerator or a pole in the denominator makes the product vanish; the
// opposite cases are genuine infinities and propagate.
class PlusProduct {
public:
    explicit PlusProduct(double gamma) : p_(gamma) {}

    void mul(cplx z) { add(z, +1); }
    void div(cplx z) { add(z, -1); }
    bool vanishes() const { return vanishes_; }
    cplx log_value() const { return vanishes_ ? cplx(kNegInf, 0.0) : log_; }

private:
    void add(cplx z, int sign) {
        try {
            log_ += static_cast<double>(sign) * eval_plus_log(p_, z);
        } catch (const PoleError& e) {
            if ((sign < 0) == e.is_pole()) {
                vanishes_ = true;
                return;
            }
            throw;
        }
    }

    QdilogParam p_;
    cplx log_ = 0.0;
    bool vanishes_ = false;
};

struct BranchShape {
    Phi21Params params;
    cplx log_arg;
};

BranchShape branch_shape(const ConnectionInput& ci, int branch) {
    const cplx ig = I * ci.gamma;
    const cplx first = branch == 0 ? ci.lambda : ci.mu;
    const cplx other = branch == 0 ? ci.mu : ci.lambda;
    return {{first, first - ci.nu - ig, first - other - ig}, ci.nu - ci.lambda - ci.mu - ci.z - ig};
}

cplx safe_log(cplx v) {
    if (v == cplx(0.0)) return {kNegInf, 0.0};
    return std::log(v);
}

void check_branch(int branch) {
    if (branch != 0 && branch != 1) throw DomainError("branch index must be 0 or 1");
}

}  // namespace

void ConnectionInput::validate() const {
    if (!(gamma > 0.0)) throw ParamError("gamma must be positive");
    const cplx d = lambda - mu;
    const double m = d.imag() / gamma;
    if (std::abs(d.real()) < 1e-10 && std::abs(m - std::round(m)) < 1e-10) {
        std::ostringstream os;
        os << "lambda - mu = " << d.imag() << "i lies on the lattice i gamma Z";
        throw DegenerateError(os.str());
    }
}

BranchCoefficient connection_coefficient(const ConnectionInput& ci, int branch) {
    check_branch(branch);
    ci.validate();
    const cplx ig = I * ci.gamma;
    const cplx first = branch == 0 ? ci.lambda : ci.mu;
    const cplx other = branch == 0 ? ci.mu : ci.lambda;
    PlusProduct prod(ci.gamma);
    prod.mul(ci.nu);
    prod.mul(other - first);
    prod.div(other);
    prod.div(ci.nu - first);
    prod.mul(ci.z);
    prod.mul(-ig - ci.z);
    prod.div(first + ci.z);
    prod.div(-ig - first - ci.z);
    return {prod.log_value(), prod.vanishes()};
}

ConnectionRhs connection_rhs_detail(const ConnectionInput& ci, const SeriesOptions& opts) {
    ci.validate();
    const Base base(ci.gamma);
    ConnectionRhs out;
    out.value = 0.0;
    for (int j = 0; j < 2; ++j) {
        auto& b = out.branch[j];
        const auto shape = branch_shape(ci, j);
        b.params = shape.params;
        b.log_arg = shape.log_arg;
        const auto coef = connection_coefficient(ci, j);
        b.vanishes = coef.vanishes;
        b.log_coefficient = coef.log_value;
        if (b.vanishes) {
            b.value = 0.0;
            continue;
        }
        b.series = phi21(base, b.params, std::exp(b.log_arg), opts);
        b.value = std::exp(b.log_coefficient) * b.series.value;
        out.value += b.value;
    }
    return out;
}

cplx connection_rhs(const ConnectionInput& ci, double tol) {
    SeriesOptions opts;
    opts.tol = tol;
    return connection_rhs_detail(ci, opts).value;
}

SeriesResult connection_lhs(const ConnectionInput& ci, const SeriesOptions& opts) {
    return phi21(Base(ci.gamma), {ci.lambda, ci.mu, ci.nu}, std::exp(ci.z), opts);
}

ConnectionReport connection_verify(const ConnectionInput& ci, double tol) {
    SeriesOptions opts;
    opts.tol = std::min(1e-12, tol * 1e-2);
    ConnectionReport rep;
    rep.tol = tol;
    bool lhs_ok = true, rhs_ok = true;
    std::string lhs_msg, rhs_msg;
    try {
        rep.lhs_series = connection_lhs(ci, opts);
        rep.lhs = rep.lhs_series.value;
        lhs_ok = rep.lhs_series.converged;
    } catch (const DivergenceError& e) {
        lhs_ok = false;
        lhs_msg = e.what();
    }
    try {
        const auto rhs = connection_rhs_detail(ci, opts);
        rep.rhs = rhs.value;
        for (int j = 0; j < 2; ++j) {
            rep.rhs_series[j] = rhs.branch[j].series;
            rep.branch_vanishes[j] = rhs.branch[j].vanishes;
            if (!rhs.branch[j].vanishes && !rhs.branch[j].series.converged) rhs_ok = false;
        }
    } catch (const DivergenceError& e) {
        rhs_ok = false;
        rhs_msg = e.what();
    }
    if (!lhs_ok && !rhs_ok) {
        throw InconclusiveError("neither side of the connection formula stabilized: " + lhs_msg +
                                (rhs_msg.empty() ? "" : "; " + rhs_msg));
    }
    rep.abs_diff = std::abs(rep.lhs - rep.rhs);
    rep.passed = lhs_ok && rhs_ok && rep.abs_diff < tol * std::max(std::abs(rep.lhs), 1.0);
    return rep;
}

TerminatingCheck terminating_check(double gamma, int n, cplx mu, cplx nu, cplx z) {
    if (n < 0) throw DomainError("terminating index must be non-negative");
    const ConnectionInput ci{gamma, I * (gamma * n), mu, nu, z};
    const Base base(gamma);
    TerminatingCheck out;
    out.lhs = connection_lhs(ci).value;
    const auto rhs = connection_rhs_detail(ci);
    out.rhs = rhs.value;
    out.second_branch_vanished = rhs.branch[1].vanishes;

    // (b;q)_n/(c;q)_n q^{-n(n+1)/2} (-Z)^n 2phi1(q^-n, q^{1-n}/c; q^{1-n}/b; q; c q^{1+n}/(b Z))
    const cplx lq = base.log_q();
    const double dn = n;
    const cplx pref = std::exp(std::log(qpochhammer_finite(base, mu, n)) -
                               std::log(qpochhammer_finite(base, nu, n)) -
                               0.5 * dn * (dn + 1.0) * lq + dn * (z + I * pi));
    const cplx num = std::exp((1.0 - dn) * lq - nu);
    const cplx den = std::exp((1.0 - dn) * lq - mu);
    const cplx arg = std::exp(nu + (1.0 + dn) * lq - mu - z);
    out.finite_form = pref * terminating_phi(base, n, {num}, {den}, arg);
    return out;
}

DoubleApplication double_application(const ConnectionInput& ci) {
    ci.validate();
    const cplx ig = I * ci.gamma;
    const cplx z1 = ci.nu - ci.lambda - ci.mu - ci.z - ig;
    const ConnectionInput p1{ci.gamma, ci.lambda, ci.lambda - ci.nu - ig, ci.lambda - ci.mu - ig, z1};
    const ConnectionInput p2{ci.gamma, ci.mu, ci.mu - ci.nu - ig, ci.mu - ci.lambda - ig, z1};
    auto c = [](const ConnectionInput& in, int j) {
        const auto r = connection_coefficient(in, j);
        return r.vanishes ? cplx(0.0) : std::exp(r.log_value);
    };
    const cplx c1 = c(ci, 0), c2 = c(ci, 1);
    return {c1 * c(p1, 0) + c2 * c(p2, 0), c1 * c(p1, 1) + c2 * c(p2, 1)};
}

QEulerCheck qeuler_check(const ConnectionInput& ci, const SeriesOptions& opts) {
    const Base base(ci.gamma);
    const cplx shift = ci.lambda + ci.mu - ci.nu;
    const cplx z2 = ci.z + shift;
    QEulerCheck out;
    out.lhs = phi21(base, {ci.lambda, ci.mu, ci.nu}, std::exp(ci.z), opts).value;
    const cplx tail =
        phi21(base, {ci.nu - ci.lambda, ci.nu - ci.mu, ci.nu}, std::exp(z2), opts).value;
    const QdilogParam p(ci.gamma);
    out.rhs = std::exp(eval_plus_log(p, ci.z) - eval_plus_log(p, z2)) * tail;
    // 1phi0(e^shift; -; q; e^z) = 2phi1(e^shift, b; b; q; e^z) for any generic b.
    const cplx log_b(-0.7, 0.3);
    const auto one_phi_zero = phi21(base, {shift, log_b, log_b}, std::exp(ci.z), opts);
    out.exact_rhs = one_phi_zero.value * tail;
    out.deviation_scale = std::exp(2.0 * pi * ci.z.real() / ci.gamma);
    return out;
}

Residual branch_difference_residual(const ConnectionInput& ci, int branch, const SeriesOptions& opts) {
    check_branch(branch);
    ci.validate();
    const Base base(ci.gamma);
    CFunc F = [&](cplx z) {
        ConnectionInput at = ci;
        at.z = z;
        const auto coef = connection_coefficient(at, branch);
        if (coef.vanishes) return cplx(0.0);
        const auto shape = branch_shape(at, branch);
        return std::exp(coef.log_value) * phi21(base, shape.params, std::exp(shape.log_arg), opts).value;
    };
    return q_difference_residual_exp(base, {ci.lambda, ci.mu, ci.nu}, F, ci.z);
}

// ---------------------------------------------------------------------------

ConnectionInput wave_connection_input(const Coupling& c, cplx k, cplx x) {
    const double g = c.gamma(), h = c.h();
    return {g, I * g * h - g * k, I * g * h, -I * g - g * k, -2.0 * x - I * g * (1.0 + h) - I * pi};
}

namespace {

// log of e^{ikx} e^{2hx} sqrt(1 + e^{2x}) (Phi(2x + i g (h+1/2)) / Phi(2x - i g (h+1/2)))^{1/2}
cplx wave_prefactor_log(const Coupling& c, cplx k, cplx x) {
    const double g = c.gamma(), h = c.h();
    const QdilogParam half(0.5 * g);
    const cplx s = I * g * (h + 0.5);
    return I * k * x + 2.0 * h * x + 0.5 * log1pexp(2.0 * x) +
           0.5 * (eval_log(half, 2.0 * x + s) - eval_log(half, 2.0 * x - s));
}

}  // namespace

cplx wave_psi(const Coupling& c, cplx k, cplx x) {
    const auto ci = wave_connection_input(c, k, x);
    const cplx lp = wave_prefactor_log(c, k, x);
    if (x.real() >= 0.0) return std::exp(lp) * connection_lhs(ci).value;
    const auto rhs = connection_rhs_detail(ci);
    cplx sum = 0.0;
    for (const auto& b : rhs.branch) {
        if (!b.vanishes) sum += std::exp(lp + b.log_coefficient) * b.series.value;
    }
    return sum;
}

AmplitudeResult closed_form_amplitudes(double gamma, double h, cplx k) {
    if (!(gamma > 0.0)) throw ParamError("gamma must be positive");
    const QdilogParam half(0.5 * gamma);
    const cplx ipi = I * pi;
    const cplx kg = k * gamma;
    const cplx sh = I * gamma * (h + 0.5);
    const cplx sg = I * (0.5 * gamma);
    auto L = [&](cplx z) { return eval_log(half, z); };

    AmplitudeResult out;
    out.k = k;
    const cplx t_num = L(-kg + sh + ipi) + L(-kg - sh + ipi);
    const cplx t_den = L(-kg + sg + ipi) + L(-kg - sg + ipi);
    out.t = std::exp(I * (0.5 * gamma * h * (h + 1.0)) + t_num - t_den);
    try {
        const cplx den = L(-kg + sg + ipi) + L(sh + ipi) + L(-sh + ipi);
        out.r = std::exp(0.5 * kg * (1.0 - I * k) + L(kg + sg + ipi) + t_num - den);
    } catch (const PoleError& e) {
        if (!e.is_pole()) throw;
        out.r = 0.0;
        out.flags.push_back("r_exact_zero");
    }
    out.unitarity_defect = unitarity_defect(out.t, out.r);
    for (int n = 0; n < h; ++n) out.bound_kappa.push_back(h - n);
    return out;
}

AmplitudeResult closed_form_amplitudes_plus(double gamma, double h, cplx k) {
    if (!(gamma > 0.0)) throw ParamError("gamma must be positive");
    const cplx kg = k * gamma;
    const cplx ig = I * gamma;
    PlusProduct t(gamma);
    t.mul(-kg + ig * h);
    t.mul(-kg - ig * (h + 1.0));
    t.div(-kg);
    t.div(-kg - ig);
    AmplitudeResult out;
    out.k = k;
    out.t = t.vanishes() ? cplx(0.0) : std::exp(I * (0.5 * gamma * h * (h + 1.0)) + t.log_value());
    PlusProduct r(gamma);
    r.mul(kg);
    r.mul(-kg + ig * h);
    r.mul(-kg - ig * (h + 1.0));
    r.div(-kg);
    r.div(ig * h);
    r.div(-ig * (h + 1.0));
    if (r.vanishes()) {
        out.r = 0.0;
        out.flags.push_back("r_exact_zero");
    } else {
        out.r = std::exp(0.5 * kg * (1.0 - I * k) + r.log_value());
    }
    out.unitarity_defect = unitarity_defect(out.t, out.r);
    for (int n = 0; n < h; ++n) out.bound_kappa.push_back(h - n);
    return out;
}

AmplitudeResult amplitudes(const Coupling& c, cplx k) {
    return closed_form_amplitudes(c.gamma(), c.h(), k);
}

AsymptoticPair asymptotic_coefficients(const Coupling& c, cplx k, double x_probe) {
    const cplx x = x_probe;
    const auto ci = wave_connection_input(c, k, x);
    const cplx lp = wave_prefactor_log(c, k, x);
    const auto rhs = connection_rhs_detail(ci);
    AsymptoticPair out;
    const auto& b1 = rhs.branch[0];
    const auto& b2 = rhs.branch[1];
    out.B_vanishes = b1.vanishes;
    out.A_vanishes = b2.vanishes;
    out.B = b1.vanishes ? cplx(0.0) : std::exp(I * k * x + lp + b1.log_coefficient + safe_log(b1.series.value));
    out.A = b2.vanishes ? cplx(0.0) : std::exp(-I * k * x + lp + b2.log_coefficient + safe_log(b2.series.value));
    return out;
}

AmplitudeResult amplitudes_from_connection(const Coupling& c, cplx k, double x_probe) {
    const auto ab = asymptotic_coefficients(c, k, x_probe);
    if (ab.A_vanishes) throw PoleError("A(k) vanishes: k is a bound-state point", 0, 0, true);
    AmplitudeResult out;
    out.k = k;
    out.t = 1.0 / ab.A;
    out.r = ab.B / ab.A;
    if (ab.B_vanishes) out.flags.push_back("r_exact_zero");
    out.unitarity_defect = unitarity_defect(out.t, out.r);
    for (int n = 0; n < c.h(); ++n) out.bound_kappa.push_back(c.h() - n);
    return out;
}

namespace {

// 1/t(i kappa) up to a constant phase, made real. Each factor Phi(iY) is
// multiplied by exp(-i psi(Y)/2), psi the inversion exponent, which makes it
// real. Returns {sign, log|value|}.
struct RealValue {
    double sign;
    double log_abs;
};

RealValue inverse_t_real(const Coupling& c, double kappa) {
    const double g = c.gamma(), h = c.h();
    const double gh = 0.5 * g;
    const QdilogParam half(gh);
    auto real_log = [&](double Y) {
        const double psi = (-Y * Y + (gh * gh + pi * pi) / 3.0) / (4.0 * gh);
        return eval_log(half, cplx(0.0, Y)) - I * (0.5 * psi);
    };
    const double base = -kappa * g + pi;
    const cplx L = real_log(base + 0.5 * g) + real_log(base - 0.5 * g) -
                   real_log(base + g * (h + 0.5)) - real_log(base - g * (h + 0.5));
    return {std::cos(L.imag()) >= 0.0 ? 1.0 : -1.0, L.real()};
}

// Evaluates inverse_t_real, nudging off an exact lattice hit.
RealValue inverse_t_safe(const Coupling& c, double kappa, bool* hit = nullptr) {
    for (int attempt = 0; attempt < 4; ++attempt) {
        try {
            return inverse_t_real(c, kappa + attempt * 3e-8);
        } catch (const PoleError&) {
            if (hit) *hit = true;
        }
    }
    throw PoleError("1/t(i kappa) could not be evaluated near a lattice point", 0, 0, true);
}

}  // namespace

PoleCensus pole_census(const Coupling& c, double step) {
    if (!(step > 0.0)) throw DomainError("census step must be positive");
    const double top = pi / c.gamma();
    const int n = static_cast<int>(std::ceil(top / step));
    PoleCensus out;
    out.scan_points = n;
    std::vector<RealValue> vals(n + 1);
    std::vector<double> ks(n + 1);
    for (int i = 0; i <= n; ++i) {
        ks[i] = std::min(top, step * std::max(i, 1) * (i == 0 ? 0.5 : 1.0));
        vals[i] = inverse_t_safe(c, ks[i]);
    }
    for (int i = 0; i < n; ++i) {
        if (vals[i].sign == vals[i + 1].sign) continue;
        double a = ks[i], b = ks[i + 1];
        double sa = vals[i].sign;
        double mid_log = 0.0;
        while (b - a > 1e-13 * std::max(1.0, b)) {
            const double m = 0.5 * (a + b);
            bool hit = false;
            RealValue v;
            try {
                v = inverse_t_real(c, m);
            } catch (const PoleError&) {
                hit = true;
            }
            if (hit) {  // within the lattice guard of the crossing
                a = b = m;
                mid_log = kNegInf;
                break;
            }
            mid_log = v.log_abs;
            if (v.sign == sa) a = m;
            else b = m;
        }
        if (mid_log > 0.0) continue;  // a pole of 1/t, not a zero
        const double kappa = 0.5 * (a + b);
        CensusEntry e{kappa, -1, 0.0};
        const double idx = c.h() - kappa;
        const int nn = static_cast<int>(std::lround(idx));
        if (nn >= 0 && nn <= c.nmax() && std::abs(idx - nn) < 1e-6) {
            e.n = nn;
            e.position_error = std::abs(idx - nn);
        } else {
            out.spurious.push_back(kappa);
        }
        out.zeros.push_back(e);
    }
    for (int m = 0; m <= c.nmax(); ++m) {
        if (c.h() - m > top) continue;
        const bool found = std::any_of(out.zeros.begin(), out.zeros.end(),
                                       [m](const CensusEntry& e) { return e.n == m; });
        if (!found) out.missing.push_back(m);
    }
    return out;
}

ReflectionZeroScan reflection_zero_scan(double gamma, double h, double k_lo, double k_hi, int n) {
    if (n < 3 || !(k_hi > k_lo)) throw DomainError("reflection scan needs n >= 3 and k_hi > k_lo");
    auto absr = [&](double k) { return std::abs(closed_form_amplitudes(gamma, h, k).r); };
    std::vector<double> ks(n), rs(n);
    for (int i = 0; i < n; ++i) {
        ks[i] = k_lo + (k_hi - k_lo) * i / (n - 1);
        rs[i] = absr(ks[i]);
    }
    ReflectionZeroScan out{rs[0], ks[0]};
    for (int i = 0; i < n; ++i) {
        if (rs[i] < out.min_abs_r) out = {rs[i], ks[i]};
        const bool local = i > 0 && i + 1 < n && rs[i] <= rs[i - 1] && rs[i] <= rs[i + 1];
        if (!local) continue;
        // Golden-section refinement of the local minimum.
        double a = ks[i - 1], b = ks[i + 1];
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = absr(x1), f2 = absr(x2);
        for (int it = 0; it < 60 && b - a > 1e-12; ++it) {
            if (f1 < f2) {
                b = x2; x2 = x1; f2 = f1; x1 = b - gr * (b - a); f1 = absr(x1);
            } else {
                a = x1; x1 = x2; f1 = f2; x2 = a + gr * (b - a); f2 = absr(x2);
            }
        }
        const double fm = std::min(f1, f2);
        if (fm < out.min_abs_r) out = {fm, f1 < f2 ? x1 : x2};
    }
    return out;
}

// ---------------------------------------------------------------------------

ClassicalAmplitudes classical_amplitudes(double h, double k) {
    if (!(h > 0.0)) throw ParamError("h must be positive");
    if (k == 0.0) throw DomainError("k = 0 is a pole of the Gamma factors");
    const cplx ik = I * k;
    const cplx common = log_gamma(-h - ik) + log_gamma(1.0 + h - ik) - log_gamma(-ik);
    ClassicalAmplitudes out;
    out.t = std::exp(common - log_gamma(1.0 - ik));
    out.r = std::exp(common + log_gamma(ik)) * rgamma(-h) * rgamma(1.0 + h);
    return out;
}

namespace {

bool near_integer(cplx v) {
    return std::abs(v.imag()) < 1e-12 && std::abs(v.real() - std::round(v.real())) < 1e-12;
}

// Right side of the Gauss connection formula with w = 1 - z given
// separately, so that w can be tiny without cancellation.
cplx gauss_connection(cplx a, cplx b, cplx c, cplx w) {
    const cplx s = c - a - b;
    if (near_integer(s)) throw DomainError("c - a - b is an integer; the connection formula degenerates");
    const cplx t1 = std::exp(log_gamma(c) + log_gamma(-s) + s * std::log(w)) * rgamma(a) * rgamma(b);
    const cplx t2 = std::exp(log_gamma(c) + log_gamma(s)) * rgamma(c - a) * rgamma(c - b);
    cplx out = 0.0;
    if (t1 != cplx(0.0)) out += t1 * hyp2f1(c - a, c - b, s + 1.0, w);
    if (t2 != cplx(0.0)) out += t2 * hyp2f1(a, b, 1.0 - s, w);
    return out;
}

}  // namespace

ConnectionPair classical_connection_2F1(cplx alpha, cplx beta, cplx gam, cplx z) {
    return {hyp2f1(alpha, beta, gam, z), gauss_connection(alpha, beta, gam, 1.0 - z)};
}

cplx classical_unit_wave(double h, double k, double x) {
    const cplx ik = I * k;
    const cplx a = -h - ik, b = 1.0 + h - ik, c = 1.0 - ik;
    // log(2 cosh x) and w = 1 - z = (1 + tanh x)/2 = 1/(1 + e^{-2x}).
    const double l2c = std::abs(x) + std::log1p(std::exp(-2.0 * std::abs(x)));
    const cplx pref = std::exp(ik * l2c);
    if (x >= 0.0) {
        const double z = 1.0 / (1.0 + std::exp(2.0 * x));
        return pref * hyp2f1(a, b, c, z);
    }
    const double w = 1.0 / (1.0 + std::exp(-2.0 * x));
    return pref * gauss_connection(a, b, c, w);
}

AsymptoticPair classical_wave_asymptotics(double h, double k) {
    const cplx ik = I * k;
    AsymptoticPair out;
    out.A = std::exp(log_gamma(1.0 - ik) + log_gamma(-ik) - log_gamma(-h - ik) - log_gamma(1.0 + h - ik));
    out.B = std::exp(log_gamma(1.0 - ik) + log_gamma(ik)) * rgamma(1.0 + h) * rgamma(-h);
    out.B_vanishes = out.B == cplx(0.0);
    return out;
}

}  // namespace dqm
