#include "dqm/qdilog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "dqm/errors.hpp"
#include "dqm/quadrature.hpp"

namespace dqm {

namespace {

struct LogPart {
    cplx value;
    double error;
};

// Height of the contour above the real axis: halfway to the nearest pole of
// 1/(sinh(gamma t) sinh(pi t)) on the positive imaginary axis.
double contour_height(double gamma) { return 0.5 * std::min(1.0, pi / gamma); }

double log_sinh(double a) {
    return a > 20.0 ? a - std::log(2.0) : std::log(std::sinh(a));
}

// log sinh(w) modulo 2 pi i, safe for large |Re w|.
cplx log_sinh(cplx w) {
    if (w.real() > 20.0) return w - std::log(2.0) + std::log(1.0 - std::exp(-2.0 * w));
    if (w.real() < -20.0) return -w - std::log(2.0) + std::log(std::exp(2.0 * w) - 1.0);
    return std::log(std::sinh(w));
}

// Bound of |integrand| at |Re t| = s on the contour.
double integrand_bound(double gamma, double x, double y, double delta, double s) {
    return std::exp(x * delta + std::abs(y) * s - std::log(4.0 * s) - log_sinh(gamma * s) -
                    log_sinh(pi * s));
}

LogPart integral_log(double gamma, cplx z, double tol) {
    const double x = z.real(), y = z.imag();
    const double delta = contour_height(gamma);
    const double rate = gamma + pi - std::abs(y);

    // Truncation: past T the tail is below tol/100.
    double T = 1.0;
    while (integrand_bound(gamma, x, y, delta, T) / std::min(rate, 1.0) > 1e-2 * tol) T *= 1.15;

    const cplx shift{0.0, delta};
    auto f = [&](double s) -> cplx {
        const cplx t = s + shift;
        if (std::abs(s) < 20.0)
            return std::exp(-I * z * t) / (4.0 * std::sinh(gamma * t) * std::sinh(pi * t) * t);
        return std::exp(-I * z * t - log_sinh(gamma * t) - log_sinh(pi * t) - std::log(4.0 * t));
    };

    // Panels: half an oscillation period of e^{-i x s}, at most 2 wide, with
    // an extra break at the contour height where the integrand peaks.
    const double width = std::min(2.0, pi / std::max(std::abs(x), 1e-300));
    std::vector<double> edges{0.0};
    if (delta < T) edges.push_back(delta);
    while (edges.back() < T) edges.push_back(std::min(T, edges.back() + width));

    TanhSinhOptions opts;
    opts.abs_tol = 0.1 * tol / static_cast<double>(edges.size());
    opts.rel_tol = 1e-15;
    opts.max_level = 9;

    cplx total = 0.0;
    double err = integrand_bound(gamma, x, y, delta, T) / std::min(rate, 1.0);
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double a = edges[k], b = edges[k + 1];
        const auto pos = tanh_sinh(f, a, b, opts);
        const auto neg = tanh_sinh(f, -b, -a, opts);
        total += pos.value + neg.value;
        err += pos.error + neg.error;
    }
    return {total, err};
}

// Lattice point within `guard` of z, if any.
std::optional<LatticePoint> lattice_hit(double gamma, cplx z, double guard) {
    if (std::abs(z.real()) > guard) return std::nullopt;
    const double ay = std::abs(z.imag());
    for (int n2 = 1; (2 * n2 - 1) * pi <= ay + gamma + guard; ++n2) {
        const double rest = ay - (2 * n2 - 1) * pi;
        const int guess = static_cast<int>(std::lround((rest / gamma + 1.0) / 2.0));
        for (int n1 = std::max(1, guess - 1); n1 <= guess + 1; ++n1) {
            const double site = (2 * n1 - 1) * gamma + (2 * n2 - 1) * pi;
            const cplx loc{0.0, z.imag() >= 0 ? site : -site};
            if (std::abs(z - loc) < guard) return LatticePoint{loc, n1, n2, z.imag() >= 0};
        }
    }
    return std::nullopt;
}

void guard_lattice(double gamma, cplx z, double guard) {
    if (auto hit = lattice_hit(gamma, z, guard)) {
        std::ostringstream os;
        os << "quantum dilogarithm evaluated within " << guard << " of a "
           << (hit->is_pole ? "pole" : "zero") << " at " << hit->location.imag()
           << "i (n1=" << hit->n1 << ", n2=" << hit->n2 << ")";
        throw PoleError(os.str(), hit->n1, hit->n2, hit->is_pole);
    }
}

// log(1 + e^w) for Re w <= 0 (principal branch, analytic there).
cplx log1p_exp(cplx w) { return std::log(1.0 + std::exp(w)); }

struct Reduced {
    cplx log_value;
    double error;
    bool continued;
};

// log Phi for Re z <= 0: shift Im z into the band |Im z| <= gamma + pi - 1.
Reduced reduced_log(double gamma, cplx z, double tol, ShiftRule rule) {
    const bool use_gamma = rule == ShiftRule::automatic ? gamma <= pi : rule == ShiftRule::gamma_shifts;
    const double step = use_gamma ? gamma : pi;
    // Target band; 2 step must fit in it so the loops below cannot overshoot.
    const double band = std::max(gamma + pi - 1.0, step);
    const double kappa = use_gamma ? 1.0 : pi / gamma;
    cplx acc = 0.0;
    double err = 0.0;
    bool continued = false;
    while (z.imag() > band) {
        // Phi(z) = Phi(z - 2i step) / (1 + e^{kappa (z - i step)})
        const cplx w = kappa * (z - I * step);
        acc -= log1p_exp(w);
        err += 2e-16 / std::abs(1.0 + std::exp(w));
        z -= 2.0 * I * step;
        continued = true;
    }
    while (z.imag() < -band) {
        const cplx w = kappa * (z + I * step);
        acc += log1p_exp(w);
        err += 2e-16 / std::abs(1.0 + std::exp(w));
        z += 2.0 * I * step;
        continued = true;
    }
    const LogPart part = integral_log(gamma, z, tol);
    return {acc + part.value, err + part.error, continued};
}

QdilogValue finish(cplx z, cplx log_value, QdilogMethod method, double err) {
    return {z, std::exp(log_value), log_value, method, err};
}

struct FullLog {
    cplx value;
    double error;
    QdilogMethod method;
};

FullLog full_log(const QdilogParam& p, cplx z, const QdilogOptions& opts) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("quantum dilogarithm argument is not finite");
    const double g = p.gamma();
    guard_lattice(g, z, opts.pole_guard);
    if (z.real() <= 0.0) {
        const Reduced r = reduced_log(g, z, opts.tol, opts.shifts);
        return {r.log_value, r.error, r.continued ? QdilogMethod::continued : QdilogMethod::integral};
    }
    const Reduced r = reduced_log(g, -z, opts.tol, opts.shifts);
    const cplx inv = inversion_log(g, z);
    const double err = r.error + 2e-16 * (std::abs(inv) + 1.0);
    return {inv - r.log_value, err, QdilogMethod::continued};
}

}  // namespace

QdilogParam::QdilogParam(double gamma) : gamma_(gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw ParamError("quantum dilogarithm parameter gamma must be positive and finite");
}

cplx inversion_log(double gamma, cplx z) {
    return I / (4.0 * gamma) * (z * z + (gamma * gamma + pi * pi) / 3.0);
}

QdilogValue eval_integral(const QdilogParam& p, cplx z, const QdilogOptions& opts) {
    const double limit = (1.0 - opts.margin_fraction) * p.strip_halfwidth();
    if (std::abs(z.imag()) > limit) {
        std::ostringstream os;
        os << "integral representation needs |Im z| < " << limit
           << ", got " << z.imag();
        throw DomainError(os.str());
    }
    const LogPart part = integral_log(p.gamma(), z, opts.tol);
    return finish(z, part.value, QdilogMethod::integral, part.error);
}

cplx eval_log(const QdilogParam& p, cplx z, const QdilogOptions& opts) {
    return full_log(p, z, opts).value;
}

QdilogValue eval(const QdilogParam& p, cplx z, const QdilogOptions& opts) {
    const FullLog l = full_log(p, z, opts);
    if (l.value.real() > 709.0) {
        std::ostringstream os;
        os << "|Phi(z)| = exp(" << l.value.real() << ") overflows at z = " << z;
        throw OverflowError(os.str());
    }
    return finish(z, l.value, l.method, l.error);
}

cplx eval_plus_log(const QdilogParam& p, cplx z, const QdilogOptions& opts) {
    const QdilogParam half(0.5 * p.gamma());
    return eval_log(half, z + I * (0.5 * p.gamma() + pi), opts);
}

QdilogValue eval_plus(const QdilogParam& p, cplx z, const QdilogOptions& opts) {
    const QdilogParam half(0.5 * p.gamma());
    QdilogValue v = eval(half, z + I * (0.5 * p.gamma() + pi), opts);
    v.z = z;
    return v;
}

DuplicationPair duplication_pair(const QdilogParam& p, cplx z, const QdilogOptions& opts) {
    const double g = p.gamma();
    const QdilogParam twice(2.0 * g), half(0.5 * g);
    auto L = [&](const QdilogParam& q, cplx w) { return eval_log(q, w, opts); };
    DuplicationPair d;
    d.pi_lhs = std::exp(L(p, z + 0.5 * I * pi) + L(p, z - 0.5 * I * pi));
    d.pi_rhs = std::exp(L(twice, 2.0 * z));
    d.gamma_lhs = std::exp(L(p, z + 0.5 * I * g) + L(p, z - 0.5 * I * g));
    d.gamma_rhs = std::exp(L(half, z));
    return d;
}

std::vector<LatticePoint> pole_zero_enumerate(const QdilogParam& p, double radius) {
    const double g = p.gamma();
    std::vector<LatticePoint> out;
    for (int n2 = 1; (2 * n2 - 1) * pi + g <= radius; ++n2) {
        for (int n1 = 1;; ++n1) {
            const double site = (2 * n1 - 1) * g + (2 * n2 - 1) * pi;
            if (site > radius) break;
            out.push_back({cplx(0.0, site), n1, n2, true});
            out.push_back({cplx(0.0, -site), n1, n2, false});
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const LatticePoint& a, const LatticePoint& b) {
        const double ma = std::abs(a.location.imag()), mb = std::abs(b.location.imag());
        if (ma != mb) return ma < mb;
        return a.is_pole && !b.is_pole;
    });
    return out;
}

std::string to_string(QdilogMethod m) {
    return m == QdilogMethod::integral ? "integral" : "continued";
}

}  // namespace dqm
