#include "dqm/qseries.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "dqm/errors.hpp"

namespace dqm {

namespace {

constexpr double kVanish = 1e-13;

struct RawSum {
    SeriesResult result;
    bool diverged = false;
};

RawSum sum_phi21(const Base& base, const Phi21Params& p, cplx Z, const SeriesOptions& opts) {
    const cplx lq = base.log_q();
    KahanSum sum;
    sum.add(1.0);
    cplx term = 1.0;
    // Tail monitor: compare maxima of consecutive blocks of terms. A block
    // spans at least one period 2 pi / gamma of q^n so the near-resonant
    // spikes of 1/(1 - q^{n+1}) are inside every block.
    const int block = std::max(opts.window, static_cast<int>(std::ceil(2.0 * pi / base.gamma())) + 1);
    double prev_max = -1.0, cur_max = 0.0;
    int in_block = 0, growing = 0, quiet = 0;
    double tail = std::numeric_limits<double>::infinity();
    for (int n = 0; n < opts.max_terms; ++n) {
        const double dn = n;
        const cplx fa = one_minus_exp(p.log_a + dn * lq);
        const cplx fb = one_minus_exp(p.log_b + dn * lq);
        if (std::abs(fa) < kVanish || std::abs(fb) < kVanish)
            return {{sum.value(), n + 1, true, 0.0, SeriesMethod::terminating}};
        const cplx fc = one_minus_exp(p.log_c + dn * lq);
        if (std::abs(fc) < kVanish) {
            std::ostringstream os;
            os << "2phi1 lower parameter c = " << p.c() << " makes (c; q)_" << n + 1 << " vanish";
            throw ParamError(os.str());
        }
        const cplx fq = one_minus_exp((dn + 1.0) * lq);
        const cplx next = term * (fa * fb / (fc * fq)) * Z;
        sum.add(next);
        if (next == cplx(0.0)) return {{sum.value(), n + 2, true, 0.0, SeriesMethod::direct}};

        growing = std::abs(next) > std::abs(term) ? growing + 1 : 0;
        // Spikes of 1/(1 - q^{n+1}) can hide monotone growth, so a term past
        // 1e250 also counts as divergence.
        if (growing >= opts.growth_limit || !(std::abs(next) < 1e250)) {
            RawSum r{{sum.value(), n + 2, false, tail, SeriesMethod::direct}};
            r.diverged = true;
            return r;
        }
        cur_max = std::max(cur_max, std::abs(next));
        if (++in_block == block) {
            if (prev_max > 0.0) {
                const double rho = cur_max / prev_max;
                const double mag = std::max(std::abs(sum.value()), 1e-300);
                tail = rho < 1.0 ? block * cur_max * rho / (1.0 - rho) / mag
                                 : std::numeric_limits<double>::infinity();
                quiet = tail < opts.tol ? quiet + 1 : 0;
                if (quiet >= 3) return {{sum.value(), n + 2, true, tail, SeriesMethod::direct}};
            }
            prev_max = cur_max;
            cur_max = 0.0;
            in_block = 0;
        }
        term = next;
    }
    return {{sum.value(), opts.max_terms + 1, false, tail, SeriesMethod::direct}};
}

// Quadratic extrapolation of f(eps) to eps = 0.
cplx richardson(const std::array<double, 3>& e, const std::array<cplx, 3>& f) {
    cplx out = 0.0;
    for (int i = 0; i < 3; ++i) {
        double w = 1.0;
        for (int j = 0; j < 3; ++j)
            if (j != i) w *= (0.0 - e[j]) / (e[i] - e[j]);
        out += w * f[i];
    }
    return out;
}

}  // namespace

Base::Base(double gamma, double epsilon) : gamma_(gamma), epsilon_(epsilon) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ParamError("base parameter gamma must be positive");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
        throw ParamError("regularization epsilon must be non-negative");
    if (epsilon == 0.0) {
        const double r = gamma / pi;
        for (int n = 1; n <= 64; ++n) {
            const double p = std::round(r * n);
            if (std::abs(r - p / n) < 1e-9) {
                std::ostringstream os;
                os << "gamma/pi = " << r << " is within 1e-9 of " << p << "/" << n
                   << "; q is (close to) a root of unity";
                throw ParamError(os.str());
            }
        }
    }
}

cplx qpochhammer_finite(const Base& base, cplx log_x, int n) {
    if (n < 0) throw ParamError("q-Pochhammer length must be non-negative");
    cplx out = 1.0;
    for (int k = 0; k < n; ++k) out *= one_minus_exp(log_x + static_cast<double>(k) * base.log_q());
    return out;
}

cplx qpochhammer_value(const Base& base, cplx x, int n) {
    if (n < 0) throw ParamError("q-Pochhammer length must be non-negative");
    cplx out = 1.0;
    for (int k = 0; k < n; ++k) out *= 1.0 - x * base.pow(k);
    return out;
}

SeriesResult phi21(const Base& base, const Phi21Params& p, cplx Z, const SeriesOptions& opts) {
    RawSum direct = sum_phi21(base, p, Z, opts);
    if (direct.result.converged) return direct.result;
    const bool can_regularize = opts.regularize && base.epsilon() == 0.0 && std::abs(Z) < 1.0;
    if (!can_regularize) {
        if (direct.diverged) {
            std::ostringstream os;
            os << "2phi1 terms grow without bound at |Z| = " << std::abs(Z);
            throw DivergenceError(os.str());
        }
        return direct.result;
    }
    const std::array<double, 3> eps{1e-5, 1e-6, 1e-7};
    std::array<cplx, 3> vals;
    SeriesOptions inner = opts;
    inner.regularize = false;
    SeriesResult out;
    out.method = SeriesMethod::regularized;
    out.converged = true;
    for (int i = 0; i < 3; ++i) {
        RawSum r = sum_phi21(base.regularized(eps[i]), p, Z, inner);
        vals[i] = r.result.value;
        out.terms_used += r.result.terms_used;
        out.tail_bound = std::max(out.tail_bound, r.result.tail_bound);
        out.converged = out.converged && r.result.converged;
    }
    out.value = richardson(eps, vals);
    // The spread between the extrapolant and the smallest epsilon bounds the
    // extrapolation error.
    const double spread = std::abs(out.value - vals[2]) / std::max(std::abs(out.value), 1e-300);
    out.tail_bound = std::max(out.tail_bound, spread);
    out.converged = out.converged && out.tail_bound <= opts.tol;
    return out;
}

Residual q_difference_residual(const Base& base, const Phi21Params& p, const CFunc& f, cplx Z) {
    const cplx a = p.a(), b = p.b(), c = p.c(), q = base.q();
    const cplx t1 = (c - a * b * Z) * f(q * Z);
    const cplx t2 = ((a + b) * Z - c - q) * f(Z);
    const cplx t3 = (q - Z) * f(Z / q);
    return {t1 + t2 + t3, std::abs(t1) + std::abs(t2) + std::abs(t3)};
}

Residual q_difference_residual_exp(const Base& base, const Phi21Params& p, const CFunc& F, cplx z) {
    const cplx a = p.a(), b = p.b(), c = p.c(), q = base.q(), Z = std::exp(z);
    const cplx lq = base.log_q();
    const cplx t1 = (c - a * b * Z) * F(z + lq);
    const cplx t2 = ((a + b) * Z - c - q) * F(z);
    const cplx t3 = (q - Z) * F(z - lq);
    return {t1 + t2 + t3, std::abs(t1) + std::abs(t2) + std::abs(t3)};
}

cplx terminating_phi(const Base& base, int n, const std::vector<cplx>& num,
                     const std::vector<cplx>& den, cplx arg) {
    if (n < 0) throw ParamError("terminating series needs n >= 0");
    const cplx lq = base.log_q();
    cplx term = 1.0, sum = 1.0;
    for (int k = 0; k < n; ++k) {
        const cplx qk = base.pow(k);
        cplx top = one_minus_exp(lq * static_cast<double>(k - n));
        for (cplx a : num) top *= 1.0 - a * qk;
        cplx bottom = one_minus_exp(lq * static_cast<double>(k + 1));
        for (cplx b : den) {
            const cplx f = 1.0 - b * qk;
            if (std::abs(f) < kVanish) {
                std::ostringstream os;
                os << "lower parameter " << b << " makes a denominator vanish at k = " << k;
                throw ParamError(os.str());
            }
            bottom *= f;
        }
        term *= top / bottom * arg;
        sum += term;
    }
    return sum;
}

cplx coordinate_phase(Coordinate c, cplx x) {
    return c == Coordinate::cos_x ? std::exp(I * x) : I * std::exp(x);
}

cplx askey_wilson(const Base& base, int n, const std::array<cplx, 4>& a, cplx x, Coordinate coord) {
    if (n < 0) throw ParamError("Askey-Wilson degree must be non-negative");
    const cplx e = coordinate_phase(coord, x);
    const cplx b4 = a[0] * a[1] * a[2] * a[3];
    const cplx lq = base.log_q();
    // (x; q)_n / (x; q)_k = (x q^k; q)_{n-k} removes every denominator.
    cplx sum = 0.0, ratio = 1.0;
    for (int k = 0; k <= n; ++k) {
        const cplx qk = base.pow(k);
        cplx tail = 1.0;
        for (int j = 1; j < 4; ++j) tail *= qpochhammer_value(base, a[0] * a[j] * qk, n - k);
        sum += ratio * tail;
        if (k == n) break;
        const cplx top = one_minus_exp(lq * static_cast<double>(k - n)) *
                         (1.0 - b4 * base.pow(n - 1 + k)) * (1.0 - a[0] * e * qk) *
                         (1.0 - a[0] / e * qk);
        ratio *= top / one_minus_exp(lq * static_cast<double>(k + 1)) * base.q();
    }
    return std::pow(a[0], -n) * sum;
}

cplx askey_wilson_4phi3(const Base& base, int n, const std::array<cplx, 4>& a, cplx x,
                        Coordinate coord) {
    const cplx e = coordinate_phase(coord, x);
    const cplx b4 = a[0] * a[1] * a[2] * a[3];
    cplx pre = std::pow(a[0], -n);
    for (int j = 1; j < 4; ++j) pre *= qpochhammer_value(base, a[0] * a[j], n);
    const cplx s = terminating_phi(base, n, {b4 * base.pow(n - 1), a[0] * e, a[0] / e},
                                   {a[0] * a[1], a[0] * a[2], a[0] * a[3]}, base.q());
    return pre * s;
}

cplx q_ultraspherical(const Base& base, int n, cplx log_beta, cplx x, Coordinate coord,
                      UltraLine line) {
    if (n < 0) throw ParamError("q-ultraspherical degree must be non-negative");
    const cplx beta = std::exp(log_beta), bh = std::exp(0.5 * log_beta);
    const cplx q = base.q(), qh = std::exp(0.5 * base.log_q());
    const cplx e = coordinate_phase(coord, x);
    const cplx qq_n = qpochhammer_finite(base, base.log_q(), n);
    const cplx b2_n = qpochhammer_finite(base, 2.0 * log_beta, n);
    switch (line) {
        case UltraLine::askey_wilson: {
            cplx den = qq_n;
            for (cplx v : {beta * qh, -beta, -beta * qh}) den *= qpochhammer_value(base, v, n);
            if (std::abs(den) < kVanish)
                throw ParamError("q-ultraspherical Askey-Wilson line has a vanishing denominator");
            return b2_n / den * askey_wilson(base, n, {bh, bh * qh, -bh, -bh * qh}, x, coord);
        }
        case UltraLine::phi43:
            return b2_n / qq_n * std::exp(-0.5 * n * log_beta) *
                   terminating_phi(base, n, {beta * beta * base.pow(n), bh * e, bh / e},
                                   {beta * qh, -beta, -beta * qh}, q);
        case UltraLine::phi32:
            return b2_n / qq_n * std::exp(-static_cast<double>(n) * log_beta) * std::pow(e, -n) *
                   terminating_phi(base, n, {beta, beta * e * e}, {beta * beta, 0.0}, q);
        case UltraLine::phi21:
            return qpochhammer_finite(base, log_beta, n) / qq_n * std::pow(e, n) *
                   terminating_phi(base, n, {beta}, {base.pow(1 - n) / beta}, q / (beta * e * e));
    }
    throw ParamError("unknown q-ultraspherical line");
}

std::string to_string(SeriesMethod m) {
    switch (m) {
        case SeriesMethod::direct: return "direct";
        case SeriesMethod::terminating: return "terminating";
        case SeriesMethod::regularized: return "regularized";
    }
    return "unknown";
}

}  // namespace dqm
