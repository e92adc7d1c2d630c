#include "dqm/reflectionless.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "dqm/errors.hpp"
#include "dqm/linalg.hpp"
#include "dqm/quadrature.hpp"

namespace dqm {

namespace {

cplx i_power(long m) {
    static const cplx p[4] = {1.0, I, -1.0, -I};
    return p[((m % 4) + 4) % 4];
}

double delta_product(const SeedSystem& s, int skip = 0) {
    double d = 1.0;
    const auto& k = s.k();
    for (int i = 1; i <= s.N(); ++i)
        for (int l = i + 1; l <= s.N(); ++l)
            if (i != skip && l != skip) d *= 2.0 * std::sin(0.5 * s.gamma() * (k[l - 1] - k[i - 1]));
    return d;
}

// Casoratian with every column divided by its largest entry:
// W = det * exp(log_scale).
struct ScaledW {
    cplx det;
    double log_scale;
};

ScaledW scaled_casoratian(double gamma, const std::vector<CFunc>& fns, cplx x) {
    const int n = static_cast<int>(fns.size());
    CMatrix m(n);
    double log_scale = 0.0;
    for (int col = 0; col < n; ++col) {
        double big = 0.0;
        for (int row = 0; row < n; ++row) {
            const cplx xj = x + I * ((n + 1) / 2.0 - (row + 1)) * gamma;
            m(row, col) = fns[col](xj);
            big = std::max(big, std::abs(m(row, col)));
        }
        if (!(big > 0.0) || !std::isfinite(big)) big = 1.0;
        for (int row = 0; row < n; ++row) m(row, col) /= big;
        log_scale += std::log(big);
    }
    const cplx det = determinant(m).value * i_power(static_cast<long>(n) * (n - 1) / 2);
    return {det, log_scale};
}

std::vector<CFunc> seed_fns(const SeedSystem& s, int skip = 0) {
    std::vector<CFunc> out;
    for (int j = 1; j <= s.N(); ++j)
        if (j != skip) out.push_back(s.seed_fn(j));
    return out;
}

cplx sum_k(const SeedSystem& s, int skip = 0) {
    double acc = 0.0;
    for (int j = 1; j <= s.N(); ++j)
        if (j != skip) acc += s.k()[j - 1];
    return acc;
}

// W / (prefactor * e^{sum k x}) from a scaled Casoratian.
cplx normalized_w(const ScaledW& w, cplx sumk_x, double prefactor) {
    return w.det * std::exp(w.log_scale - sumk_x) / prefactor;
}

void check_nonzero(cplx v, const char* what, cplx x) {
    if (v == cplx(0.0) || !std::isfinite(std::abs(v))) {
        std::ostringstream os;
        os << what << " vanishes or is not finite at x = " << x;
        throw SingularPointError(os.str());
    }
}

double dressed_c(const SeedSystem& s, int m, int dress) {
    const double g = s.gamma();
    const auto& k = s.k();
    double cm = s.c()[m];
    if (dress > 0) cm *= std::sin(0.5 * g * (k[dress - 1] - k[m])) / std::sin(0.5 * g * (k[dress - 1] + k[m]));
    return cm;
}

// Sum over the 2^N principal minors of the tau matrix. Each minor is a
// Cauchy-type determinant with a product formula, so no cancellation occurs.
cplx tau_sum(const SeedSystem& s, cplx x, int dress) {
    const int n = s.N();
    const double g = s.gamma();
    const auto& k = s.k();
    std::vector<cplx> eta(n);
    for (int j = 0; j < n; ++j) eta[j] = dressed_c(s, j, dress) * std::exp(-2.0 * k[j] * x) / std::sin(g * k[j]);
    cplx total = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        cplx term = 1.0;
        for (int i = 0; i < n && term != 0.0; ++i) {
            if (!(mask >> i & 1u)) continue;
            term *= eta[i];
            for (int j = i + 1; j < n; ++j) {
                if (!(mask >> j & 1u)) continue;
                const double r = std::sin(0.5 * g * (k[i] - k[j])) / std::sin(0.5 * g * (k[i] + k[j]));
                term *= r * r;
            }
        }
        total += term;
    }
    return total;
}

// Above this condition estimate the LU value loses more than ~1e-10 and the
// minor sum is returned instead.
constexpr double kLuConditionLimit = 1e6;

TauResult tau_matrix(const SeedSystem& s, cplx x, int dress) {
    const int n = s.N();
    const double g = s.gamma();
    const auto& k = s.k();
    CMatrix a(n);
    for (int m = 0; m < n; ++m) {
        const double cm = dressed_c(s, m, dress);
        for (int l = 0; l < n; ++l)
            a(m, l) = (m == l ? 1.0 : 0.0) +
                      cm * std::exp(-(k[m] + k[l]) * x) / std::sin(0.5 * g * (k[m] + k[l]));
    }
    const Determinant d = determinant(a);
    const double cond = d.rcond > 0.0 ? 1.0 / d.rcond : std::numeric_limits<double>::infinity();
    const cplx value = cond > kLuConditionLimit ? tau_sum(s, x, dress) : d.value;
    return {value, cond, cond > 1e12};
}

void check_index(const SeedSystem& s, int j) {
    if (j < 1 || j > s.N()) {
        std::ostringstream os;
        os << "seed index " << j << " outside 1.." << s.N();
        throw RangeError(os.str());
    }
}

}  // namespace

cplx SeedSystem::seed(int j, cplx x) const {
    const double kj = k_[j - 1];
    return std::exp(kj * x) + c_tilde_[j - 1] * std::exp(-kj * x);
}

CFunc SeedSystem::seed_fn(int j) const {
    const double kj = k_[j - 1], cj = c_tilde_[j - 1];
    return [kj, cj](cplx x) { return std::exp(kj * x) + cj * std::exp(-kj * x); };
}

SeedSystem SeedSystem::truncated(int m) const {
    SeedOptions opts;
    opts.max_seeds = std::max(m, 0);
    return seeds_build(gamma_, std::vector<double>(k_.begin(), k_.begin() + m),
                       std::vector<double>(c_tilde_.begin(), c_tilde_.begin() + m), opts);
}

SeedSystem seeds_build(double gamma, std::vector<double> k, std::vector<double> c_tilde,
                       const SeedOptions& opts) {
    std::ostringstream os;
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        os << "gamma must be positive, got " << gamma;
        throw ValidationError(os.str());
    }
    if (k.size() != c_tilde.size()) throw ValidationError("k and c_tilde have different lengths");
    const int n = static_cast<int>(k.size());
    if (n > opts.max_seeds) {
        os << "N = " << n << " exceeds the seed cap " << opts.max_seeds;
        throw ValidationError(os.str());
    }
    for (int j = 0; j < n; ++j) {
        if (!std::isfinite(k[j]) || !std::isfinite(c_tilde[j]))
            throw ValidationError("seed parameters must be finite");
        if (j == 0 && !(k[0] > 0.0)) {
            os << "ordering: k_1 = " << k[0] << " must be positive";
            throw ValidationError(os.str());
        }
        if (j > 0 && !(k[j] > k[j - 1])) {
            os << "ordering: k_" << j + 1 << " = " << k[j] << " must exceed k_" << j << " = " << k[j - 1];
            throw ValidationError(os.str());
        }
        if (!(k[j] < pi / gamma)) {
            os << "range: k_" << j + 1 << " = " << k[j] << " must be below pi/gamma = " << pi / gamma
               << " (the boundary makes sin(gamma k) vanish)";
            throw ValidationError(os.str());
        }
        const double sign = j % 2 == 0 ? 1.0 : -1.0;
        if (!(sign * c_tilde[j] > 0.0)) {
            os << "sign: (-1)^" << j << " c_tilde_" << j + 1 << " must be positive, got c_tilde = "
               << c_tilde[j];
            throw ValidationError(os.str());
        }
    }
    SeedSystem s;
    s.gamma_ = gamma;
    s.c_.resize(n);
    for (int j = 0; j < n; ++j) {
        double cj = c_tilde[j] * std::sin(gamma * k[j]);
        for (int i = 0; i < n; ++i)
            if (i != j) cj *= std::sin(0.5 * gamma * (k[i] + k[j])) / std::sin(0.5 * gamma * (k[i] - k[j]));
        if (!(cj > 0.0)) {
            os << "derived c_" << j + 1 << " = " << cj << " is not positive";
            throw ValidationError(os.str());
        }
        s.c_[j] = cj;
    }
    s.k_ = std::move(k);
    s.c_tilde_ = std::move(c_tilde);
    return s;
}

SeedSystem soliton_seeds(double gamma, int N) {
    std::vector<double> k(N), c(N);
    for (int j = 1; j <= N; ++j) {
        k[j - 1] = j;
        c[j - 1] = j % 2 == 1 ? 1.0 : -1.0;
    }
    return seeds_build(gamma, k, c);
}

cplx casoratian(double gamma, const std::vector<CFunc>& fns, cplx x) {
    const int n = static_cast<int>(fns.size());
    CMatrix m(n);
    for (int row = 0; row < n; ++row) {
        const cplx xj = x + I * ((n + 1) / 2.0 - (row + 1)) * gamma;
        for (int col = 0; col < n; ++col) m(row, col) = fns[col](xj);
    }
    return determinant(m).value * i_power(static_cast<long>(n) * (n - 1) / 2);
}

TauResult tau_u_detail(const SeedSystem& s, cplx x) { return tau_matrix(s, x, 0); }
cplx tau_u(const SeedSystem& s, cplx x) { return tau_matrix(s, x, 0).value; }

TauResult tau_u_excl_detail(const SeedSystem& s, int j, cplx x) {
    check_index(s, j);
    return tau_matrix(s, x, j);
}
cplx tau_u_excl(const SeedSystem& s, int j, cplx x) { return tau_u_excl_detail(s, j, x).value; }

cplx tau_u_casoratian(const SeedSystem& s, cplx x) {
    const ScaledW w = scaled_casoratian(s.gamma(), seed_fns(s), x);
    return normalized_w(w, sum_k(s) * x, delta_product(s));
}

cplx tau_u_excl_casoratian(const SeedSystem& s, int j, cplx x) {
    check_index(s, j);
    const ScaledW w = scaled_casoratian(s.gamma(), seed_fns(s, j), x);
    return normalized_w(w, sum_k(s, j) * x, delta_product(s, j));
}

cplx tau_u_expansion(const SeedSystem& s, cplx x) { return tau_sum(s, x, 0); }

cplx potential_V(const SeedSystem& s, cplx x) {
    const int n = s.N();
    if (n == 0) return 1.0;
    const double g = s.gamma();
    const auto prev = seed_fns(s.truncated(n - 1));
    const auto all = seed_fns(s);
    auto ratio = [&](const std::vector<CFunc>& f, cplx num_x, cplx den_x) {
        const ScaledW a = scaled_casoratian(g, f, num_x), b = scaled_casoratian(g, f, den_x);
        check_nonzero(b.det, "Casoratian in the potential denominator", den_x);
        return a.det / b.det * std::exp(a.log_scale - b.log_scale);
    };
    const cplx r1 = n > 1 ? ratio(prev, x - I * g, x) : cplx(1.0);
    return r1 * ratio(all, x + 0.5 * I * g, x - 0.5 * I * g);
}

cplx potential_V_tau(const SeedSystem& s, cplx x) {
    const int n = s.N();
    if (n == 0) return 1.0;
    const double g = s.gamma();
    const SeedSystem prev = s.truncated(n - 1);
    const cplx p0 = tau_u(prev, x), pm = tau_u(prev, x - I * g);
    const cplx um = tau_u(s, x - 0.5 * I * g), up = tau_u(s, x + 0.5 * I * g);
    check_nonzero(p0, "u_{N-1}", x);
    check_nonzero(um, "u_N", x - 0.5 * I * g);
    return std::exp(I * g * s.k().back()) * pm / p0 * up / um;
}

cplx potential_calU(const SeedSystem& s, cplx x) {
    const double g = s.gamma();
    const cplx u0 = tau_u(s, x);
    check_nonzero(u0, "u_N", x);
    const CFunc prod = [&](cplx y) { return tau_u(s, y + I * g) * tau_u(s, y - I * g); };
    return continued_sqrt(prod, x) / u0;
}

double bound_energy(const SeedSystem& s, int j) {
    check_index(s, j);
    const double v = std::sin(0.5 * s.gamma() * s.k()[j - 1]);
    return -4.0 * v * v;
}

cplx bound_state(const SeedSystem& s, int j, cplx x) {
    check_index(s, j);
    // Far left the tau product overflows; the scaled Casoratian form does not.
    if (-4.0 * sum_k(s).real() * x.real() > 600.0) return bound_state_casoratian(s, j, x);
    const double g = s.gamma();
    const auto& k = s.k();
    double pref = (j - 1) % 2 == 0 ? 1.0 : -1.0;
    for (int i = 1; i <= s.N(); ++i)
        if (i != j) pref /= 2.0 * std::sin(0.5 * g * (k[i - 1] - k[j - 1]));
    const CFunc prod = [&](cplx y) { return tau_u(s, y - 0.5 * I * g) * tau_u(s, y + 0.5 * I * g); };
    const cplx root = continued_sqrt(prod, x);
    check_nonzero(root, "u_N(x - i gamma/2) u_N(x + i gamma/2)", x);
    return pref * std::exp(-k[j - 1] * x) * tau_u_excl(s, j, x) / root;
}

namespace {

// sqrt(W_N(x - i g/2) W_N(x + i g/2)) e^{-sum k x}, continued from the real
// axis, as value * e^{log_scale} so that it survives far from the origin.
struct ScaledRoot {
    cplx value;
    double log_scale;
};

ScaledRoot casoratian_root(const SeedSystem& s, cplx x) {
    const double g = s.gamma();
    const auto fns = seed_fns(s);
    const cplx sk = sum_k(s);
    auto log_scale_at = [&](cplx y) {
        const ScaledW a = scaled_casoratian(g, fns, y - 0.5 * I * g);
        const ScaledW b = scaled_casoratian(g, fns, y + 0.5 * I * g);
        return a.log_scale + b.log_scale - 2.0 * (sk * y).real();
    };
    const double L = log_scale_at(x);
    const CFunc prod = [&](cplx y) {
        const ScaledW a = scaled_casoratian(g, fns, y - 0.5 * I * g);
        const ScaledW b = scaled_casoratian(g, fns, y + 0.5 * I * g);
        return a.det * b.det * std::exp(a.log_scale + b.log_scale - 2.0 * sk * y - L);
    };
    const cplx root = continued_sqrt(prod, x);
    check_nonzero(root, "Casoratian product", x);
    return {root, 0.5 * L};
}

}  // namespace

cplx bound_state_casoratian(const SeedSystem& s, int j, cplx x) {
    check_index(s, j);
    const ScaledW w = scaled_casoratian(s.gamma(), seed_fns(s, j), x);
    const ScaledRoot r = casoratian_root(s, x);
    return w.det / r.value * std::exp(w.log_scale - r.log_scale - sum_k(s) * x);
}

cplx relabeled_state(const SeedSystem& s, int n, cplx x) {
    const int N = s.N();
    if (n < 0 || n >= N) {
        std::ostringstream os;
        os << "level " << n << " outside 0.." << N - 1;
        throw RangeError(os.str());
    }
    const double g = s.gamma();
    double c = 1.0;
    for (int l = 1; l <= N - 1; ++l) c *= 2.0 * std::sin(0.5 * g * l);
    for (int l = 1; l <= n; ++l)
        c *= 2.0 * std::sin(0.5 * g * l) * std::sin(0.5 * g * (2 * N - 2 * n + l)) /
             std::sin(0.5 * g * (N - l));
    return c * bound_state(s, N - n, x);
}

cplx wave_solution(const SeedSystem& s, cplx k, cplx x) {
    auto fns = seed_fns(s);
    fns.push_back([k](cplx y) { return std::exp(I * k * y); });
    const ScaledW w = scaled_casoratian(s.gamma(), fns, x);
    const ScaledRoot r = casoratian_root(s, x);
    return w.det / r.value * std::exp(w.log_scale - r.log_scale - sum_k(s) * x);
}

AmplitudeResult amplitude_product(const SeedSystem& s, cplx k) {
    const double g = s.gamma();
    AmplitudeResult out;
    out.k = k;
    out.t = 1.0;
    for (double kj : s.k()) {
        out.t *= std::sinh(0.5 * g * (k + I * kj)) / std::sinh(0.5 * g * (k - I * kj));
        out.bound_kappa.push_back(kj);
    }
    out.r = 0.0;
    out.unitarity_defect = unitarity_defect(out.t, out.r);
    out.flags.push_back("r_exact_zero");
    return out;
}

StripScan strip_zero_scan(const SeedSystem& s, double x_lo, double x_hi, int nx, int ny) {
    const double g = s.gamma();
    StripScan out{std::numeric_limits<double>::infinity(), 0.0, true};
    for (int a = 0; a <= nx; ++a) {
        const double xr = x_lo + (x_hi - x_lo) * a / nx;
        for (int b = 0; b < ny; ++b) {
            const double yi = -0.5 * g + g * (b + 0.5) / ny;
            const cplx x{xr, yi};
            const double v = std::abs(tau_u(s, x));
            if (v < out.min_abs) {
                out.min_abs = v;
                out.argmin = x;
            }
        }
    }
    // u_N >= 1 on the real axis, so 1e-8 is an absolute threshold.
    out.zero_free = out.min_abs > 1e-8;
    return out;
}

std::vector<std::vector<double>> bound_state_overlaps(const SeedSystem& s, double L) {
    const int n = s.N();
    std::vector<std::vector<double>> gram(n, std::vector<double>(n, 0.0));
    TanhSinhOptions opts;
    opts.abs_tol = 1e-13;
    opts.rel_tol = 1e-12;
    const int panels = std::max(2, static_cast<int>(std::ceil(2.0 * L)));
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            const auto f = [&](double x) { return bound_state(s, i, x) * bound_state(s, j, x); };
            double acc = 0.0;
            for (int p = 0; p < panels; ++p) {
                const double a = -L + 2.0 * L * p / panels, b = -L + 2.0 * L * (p + 1) / panels;
                acc += tanh_sinh(f, a, b, opts).value.real();
            }
            gram[i - 1][j - 1] = gram[j - 1][i - 1] = acc;
        }
    return gram;
}

double classical_tau(const std::vector<double>& k, const std::vector<double>& c_tilde, double x) {
    const int n = static_cast<int>(k.size());
    CMatrix a(n);
    for (int m = 0; m < n; ++m) {
        double cm = 2.0 * k[m] * c_tilde[m];
        for (int i = 0; i < n; ++i)
            if (i != m) cm *= (k[i] + k[m]) / (k[i] - k[m]);
        for (int l = 0; l < n; ++l)
            a(m, l) = (m == l ? 1.0 : 0.0) + cm * std::exp(-(k[m] + k[l]) * x) / (k[m] + k[l]);
    }
    return determinant(a).value.real();
}

}  // namespace dqm
