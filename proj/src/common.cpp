#include "dqm/common.hpp"

#include "dqm/errors.hpp"

namespace dqm {

namespace {

// Root of gv closest to the previous root.
cplx nearest_root(cplx gv, cplx prev) {
    const cplx r = std::sqrt(gv);
    return std::abs(r - prev) <= std::abs(r + prev) ? r : -r;
}

cplx follow(const CFunc& g, cplx from, cplx to, cplx root, cplx g_to, int depth) {
    const cplx g_from = root * root;
    // Accept the step when the radicand turns by less than a quarter turn.
    const double turn = std::abs(std::arg(g_to / g_from));
    if (turn < 0.5 * pi) return nearest_root(g_to, root);
    if (depth > 30) throw BranchError("square-root continuation passes through a zero");
    const cplx mid = 0.5 * (from + to);
    const cplx mid_root = follow(g, from, mid, root, g(mid), depth + 1);
    return follow(g, mid, to, mid_root, g_to, depth + 1);
}

}  // namespace

cplx continued_sqrt(const CFunc& g, cplx x, cplx gx, int steps) {
    if (gx == cplx(0.0)) return 0.0;
    if (x.imag() == 0.0) return std::sqrt(gx);
    const cplx start{x.real(), 0.0};
    const cplx g0 = g(start);
    if (g0 == cplx(0.0)) throw BranchError("square-root continuation starts at a zero");
    cplx root = std::sqrt(g0);
    cplx prev = start;
    for (int s = 1; s <= steps; ++s) {
        const cplx pt = s == steps ? x : cplx(x.real(), x.imag() * s / steps);
        const cplx gv = s == steps ? gx : g(pt);
        if (gv == cplx(0.0)) throw BranchError("square-root continuation hits a zero");
        root = follow(g, prev, pt, root, gv, 0);
        prev = pt;
    }
    return root;
}

cplx continued_sqrt(const CFunc& g, cplx x, int steps) {
    return continued_sqrt(g, x, g(x), steps);
}

}  // namespace dqm
