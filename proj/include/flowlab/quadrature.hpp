#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace flowlab {

struct QuadratureParams {
    double rel_tol = 1e-12;   // per-piece relative target
    double abs_tol = 1e-14;   // absolute floor
    double cap = 1e12;        // slow-time magnitude cap; beyond it the +inf flag is raised
    double fast_cap = 1e6;    // fast-time search window for inversions and scans
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    long long evals = 0;
};

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1,1] (positive abscissae; the rule is symmetric).
// Gauss nodes are the odd-index Kronrod nodes.
inline constexpr double kGK15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kGK15WeightsG[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
inline void gk15(const F& f, double a, double b, double& value, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = kGK15WeightsK[7] * fc;
    double resg = kGK15WeightsG[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double f1 = f(c - h * kGK15Nodes[j]);
        const double f2 = f(c + h * kGK15Nodes[j]);
        resk += kGK15WeightsK[j] * (f1 + f2);
        if (j % 2 == 1) resg += kGK15WeightsG[j / 2] * (f1 + f2);
    }
    value = resk * h;
    err = std::abs(resk - resg) * h;
}

}  // namespace detail

// Adaptive bisection built on the 7-15 pair.  Accepts a subinterval once its
// error estimate clears a tolerance prorated by length, so spiky integrands
// get their refinement where the mass is.  Pieces whose error estimate sits at
// the rounding-noise floor of the rule are accepted as converged; refining them
// cannot help.  Once the accumulated value exceeds `bail` the remaining pieces
// are summed coarsely and the (under-estimated) total is returned -- callers
// use this when any value beyond `bail` triggers the same downstream action.
template <class F>
QuadResult adaptive_quadrature(const F& f, double a, double b,
                               double rel_tol, double abs_tol,
                               double bail = std::numeric_limits<double>::infinity(),
                               int max_depth = 52) {
    QuadResult total;
    if (!(b > a)) return total;

    struct Piece { double a, b; int depth; };
    Piece stack[1024];
    int top = 0;
    stack[top++] = {a, b, 0};

    // first coarse pass to scale the relative tolerance
    double v0, e0;
    detail::gk15(f, a, b, v0, e0);
    total.evals += 15;
    double scale = std::abs(v0);
    constexpr double noise = 64.0 * std::numeric_limits<double>::epsilon();

    while (top > 0) {
        const Piece p = stack[--top];
        double v, e;
        detail::gk15(f, p.a, p.b, v, e);
        total.evals += 15;
        scale = std::max(scale, std::abs(v));
        const double frac = (p.b - p.a) / (b - a);
        const double tol = std::max(abs_tol * frac, rel_tol * scale * frac);
        if (e <= tol || e <= noise * std::abs(v) || p.depth >= max_depth ||
            top >= 1022 || total.value > bail) {
            total.value += v;
            total.error += e;
        } else {
            const double m = 0.5 * (p.a + p.b);
            stack[top++] = {p.a, m, p.depth + 1};
            stack[top++] = {m, p.b, p.depth + 1};
        }
    }
    return total;
}

// Deterministic 64-bit mix used to derive per-task RNG streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace flowlab
