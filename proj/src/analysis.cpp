#include "flowlab/analysis.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace flowlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// largest outer-ball radius for which consecutive ball passes stay disjoint
// (each pass is a symmetric interval of half-width < delta around a wrap)
constexpr double kMaxScanRadius = 0.4;

struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

// slow time spent inside B(p, delta) on the window sub-interval [lo,hi]
QuadResult window_inside_time(const FlowSystem& sys, const OrbitWindow& w, double lo,
                              double hi, double delta) {
    QuadResult out;
    if (!(hi > lo)) return out;
    const double ts = std::clamp(w.t_star, lo, hi);
    if (w.A < delta) {
        const double wa = std::sqrt(delta * delta - w.A * w.A);
        const double a_hi = std::min(ts, wa);
        if (a_hi > lo) {
            const QuadResult q = leg_slow_time(sys, w.A, lo, a_hi);
            out.value += q.value;
            out.error += q.error;
        }
    }
    if (w.B < delta) {
        const double wb = std::sqrt(delta * delta - w.B * w.B);
        const double u_lo = 1.0 - hi;
        const double u_hi = std::min(1.0 - ts, wb);
        if (u_hi > u_lo) {
            const QuadResult q = leg_slow_time(sys, w.B, u_lo, u_hi);
            out.value += q.value;
            out.error += q.error;
        }
    }
    return out;
}

}  // namespace

// ---------- occupation ----------

std::vector<OccupationReport> occupation_sweep(const FlowSystem& sys,
                                               const SuspensionPoint& pt,
                                               std::vector<double> horizons,
                                               double delta) {
    if (horizons.empty()) throw std::invalid_argument("no horizons given");
    for (double h : horizons)
        if (!(h > 0.0)) throw std::invalid_argument("horizons must be positive");
    if (!(delta > 0.0 && delta < sys.r_tilde()))
        throw std::invalid_argument("occupation radius must lie in (0, r_tilde)");
    std::sort(horizons.begin(), horizons.end());

    std::vector<OccupationReport> out;
    out.reserve(horizons.size());
    if (dist_to_p(sys, pt) < kExactHitTol) {
        // the slow orbit of p is p itself: fraction 1 by convention
        for (double h : horizons) out.push_back({delta, h, h, 1.0, false, 0.0, 0.0});
        return out;
    }

    WindowWalker walk(sys, pt);
    KahanSum total, inside;
    double err = 0.0;
    double fast_elapsed = 0.0;
    std::size_t idx = 0;
    const double inv_tol = std::max(sys.quad().abs_tol, 1e-10 * (1.0 + horizons.back()));
    for (;;) {
        const OrbitWindow& w = walk.window();
        const double lo = walk.start_height();
        // handle budget crossings one at a time; the window value is computed
        // with a bail just past the next unmet budget, so it is exact whenever
        // no crossing happens
        QuadResult q;
        for (;;) {
            q = window_slow_time(sys, w, lo, 1.0, horizons[idx] - total.value() + 1.0);
            if (total.value() + q.value < horizons[idx]) break;
            const double need = horizons[idx] - total.value();
            const double t_h = window_time_inverse(sys, w, lo, need, inv_tol);
            const QuadResult qi = window_inside_time(sys, w, lo, t_h, delta);
            OccupationReport rep;
            rep.delta = delta;
            rep.horizon = horizons[idx];
            rep.inside_time = inside.value() + qi.value;
            rep.fraction = rep.inside_time / rep.horizon;
            rep.fast_span = fast_elapsed + (t_h - lo);
            rep.quad_error = err + qi.error;
            out.push_back(rep);
            ++idx;
            if (idx == horizons.size()) return out;
        }
        const QuadResult qi = window_inside_time(sys, w, lo, 1.0, delta);
        total.add(q.value);
        inside.add(qi.value);
        err += q.error + qi.error;
        fast_elapsed += 1.0 - lo;
        if (fast_elapsed > sys.quad().fast_cap) break;
        walk.advance();
    }
    // fast-time cap reached: report what was accumulated, flagged
    for (; idx < horizons.size(); ++idx) {
        OccupationReport rep;
        rep.delta = delta;
        rep.horizon = horizons[idx];
        rep.inside_time = inside.value();
        rep.fraction = rep.inside_time / rep.horizon;
        rep.truncated = true;
        rep.fast_span = fast_elapsed;
        rep.quad_error = err;
        out.push_back(rep);
    }
    return out;
}

OccupationReport occupation_fraction(const FlowSystem& sys, const SuspensionPoint& pt,
                                     double tau_total, double delta) {
    return occupation_sweep(sys, pt, {tau_total}, delta).front();
}

// ---------- hitting ----------

HittingResult hitting_sequence(const FlowSystem& sys, const SuspensionPoint& pt,
                               double delta1, double delta2, int K) {
    if (!(delta1 > 0.0 && delta1 < delta2))
        throw std::invalid_argument("need 0 < delta1 < delta2");
    if (!(delta2 < sys.r_tilde()))
        throw std::invalid_argument("delta2 must be smaller than r_tilde");
    if (delta2 > kMaxScanRadius)
        throw std::invalid_argument("delta2 must be <= 0.4 so consecutive passes stay disjoint");
    if (K < 1) throw std::invalid_argument("need K >= 1 blocks");
    if (!(dist_to_p(sys, pt) > delta2))
        throw std::invalid_argument("start point must lie outside the closed outer ball");

    HittingResult res;
    WindowWalker walk(sys, pt);
    KahanSum cum;
    double fast_elapsed = 0.0;
    for (;;) {
        const OrbitWindow& w = walk.window();
        const double lo = walk.start_height();
        const double qwin = window_slow_time(sys, w, lo, 1.0).value;
        if (w.B < delta1) {
            // a pass through the inner ball, centered at this window's end wrap
            const double wrap_fast = walk.wrap_fast_time() + 1.0;
            const double cum_wrap = cum.value() + qwin;
            const double w2 = std::sqrt(delta2 * delta2 - w.B * w.B);
            const double w1 = std::sqrt(delta1 * delta1 - w.B * w.B);
            const double i2 = leg_slow_time(sys, w.B, 0.0, w2).value;
            const double i1 = leg_slow_time(sys, w.B, 0.0, w1).value;
            const auto at = [&](const Eigen::VectorXd& b, double h) {
                return SuspensionPoint{b, h};
            };
            res.events.push_back({HitKind::EnterOuter, wrap_fast - w2, cum_wrap - i2,
                                  at(walk.window_base(), 1.0 - w2)});
            res.events.push_back({HitKind::EnterInner, wrap_fast - w1, cum_wrap - i1,
                                  at(walk.window_base(), 1.0 - w1)});
            res.events.push_back({HitKind::ExitInner, wrap_fast + w1, cum_wrap + i1,
                                  at(walk.next_base(), w1)});
            res.events.push_back({HitKind::ExitOuter, wrap_fast + w2, cum_wrap + i2,
                                  at(walk.next_base(), w2)});
            ++res.blocks;
            if (res.blocks == K) return res;
        }
        cum.add(qwin);
        fast_elapsed += 1.0 - lo;
        if (fast_elapsed > sys.quad().fast_cap) {
            res.truncated = true;
            return res;
        }
        walk.advance();
    }
}

// ---------- first hit ----------

FirstHitReport first_hit_slow_time(const FlowSystem& sys, double delta1, double delta2,
                                   int samples, std::uint64_t seed) {
    if (!(delta1 > 0.0 && delta1 < delta2))
        throw std::invalid_argument("need 0 < delta1 < delta2");
    if (delta2 > kMaxScanRadius)
        throw std::invalid_argument("delta2 must be <= 0.4");
    if (samples < 1) throw std::invalid_argument("need at least one sample");

    const int d = sys.base().dimension();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    FirstHitReport rep;
    rep.samples = samples;
    rep.min_slow_time = kInf;
    rep.speed_lower_bound = (delta2 - delta1) / sys.profile().eval(delta2);

    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXd u(d + 1);
        double nrm = 0.0;
        do {
            for (int i = 0; i <= d; ++i) u[i] = gauss(rng);
            nrm = u.norm();
        } while (nrm == 0.0);
        u /= nrm;

        SuspensionPoint start;
        const double uh = u[d];
        if (uh >= 0.0) {
            start.base = wrap_torus(sys.p_base() + delta1 * u.head(d));
            start.height = delta1 * uh;
        } else {
            start.base = wrap_torus(sys.p_base_pre() + delta1 * u.head(d));
            start.height = 1.0 + delta1 * uh;
        }

        // walk monotone branches until the distance first rises to delta2
        WindowWalker walk(sys, start);
        double lo = start.height;
        double slow = 0.0;
        for (;;) {
            const OrbitWindow& w = walk.window();
            if (lo < w.t_star) {
                // rising branch; the peak always tops delta2 <= 0.4
                const double tc = std::sqrt(delta2 * delta2 - w.A * w.A);
                slow += leg_slow_time(sys, w.A, lo, tc).value;
                break;
            }
            slow += leg_slow_time(sys, w.B, 0.0, 1.0 - lo).value;  // fall to the wrap
            walk.advance();
            lo = 0.0;
        }
        if (slow < rep.min_slow_time) {
            rep.min_slow_time = slow;
            rep.witness = start;
        }
    }
    return rep;
}

// ---------- return-time divergence ----------

GammaSeries birkhoff_gamma_mean(const FlowSystem& sys,
                                const Eigen::Ref<const Eigen::VectorXd>& x,
                                int decades) {
    if (decades < 1 || decades > 9)
        throw std::invalid_argument("decades must lie in 1..9");
    GammaSeries out;
    long long cp = 1;
    for (int k = 0; k < decades; ++k) {
        cp *= 10;
        out.checkpoints.push_back(cp);
    }
    const long long n_max = cp;

    WindowWalker walk(sys, SuspensionPoint{wrap_torus(x), 0.0});
    KahanSum sum;
    long long finite = 0;
    std::size_t next = 0;
    for (long long k = 0; k < n_max; ++k) {
        const OrbitWindow& w = walk.window();
        if (w.A < kExactHitTol || w.B < kExactHitTol) {
            ++out.infinities;  // exceptional fiber: gamma is +inf, excluded
        } else {
            const double g = window_slow_time(sys, w, 0.0, 1.0).value;
            if (std::isinf(g)) {
                ++out.infinities;
            } else {
                sum.add(g);
                ++finite;
            }
        }
        if (k + 1 == out.checkpoints[next]) {
            out.partial_means.push_back(finite > 0 ? sum.value() / finite : 0.0);
            ++next;
        }
        walk.advance();
    }

    // least-squares slope of log10(mean) against log10(n)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < out.partial_means.size(); ++i) {
        if (!(out.partial_means[i] > 0.0)) continue;
        const double lx = std::log10(static_cast<double>(out.checkpoints[i]));
        const double ly = std::log10(out.partial_means[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++m;
    }
    out.loglog_slope = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
    return out;
}

// ---------- base-map statistics ----------

double ball_frequency_floor(const BaseMap& map, const Eigen::Ref<const Eigen::VectorXd>& x,
                            long long n, double eps, int centers, std::uint64_t seed) {
    map.validate();
    if (n < 1) throw std::invalid_argument("need n >= 1 iterates");
    if (centers < 1) throw std::invalid_argument("need at least one center");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");

    const int d = map.dimension();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::MatrixXd cs(d, centers);
    for (int c = 0; c < centers; ++c)
        for (int i = 0; i < d; ++i) cs(i, c) = unif(rng);

    std::vector<long long> counts(centers, 0);
    Eigen::VectorXd y = wrap_torus(x);
    for (long long k = 0; k < n; ++k) {
        for (int c = 0; c < centers; ++c)
            if (torus_distance(y, cs.col(c)) < eps) ++counts[c];
        map.step_inplace(y);
    }
    const long long mn = *std::min_element(counts.begin(), counts.end());
    return static_cast<double>(mn) / static_cast<double>(n);
}

// ---------- cocycle diagnostics ----------

LyapunovEstimate lyapunov_top(const HermanCocycle& cocycle, long long n) {
    cocycle.validate();
    if (n < 1) throw std::invalid_argument("need n >= 1 iterates");
    double theta = cocycle.theta0;
    Eigen::Vector2d v = cocycle.direction0.normalized();
    KahanSum sum;
    double first_half = 0.0;
    const long long half = n / 2;
    for (long long k = 0; k < n; ++k) {
        const Eigen::Vector2d w = cocycle.matrix(theta) * v;
        const double nv = w.norm();
        sum.add(std::log(nv));
        v = w / nv;
        theta += cocycle.chi;
        if (theta >= 1.0) theta -= 1.0;
        if (k + 1 == half) first_half = sum.value();
    }
    LyapunovEstimate est;
    est.n = n;
    est.exponent = sum.value() / static_cast<double>(n);
    if (half > 0 && n > half) {
        const double lead = first_half / static_cast<double>(half);
        const double tail = (sum.value() - first_half) / static_cast<double>(n - half);
        est.tail_gap = std::fabs(lead - tail);
    }
    return est;
}

double cocycle_residual(const FlowSystem& sys, const SuspensionPoint& pt, double s,
                        double t) {
    const double whole = slow_time(sys, pt, s + t);
    const double head = slow_time(sys, pt, s);
    const double tail = slow_time(sys, suspension_advance(sys, pt, s), t);
    return std::fabs(whole - head - tail);
}

// ---------- family witnesses ----------

int linear_rank(const std::vector<TimeProfile>& profiles,
                const std::vector<double>& sample_distances) {
    const std::size_t L = profiles.size();
    if (L == 0) throw std::invalid_argument("no profiles given");
    if (sample_distances.size() < L)
        throw std::invalid_argument("need at least as many sample points as profiles");
    double outer = 0.0;
    for (const auto& p : profiles) outer = std::max(outer, p.outer_radius());
    bool any_inside = false;
    for (double r : sample_distances)
        if (r < outer) { any_inside = true; break; }
    if (!any_inside)
        throw DegenerateSamples("all sample distances are past every profile's support");

    Eigen::MatrixXd M(L, sample_distances.size());
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < sample_distances.size(); ++j)
            M(i, j) = profiles[i].eval(sample_distances[j]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || !(sv(0) > 0.0)) return 0;
    const double thresh = 1e-10 * sv(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++rank;
    return rank;
}

int linear_rank(const FlowSystem& sys, const std::vector<TimeProfile>& profiles,
                const std::vector<SuspensionPoint>& sample_points) {
    std::vector<double> dists;
    dists.reserve(sample_points.size());
    for (const auto& pt : sample_points) dists.push_back(dist_to_p(sys, pt));
    return linear_rank(profiles, dists);
}

double linear_growth_constant(const FlowSystem& sys, double delta1) {
    if (!(delta1 > 0.0 && delta1 <= sys.r_v()))
        throw std::invalid_argument("delta1 must lie in (0, r_v]");
    const TimeProfile& prof = sys.profile();
    const double at_edge = prof.eval(delta1);
    // radial monotonicity puts the minimum at the inner edge; certify on a grid
    double grid_min = at_edge;
    const double hi = std::max(1.0, prof.outer_radius()) + 0.5;
    for (double r = delta1; r <= hi; r += 1e-3)
        grid_min = std::min(grid_min, prof.eval(r));
    if (grid_min < at_edge * (1.0 - 1e-9) - 1e-15)
        throw std::invalid_argument("profile is not radially monotone beyond delta1");
    if (!(at_edge > 0.0))
        throw std::invalid_argument("profile vanishes at delta1; no finite growth constant");
    return 1.0 / at_edge;
}

double suspension_ball_volume(int base_dimension, double r) {
    const double m = base_dimension + 1;  // flow-space dimension
    return std::pow(M_PI, m / 2.0) / std::tgamma(m / 2.0 + 1.0) * std::pow(r, m);
}

}  // namespace flowlab
