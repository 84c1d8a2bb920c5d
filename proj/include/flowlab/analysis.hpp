#pragma once

#include <cstdint>
#include <vector>

#include "flowlab/flow.hpp"

namespace flowlab {

// ---------- occupation statistics ----------

struct OccupationReport {
    double delta = 0.0;
    double horizon = 0.0;      // requested slow-time budget
    double inside_time = 0.0;  // slow time spent inside B(p, delta)
    double fraction = 0.0;     // inside_time / horizon
    bool truncated = false;    // fast-time cap hit before the budget was spent
    double fast_span = 0.0;    // fast time consumed
    double quad_error = 0.0;
};

// Fraction of slow time the time-changed orbit of pt spends inside B(p, delta),
// measured over a slow-time budget.  pt == p returns fraction 1 by convention.
OccupationReport occupation_fraction(const FlowSystem& sys, const SuspensionPoint& pt,
                                     double tau_total, double delta);

// Same walk evaluated at several budgets at once (one pass over the orbit).
std::vector<OccupationReport> occupation_sweep(const FlowSystem& sys,
                                               const SuspensionPoint& pt,
                                               std::vector<double> horizons,
                                               double delta);

// ---------- hitting structure ----------

enum class HitKind { EnterOuter, EnterInner, ExitInner, ExitOuter };

struct HitEvent {
    HitKind kind;
    double fast_time = 0.0;
    double slow_time = 0.0;
    SuspensionPoint point;
};

struct HittingResult {
    std::vector<HitEvent> events;  // blocks of four, in fast-time order
    int blocks = 0;
    bool truncated = false;  // fast-time cap reached before K blocks were found
};

// First K passes through the nested balls B(p,delta1) c B(p,delta2), each pass
// emitting the four crossings (enter outer, enter inner, exit inner, exit outer).
// Passes that enter the outer ball but miss the inner one are not counted.
HittingResult hitting_sequence(const FlowSystem& sys, const SuspensionPoint& pt,
                               double delta1, double delta2, int K);

struct FirstHitReport {
    double min_slow_time = 0.0;
    SuspensionPoint witness;       // start point achieving the minimum
    double speed_lower_bound = 0.0;  // (delta2-delta1)/max speed inside B(p,delta2)
    int samples = 0;
};

// Minimum, over seeded starts on the delta1-sphere around p, of the slow time
// of the first crossing of the delta2-sphere.
FirstHitReport first_hit_slow_time(const FlowSystem& sys, double delta1, double delta2,
                                   int samples, std::uint64_t seed);

// ---------- return-time divergence ----------

struct GammaSeries {
    std::vector<long long> checkpoints;  // 10^1 .. 10^decades
    std::vector<double> partial_means;   // Birkhoff means over finite terms
    long long infinities = 0;            // exact-hit terms excluded from the means
    double loglog_slope = 0.0;           // least-squares slope of log10(mean) vs log10(n)
};

// Partial Birkhoff means of the return time gamma along the base orbit of x,
// reported at decade checkpoints.  Slope > 0 is the divergence diagnostic.
GammaSeries birkhoff_gamma_mean(const FlowSystem& sys,
                                const Eigen::Ref<const Eigen::VectorXd>& x, int decades);

// ---------- base-map statistics ----------

// Minimum empirical visit frequency of eps-balls over seeded centers: an
// estimate of the uniform frequency floor a minimal translation guarantees.
double ball_frequency_floor(const BaseMap& map, const Eigen::Ref<const Eigen::VectorXd>& x,
                            long long n, double eps, int centers, std::uint64_t seed);

// ---------- cocycle diagnostics ----------

struct LyapunovEstimate {
    double exponent = 0.0;
    double tail_gap = 0.0;  // |mean of first half - mean of second half|
    long long n = 0;
};

// Top Lyapunov exponent of the fiber cocycle by projective iteration with
// per-step renormalization.
LyapunovEstimate lyapunov_top(const HermanCocycle& cocycle, long long n);

// Additivity defect |tau(pt,s+t) - tau(pt,s) - tau(advance(pt,s),t)| of slow time.
double cocycle_residual(const FlowSystem& sys, const SuspensionPoint& pt, double s,
                        double t);

// ---------- family witnesses ----------

// Numerical rank of the (profiles x sample distances) value matrix; rank L
// certifies linear independence of the time-changed fields the profiles induce.
int linear_rank(const std::vector<TimeProfile>& profiles,
                const std::vector<double>& sample_distances);
int linear_rank(const FlowSystem& sys, const std::vector<TimeProfile>& profiles,
                const std::vector<SuspensionPoint>& sample_points);

// C with slow_time <= C * fast_time on orbit segments staying at distance
// >= delta1 from p; equals 1 / min speed there.
double linear_growth_constant(const FlowSystem& sys, double delta1);

// Exact flat volume of the ball B(p, r) inside the suspension of the d-torus
// (valid for r <= 1/2; the suspension has unit total volume).
double suspension_ball_volume(int base_dimension, double r);

}  // namespace flowlab
