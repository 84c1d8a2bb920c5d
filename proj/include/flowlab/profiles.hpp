#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace flowlab {

namespace detail {
// exponential used by the profile formulas; specialize to instantiate the
// evaluation cores with wider scalars (the smoothness tests do)
template <class Real>
Real profile_exp(Real x) {
    using std::exp;
    return exp(x);
}
}  // namespace detail

// C-infinity step: 0 for t<=0, 1 for t>=1, strictly increasing in between,
// flat (all derivatives vanish) at both ends.  Templated on the scalar so
// high-precision smoothness checks can instantiate it with wider types.
template <class Real>
Real smooth_step(Real t) {
    if (t <= Real(0)) return Real(0);
    if (t >= Real(1)) return Real(1);
    const Real g0 = detail::profile_exp(Real(-1) / t);
    const Real g1 = detail::profile_exp(Real(-1) / (Real(1) - t));
    return g0 / (g0 + g1);
}

enum class ProfileKind { Unit, PowerBump, ThetaFamily, LemmaOmega, ConstantTest };

// Decreasing bound sequence 1 = beta_{-1} > beta_0 > beta_1 > ... used to pin
// how small the omega profile must be on the shrinking balls of radius 1/(i+1).
// Either given directly, or composed from per-index rates as
// beta_{i-1} = (ell_{i0+i} / (i0+i)) * delta(i0+i).
struct BoundsSchedule {
    std::vector<double> betas;   // betas[0] == 1 (this is beta_{-1}), size depth+1
    int base_index = 0;          // i0 when composed from rates, 0 otherwise
    std::vector<double> ells;    // ell_{i0+i}, i = 1..depth (empty if direct)
    std::vector<double> deltas;  // delta(i0+i), i = 1..depth (empty if direct)

    static BoundsSchedule from_betas(std::vector<double> betas);
    static BoundsSchedule from_rates(int i0, std::vector<double> ells,
                                     std::vector<double> deltas);

    int depth() const { return static_cast<int>(betas.size()) - 1; }
    void validate() const;  // throws std::invalid_argument on violation
};

// Radial speed profile alpha as a function of distance to the degenerate point.
// All kinds map [0, inf) into [0, 1], are monotone nondecreasing, equal 1 from
// outer_radius() on, and (except Unit and the test-only constant) vanish
// exactly at distance 0.
class TimeProfile {
public:
    static TimeProfile unit();
    static TimeProfile power_bump(int ell);            // core tau^(2 ell) inside (0,1/2)
    static TimeProfile theta_family(double theta);     // support (0,theta), theta in (0,1)
    static TimeProfile lemma_omega(const BoundsSchedule& schedule);
    // Constant speed in (0,1]; test scaffolding only, never built from configs.
    static TimeProfile constant_test(double value);

    double operator()(double r) const { return eval(r); }
    double eval(double r) const;

    ProfileKind kind() const { return kind_; }
    // Distance from which the profile is identically 1 (0 for Unit/ConstantTest).
    double outer_radius() const;
    bool vanishes_at_center() const;

    int exponent() const { return ell_; }
    double theta() const { return theta_; }
    double constant() const { return const_; }
    const BoundsSchedule& schedule() const { return schedule_; }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& knot_values() const { return knot_values_; }

private:
    TimeProfile() = default;

    ProfileKind kind_ = ProfileKind::Unit;
    int ell_ = 0;
    double theta_ = 0.0;
    double const_ = 1.0;
    BoundsSchedule schedule_;
    std::vector<double> knots_;        // descending radii 1/2, 1/3, ..., 1/(N+1)
    std::vector<double> knot_values_;  // pinned values betas[j]/2 at knots_[j-1]
};

// Spec-level free functions over the profile type.
double eval_profile(const TimeProfile& profile, double r);
TimeProfile construct_omega(const BoundsSchedule& schedule);
std::vector<TimeProfile> family_path(const std::vector<double>& theta_grid);

// Canonical schedule for a d-torus base: delta(m) is the exact flat volume of
// the radius-1/m ball (the unique ergodic measure of that ball under a minimal
// translation) and ell_m = ell_scale/m.  Checks that the approach tube
// B(1/(i0+i)) x [-ell, 0] fits inside the ball of radius 1/(i+1), which is what
// makes the composed bounds effective for return-time estimates.
BoundsSchedule torus_ball_schedule(int dimension, int base_index, int depth,
                                   double ell_scale = 0.1);

// Scalar-templated evaluation cores (shared by TimeProfile::eval and by the
// wide-precision smoothness tests).
template <class Real>
Real eval_power_bump(int ell, Real r) {
    if (r >= Real(1)) return Real(1);
    Real core = Real(1);
    for (int k = 0; k < 2 * ell; ++k) core *= r;
    if (r < Real(0.5)) return core;
    const Real s = smooth_step((r - Real(0.5)) / Real(0.5));
    return core + s * (Real(1) - core);
}

template <class Real>
Real eval_theta_family(double theta, Real r) {
    const Real th(theta);
    if (r >= th) return Real(1);
    const Real scale = Real(1) - detail::profile_exp(-th);  // < 1, increasing in theta
    const Real core = scale * r * r;
    if (r < th / Real(2)) return core;
    const Real s = smooth_step((r - th / Real(2)) / (th / Real(2)));
    return core + s * (Real(1) - core);
}

template <class Real>
Real eval_lemma_omega(const std::vector<double>& knots,
                      const std::vector<double>& vals, Real r) {
    const std::size_t n = knots.size();
    if (r >= Real(1)) return Real(1);
    if (r < Real(knots[n - 1])) {
        // flat tail pinned to the deepest knot value; zero exactly at 0
        return Real(vals[n - 1]) * smooth_step(r / Real(knots[n - 1]));
    }
    if (r >= Real(knots[0])) {
        const Real s = smooth_step((r - Real(knots[0])) / (Real(1) - Real(knots[0])));
        return Real(vals[0]) + s * (Real(1) - Real(vals[0]));
    }
    // knots are descending; locate segment [knots[j+1], knots[j])
    std::size_t lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (r >= Real(knots[mid])) hi = mid; else lo = mid;
    }
    // now knots[hi] <= r < knots[lo], hi == lo+1
    const Real a(knots[hi]), b(knots[lo]);
    const Real s = smooth_step((r - a) / (b - a));
    return Real(vals[hi]) + s * (Real(vals[lo]) - Real(vals[hi]));
}

}  // namespace flowlab
