#pragma once

#include <Eigen/Core>

#include "flowlab/errors.hpp"
#include "flowlab/profiles.hpp"
#include "flowlab/quadrature.hpp"

namespace flowlab {

// Below this distance two phase points are treated as the same exact point
// (fixed-point and exceptional-fiber detection).
inline constexpr double kExactHitTol = 1e-13;

// ---------- torus helpers ----------

// Fold every coordinate into [0,1).
Eigen::VectorXd wrap_torus(Eigen::VectorXd x);

// Flat distance on the unit d-torus.
double torus_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                      const Eigen::Ref<const Eigen::VectorXd>& b);

// ---------- base dynamics ----------

// Minimal translation on the d-torus.
struct BaseMap {
    Eigen::VectorXd rotation;  // entries in [0,1)

    int dimension() const { return static_cast<int>(rotation.size()); }
    void validate() const;

    // f^n(x) = x + n*rotation (mod 1), computed coordinate-wise in extended
    // precision so large n stays accurate.
    Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& x, long long n) const;
    // Single forward/backward application, allocation-free.
    void step_inplace(Eigen::VectorXd& x) const;
    void step_back_inplace(Eigen::VectorXd& x) const;
};

Eigen::VectorXd base_apply(const BaseMap& map, const Eigen::Ref<const Eigen::VectorXd>& x,
                           long long n);

// Fiber cocycle over the circle rotation theta -> theta + chi:
// the matrix at angle theta is rotation-by-2*pi*theta times diag(lambda, 1/lambda),
// a determinant-one map for every angle.
struct HermanCocycle {
    double lambda = 2.0;
    double chi = 0.0;            // in [0,1)
    double theta0 = 0.0;         // starting angle
    Eigen::Vector2d direction0 = Eigen::Vector2d(1.0, 0.0);

    void validate() const;
    Eigen::Matrix2d matrix(double theta) const;
};

// ---------- suspension phase space ----------

// Point of the suspension: base point plus height s in [0,1); the gluing
// (x,1) ~ (f(x),0) is applied eagerly so s = 1 is never stored.
struct SuspensionPoint {
    Eigen::VectorXd base;
    double height = 0.0;
};

// Everything needed to evaluate the unit-speed suspension flow and its
// time-changed companion with speed profile alpha(dist to p).
class FlowSystem {
public:
    FlowSystem(BaseMap base, TimeProfile profile, Eigen::VectorXd p_base,
               double r_v = 0.25, QuadratureParams quad = {});

    const BaseMap& base() const { return base_; }
    const TimeProfile& profile() const { return profile_; }
    const Eigen::VectorXd& p_base() const { return x0_; }
    const Eigen::VectorXd& p_base_pre() const { return x0_pre_; }  // f^{-1}(x0)
    SuspensionPoint p() const { return {x0_, 0.0}; }
    double r_v() const { return r_v_; }
    double r_tilde() const { return r_tilde_; }
    const QuadratureParams& quad() const { return quad_; }

    double speed_at_distance(double r) const { return profile_.eval(r); }

private:
    BaseMap base_;
    TimeProfile profile_;
    Eigen::VectorXd x0_, x0_pre_;
    double r_v_ = 0.25;
    double r_tilde_ = 0.5;
    QuadratureParams quad_;
};

// Distance from pt to p = (x0, 0), symmetric under the suspension gluing:
// min( sqrt(d(x,x0)^2 + s^2), sqrt(d(x, f^{-1}x0)^2 + (1-s)^2) ).
double dist_to_p(const FlowSystem& sys, const SuspensionPoint& pt);

// Unit-speed suspension flow, forward by ds >= 0.
SuspensionPoint suspension_advance(const FlowSystem& sys, const SuspensionPoint& pt,
                                   double ds);
// Backward motion via the inverse translation.
SuspensionPoint suspension_retreat(const FlowSystem& sys, const SuspensionPoint& pt,
                                   double ds);

// Slow time tau(s) = integral over [0,s] of du / alpha(fast orbit at u).
// Returns +inf once the accumulated value exceeds quad().cap; throws
// PointFixedUnderSlowFlow if the fast orbit segment contains p exactly.
double slow_time(const FlowSystem& sys, const SuspensionPoint& pt, double s);

// Monotone inverse of slow_time: the fast duration s with tau(s) = tau.
// Throws HorizonExceeded when the search would pass quad().fast_cap.
double fast_time(const FlowSystem& sys, const SuspensionPoint& pt, double tau);

// Time-changed flow: advance pt by tau units of slow time (p stays put).
SuspensionPoint slow_advance(const FlowSystem& sys, const SuspensionPoint& pt,
                             double tau);

// Return time of the slow flow from (x,0) to (f(x),0); +inf on the two
// exceptional fibers x = x0 and f(x) = x0.
double return_time_gamma(const FlowSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& x);

// ---------- orbit scanning primitives (shared with the analysis layer) ----------

// One unit-height window of the fast orbit.  Over the window the distance to p
// is min( sqrt(A^2 + t^2), sqrt(B^2 + (1-t)^2) ) with t the height offset:
// it rises from A, peaks at t_star, and falls to B, so ball crossings have
// closed forms.
struct OrbitWindow {
    double A = 0.0;       // distance of the window's start lift to p
    double B = 0.0;       // distance of the end lift (next window's A)
    double t_star = 0.0;  // branch switch (B^2 + 1 - A^2)/2, clipped to [0,1]
};

// Walks consecutive windows of the fast orbit starting at pt.
class WindowWalker {
public:
    WindowWalker(const FlowSystem& sys, const SuspensionPoint& start);

    const OrbitWindow& window() const { return win_; }
    double start_height() const { return lo_; }  // >0 only in the first window
    const Eigen::VectorXd& window_base() const { return base_; }
    const Eigen::VectorXd& next_base() const { return next_; }
    long long index() const { return index_; }   // windows consumed so far
    // Fast time of the window's start lift, relative to the walk's start.
    double wrap_fast_time() const { return static_cast<double>(index_) - lo0_; }

    void advance();

private:
    const FlowSystem* sys_;
    Eigen::VectorXd base_, next_;
    OrbitWindow win_;
    double lo_ = 0.0, lo0_ = 0.0;
    long long index_ = 0;
};

// Integral of dt / alpha(sqrt(c^2 + t^2)) over [a,b] with 0 <= a <= b; the part
// of [a,b] beyond the profile's outer radius contributes exactly b - t_outer.
// Values beyond `bail` may be under-estimated (see adaptive_quadrature).
QuadResult leg_slow_time(const FlowSystem& sys, double c, double a, double b,
                         double bail = std::numeric_limits<double>::infinity());

// Slow time spent on the window sub-interval [lo,hi] (heights within the window).
QuadResult window_slow_time(const FlowSystem& sys, const OrbitWindow& w, double lo,
                            double hi,
                            double bail = std::numeric_limits<double>::infinity());

// Distance to p at height offset t within a window.
double window_distance(const OrbitWindow& w, double t);

// Solve window_slow_time(w, lo, t) == need for t in [lo, 1] (monotone).
double window_time_inverse(const FlowSystem& sys, const OrbitWindow& w, double lo,
                           double need, double tol);

}  // namespace flowlab
