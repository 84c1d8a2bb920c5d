#include "flowlab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace flowlab {

namespace {
constexpr double kPointTol = kExactHitTol;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

// ---------- torus helpers ----------

Eigen::VectorXd wrap_torus(Eigen::VectorXd x) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        x[i] -= std::floor(x[i]);
        if (x[i] >= 1.0) x[i] = 0.0;
    }
    return x;
}

double torus_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                      const Eigen::Ref<const Eigen::VectorXd>& b) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        double t = std::fabs(a[i] - b[i]);
        t -= std::floor(t);
        const double m = std::min(t, 1.0 - t);
        acc += m * m;
    }
    return std::sqrt(acc);
}

// ---------- base dynamics ----------

void BaseMap::validate() const {
    if (rotation.size() < 1)
        throw std::invalid_argument("base map needs at least one coordinate");
    for (Eigen::Index i = 0; i < rotation.size(); ++i)
        if (!(rotation[i] >= 0.0 && rotation[i] < 1.0))
            throw std::invalid_argument("rotation entries must lie in [0,1)");
}

Eigen::VectorXd BaseMap::apply(const Eigen::Ref<const Eigen::VectorXd>& x,
                               long long n) const {
    Eigen::VectorXd out(rotation.size());
    for (Eigen::Index i = 0; i < rotation.size(); ++i) {
        long double v = static_cast<long double>(x[i]) +
                        static_cast<long double>(n) * static_cast<long double>(rotation[i]);
        v = fmodl(v, 1.0L);
        if (v < 0.0L) v += 1.0L;
        double d = static_cast<double>(v);
        if (d >= 1.0) d -= 1.0;
        out[i] = d;
    }
    return out;
}

void BaseMap::step_inplace(Eigen::VectorXd& x) const {
    for (Eigen::Index i = 0; i < rotation.size(); ++i) {
        x[i] += rotation[i];
        if (x[i] >= 1.0) x[i] -= 1.0;
    }
}

void BaseMap::step_back_inplace(Eigen::VectorXd& x) const {
    for (Eigen::Index i = 0; i < rotation.size(); ++i) {
        x[i] -= rotation[i];
        if (x[i] < 0.0) x[i] += 1.0;
    }
}

Eigen::VectorXd base_apply(const BaseMap& map, const Eigen::Ref<const Eigen::VectorXd>& x,
                           long long n) {
    return map.apply(x, n);
}

void HermanCocycle::validate() const {
    if (!(lambda >= 1.0)) throw std::invalid_argument("cocycle lambda must be >= 1");
    if (!(chi >= 0.0 && chi < 1.0)) throw std::invalid_argument("cocycle chi must lie in [0,1)");
    if (!(direction0.norm() > 0.0)) throw std::invalid_argument("cocycle start direction is zero");
}

Eigen::Matrix2d HermanCocycle::matrix(double theta) const {
    const double c = std::cos(2.0 * M_PI * theta);
    const double s = std::sin(2.0 * M_PI * theta);
    Eigen::Matrix2d m;
    m << c * lambda, -s / lambda, s * lambda, c / lambda;
    return m;
}

// ---------- flow system ----------

FlowSystem::FlowSystem(BaseMap base, TimeProfile profile, Eigen::VectorXd p_base,
                       double r_v, QuadratureParams quad)
    : base_(std::move(base)), profile_(std::move(profile)), quad_(quad) {
    base_.validate();
    if (p_base.size() != base_.rotation.size())
        throw std::invalid_argument("p base coordinates must match the base dimension");
    if (!(r_v > 0.0)) throw std::invalid_argument("r_v must be positive");
    if (!(quad_.rel_tol > 0.0 && quad_.abs_tol > 0.0 && quad_.cap > 0.0 && quad_.fast_cap > 0.0))
        throw std::invalid_argument("quadrature parameters must be positive");
    x0_ = wrap_torus(std::move(p_base));
    x0_pre_ = x0_;
    base_.step_back_inplace(x0_pre_);
    // alpha must be identically 1 outside B(p, r_v); widen r_v to the profile's
    // own support radius when the configured value is smaller
    r_v_ = std::max(r_v, profile_.outer_radius() > 0.0 ? profile_.outer_radius() : r_v);
    r_tilde_ = 2.0 * r_v_;
}

double dist_to_p(const FlowSystem& sys, const SuspensionPoint& pt) {
    const double d0 = torus_distance(pt.base, sys.p_base());
    const double d1 = torus_distance(pt.base, sys.p_base_pre());
    return std::min(std::hypot(d0, pt.height), std::hypot(d1, 1.0 - pt.height));
}

SuspensionPoint suspension_advance(const FlowSystem& sys, const SuspensionPoint& pt,
                                   double ds) {
    if (ds < 0.0) throw std::invalid_argument("suspension_advance needs ds >= 0");
    const double h = pt.height + ds;
    const double k = std::floor(h);
    SuspensionPoint out;
    out.height = h - k;
    if (out.height >= 1.0) out.height -= 1.0;  // guard the fp edge h - k == 1
    out.base = k == 0.0 ? pt.base : sys.base().apply(pt.base, static_cast<long long>(k));
    return out;
}

SuspensionPoint suspension_retreat(const FlowSystem& sys, const SuspensionPoint& pt,
                                   double ds) {
    if (ds < 0.0) throw std::invalid_argument("suspension_retreat needs ds >= 0");
    const double h = pt.height - ds;
    const double k = std::floor(h);
    SuspensionPoint out;
    out.height = h - k;
    if (out.height >= 1.0) out.height -= 1.0;
    out.base = k == 0.0 ? pt.base : sys.base().apply(pt.base, static_cast<long long>(k));
    return out;
}

// ---------- window walking ----------

WindowWalker::WindowWalker(const FlowSystem& sys, const SuspensionPoint& start)
    : sys_(&sys) {
    base_ = wrap_torus(start.base);
    lo_ = lo0_ = start.height;
    next_ = base_;
    sys_->base().step_inplace(next_);
    win_.A = torus_distance(base_, sys_->p_base());
    win_.B = torus_distance(next_, sys_->p_base());
    win_.t_star = std::clamp((win_.B * win_.B + 1.0 - win_.A * win_.A) / 2.0, 0.0, 1.0);
}

void WindowWalker::advance() {
    base_.swap(next_);
    next_ = base_;
    sys_->base().step_inplace(next_);
    win_.A = win_.B;
    win_.B = torus_distance(next_, sys_->p_base());
    win_.t_star = std::clamp((win_.B * win_.B + 1.0 - win_.A * win_.A) / 2.0, 0.0, 1.0);
    lo_ = 0.0;
    ++index_;
}

QuadResult leg_slow_time(const FlowSystem& sys, double c, double a, double b,
                         double bail) {
    QuadResult out;
    if (!(b > a)) return out;
    const TimeProfile& prof = sys.profile();
    if (prof.kind() == ProfileKind::Unit) {
        out.value = b - a;
        return out;
    }
    if (prof.kind() == ProfileKind::ConstantTest) {
        out.value = (b - a) / prof.constant();
        return out;
    }
    const double R = prof.outer_radius();
    if (c >= R) {
        out.value = b - a;
        return out;
    }
    const double t_outer = std::sqrt(R * R - c * c);
    if (a >= t_outer) {
        out.value = b - a;
        return out;
    }
    const double b_in = std::min(b, t_outer);
    // the flat omega tail can underflow to 0 for extreme proximity; clamping the
    // speed at DBL_MIN keeps the integrand finite and lets the cap raise the
    // divergence flag instead of producing NaNs
    const auto f = [&prof, c](double t) {
        const double a_val = prof.eval(std::sqrt(c * c + t * t));
        return 1.0 / std::max(a_val, std::numeric_limits<double>::min());
    };
    out = adaptive_quadrature(f, a, b_in, sys.quad().rel_tol, sys.quad().abs_tol, bail);
    if (b > t_outer) out.value += b - t_outer;
    // the integrand is >= 1 (alpha <= 1), so the leg can never be shorter than
    // its fast duration; repair summation rounding at the ulp level
    out.value = std::max(out.value, b - a);
    return out;
}

QuadResult window_slow_time(const FlowSystem& sys, const OrbitWindow& w, double lo,
                            double hi, double bail) {
    QuadResult out;
    if (!(hi > lo)) return out;
    const double ts = std::clamp(w.t_star, lo, hi);
    const QuadResult qa = leg_slow_time(sys, w.A, lo, ts, bail);
    const QuadResult qb = leg_slow_time(sys, w.B, 1.0 - hi, 1.0 - ts,
                                        bail - std::min(bail, qa.value));
    out.value = qa.value + qb.value;
    out.error = qa.error + qb.error;
    out.evals = qa.evals + qb.evals;
    return out;
}

// ---------- slow/fast time ----------

double slow_time(const FlowSystem& sys, const SuspensionPoint& pt, double s) {
    if (s < 0.0) throw std::invalid_argument("slow_time needs s >= 0");
    if (s == 0.0) return 0.0;
    if (sys.profile().kind() == ProfileKind::Unit) return s;
    if (dist_to_p(sys, pt) < kPointTol)
        throw PointFixedUnderSlowFlow("fast orbit segment starts at p");

    WindowWalker walk(sys, pt);
    const double H = pt.height + s;  // absolute end height
    double total = 0.0;
    for (long long k = 0;; ++k) {
        const double lo = (k == 0) ? pt.height : 0.0;
        const double hi = std::min(1.0, H - static_cast<double>(k));
        if (hi > lo) {
            total += window_slow_time(sys, walk.window(), lo, hi,
                                      sys.quad().cap - total + 1.0).value;
            if (total > sys.quad().cap) return kInf;
        }
        if (H - static_cast<double>(k) <= 1.0) break;
        walk.advance();
        if (walk.window().A < kPointTol)
            throw PointFixedUnderSlowFlow("fast orbit segment passes through p");
    }
    return std::max(total, s);  // alpha <= 1 makes tau >= s exact
}

double window_distance(const OrbitWindow& w, double t) {
    if (t <= w.t_star) return std::sqrt(w.A * w.A + t * t);
    const double u = 1.0 - t;
    return std::sqrt(w.B * w.B + u * u);
}

double window_time_inverse(const FlowSystem& sys, const OrbitWindow& w, double lo,
                           double need, double tol) {
    const double bail = need + 2.0 * tol + 1.0;
    double tl = lo, th = 1.0;
    double t = lo + std::min(1.0 - lo, std::max(1e-3, need));  // crude start
    for (int it = 0; it < 200; ++it) {
        const double Fv = window_slow_time(sys, w, lo, t, bail).value;
        if (std::fabs(Fv - need) <= tol) return t;
        if (Fv < need) tl = t; else th = t;
        const double g = 1.0 / sys.profile().eval(window_distance(w, t));  // dF/dt
        double tn = t + (need - Fv) / g;
        if (!(tn > tl && tn < th)) tn = 0.5 * (tl + th);
        if (th - tl < 1e-15) return 0.5 * (tl + th);
        t = tn;
    }
    return t;
}

double fast_time(const FlowSystem& sys, const SuspensionPoint& pt, double tau) {
    if (tau < 0.0) throw std::invalid_argument("fast_time needs tau >= 0");
    if (tau == 0.0) return 0.0;
    if (sys.profile().kind() == ProfileKind::Unit) return tau;
    if (sys.profile().kind() == ProfileKind::ConstantTest)
        return tau * sys.profile().constant();
    if (dist_to_p(sys, pt) < kPointTol)
        throw PointFixedUnderSlowFlow("slow flow fixes p; fast_time undefined there");

    const double tol = std::max(sys.quad().abs_tol, 1e-10 * (1.0 + tau));
    WindowWalker walk(sys, pt);
    double total = 0.0;
    double fast_elapsed = 0.0;
    double lo = pt.height;
    for (;;) {
        const QuadResult q =
            window_slow_time(sys, walk.window(), lo, 1.0, tau - total + 1.0);
        if (total + q.value < tau) {
            total += q.value;
            fast_elapsed += 1.0 - lo;
            if (fast_elapsed > sys.quad().fast_cap)
                throw HorizonExceeded("slow-time target not reached within the fast-time cap");
            walk.advance();
            if (walk.window().A < kPointTol)
                throw PointFixedUnderSlowFlow("fast orbit segment passes through p");
            lo = 0.0;
            continue;
        }
        const double t = window_time_inverse(sys, walk.window(), lo, tau - total, tol);
        return fast_elapsed + (t - lo);
    }
}

SuspensionPoint slow_advance(const FlowSystem& sys, const SuspensionPoint& pt,
                             double tau) {
    if (tau < 0.0) throw std::invalid_argument("slow_advance needs tau >= 0");
    if (dist_to_p(sys, pt) < kPointTol) return sys.p();  // p is fixed under the slow flow
    return suspension_advance(sys, pt, fast_time(sys, pt, tau));
}

double return_time_gamma(const FlowSystem& sys,
                         const Eigen::Ref<const Eigen::VectorXd>& x) {
    Eigen::VectorXd xx = wrap_torus(x);
    if (torus_distance(xx, sys.p_base()) <= kPointTol ||
        torus_distance(xx, sys.p_base_pre()) <= kPointTol)
        return kInf;
    return slow_time(sys, SuspensionPoint{std::move(xx), 0.0}, 1.0);
}

}  // namespace flowlab
