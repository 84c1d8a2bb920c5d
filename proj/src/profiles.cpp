#include "flowlab/profiles.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace flowlab {

BoundsSchedule BoundsSchedule::from_betas(std::vector<double> betas) {
    BoundsSchedule s;
    s.betas = std::move(betas);
    s.validate();
    return s;
}

BoundsSchedule BoundsSchedule::from_rates(int i0, std::vector<double> ells,
                                          std::vector<double> deltas) {
    if (i0 < 1) throw std::invalid_argument("schedule base index i0 must be >= 1");
    if (ells.size() != deltas.size() || ells.empty())
        throw std::invalid_argument("schedule ells/deltas must be non-empty and equal-sized");
    BoundsSchedule s;
    s.base_index = i0;
    s.betas.resize(ells.size() + 1);
    s.betas[0] = 1.0;
    for (std::size_t k = 0; k < ells.size(); ++k) {
        const int m = i0 + static_cast<int>(k) + 1;  // i0 + i with i = k+1
        s.betas[k + 1] = ells[k] / m * deltas[k];
    }
    s.ells = std::move(ells);
    s.deltas = std::move(deltas);
    s.validate();
    return s;
}

void BoundsSchedule::validate() const {
    if (betas.size() < 2) throw std::invalid_argument("schedule needs at least one bound");
    if (betas[0] != 1.0) throw std::invalid_argument("schedule must start at beta_{-1} = 1");
    for (std::size_t k = 0; k + 1 < betas.size(); ++k) {
        if (!(betas[k + 1] > 0.0))
            throw std::invalid_argument("schedule bounds must be positive");
        if (!(betas[k + 1] < betas[k]))
            throw std::invalid_argument("schedule bounds must be strictly decreasing");
    }
    for (double l : ells)
        if (!(l > 0.0 && l < 1.0))
            throw std::invalid_argument("schedule ells must lie in (0,1)");
    for (double d : deltas)
        if (!(d > 0.0 && d <= 1.0))
            throw std::invalid_argument("schedule deltas must lie in (0,1]");
}

TimeProfile TimeProfile::unit() {
    TimeProfile p;
    p.kind_ = ProfileKind::Unit;
    return p;
}

TimeProfile TimeProfile::power_bump(int ell) {
    if (ell < 1) throw std::invalid_argument("power bump exponent must be a positive integer");
    TimeProfile p;
    p.kind_ = ProfileKind::PowerBump;
    p.ell_ = ell;
    return p;
}

TimeProfile TimeProfile::theta_family(double theta) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("theta must lie in (0,1)");
    TimeProfile p;
    p.kind_ = ProfileKind::ThetaFamily;
    p.theta_ = theta;
    return p;
}

TimeProfile TimeProfile::lemma_omega(const BoundsSchedule& schedule) {
    schedule.validate();
    TimeProfile p;
    p.kind_ = ProfileKind::LemmaOmega;
    p.schedule_ = schedule;
    const int n = schedule.depth();
    p.knots_.resize(n);
    p.knot_values_.resize(n);
    for (int j = 1; j <= n; ++j) {
        p.knots_[j - 1] = 1.0 / (j + 1);
        // pin half the required bound; the factor-2 slack absorbs quadrature
        // error in downstream checks of the C0 inequality
        p.knot_values_[j - 1] = schedule.betas[j] / 2.0;
    }
    return p;
}

TimeProfile TimeProfile::constant_test(double value) {
    if (!(value > 0.0 && value <= 1.0))
        throw std::invalid_argument("constant test profile must lie in (0,1]");
    TimeProfile p;
    p.kind_ = ProfileKind::ConstantTest;
    p.const_ = value;
    return p;
}

double TimeProfile::eval(double r) const {
    if (r < 0.0) throw std::invalid_argument("profile distance must be nonnegative");
    switch (kind_) {
        case ProfileKind::Unit: return 1.0;
        case ProfileKind::ConstantTest: return const_;
        case ProfileKind::PowerBump: return eval_power_bump<double>(ell_, r);
        case ProfileKind::ThetaFamily: return eval_theta_family<double>(theta_, r);
        case ProfileKind::LemmaOmega: return eval_lemma_omega<double>(knots_, knot_values_, r);
    }
    return 1.0;
}

double TimeProfile::outer_radius() const {
    switch (kind_) {
        case ProfileKind::Unit:
        case ProfileKind::ConstantTest: return 0.0;
        case ProfileKind::PowerBump:
        case ProfileKind::LemmaOmega: return 1.0;
        case ProfileKind::ThetaFamily: return theta_;
    }
    return 0.0;
}

bool TimeProfile::vanishes_at_center() const {
    return kind_ == ProfileKind::PowerBump || kind_ == ProfileKind::ThetaFamily ||
           kind_ == ProfileKind::LemmaOmega;
}

double eval_profile(const TimeProfile& profile, double r) { return profile.eval(r); }

TimeProfile construct_omega(const BoundsSchedule& schedule) {
    return TimeProfile::lemma_omega(schedule);
}

BoundsSchedule torus_ball_schedule(int dimension, int base_index, int depth,
                                   double ell_scale) {
    if (dimension < 1) throw std::invalid_argument("dimension must be >= 1");
    if (base_index < 1) throw std::invalid_argument("base index must be >= 1");
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    if (!(ell_scale > 0.0 && ell_scale < 1.0))
        throw std::invalid_argument("ell_scale must lie in (0,1)");
    const double cd = std::pow(M_PI, dimension / 2.0) / std::tgamma(dimension / 2.0 + 1.0);
    std::vector<double> ells(depth), deltas(depth);
    for (int i = 1; i <= depth; ++i) {
        const int m = base_index + i;
        ells[i - 1] = ell_scale / m;
        deltas[i - 1] = cd / std::pow(m, dimension);
        if (!(deltas[i - 1] <= 1.0))
            throw std::invalid_argument("ball volume exceeds 1; raise the base index");
        const double tube = std::hypot(1.0 / m, ells[i - 1]);
        if (!(tube <= 1.0 / (i + 1)))
            throw std::invalid_argument(
                "approach tube does not fit in the bound ball; raise the base index "
                "or shrink ell_scale");
    }
    return BoundsSchedule::from_rates(base_index, std::move(ells), std::move(deltas));
}

std::vector<TimeProfile> family_path(const std::vector<double>& theta_grid) {
    if (theta_grid.empty()) throw std::invalid_argument("theta grid is empty");
    for (std::size_t k = 0; k < theta_grid.size(); ++k) {
        if (!(theta_grid[k] > 0.0 && theta_grid[k] < 1.0))
            throw std::invalid_argument("theta grid values must lie in (0,1)");
        if (k > 0 && !(theta_grid[k] > theta_grid[k - 1]))
            throw std::invalid_argument("theta grid must be strictly increasing");
    }
    std::vector<TimeProfile> out;
    out.reserve(theta_grid.size());
    for (double th : theta_grid) out.push_back(TimeProfile::theta_family(th));
    return out;
}

}  // namespace flowlab
