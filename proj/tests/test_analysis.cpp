#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/LU>

#include <cmath>
#include <random>

#include "flowlab/analysis.hpp"
#include "oracles.hpp"

using namespace flowlab;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

BaseMap default_base() {
    BaseMap m;
    m.rotation = vec({std::sqrt(2.0) - 1.0, std::sqrt(3.0) - 1.0, kGolden,
                      std::sqrt(7.0) - 2.0});
    return m;
}

Eigen::VectorXd default_x0() { return vec({0.5, 0.5, 0.5, 0.5}); }

FlowSystem make_system(TimeProfile profile, QuadratureParams q = {}) {
    return FlowSystem(default_base(), std::move(profile), default_x0(), 0.25, q);
}

FlowSystem circle_system(TimeProfile profile) {
    BaseMap m;
    m.rotation = vec({kGolden});
    return FlowSystem(std::move(m), std::move(profile), vec({0.5}));
}

SuspensionPoint random_point(std::mt19937_64& rng, int d) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd b(d);
    for (int i = 0; i < d; ++i) b[i] = u(rng);
    return {b, u(rng)};
}

}  // namespace

TEST_CASE("occupation: convention at p and unit-profile equidistribution") {
    const FlowSystem sys = make_system(TimeProfile::power_bump(3));
    const auto at_p = occupation_fraction(sys, sys.p(), 100.0, 0.2);
    CHECK(at_p.fraction == 1.0);
    CHECK_FALSE(at_p.truncated);

    // unit profile: fraction of (fast) time inside B(p,delta) approaches the
    // exact flat volume of the ball
    const FlowSystem unit = make_system(TimeProfile::unit());
    const double vol = suspension_ball_volume(4, 0.2);
    std::mt19937_64 rng(42);
    for (int t = 0; t < 3; ++t) {
        const auto pt = random_point(rng, 4);
        const auto rep = occupation_fraction(unit, pt, 1e4, 0.2);
        CHECK_FALSE(rep.truncated);
        CHECK(rep.fast_span == doctest::Approx(1e4).epsilon(1e-9));
        CHECK(std::fabs(rep.fraction - vol) < 0.02);
    }
}

TEST_CASE("occupation: sweep is monotone within noise for the degenerate profile") {
    const FlowSystem sys = make_system(TimeProfile::power_bump(3));
    std::mt19937_64 rng(7);
    for (int t = 0; t < 3; ++t) {
        const auto pt = random_point(rng, 4);
        const auto reps = occupation_sweep(sys, pt, {1e2, 1e3}, 0.1);
        REQUIRE(reps.size() == 2);
        CHECK(reps[1].fraction >= reps[0].fraction - 0.05);
        CHECK(reps[0].horizon == 1e2);
    }
}

TEST_CASE("occupation: the slow ball absorbs the orbit on the circle base") {
    // 2-dimensional suspension: passes near p are frequent enough that the
    // occupation fraction visibly climbs toward 1 at desk-scale budgets
    const FlowSystem sys = circle_system(TimeProfile::power_bump(3));
    SuspensionPoint start{vec({0.13}), 0.0};
    const auto reps = occupation_sweep(sys, start, {1e3, 1e4, 1e5}, 0.25);
    REQUIRE(reps.size() == 3);
    for (const auto& r : reps) CHECK_FALSE(r.truncated);
    CHECK(reps[2].fraction >= reps[1].fraction - 0.05);
    CHECK(reps[1].fraction >= reps[0].fraction - 0.05);
    CHECK(reps[2].fraction > 0.9);
}

TEST_CASE("occupation: fast-time cap reports truncation") {
    QuadratureParams q;
    q.fast_cap = 5.0;
    const FlowSystem unit = make_system(TimeProfile::unit(), q);
    std::mt19937_64 rng(3);
    const auto pt = random_point(rng, 4);
    const auto rep = occupation_fraction(unit, pt, 1e3, 0.1);  // needs fast 1e3
    CHECK(rep.truncated);
    CHECK(rep.fast_span <= 6.0);

    CHECK_THROWS_AS(occupation_fraction(unit, pt, -1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(occupation_fraction(unit, pt, 10.0, 10.0), std::invalid_argument);
}

TEST_CASE("hitting: block structure, unit equality and slow-time consistency") {
    const FlowSystem unit = make_system(TimeProfile::unit());
    SuspensionPoint start{vec({0.0, 0.0, 0.0, 0.0}), 0.0};

    const auto one = hitting_sequence(unit, start, 0.15, 0.3, 1);
    REQUIRE(one.blocks == 1);
    REQUIRE(one.events.size() == 4);
    CHECK(one.events[0].kind == HitKind::EnterOuter);
    CHECK(one.events[1].kind == HitKind::EnterInner);
    CHECK(one.events[2].kind == HitKind::ExitInner);
    CHECK(one.events[3].kind == HitKind::ExitOuter);
    for (std::size_t i = 0; i + 1 < one.events.size(); ++i)
        CHECK(one.events[i].fast_time < one.events[i + 1].fast_time);
    for (const auto& ev : one.events) {
        CHECK(ev.slow_time == doctest::Approx(ev.fast_time).epsilon(1e-12));
        CHECK(dist_to_p(unit, ev.point) ==
              doctest::Approx(ev.kind == HitKind::EnterOuter ||
                                      ev.kind == HitKind::ExitOuter
                                  ? 0.3
                                  : 0.15)
                  .epsilon(1e-9));
    }

    const auto many = hitting_sequence(unit, start, 0.15, 0.3, 25);
    CHECK(many.blocks == 25);
    CHECK_FALSE(many.truncated);
    REQUIRE(many.events.size() == 100);
    double prev = -1.0;
    for (const auto& ev : many.events) {
        CHECK(ev.fast_time > prev);
        prev = ev.fast_time;
    }

    // profile system: stored slow times equal a from-scratch slow_time at the
    // event's fast time
    const FlowSystem sys = make_system(TimeProfile::power_bump(2));
    const auto res = hitting_sequence(sys, start, 0.15, 0.3, 5);
    REQUIRE(res.blocks == 5);
    for (const auto& ev : res.events) {
        const double re = slow_time(sys, start, ev.fast_time);
        CHECK(std::fabs(re - ev.slow_time) <= 1e-8 * (1.0 + std::fabs(ev.slow_time)));
    }

    // a start inside the outer ball violates the precondition
    CHECK_THROWS_AS(hitting_sequence(unit, {default_x0(), 0.1}, 0.15, 0.3, 1),
                    std::invalid_argument);
    // truncation: cap too small to find any block
    QuadratureParams q;
    q.fast_cap = 3.0;
    const FlowSystem capped = make_system(TimeProfile::unit(), q);
    const auto trunc = hitting_sequence(capped, start, 0.15, 0.3, 25);
    CHECK(trunc.truncated);
    CHECK(trunc.blocks < 25);
}

TEST_CASE("first hit: unit lower bound and slow-profile delay") {
    const FlowSystem unit = make_system(TimeProfile::unit());
    const auto rep = first_hit_slow_time(unit, 0.1, 0.3, 64, 99);
    CHECK(rep.min_slow_time >= 0.2 - 1e-12);
    CHECK(rep.speed_lower_bound == doctest::Approx(0.2));
    CHECK(dist_to_p(unit, rep.witness) == doctest::Approx(0.1).epsilon(1e-12));

    const FlowSystem slow = make_system(TimeProfile::power_bump(3));
    const auto rep2 = first_hit_slow_time(slow, 0.1, 0.2, 64, 99);
    CHECK(rep2.min_slow_time > 2.0);
    CHECK(rep2.min_slow_time >= rep2.speed_lower_bound * (1.0 - 1e-9));

    CHECK_THROWS_AS(first_hit_slow_time(unit, 0.2, 0.2, 8, 1), std::invalid_argument);
}

TEST_CASE("birkhoff gamma means: unit, avoidance, and divergent schedule") {
    const FlowSystem unit = make_system(TimeProfile::unit());
    const auto series = birkhoff_gamma_mean(unit, vec({0.1, 0.9, 0.4, 0.7}), 3);
    REQUIRE(series.partial_means.size() == 3);
    for (double m : series.partial_means) CHECK(m == 1.0);
    CHECK(series.infinities == 0);

    // tiny ball the orbit misses within n steps: every gamma equals 1 exactly
    const FlowSystem theta = make_system(TimeProfile::theta_family(0.01));
    const auto avoid = birkhoff_gamma_mean(theta, vec({0.0, 0.0, 0.0, 0.0}), 3);
    for (double m : avoid.partial_means) CHECK(m == 1.0);

    // composed schedule: means increase across decades with positive slope
    const BoundsSchedule sched = torus_ball_schedule(4, 2, 25);
    const FlowSystem omega_sys = make_system(TimeProfile::lemma_omega(sched));
    const Eigen::VectorXd start = vec({0.326972, 0.987277, 0.318711, 0.788549});
    const auto div = birkhoff_gamma_mean(omega_sys, start, 4);
    REQUIRE(div.partial_means.size() == 4);
    for (std::size_t i = 0; i + 1 < div.partial_means.size(); ++i)
        CHECK(div.partial_means[i] < div.partial_means[i + 1]);
    CHECK(div.loglog_slope > 0.05);
    CHECK(div.infinities == 0);
}

TEST_CASE("ball frequency floor") {
    BaseMap golden;
    golden.rotation = vec({kGolden});

    // every point is within a radius that reaches the whole torus
    CHECK(ball_frequency_floor(golden, vec({0.2}), 1000, 0.51, 32, 5) == 1.0);

    // golden rotation: the visit frequency of an eps-ball is its arc length
    const double freq = ball_frequency_floor(golden, vec({0.2}), 100000, 0.1, 100, 5);
    CHECK(std::fabs(freq - 0.2) < 0.01);

    // rational rotation: finite orbit misses most centers entirely
    BaseMap third;
    third.rotation = vec({1.0 / 3.0});
    CHECK(ball_frequency_floor(third, vec({0.05}), 10000, 0.01, 100, 5) == 0.0);
}

TEST_CASE("lyapunov: rotations, diagonal products and the mixed cocycle") {
    HermanCocycle c;
    c.lambda = 1.0;
    c.chi = kGolden;
    CHECK(std::fabs(lyapunov_top(c, 100000).exponent) <= 1e-9);

    HermanCocycle diag;
    diag.lambda = 2.0;
    diag.chi = 0.0;
    diag.theta0 = 0.0;
    CHECK(std::fabs(lyapunov_top(diag, 1000000).exponent - std::log(2.0)) <= 1e-9);

    HermanCocycle mixed;
    mixed.lambda = 2.0;
    mixed.chi = kGolden;
    const auto e1 = lyapunov_top(mixed, 200000);
    const auto e2 = lyapunov_top(mixed, 400000);
    CHECK(e1.exponent > 0.0);
    CHECK(std::fabs(e1.exponent - e2.exponent) <= 3.0 * std::max(e1.tail_gap, e2.tail_gap));

    CHECK(std::fabs(mixed.matrix(0.37).determinant() - 1.0) < 1e-12);
}

TEST_CASE("cocycle residual") {
    const FlowSystem unit = make_system(TimeProfile::unit());
    std::mt19937_64 rng(13);
    const auto pt = random_point(rng, 4);
    CHECK(cocycle_residual(unit, pt, 1.3, 2.4) <= 1e-15);  // only s+t rounding

    const FlowSystem sys = make_system(TimeProfile::power_bump(2));
    CHECK(cocycle_residual(sys, pt, 0.0, 1.7) == 0.0);  // tau(x, 0) = 0
    std::uniform_real_distribution<double> uu(0.0, 5.0);
    for (int t = 0; t < 20; ++t) {
        const auto q = random_point(rng, 4);
        const double s = uu(rng), w = uu(rng);
        CHECK(cocycle_residual(sys, q, s, w) <= 1e-8 * (1.0 + s + w));
    }
}

TEST_CASE("linear rank of the power-bump family") {
    std::vector<double> dists;
    for (int i = 1; i <= 9; ++i) dists.push_back(0.05 * i);

    std::vector<TimeProfile> one{TimeProfile::power_bump(1)};
    CHECK(linear_rank(one, dists) == 1);

    std::vector<TimeProfile> dup{TimeProfile::power_bump(2), TimeProfile::power_bump(2)};
    CHECK(linear_rank(dup, dists) == 1);

    std::vector<TimeProfile> six;
    for (int l = 1; l <= 6; ++l) six.push_back(TimeProfile::power_bump(l));
    CHECK(linear_rank(six, dists) == 6);

    // closed-form determinant of the 6x6 value matrix at the first six nodes:
    // nonzero product certifies independence through an algebraic route
    std::vector<double> squares;
    for (int i = 1; i <= 6; ++i) squares.push_back(0.05 * i * 0.05 * i);
    CHECK(std::fabs(static_cast<double>(oracles::power_matrix_determinant(squares))) >
          0.0);

    // stability under permutation and duplication of sample points
    std::vector<double> shuffled{0.45, 0.05, 0.25, 0.1, 0.4, 0.15, 0.2, 0.3, 0.35};
    CHECK(linear_rank(six, shuffled) == 6);
    auto extended = dists;
    extended.insert(extended.end(), dists.begin(), dists.end());
    CHECK(linear_rank(six, extended) == 6);

    CHECK_THROWS_AS(linear_rank(six, std::vector<double>{1.2, 1.5, 2.0, 3.0, 4.0, 5.0}),
                    DegenerateSamples);
    CHECK_THROWS_AS(linear_rank(six, std::vector<double>{0.1}), std::invalid_argument);

    // point-based overload agrees
    const FlowSystem sys = make_system(TimeProfile::power_bump(1));
    std::vector<SuspensionPoint> pts;
    for (int i = 1; i <= 6; ++i) pts.push_back({default_x0(), 0.05 * i});
    CHECK(linear_rank(sys, six, pts) == 6);
}

TEST_CASE("linear growth constant") {
    const FlowSystem unit = make_system(TimeProfile::unit());
    CHECK(linear_growth_constant(unit, 0.1) == 1.0);

    const FlowSystem pb = make_system(TimeProfile::power_bump(1));
    CHECK(linear_growth_constant(pb, 0.5) == doctest::Approx(4.0).epsilon(1e-12));

    const FlowSystem th = make_system(TimeProfile::theta_family(0.2));
    CHECK(linear_growth_constant(th, 0.2) == 1.0);

    CHECK_THROWS_AS(linear_growth_constant(pb, 0.0), std::invalid_argument);
}

TEST_CASE("suspension ball volume formula") {
    // 5-dimensional flow space over the 4-torus: (8 pi^2 / 15) r^5
    CHECK(suspension_ball_volume(4, 0.2) ==
          doctest::Approx(8.0 * M_PI * M_PI / 15.0 * std::pow(0.2, 5)).epsilon(1e-12));
    // 2-dimensional flow space over the circle: pi r^2
    CHECK(suspension_ball_volume(1, 0.25) ==
          doctest::Approx(M_PI * 0.0625).epsilon(1e-12));
}
