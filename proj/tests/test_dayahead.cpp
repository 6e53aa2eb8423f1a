#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cetm/dayahead.hpp"
#include "cetm/rng.hpp"
#include "oracle.hpp"

using namespace cetm;
using namespace cetm::dayahead;

namespace {

// One app, two slots: omega = 1, prices (1, 2), slot bounds [0, 10], demand
// between 10 and 20 MB per cycle, device cap 10 MB per slot.
SchedulingProblem toy_problem() {
    SchedulingProblem sp;
    sp.weights.omega = Matrix(2, 1, 1.0);
    sp.weights.slot_factor = Matrix(2, 1, 1.0);
    sp.weights.app_factor = {1.0};
    sp.prices.cents_per_mb = {1.0, 2.0};
    sp.bounds.slot_min = Matrix(2, 1, 0.0);
    sp.bounds.slot_max = Matrix(2, 1, 10.0);
    sp.bounds.slot_total_max = {10.0, 10.0};
    sp.bounds.app_min = {10.0};
    sp.bounds.app_max = {20.0};
    return sp;
}

SchedulingProblem random_problem(RandomEngine& rng, std::size_t num_slots, std::size_t num_apps) {
    SchedulingProblem sp;
    sp.weights.omega = Matrix(num_slots, num_apps);
    sp.weights.slot_factor = Matrix(num_slots, num_apps, 1.0);
    sp.weights.app_factor.assign(num_apps, 1.0);
    sp.prices.cents_per_mb.resize(num_slots);
    sp.bounds.slot_min = Matrix(num_slots, num_apps);
    sp.bounds.slot_max = Matrix(num_slots, num_apps);
    sp.bounds.slot_total_max.resize(num_slots);
    sp.bounds.app_min.resize(num_apps);
    sp.bounds.app_max.resize(num_apps);

    // Draw the box and caps first, then pick the cycle demands around a
    // profile that is feasible by construction.
    Matrix feasible(num_slots, num_apps);
    for (std::size_t k = 0; k < num_slots; ++k) {
        sp.prices.cents_per_mb[k] = uniform_in(rng, 0.5, 2.5);
        double floor_total = 0.0, point_total = 0.0;
        for (std::size_t a = 0; a < num_apps; ++a) {
            const double lo = uniform01(rng) < 0.3 ? 0.0 : uniform_in(rng, 0.0, 1.5);
            sp.weights.omega(k, a) = uniform_in(rng, 0.05, 1.0);
            sp.bounds.slot_min(k, a) = lo;
            sp.bounds.slot_max(k, a) = lo + uniform_in(rng, 0.0, 3.0);
            feasible(k, a) = uniform_in(rng, lo, sp.bounds.slot_max(k, a));
            floor_total += lo;
            point_total += feasible(k, a);
        }
        sp.bounds.slot_total_max[k] = floor_total + uniform_in(rng, 0.5, 4.0);
        if (point_total > sp.bounds.slot_total_max[k]) {
            // Shrink the above-floor part until the device cap holds.
            const double scale =
                (sp.bounds.slot_total_max[k] - floor_total) / (point_total - floor_total);
            for (std::size_t a = 0; a < num_apps; ++a)
                feasible(k, a) = sp.bounds.slot_min(k, a) +
                                 scale * (feasible(k, a) - sp.bounds.slot_min(k, a));
        }
    }
    for (std::size_t a = 0; a < num_apps; ++a) {
        const double lo = sp.bounds.slot_min.col_sum(a);
        const double hi = sp.bounds.slot_max.col_sum(a);
        const double mid = feasible.col_sum(a);
        sp.bounds.app_min[a] = lo + uniform_in(rng, 0.0, 1.0) * (mid - lo);
        sp.bounds.app_max[a] = mid + uniform_in(rng, 0.0, 1.0) * (hi - mid);
    }
    return sp;
}

}  // namespace

TEST_CASE("to_standard_form: row layout and dimensions") {
    RandomEngine rng = make_engine(5, 0);
    const SchedulingProblem sp = random_problem(rng, 2, 2);

    const StandardForm strict = to_standard_form(sp, /*strict_matrix_layout=*/true);
    CHECK(strict.problem.constraint_matrix.rows() == 8);  // NK + N + K
    CHECK(strict.problem.constraint_matrix.cols() == 4);

    const StandardForm full = to_standard_form(sp);
    CHECK(full.problem.constraint_matrix.rows() == 10);  // NK + N + K + N
    CHECK(full.problem.constraint_matrix.cols() == 4);

    // Numerator and denominator carry omega and the replicated price curve.
    CHECK(full.problem.num_c[0] == doctest::Approx(sp.weights.omega(0, 0)));
    CHECK(full.problem.num_c[3] == doctest::Approx(sp.weights.omega(1, 1)));
    CHECK(full.problem.den_d[0] == doctest::Approx(sp.prices.cents_per_mb[0]));
    CHECK(full.problem.den_d[1] == doctest::Approx(sp.prices.cents_per_mb[1]));
    CHECK(full.problem.den_d[2] == doctest::Approx(sp.prices.cents_per_mb[0]));
}

TEST_CASE("to_standard_form: zero lower bounds make zero offsets") {
    SchedulingProblem sp = toy_problem();
    const StandardForm sf = to_standard_form(sp);
    CHECK(sf.problem.num_alpha == doctest::Approx(0.0));
    CHECK(sf.problem.den_beta == doctest::Approx(0.0));
    for (double s : sf.shift) CHECK(s == 0.0);
}

TEST_CASE("to_standard_form: demand equal to the slot floor empties group two") {
    RandomEngine rng = make_engine(6, 0);
    SchedulingProblem sp = random_problem(rng, 3, 2);
    for (std::size_t a = 0; a < 2; ++a) sp.bounds.app_min[a] = sp.bounds.slot_min.col_sum(a);
    const StandardForm sf = to_standard_form(sp);
    const std::size_t group2 = 3 * 2;  // after the NK upper-bound rows
    CHECK(sf.problem.rhs[group2] == doctest::Approx(0.0));
    CHECK(sf.problem.rhs[group2 + 1] == doctest::Approx(0.0));
}

TEST_CASE("to_standard_form: infeasible bounds are rejected with a diagnostic") {
    SchedulingProblem sp = toy_problem();
    sp.bounds.app_min = {25.0};  // above app_max
    CHECK_THROWS_AS(to_standard_form(sp), InfeasibleBounds);

    sp = toy_problem();
    sp.bounds.slot_min = Matrix(2, 1, 11.0);  // above the slot cap
    sp.bounds.app_min = {22.0};
    sp.bounds.app_max = {30.0};
    sp.bounds.slot_max = Matrix(2, 1, 12.0);
    CHECK_THROWS_WITH_AS(to_standard_form(sp), doctest::Contains("slot cap"), InfeasibleBounds);
}

TEST_CASE("schedule: toy problem fills the cheap slot") {
    const SchedulingProblem sp = toy_problem();
    const StandardForm sf = to_standard_form(sp);
    const auto best = oracle::lfp_max(sf.problem.constraint_matrix, sf.problem.rhs,
                                      sf.problem.num_c, sf.problem.num_alpha, sf.problem.den_d,
                                      sf.problem.den_beta);
    REQUIRE(best.has_value());
    CHECK(best->value == doctest::Approx(1.0));  // vertex CEs: 1, 0.5, 2/3

    const ScheduledProfile s = schedule(sp);
    CHECK(s.profile.volume_mb(0, 0) == doctest::Approx(10.0));
    CHECK(s.profile.volume_mb(1, 0) == doctest::Approx(0.0));
    CHECK(s.cost_efficiency == doctest::Approx(1.0));
    CHECK(s.benefit == doctest::Approx(10.0));
    CHECK(s.payment_cents == doctest::Approx(10.0));
    CHECK(s.cost_efficiency == doctest::Approx(s.benefit / s.payment_cents));
}

TEST_CASE("schedule: uniform prices and weights give a flat objective") {
    SchedulingProblem sp = toy_problem();
    sp.prices.cents_per_mb = {1.5, 1.5};
    sp.weights.omega = Matrix(2, 1, 0.6);
    const ScheduledProfile s = schedule(sp);
    CHECK(s.cost_efficiency == doctest::Approx(0.6 / 1.5));
}

TEST_CASE("schedule_pm: profit maximization picks the bigger bundle") {
    const SchedulingProblem sp = toy_problem();
    // Profit at (10, 0) is 10 - 0.2*10 = 8; at (10, 10) it is 20 - 0.2*30 = 14.
    const ScheduledProfile pm = schedule_pm(sp, 0.2);
    CHECK(pm.profile.volume_mb(0, 0) == doctest::Approx(10.0));
    CHECK(pm.profile.volume_mb(1, 0) == doctest::Approx(10.0));
    CHECK(pm.benefit - 0.2 * pm.payment_cents == doctest::Approx(14.0));

    const ScheduledProfile ce = schedule(sp);
    CHECK(ce.cost_efficiency >= pm.cost_efficiency - 1e-12);
}

TEST_CASE("schedule_pm: eta 0 pushes volumes to their effective caps") {
    SchedulingProblem sp = toy_problem();
    sp.bounds.slot_total_max = {30.0, 30.0};  // loose device caps
    const ScheduledProfile pm = schedule_pm(sp, 0.0);
    CHECK(pm.profile.volume_mb(0, 0) == doctest::Approx(10.0));
    CHECK(pm.profile.volume_mb(1, 0) == doctest::Approx(10.0));
}

TEST_CASE("payment_of: linear slot pricing") {
    PriceCurve prices{{1.0, 1.0, 1.0}};
    demand::TrafficProfile zero;
    zero.volume_mb = Matrix(3, 2, 0.0);
    CHECK(payment_of(zero, prices) == doctest::Approx(0.0));

    demand::TrafficProfile p;
    p.volume_mb = Matrix(3, 2, 0.0);
    p.volume_mb(0, 0) = 20.0;
    p.volume_mb(1, 1) = 20.0;
    p.volume_mb(2, 0) = 5.6317;
    CHECK(payment_of(p, prices) == doctest::Approx(45.6317));

    demand::TrafficProfile q = p;
    q.volume_mb(0, 1) = 3.0;
    PriceCurve two{{2.0, 1.0, 0.5}};
    CHECK(payment_of(q, two) ==
          doctest::Approx(payment_of(p, two) + 2.0 * 3.0));

    PriceCurve bad{{1.0}};
    CHECK_THROWS_AS(payment_of(p, bad), DimensionMismatch);
}

TEST_CASE("schedule: random instances match vertex enumeration") {
    RandomEngine rng = make_engine(99, 0);
    int done = 0;
    while (done < 40) {
        const std::size_t num_apps = 1 + static_cast<std::size_t>(uniform01(rng) * 3.0);
        const std::size_t num_slots = 1 + static_cast<std::size_t>(uniform01(rng) * 4.0);
        if (num_apps * num_slots > 6) continue;
        ++done;
        const SchedulingProblem sp = random_problem(rng, num_slots, num_apps);
        const StandardForm sf = to_standard_form(sp);
        const auto best = oracle::lfp_max(sf.problem.constraint_matrix, sf.problem.rhs,
                                          sf.problem.num_c, sf.problem.num_alpha, sf.problem.den_d,
                                          sf.problem.den_beta);
        REQUIRE(best.has_value());
        const ScheduledProfile s = schedule(sp);
        CHECK(s.cost_efficiency == doctest::Approx(best->value).epsilon(1e-7));

        // Reconstructed profile satisfies the original constraint groups.
        for (std::size_t k = 0; k < num_slots; ++k) {
            double total = 0.0;
            for (std::size_t a = 0; a < num_apps; ++a) {
                const double x = s.profile.volume_mb(k, a);
                CHECK(x >= sp.bounds.slot_min(k, a) - 1e-9);
                CHECK(x <= sp.bounds.slot_max(k, a) + 1e-9);
                total += x;
            }
            CHECK(total <= sp.bounds.slot_total_max[k] + 1e-9);
        }
        for (std::size_t a = 0; a < num_apps; ++a) {
            const double total = s.profile.volume_mb.col_sum(a);
            CHECK(total >= sp.bounds.app_min[a] - 1e-9);
            CHECK(total <= sp.bounds.app_max[a] + 1e-9);
        }
    }
}

TEST_CASE("schedule: relaxing the cycle demand never hurts") {
    RandomEngine rng = make_engine(123, 0);
    for (int trial = 0; trial < 10; ++trial) {
        SchedulingProblem sp = random_problem(rng, 3, 2);
        const ScheduledProfile tight = schedule(sp);

        SchedulingProblem relaxed = sp;
        for (std::size_t a = 0; a < 2; ++a) {
            relaxed.bounds.app_min[a] =
                std::max(sp.bounds.slot_min.col_sum(a), 0.9 * sp.bounds.app_min[a]);
            relaxed.bounds.app_max[a] = 1.1 * sp.bounds.app_max[a];
        }
        const ScheduledProfile wide = schedule(relaxed);
        CHECK(wide.cost_efficiency >= tight.cost_efficiency - 1e-9);
    }
}

TEST_CASE("history-derived bounds with floor demand are always schedulable") {
    RandomEngine rng = make_engine(888, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t num_slots = 2 + static_cast<std::size_t>(uniform01(rng) * 3.0);
        const std::size_t num_apps = 1 + static_cast<std::size_t>(uniform01(rng) * 3.0);
        std::vector<demand::TrafficProfile> week(7);
        for (demand::TrafficProfile& day : week) {
            day.volume_mb = Matrix(num_slots, num_apps);
            for (double& v : day.volume_mb.data())
                v = uniform01(rng) < 0.2 ? 0.0 : uniform_in(rng, 0.0, 5.0);
        }
        SchedulingProblem sp;
        sp.bounds = demand::default_bounds(week);
        sp.bounds.app_min.resize(num_apps);
        for (std::size_t a = 0; a < num_apps; ++a)
            sp.bounds.app_min[a] = sp.bounds.slot_min.col_sum(a);
        sp.weights.omega = Matrix(num_slots, num_apps, 0.5);
        sp.weights.slot_factor = Matrix(num_slots, num_apps, 1.0);
        sp.weights.app_factor.assign(num_apps, 0.5);
        sp.prices.cents_per_mb.assign(num_slots, 0.0);
        for (double& p : sp.prices.cents_per_mb) p = uniform_in(rng, 0.5, 2.0);

        // Nonempty feasible set: the standard form admits an optimal vertex
        // for any bounded objective.
        const StandardForm sf = to_standard_form(sp);
        const fracprog::LpResult feasibility = fracprog::lp_solve(
            fracprog::LpProblem{sf.problem.num_c, sf.problem.constraint_matrix, sf.problem.rhs});
        CHECK(feasibility.status == fracprog::LpStatus::Optimal);
    }
}

TEST_CASE("schedule: load shifts to cheaper slots first") {
    RandomEngine rng = make_engine(321, 0);
    for (int trial = 0; trial < 20; ++trial) {
        SchedulingProblem sp = toy_problem();
        sp.prices.cents_per_mb = {uniform_in(rng, 0.5, 2.0), 0.0};
        sp.prices.cents_per_mb[1] = sp.prices.cents_per_mb[0] + uniform_in(rng, 0.1, 1.0);
        sp.bounds.app_min = {uniform_in(rng, 1.0, 18.0)};
        sp.bounds.app_max = {20.0};
        const ScheduledProfile s = schedule(sp);
        if (s.profile.volume_mb(1, 0) > 1e-9)
            CHECK(s.profile.volume_mb(0, 0) == doctest::Approx(10.0));
    }
}
