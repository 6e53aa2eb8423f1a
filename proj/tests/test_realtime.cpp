#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cetm/realtime.hpp"
#include "oracle.hpp"

using namespace cetm;
using namespace cetm::realtime;

namespace {

SlotState state_of(std::vector<double> allocated, std::vector<double> consumed, double elapsed) {
    SlotState s;
    s.allocated = allocated;
    s.prebought = std::move(allocated);
    s.consumed = std::move(consumed);
    s.overage.assign(s.allocated.size(), 0.0);
    s.elapsed_min = elapsed;
    s.realtime_price = 1.0;
    return s;
}

RequestEvent event_of(int slot, double minute, int app, double volume, RequestKind kind) {
    return RequestEvent{slot, minute, app, volume, kind};
}

}  // namespace

TEST_CASE("calibrate_admission pins both reference points") {
    const AdmissionParams p = calibrate_admission();
    CHECK(p.m2 == doctest::Approx(4.321928).epsilon(1e-6));             // ln 0.05 / ln 0.5
    CHECK(p.m1 * 60.0 + p.m2 == doctest::Approx(0.0222764).epsilon(1e-4));  // ln 0.95 / ln 0.1
    CHECK(p.m1 == doctest::Approx(-0.07166).epsilon(1e-3));

    CHECK(std::fabs(accept_probability(5.0, 10.0, 0.0, p) - 0.05) < 1e-12);
    CHECK(std::fabs(accept_probability(9.0, 10.0, 60.0, p) - 0.95) < 1e-12);
    for (double t : {0.0, 15.0, 30.0, 45.0, 60.0}) CHECK(p.m1 * t + p.m2 > 0.0);
    CHECK_THROWS_AS(calibrate_admission(1.0), std::invalid_argument);
}

TEST_CASE("accept_probability endpoints and slack threshold") {
    const AdmissionParams strict = calibrate_admission();
    CHECK(accept_probability(0.0, 10.0, 0.0, strict) == doctest::Approx(1.0));
    CHECK(accept_probability(0.0, 10.0, 59.0, strict) == doctest::Approx(1.0));
    CHECK(accept_probability(10.0, 10.0, 30.0, strict) == doctest::Approx(0.0));
    CHECK(accept_probability(1.0, 0.0, 30.0, strict) == doctest::Approx(0.0));  // zero allocation

    const AdmissionParams slack = calibrate_admission(0.5);
    CHECK(accept_probability(4.0, 10.0, 10.0, slack) == doctest::Approx(1.0));
    CHECK(accept_probability(5.0, 10.0, 10.0, slack) == doctest::Approx(1.0));
    CHECK(accept_probability(10.0, 10.0, 10.0, slack) == doctest::Approx(0.0));
    CHECK(accept_probability(7.5, 10.0, 0.0, slack) ==
          doctest::Approx(accept_probability(5.0, 10.0, 0.0, strict)));
}

TEST_CASE("accept_probability monotone on a grid") {
    for (double kappa : {0.0, 0.5}) {
        const AdmissionParams p = calibrate_admission(kappa);
        for (int ti = 0; ti <= 12; ++ti) {
            double prev = 2.0;
            for (int gi = 0; gi <= 20; ++gi) {
                const double rho = accept_probability(gi * 0.5, 10.0, ti * 5.0, p);
                CHECK(rho <= prev + 1e-12);  // non-increasing in consumption
                prev = rho;
            }
        }
        for (int gi = 0; gi <= 20; ++gi) {
            double prev = -1.0;
            for (int ti = 0; ti <= 12; ++ti) {
                const double rho = accept_probability(gi * 0.5, 10.0, ti * 5.0, p);
                CHECK(rho >= prev - 1e-12);  // non-decreasing in elapsed time
                prev = rho;
            }
        }
    }
}

TEST_CASE("reset_bounds: reference trace") {
    const SlotState s = state_of({10.0, 20.0, 30.0}, {10.0, 5.0, 15.0}, 30.0);
    const std::vector<double> omega{0.9, 0.8, 0.7};
    const BoundsReset r = reset_bounds(s, 0, omega, 30.0);
    REQUIRE(r.status == BoundsReset::Status::Ok);
    // Basic bounds: lower = min(2g, x) = (10, 10, 30), upper = x; freed slack
    // is 10 MB, so the exhausted app is pinned at min/max(20, 10+10) = 20.
    CHECK(r.lower[1] == doctest::Approx(10.0));
    CHECK(r.lower[2] == doctest::Approx(30.0));
    CHECK(r.upper[1] == doctest::Approx(20.0));
    CHECK(r.upper[2] == doctest::Approx(30.0));
    CHECK(r.lower[0] == doctest::Approx(20.0));
    CHECK(r.upper[0] == doctest::Approx(20.0));
}

TEST_CASE("reset_bounds: no volume left and zero elapsed time") {
    const SlotState spent = state_of({5.0, 5.0}, {5.0, 5.0}, 10.0);
    const std::vector<double> omega{0.5, 0.5};
    CHECK(reset_bounds(spent, 0, omega, 10.0).status == BoundsReset::Status::NoVolume);

    const SlotState s = state_of({5.0, 5.0}, {5.0, 2.0}, 0.0);
    CHECK_THROWS_AS(reset_bounds(s, 0, omega, 0.0), UndefinedAtZeroElapsed);
}

TEST_CASE("reset_bounds: collapsed bounds relax the least-valued app") {
    // 2g >= x for every app, so the basic bounds collapse to x; app 3 has the
    // lowest omega among the unfinished ones and gets its lower bound dropped
    // to its consumption.
    const SlotState s = state_of({4.0, 6.0, 8.0}, {4.0, 6.0, 5.0}, 30.0);
    const std::vector<double> omega{0.9, 0.8, 0.2};
    const BoundsReset r = reset_bounds(s, 0, omega, 30.0);
    REQUIRE(r.status == BoundsReset::Status::Ok);
    CHECK(r.lower[2] == doctest::Approx(5.0));
    CHECK(r.upper[2] == doctest::Approx(8.0));
    // Freed volume: 8 - 5 = 3; app 1 gets min/max(8, 4 + 3) = [7, 8].
    CHECK(r.lower[0] == doctest::Approx(7.0));
    CHECK(r.upper[0] == doctest::Approx(8.0));
}

TEST_CASE("reallocate: continues the reference trace") {
    const SlotState s = state_of({10.0, 20.0, 30.0}, {10.0, 5.0, 15.0}, 30.0);
    const std::vector<double> omega{0.9, 0.8, 0.7};
    const BoundsReset r = reset_bounds(s, 0, omega, 30.0);
    const std::vector<double> x = reallocate(s, r, omega);
    CHECK(x[0] == doctest::Approx(20.0));
    CHECK(x[1] == doctest::Approx(10.0));
    CHECK(x[2] == doctest::Approx(30.0));
    CHECK(x[0] + x[1] + x[2] == 60.0);
}

TEST_CASE("reallocate: flat weights leave the remainder on the lowest index") {
    SlotState s = state_of({6.0, 6.0, 6.0}, {2.0, 2.0, 2.0}, 20.0);
    BoundsReset r;
    r.status = BoundsReset::Status::Ok;
    r.lower = {2.0, 2.0, 2.0};
    r.upper = {18.0, 18.0, 18.0};
    const std::vector<double> omega{0.5, 0.5, 0.5};
    const std::vector<double> x = reallocate(s, r, omega);
    CHECK(x[0] == doctest::Approx(14.0));  // lower bounds plus all the slack
    CHECK(x[1] == doctest::Approx(2.0));
    CHECK(x[2] == doctest::Approx(2.0));
}

TEST_CASE("reallocate: single app is pinned by conservation") {
    SlotState s = state_of({7.5}, {7.5}, 30.0);
    BoundsReset r;
    r.status = BoundsReset::Status::Ok;
    r.lower = {0.0};
    r.upper = {20.0};
    const std::vector<double> omega{0.4};
    const std::vector<double> x = reallocate(s, r, omega);
    CHECK(x[0] == 7.5);
}

TEST_CASE("reallocate: infeasible bounds are rejected") {
    SlotState s = state_of({4.0, 4.0}, {1.0, 1.0}, 10.0);
    BoundsReset r;
    r.status = BoundsReset::Status::Ok;
    r.lower = {5.0, 5.0};  // lower sum 10 > total 8
    r.upper = {6.0, 6.0};
    CHECK_THROWS_AS(reallocate(s, r, std::vector<double>{0.5, 0.5}), InfeasibleRebounds);
}

TEST_CASE("reallocate: random traces conserve volume and match the LP oracle") {
    RandomEngine rng = make_engine(31, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(uniform01(rng) * 4.0);
        std::vector<double> allocated(n), consumed(n), omega(n);
        for (std::size_t a = 0; a < n; ++a) {
            allocated[a] = uniform_in(rng, 0.0, 10.0);
            consumed[a] = uniform_in(rng, 0.0, allocated[a]);
            omega[a] = uniform_in(rng, 0.05, 1.0);
        }
        const int a1 = static_cast<int>(uniform01(rng) * n);
        consumed[a1] = allocated[a1];  // the exhausted app
        const double t = uniform_in(rng, 1.0, 60.0);
        const SlotState s = state_of(allocated, consumed, t);
        const BoundsReset r = reset_bounds(s, a1, omega, t);
        if (r.status != BoundsReset::Status::Ok) continue;
        const std::vector<double> x = reallocate(s, r, omega);

        double plan_total = 0.0, new_total = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            plan_total += allocated[a];
            new_total += x[a];
            CHECK(x[a] >= r.lower[a] - 1e-9);
            CHECK(x[a] <= r.upper[a] + 1e-9);
        }
        CHECK(new_total == plan_total);  // conservation, exact

        // Independent check: vertex enumeration over the bounded simplex
        // { lower <= x <= upper, sum x = total }.
        Matrix a_mat(2 * n + 2, n);
        std::vector<double> b_vec(2 * n + 2);
        for (std::size_t a = 0; a < n; ++a) {
            a_mat(a, a) = 1.0;
            b_vec[a] = r.upper[a];
            a_mat(n + a, a) = -1.0;
            b_vec[n + a] = -r.lower[a];
        }
        for (std::size_t a = 0; a < n; ++a) {
            a_mat(2 * n, a) = 1.0;
            a_mat(2 * n + 1, a) = -1.0;
        }
        b_vec[2 * n] = plan_total;
        b_vec[2 * n + 1] = -plan_total;
        const auto best = oracle::lp_max(a_mat, b_vec, omega);
        REQUIRE(best.has_value());
        double greedy_value = 0.0;
        for (std::size_t a = 0; a < n; ++a) greedy_value += omega[a] * x[a];
        CHECK(greedy_value == doctest::Approx(best->value).epsilon(1e-9));
    }
}

TEST_CASE("bill_slot charges only the positive excess") {
    SlotState s = state_of({10.0, 10.0}, {5.0, 5.0}, 60.0);
    CHECK(bill_slot(s, 1.1) == doctest::Approx(0.0));
    s.consumed = {12.0, 10.0};  // 2 MB over
    CHECK(bill_slot(s, 1.1) == doctest::Approx(2.2));
    CHECK_THROWS_AS(bill_slot(s, 0.0), std::invalid_argument);
}

TEST_CASE("handle_request: background paths") {
    const AdmissionParams params = calibrate_admission();
    const std::vector<double> omega{0.9, 0.5};
    RandomEngine rng = make_engine(1, 1);

    SlotState drained = state_of({5.0, 5.0}, {5.0, 0.0}, 0.0);
    CHECK(handle_request(drained, event_of(0, 10.0, 0, 1.0, RequestKind::Background), rng, params,
                         omega, true) == Decision::Denied);

    // Fresh app at the start of the slot: probability is exactly 1.
    SlotState fresh = state_of({5.0, 5.0}, {0.0, 0.0}, 0.0);
    double rho = 0.0;
    CHECK(handle_request(fresh, event_of(0, 0.0, 1, 1.0, RequestKind::Background), rng, params,
                         omega, true, &rho) == Decision::Admitted);
    CHECK(rho == doctest::Approx(1.0));
    CHECK(fresh.consumed[1] == doctest::Approx(1.0));

    // A request larger than the remaining allocation is denied outright.
    SlotState tight = state_of({5.0, 5.0}, {0.0, 4.0}, 0.0);
    CHECK(handle_request(tight, event_of(0, 30.0, 1, 2.0, RequestKind::Background), rng, params,
                         omega, true) == Decision::Denied);
}

TEST_CASE("handle_request: foreground reallocation and overage") {
    const AdmissionParams params = calibrate_admission();
    const std::vector<double> omega{0.9, 0.5};
    RandomEngine rng = make_engine(2, 1);

    SlotState s = state_of({5.0, 5.0}, {0.0, 0.0}, 0.0);
    CHECK(handle_request(s, event_of(0, 5.0, 0, 4.0, RequestKind::Foreground), rng, params, omega,
                         true) == Decision::Admitted);
    CHECK(s.consumed[0] == doctest::Approx(4.0));

    // 3 MB more than app 1 has left, but app 2 still holds 5 MB of slack.
    CHECK(handle_request(s, event_of(0, 30.0, 0, 4.0, RequestKind::Foreground), rng, params, omega,
                         true) == Decision::AdmittedAfterReallocation);
    CHECK(s.consumed[0] == doctest::Approx(8.0));
    CHECK(s.allocated[0] + s.allocated[1] == doctest::Approx(10.0));  // conserved
    CHECK(s.overage[0] == doctest::Approx(0.0));

    // Without permission the same situation is a denial.
    SlotState locked = state_of({5.0, 5.0}, {5.0, 0.0}, 0.0);
    CHECK(handle_request(locked, event_of(0, 30.0, 0, 1.0, RequestKind::Foreground), rng, params,
                         omega, false) == Decision::Denied);
    CHECK(locked.consumed[0] == doctest::Approx(5.0));

    // Slot fully consumed: the request rides on real-time pricing.
    SlotState empty = state_of({2.0, 2.0}, {2.0, 2.0}, 0.0);
    CHECK(handle_request(empty, event_of(0, 40.0, 0, 1.5, RequestKind::Foreground), rng, params,
                         omega, true) == Decision::AdmittedOverage);
    CHECK(empty.overage[0] == doctest::Approx(1.5));
    CHECK(bill_slot(empty, 2.0) == doctest::Approx(3.0));
}

TEST_CASE("simulate_day: managed run stays within the plan without permission") {
    demand::TrafficProfile plan;
    plan.volume_mb = Matrix(2, 2, 3.0);
    Matrix omega(2, 2, 0.7);
    const std::vector<double> prices{1.0, 1.0};

    std::vector<RequestEvent> events;
    RandomEngine gen = make_engine(3, 0);
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 40; ++i)
            events.push_back(event_of(k, i * 1.4, i % 2, uniform_in(gen, 0.05, 0.6),
                                      i % 3 == 0 ? RequestKind::Foreground
                                                 : RequestKind::Background));

    SimulationOptions opt;
    opt.admission = calibrate_admission();
    opt.allow_overage = false;
    RandomEngine rng = make_engine(3, 1);
    const DayRunResult run = simulate_day(plan, omega, prices, events, opt, rng);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(run.consumed.volume_mb.row_sum(k) <= plan.volume_mb.row_sum(k) + 1e-9);
    }
    CHECK(run.additional_payment_cents == doctest::Approx(0.0));
}

TEST_CASE("simulate_day: deterministic under a fixed seed") {
    demand::TrafficProfile plan;
    plan.volume_mb = Matrix(2, 2, 2.0);
    Matrix omega(2, 2, 0.5);
    const std::vector<double> prices{1.0, 1.2};

    std::vector<RequestEvent> events;
    RandomEngine gen = make_engine(4, 0);
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 30; ++i)
            events.push_back(event_of(k, i * 1.9, static_cast<int>(uniform01(gen) * 2.0),
                                      uniform_in(gen, 0.05, 0.9),
                                      uniform01(gen) < 0.2 ? RequestKind::Foreground
                                                           : RequestKind::Background));

    SimulationOptions opt;
    opt.admission = calibrate_admission(0.3);
    opt.log_decisions = true;
    RandomEngine rng_a = make_engine(4, 1);
    RandomEngine rng_b = make_engine(4, 1);
    const DayRunResult a = simulate_day(plan, omega, prices, events, opt, rng_a);
    const DayRunResult b = simulate_day(plan, omega, prices, events, opt, rng_b);
    CHECK(a.additional_payment_cents == b.additional_payment_cents);
    CHECK(a.consumed.volume_mb.data() == b.consumed.volume_mb.data());
    REQUIRE(a.decisions.size() == b.decisions.size());
    for (std::size_t i = 0; i < a.decisions.size(); ++i)
        CHECK(a.decisions[i].decision == b.decisions[i].decision);

    // The unmanaged twin admits everything.
    SimulationOptions open = opt;
    open.managed = false;
    RandomEngine rng_c = make_engine(4, 1);
    const DayRunResult c = simulate_day(plan, omega, prices, events, open, rng_c);
    double want = 0.0;
    for (const RequestEvent& ev : events) want += ev.volume_mb;
    CHECK(c.consumed.volume_mb.sum() == doctest::Approx(want));
}

TEST_CASE("event CSV round-trips and sorts") {
    std::vector<RequestEvent> events{
        event_of(1, 30.0, 0, 0.5, RequestKind::Background),
        event_of(0, 10.0, 1, 1.5, RequestKind::Foreground),
        event_of(1, 5.0, 1, 0.25, RequestKind::Foreground),
    };
    const std::string path = "realtime_events_roundtrip.csv";
    write_events_csv(events, path);
    const auto back = read_events_csv(path, 2, 2);
    REQUIRE(back.size() == 3);
    CHECK(back[0].slot == 0);
    CHECK(back[1].slot == 1);
    CHECK(back[1].minute == doctest::Approx(5.0));
    CHECK(back[2].minute == doctest::Approx(30.0));
    CHECK(back[0].kind == RequestKind::Foreground);
    CHECK(back[0].volume_mb == doctest::Approx(1.5));
    std::remove(path.c_str());
}
