#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "cetm/longterm.hpp"

using namespace cetm::longterm;

TEST_CASE("monthly_cost: flat up to the cap, linear past it") {
    const BundlePlan plan = plan_500mb();
    CHECK(monthly_cost(400.0, plan) == doctest::Approx(15.0));
    CHECK(monthly_cost(500.0, plan) == doctest::Approx(15.0));  // boundary inclusive
    CHECK(monthly_cost(501.0, plan) == doctest::Approx(15.0 + 27.648));
    CHECK_THROWS_AS(monthly_cost(-1.0, plan), std::invalid_argument);
}

TEST_CASE("monthly_ce: reference values") {
    CHECK(monthly_ce(500.0, plan_500mb(), 1.0) == doctest::Approx(33.33).epsilon(1e-3));
    CHECK(monthly_ce(200.0, plan_200mb(), 1.0) == doctest::Approx(20.0));
    CHECK(monthly_ce(501.0, plan_500mb(), 1.0) == doctest::Approx(501.0 / 42.648));
    CHECK(monthly_ce(501.0, plan_500mb(), 1.0) == doctest::Approx(11.75).epsilon(1e-3));
    CHECK_THROWS_AS(monthly_ce(0.0, plan_500mb(), 1.0), ZeroVolume);
}

TEST_CASE("monthly_ce: rises to the cap, falls past it") {
    for (const BundlePlan& plan : preset_plans()) {
        double prev = 0.0;
        for (double x = plan.cap_mb / 40.0; x <= plan.cap_mb; x += plan.cap_mb / 40.0) {
            const double ce = monthly_ce(x, plan, 1.0);
            CHECK(ce > prev);
            prev = ce;
        }
        const double peak = monthly_ce(plan.cap_mb, plan, 1.0);
        prev = peak;
        for (double x = plan.cap_mb + 1.0; x < 2.0 * plan.cap_mb; x += plan.cap_mb / 20.0) {
            const double ce = monthly_ce(x, plan, 1.0);
            CHECK(ce < prev);
            prev = ce;
        }
    }
}

TEST_CASE("monthly_ce: omega_bar scales values but not the argmax") {
    const BundlePlan plan = plan_200mb();
    const double at_cap_1 = monthly_ce(plan.cap_mb, plan, 1.0);
    const double at_cap_3 = monthly_ce(plan.cap_mb, plan, 3.0);
    CHECK(at_cap_3 == doctest::Approx(3.0 * at_cap_1));
    for (double x : {50.0, 150.0, 250.0, 400.0}) {
        const double r1 = monthly_ce(x, plan, 1.0) / at_cap_1;
        const double r3 = monthly_ce(x, plan, 3.0) / at_cap_3;
        CHECK(r1 == doctest::Approx(r3));
        CHECK(r1 < 1.0);
    }
}

TEST_CASE("estimate_month: projection arithmetic") {
    DailyLedger constant;
    constant.daily_mb.assign(30, 500.0 / 30.0);
    const BundlePlan plan = plan_500mb();
    for (int d : {1, 5, 15, 30})
        CHECK(estimate_month(constant, d, plan) == doctest::Approx(33.33).epsilon(1e-3));

    DailyLedger five;
    five.daily_mb = {16.6666, 16.6666, 16.6666, 16.6666, 16.6666};
    // 6 * 83.333 = 500.0
    CHECK(estimate_month(five, 5, plan) == doctest::Approx(monthly_ce(499.998, plan, 1.0)));

    CHECK_THROWS_AS(estimate_month(five, 6, plan), MissingDays);
    CHECK_THROWS_AS(estimate_month(five, 0, plan), MissingDays);
    CHECK_THROWS_AS(estimate_month(five, 31, plan), MissingDays);
}

TEST_CASE("estimate_month: early days swing the projection harder") {
    const BundlePlan plan = plan_500mb();
    DailyLedger base;
    base.daily_mb.assign(30, 10.0);

    DailyLedger early = base;
    early.daily_mb[0] += 1.0;
    DailyLedger late = base;
    late.daily_mb[29] += 1.0;

    // +1 MB on day 1 moves the day-1 projection by 30 MB; on day 30 by 1 MB.
    const double proj_base_1 = 30.0 * base.daily_mb[0];
    const double proj_early_1 = 30.0 * early.daily_mb[0];
    CHECK(proj_early_1 - proj_base_1 == doctest::Approx(30.0));
    CHECK(estimate_month(early, 1, plan) ==
          doctest::Approx(monthly_ce(proj_base_1 + 30.0, plan, 1.0)));
    CHECK(estimate_month(late, 30, plan) == doctest::Approx(monthly_ce(301.0, plan, 1.0)));
}

TEST_CASE("estimate_month: a full ledger reproduces the actual total") {
    DailyLedger ledger;
    double total = 0.0;
    for (int d = 0; d < 30; ++d) {
        ledger.daily_mb.push_back(10.0 + d % 7);
        total += ledger.daily_mb.back();
    }
    const BundlePlan plan = plan_500mb();
    CHECK(estimate_month(ledger, 30, plan) == doctest::Approx(monthly_ce(total, plan, 1.0)));
}

TEST_CASE("peak_volume: cap for the presets, degenerate plans flagged") {
    CHECK(peak_volume(plan_200mb()).value() == doctest::Approx(200.0));
    CHECK(peak_volume(plan_500mb()).value() == doctest::Approx(500.0));
    CHECK(peak_volume(plan_1gb()).value() == doctest::Approx(1024.0));

    const BundlePlan cheap_overage{"synthetic", 10.0, 100.0, 0.001};
    CHECK(!peak_volume(cheap_overage).has_value());
}

TEST_CASE("preset lookup by name") {
    CHECK(find_preset("singtel_1gb").has_value());
    CHECK(find_preset("singtel_1gb")->cap_mb == doctest::Approx(1024.0));
    CHECK(!find_preset("nope").has_value());
}

TEST_CASE("ledger CSV reading") {
    const std::string path = "longterm_ledger_test.csv";
    {
        std::ofstream out(path);
        out << "day,volume_mb\n1,16.57\n2,18.2\n4,12.0\n";
    }
    const DailyLedger ledger = read_ledger_csv(path, 1.0);
    REQUIRE(ledger.daily_mb.size() == 4);
    CHECK(ledger.daily_mb[0] == doctest::Approx(16.57));
    CHECK(ledger.daily_mb[2] == doctest::Approx(0.0));  // missing day stays empty
    CHECK(ledger.daily_mb[3] == doctest::Approx(12.0));

    {
        std::ofstream out(path);
        out << "day,volume_mb\n40,1.0\n";
    }
    CHECK_THROWS_AS(read_ledger_csv(path, 1.0), std::runtime_error);
    std::remove(path.c_str());
}
