#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cetm/dayahead.hpp"
#include "cetm/demand.hpp"
#include "cetm/realtime.hpp"
#include "cetm/rng.hpp"

namespace cetm::workload {

// Stochastic traffic model of one app: Poisson request arrivals per slot
// with the rate drawn once per scenario from [lambda_fg_lo, lambda_fg_hi],
// background arrivals at bg_ratio times the foreground rate (or an explicit
// range when bg_ratio <= 0), and log-normal per-access volumes matching the
// given mean and variance (both in KB).
struct AppTrafficSpec {
    double lambda_fg_lo = 0.0;
    double lambda_fg_hi = 0.0;
    double lambda_bg_lo = 0.0;
    double lambda_bg_hi = 0.0;
    double bg_ratio = 5.0;
    double mean_volume_kb = 0.0;
    double var_volume_kb2 = 0.0;
};

struct NonpositiveMoments : std::domain_error {
    using std::domain_error::domain_error;
};

// The five reference apps: a heavy chat app, two mid-volume apps, a rare
// bulky one (streaming-like) and a second social app.
std::vector<AppTrafficSpec> default_app_specs();

// Extends the reference specs to `count` apps by cycling them with a
// deterministic multiplicative jitter (synthetic, for wide scenarios).
std::vector<AppTrafficSpec> extend_app_specs(std::vector<AppTrafficSpec> specs, int count,
                                             std::uint64_t seed);

// Per-slot arrival rates, drawn once per scenario and held for the week.
struct RatePlan {
    Matrix lambda_fg;  // K x N
    Matrix lambda_bg;  // K x N
};

RatePlan draw_rates(const std::vector<AppTrafficSpec>& specs, const demand::OperationCycle& cycle,
                    std::uint64_t seed, const std::vector<double>& slot_shape = {});

// Inverts the log-normal moment equations: sigma2 = ln(1 + D/E^2),
// mu = ln E - sigma2/2.
std::pair<double, double> lognormal_params(double mean, double variance);

// One generated day: access counts, the raw request stream (sorted by slot
// and minute) and the per-slot volume aggregate of that stream.
struct DayData {
    demand::AccessHistory history;
    std::vector<realtime::RequestEvent> events;
    demand::TrafficProfile profile;
};

DayData generate_day(const std::vector<AppTrafficSpec>& specs, const RatePlan& rates,
                     const demand::OperationCycle& cycle, std::uint64_t seed);

// Seven generate_day calls with derived sub-seeds; feeds default_bounds.
std::vector<DayData> generate_week(const std::vector<AppTrafficSpec>& specs, const RatePlan& rates,
                                   const demand::OperationCycle& cycle, std::uint64_t seed);

// Real-time prices: an independent uniform draw in [1.0, 1.1] times the
// day-ahead price, per slot.
std::vector<double> realtime_prices(const dayahead::PriceCurve& day_ahead, std::uint64_t seed);

}  // namespace cetm::workload
