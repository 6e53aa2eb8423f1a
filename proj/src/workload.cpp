#include "cetm/workload.hpp"

#include <algorithm>
#include <cmath>

namespace cetm::workload {

namespace {
constexpr double kKbPerMb = 1024.0;
}

std::vector<AppTrafficSpec> default_app_specs() {
    //                     fg_lo fg_hi bg_lo bg_hi ratio mean_kb var_kb2
    return {
        AppTrafficSpec{3.0, 9.0, 3.0, 30.0, 5.0, 100.0, 1e4},
        AppTrafficSpec{0.0, 2.0, 0.0, 8.0, 5.0, 50.0, 900.0},
        AppTrafficSpec{0.0, 1.0, 0.0, 4.0, 5.0, 200.0, 1e4},
        AppTrafficSpec{0.0, 0.15, 0.0, 0.6, 5.0, 10000.0, 9e6},
        AppTrafficSpec{0.0, 2.0, 0.0, 8.0, 5.0, 200.0, 4e4},
    };
}

std::vector<AppTrafficSpec> extend_app_specs(std::vector<AppTrafficSpec> specs, int count,
                                             std::uint64_t seed) {
    if (specs.empty()) throw std::invalid_argument("extend_app_specs: no base specs");
    RandomEngine rng = make_engine(seed, 7);
    const std::size_t base = specs.size();
    while (static_cast<int>(specs.size()) < count) {
        AppTrafficSpec spec = specs[specs.size() % base];
        const double jitter = uniform_in(rng, 0.7, 1.3);
        spec.lambda_fg_lo *= jitter;
        spec.lambda_fg_hi *= jitter;
        spec.lambda_bg_lo *= jitter;
        spec.lambda_bg_hi *= jitter;
        spec.mean_volume_kb *= uniform_in(rng, 0.8, 1.2);
        specs.push_back(spec);
    }
    specs.resize(count);
    return specs;
}

RatePlan draw_rates(const std::vector<AppTrafficSpec>& specs, const demand::OperationCycle& cycle,
                    std::uint64_t seed, const std::vector<double>& slot_shape) {
    if (specs.empty()) throw std::invalid_argument("draw_rates: no app specs");
    const std::size_t num_slots = static_cast<std::size_t>(cycle.num_slots);
    const std::size_t num_apps = specs.size();
    if (!slot_shape.empty() && slot_shape.size() != num_slots)
        throw DimensionMismatch("draw_rates: slot shape length does not match cycle");

    RatePlan plan;
    plan.lambda_fg = Matrix(num_slots, num_apps);
    plan.lambda_bg = Matrix(num_slots, num_apps);
    RandomEngine rng = make_engine(seed, 11);
    for (std::size_t a = 0; a < num_apps; ++a) {
        const AppTrafficSpec& spec = specs[a];
        for (std::size_t k = 0; k < num_slots; ++k) {
            const double shape = slot_shape.empty() ? 1.0 : slot_shape[k];
            const double fg = uniform_in(rng, spec.lambda_fg_lo, spec.lambda_fg_hi) * shape;
            const double bg = spec.bg_ratio > 0.0
                                  ? spec.bg_ratio * fg
                                  : uniform_in(rng, spec.lambda_bg_lo, spec.lambda_bg_hi) * shape;
            plan.lambda_fg(k, a) = fg;
            plan.lambda_bg(k, a) = bg;
        }
    }
    return plan;
}

std::pair<double, double> lognormal_params(double mean, double variance) {
    if (mean <= 0.0 || variance <= 0.0)
        throw NonpositiveMoments("lognormal_params: mean and variance must be positive");
    const double sigma2 = std::log(1.0 + variance / (mean * mean));
    const double mu = std::log(mean) - sigma2 / 2.0;
    return {mu, sigma2};
}

DayData generate_day(const std::vector<AppTrafficSpec>& specs, const RatePlan& rates,
                     const demand::OperationCycle& cycle, std::uint64_t seed) {
    if (specs.empty()) throw std::invalid_argument("generate_day: no app specs");
    const std::size_t num_slots = static_cast<std::size_t>(cycle.num_slots);
    const std::size_t num_apps = specs.size();
    if (rates.lambda_fg.rows() != num_slots || rates.lambda_fg.cols() != num_apps)
        throw DimensionMismatch("generate_day: rate plan does not match specs and cycle");

    std::vector<std::pair<double, double>> volume_params(num_apps);
    for (std::size_t a = 0; a < num_apps; ++a)
        volume_params[a] = lognormal_params(specs[a].mean_volume_kb, specs[a].var_volume_kb2);

    DayData day;
    day.history.foreground = Matrix(num_slots, num_apps);
    day.history.background = Matrix(num_slots, num_apps);
    day.profile.volume_mb = Matrix(num_slots, num_apps);

    RandomEngine rng = make_engine(seed, 13);
    const double minutes = static_cast<double>(cycle.slot_minutes);
    for (std::size_t k = 0; k < num_slots; ++k) {
        const std::size_t slot_begin = day.events.size();
        for (std::size_t a = 0; a < num_apps; ++a) {
            const int n_fg = draw_poisson(rng, rates.lambda_fg(k, a));
            const int n_bg = draw_poisson(rng, rates.lambda_bg(k, a));
            day.history.foreground(k, a) = n_fg;
            day.history.background(k, a) = n_bg;
            for (int i = 0; i < n_fg + n_bg; ++i) {
                realtime::RequestEvent ev;
                ev.slot = static_cast<int>(k);
                ev.app = static_cast<int>(a);
                ev.minute = uniform_in(rng, 0.0, minutes);
                ev.volume_mb =
                    draw_lognormal(rng, volume_params[a].first, volume_params[a].second) / kKbPerMb;
                ev.kind = i < n_fg ? realtime::RequestKind::Foreground
                                   : realtime::RequestKind::Background;
                day.events.push_back(ev);
            }
        }
        std::stable_sort(day.events.begin() + slot_begin, day.events.end(),
                         [](const realtime::RequestEvent& l, const realtime::RequestEvent& r) {
                             return l.minute < r.minute;
                         });
    }
    // Aggregate in emission order so summing the stream reproduces the
    // profile bit for bit.
    for (const realtime::RequestEvent& ev : day.events)
        day.profile.volume_mb(ev.slot, ev.app) += ev.volume_mb;
    return day;
}

std::vector<DayData> generate_week(const std::vector<AppTrafficSpec>& specs, const RatePlan& rates,
                                   const demand::OperationCycle& cycle, std::uint64_t seed) {
    std::vector<DayData> week;
    week.reserve(7);
    for (int d = 0; d < 7; ++d)
        week.push_back(generate_day(specs, rates, cycle, derive_seed(seed, 100 + d)));
    return week;
}

std::vector<double> realtime_prices(const dayahead::PriceCurve& day_ahead, std::uint64_t seed) {
    std::vector<double> prices(day_ahead.cents_per_mb.size());
    RandomEngine rng = make_engine(seed, 17);
    for (std::size_t k = 0; k < prices.size(); ++k)
        prices[k] = uniform_in(rng, 1.0, 1.1) * day_ahead.cents_per_mb[k];
    return prices;
}

}  // namespace cetm::workload
