#include "cetm/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

namespace cetm::pipeline {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Sub-seed streams: 1 rate draw, 2 history week, then per-run event,
// price and admission streams.
constexpr std::uint64_t kRateStream = 1;
constexpr std::uint64_t kHistoryStream = 2;
constexpr std::uint64_t kEventStream = 20000;
constexpr std::uint64_t kPriceStream = 30000;
constexpr std::uint64_t kAdmissionStream = 40000;

std::string format_cell(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

void write_profile_csv(const fs::path& path, const Matrix& grid) {
    std::ofstream out = open_out(path);
    out << "slot";
    for (std::size_t a = 0; a < grid.cols(); ++a) out << ",app_" << a + 1;
    out << "\n";
    for (std::size_t k = 0; k < grid.rows(); ++k) {
        out << k + 1;
        for (std::size_t a = 0; a < grid.cols(); ++a) out << "," << format_cell(grid(k, a));
        out << "\n";
    }
}

json row_to_json(const ReportRow& row) {
    return json{{"profile", row.profile},
                {"volume_mb", row.volume_mb},
                {"benefit", row.benefit},
                {"payment_cents", row.payment_cents},
                {"cost_efficiency", row.cost_efficiency},
                {"iterations", row.iterations}};
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out = open_out(path);
    out << j.dump(2) << "\n";
}

std::vector<workload::DayData> week_from_csv(const Scenario& scenario) {
    const auto days = demand::read_history_csv(scenario.history_file, scenario.cycle.num_slots,
                                               scenario.num_apps);
    std::vector<workload::DayData> week;
    for (const demand::DailyRecord& rec : days) {
        workload::DayData day;
        day.history = rec.history;
        day.profile = rec.profile;
        week.push_back(std::move(day));
    }
    return week;
}

// Scheduling problem over a subset of apps. Slot caps shrink by whatever the
// unmanaged apps consumed in the baseline, so the combined profile still
// respects the device limit.
dayahead::SchedulingProblem subset_problem(const Scenario& scenario, const ScenarioInputs& inputs,
                                           DemandMode mode, const std::vector<int>& apps) {
    const std::size_t num_slots = inputs.weights.omega.rows();
    const std::size_t total_apps = inputs.weights.omega.cols();
    const std::size_t n = apps.size();

    dayahead::SchedulingProblem sp;
    sp.prices = inputs.prices;
    sp.weights.delta = inputs.weights.delta;
    sp.weights.delta_prime = inputs.weights.delta_prime;
    sp.weights.omega = Matrix(num_slots, n);
    sp.weights.slot_factor = Matrix(num_slots, n);
    sp.weights.app_factor.resize(n);
    sp.bounds.slot_min = Matrix(num_slots, n);
    sp.bounds.slot_max = Matrix(num_slots, n);
    sp.bounds.slot_total_max.resize(num_slots);
    sp.bounds.app_min.resize(n);
    sp.bounds.app_max.resize(n);

    std::vector<bool> managed(total_apps, false);
    for (int a : apps) managed[a] = true;

    for (std::size_t i = 0; i < n; ++i) {
        const int a = apps[i];
        sp.weights.app_factor[i] = inputs.weights.app_factor[a];
        for (std::size_t k = 0; k < num_slots; ++k) {
            sp.weights.omega(k, i) = inputs.weights.omega(k, a);
            sp.weights.slot_factor(k, i) = inputs.weights.slot_factor(k, a);
            sp.bounds.slot_min(k, i) = inputs.bounds.slot_min(k, a);
            sp.bounds.slot_max(k, i) = inputs.bounds.slot_max(k, a);
        }
    }
    for (std::size_t k = 0; k < num_slots; ++k) {
        double cap = inputs.bounds.slot_total_max[k];
        for (std::size_t a = 0; a < total_apps; ++a)
            if (!managed[a]) cap -= inputs.baseline.volume_mb(k, a);
        sp.bounds.slot_total_max[k] = std::max(cap, 0.0);
    }

    const double band = scenario.elastic_band;
    std::vector<double> requested_min(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int a = apps[i];
        const double daily = inputs.baseline.volume_mb.col_sum(a);
        if (mode == DemandMode::Fixed) {
            requested_min[i] = daily;
            sp.bounds.app_max[i] = daily;
        } else {
            requested_min[i] = (1.0 - band) * daily;
            sp.bounds.app_max[i] = (1.0 + band) * daily;
        }
        if (static_cast<std::size_t>(a) < scenario.min_cycle_demand_mb.size())
            requested_min[i] = scenario.min_cycle_demand_mb[a];
        sp.bounds.app_max[i] = std::max(sp.bounds.app_max[i], sp.bounds.slot_min.col_sum(i));
    }
    sp.bounds.app_min = demand::clamped_cycle_demand(sp.bounds, requested_min);
    return sp;
}

std::vector<int> all_apps(std::size_t n) {
    std::vector<int> apps(n);
    std::iota(apps.begin(), apps.end(), 0);
    return apps;
}

struct RealtimeEvaluation {
    double benefit = 0.0;
    double payment_cents = 0.0;
    double ce = 0.0;
};

RealtimeEvaluation evaluate_run(const realtime::DayRunResult& run,
                                const demand::BenefitWeights& weights, double prebuy_cents) {
    RealtimeEvaluation e;
    e.benefit = demand::benefit_of(run.consumed, weights);
    e.payment_cents = prebuy_cents + run.additional_payment_cents;
    e.ce = e.payment_cents > 0.0 ? e.benefit / e.payment_cents : 0.0;
    return e;
}

}  // namespace

ReportRow make_row(const std::string& name, const dayahead::ScheduledProfile& p) {
    ReportRow row;
    row.profile = name;
    row.volume_mb = p.profile.volume_mb.sum();
    row.benefit = p.benefit;
    row.payment_cents = p.payment_cents;
    row.cost_efficiency = p.cost_efficiency;
    row.iterations = p.iterations;
    return row;
}

ScenarioInputs prepare_inputs(const Scenario& scenario) {
    ScenarioInputs inputs;
    inputs.prices.cents_per_mb = scenario.prices_cents_per_mb;
    inputs.rates = workload::draw_rates(scenario.apps, scenario.cycle,
                                        derive_seed(scenario.seed, kRateStream),
                                        scenario.slot_shape);
    if (!scenario.history_file.empty()) {
        inputs.week = week_from_csv(scenario);
    } else {
        inputs.week = workload::generate_week(scenario.apps, inputs.rates, scenario.cycle,
                                              derive_seed(scenario.seed, kHistoryStream));
    }
    inputs.baseline = inputs.week.back().profile;
    inputs.weights =
        demand::benefit_weights(inputs.week.back().history, scenario.delta, scenario.delta_prime);
    for (const WeightOverride& w : scenario.weight_overrides)
        inputs.weights.omega(w.slot - 1, w.app - 1) = w.omega;

    std::vector<demand::TrafficProfile> profiles;
    for (const workload::DayData& day : inputs.week) profiles.push_back(day.profile);
    inputs.bounds = demand::default_bounds(profiles);
    for (const BoundOverride& b : scenario.bound_overrides) {
        if (b.lower) inputs.bounds.slot_min(b.slot - 1, b.app - 1) = *b.lower;
        if (b.upper) inputs.bounds.slot_max(b.slot - 1, b.app - 1) = *b.upper;
    }

    if (inputs.baseline.volume_mb.sum() <= 0.0)
        throw ConfigError("scenario produced an empty baseline day; nothing to schedule");
    return inputs;
}

dayahead::SchedulingProblem make_problem(const Scenario& scenario, const ScenarioInputs& inputs,
                                         DemandMode mode) {
    return subset_problem(scenario, inputs, mode, all_apps(inputs.weights.omega.cols()));
}

DayAheadResult run_dayahead(const Scenario& scenario) {
    DayAheadResult result;
    result.inputs = prepare_inputs(scenario);

    const dayahead::SchedulingProblem fixed =
        make_problem(scenario, result.inputs, DemandMode::Fixed);
    const dayahead::SchedulingProblem elastic =
        make_problem(scenario, result.inputs, DemandMode::Elastic);

    result.unscheduled = dayahead::evaluate_profile(result.inputs.baseline, result.inputs.weights,
                                                    result.inputs.prices);
    result.ce_fixed = dayahead::schedule(fixed, scenario.strict_paper_matrix);
    result.ce_elastic = dayahead::schedule(elastic, scenario.strict_paper_matrix);
    result.pm_fixed = dayahead::schedule_pm(fixed, scenario.eta, scenario.strict_paper_matrix);
    result.pm_elastic = dayahead::schedule_pm(elastic, scenario.eta, scenario.strict_paper_matrix);

    result.rows = {make_row("unscheduled", result.unscheduled),
                   make_row("ce_fixed", result.ce_fixed),
                   make_row("ce_elastic", result.ce_elastic),
                   make_row("pm_fixed", result.pm_fixed),
                   make_row("pm_elastic", result.pm_elastic)};
    return result;
}

RealtimeResult run_realtime(const Scenario& scenario) {
    RealtimeResult result;
    result.inputs = prepare_inputs(scenario);
    result.schedule = dayahead::schedule(
        make_problem(scenario, result.inputs, scenario.demand_mode), scenario.strict_paper_matrix);

    const int runs = scenario.events_file.empty() ? scenario.runs : 1;
    const demand::BenefitWeights& weights = result.inputs.weights;
    const double prebuy = result.schedule.payment_cents;

    realtime::SimulationOptions managed_options;
    managed_options.admission = realtime::calibrate_admission(scenario.kappa);
    managed_options.managed = true;
    managed_options.allow_overage = scenario.overage_permission;

    realtime::SimulationOptions open_options = managed_options;
    open_options.managed = false;

    int above_one = 0;
    double sum_managed = 0.0, sum_unmanaged = 0.0;
    for (int r = 0; r < runs; ++r) {
        std::vector<realtime::RequestEvent> events;
        if (!scenario.events_file.empty()) {
            events = realtime::read_events_csv(scenario.events_file, scenario.cycle.num_slots,
                                               scenario.num_apps);
        } else {
            events = workload::generate_day(scenario.apps, result.inputs.rates, scenario.cycle,
                                            derive_seed(scenario.seed, kEventStream + r))
                         .events;
        }
        const std::vector<double> prices = workload::realtime_prices(
            result.inputs.prices, derive_seed(scenario.seed, kPriceStream + r));

        realtime::SimulationOptions run_options = managed_options;
        run_options.log_decisions = scenario.decision_log && r == 0;
        RandomEngine rng = make_engine(scenario.seed, kAdmissionStream + r);
        const realtime::DayRunResult managed = realtime::simulate_day(
            result.schedule.profile, weights.omega, prices, events, run_options, rng);
        RandomEngine rng_open = make_engine(scenario.seed, kAdmissionStream + r);
        const realtime::DayRunResult unmanaged = realtime::simulate_day(
            result.schedule.profile, weights.omega, prices, events, open_options, rng_open);

        const RealtimeEvaluation em = evaluate_run(managed, weights, prebuy);
        const RealtimeEvaluation eu = evaluate_run(unmanaged, weights, prebuy);
        RealtimeRun run;
        run.ce_managed = em.ce;
        run.ce_unmanaged = eu.ce;
        run.ratio = eu.ce > 0.0 ? em.ce / eu.ce : (em.ce > 0.0 ? 2.0 : 1.0);
        result.runs.push_back(run);
        sum_managed += em.ce;
        sum_unmanaged += eu.ce;
        if (run.ratio > 1.0) ++above_one;

        if (r == 0) {
            result.first_managed = managed;
            result.first_unmanaged = unmanaged;
            result.first_prices = prices;
            ReportRow managed_row;
            managed_row.profile = "realtime_managed";
            managed_row.volume_mb = managed.consumed.volume_mb.sum();
            managed_row.benefit = em.benefit;
            managed_row.payment_cents = em.payment_cents;
            managed_row.cost_efficiency = em.ce;
            ReportRow open_row;
            open_row.profile = "realtime_unmanaged";
            open_row.volume_mb = unmanaged.consumed.volume_mb.sum();
            open_row.benefit = eu.benefit;
            open_row.payment_cents = eu.payment_cents;
            open_row.cost_efficiency = eu.ce;
            result.rows = {managed_row, open_row};
        }
    }
    result.fraction_above_one = static_cast<double>(above_one) / runs;
    result.mean_ce_managed = sum_managed / runs;
    result.mean_ce_unmanaged = sum_unmanaged / runs;
    return result;
}

LongtermResult run_longterm(const Scenario& scenario) {
    LongtermResult result;
    result.plans = longterm::preset_plans();
    if (!longterm::find_preset(scenario.plan.name)) result.plans.push_back(scenario.plan);

    double max_cap = 0.0;
    for (const longterm::BundlePlan& plan : result.plans) max_cap = std::max(max_cap, plan.cap_mb);
    const double step = 10.0;
    for (double v = step; v <= 1.4 * max_cap + step / 2.0; v += step)
        result.volumes_mb.push_back(v);
    for (const longterm::BundlePlan& plan : result.plans)  // peaks sit exactly at the caps
        result.volumes_mb.push_back(plan.cap_mb);
    std::sort(result.volumes_mb.begin(), result.volumes_mb.end());
    result.volumes_mb.erase(std::unique(result.volumes_mb.begin(), result.volumes_mb.end()),
                            result.volumes_mb.end());
    for (const longterm::BundlePlan& plan : result.plans) {
        std::vector<double> curve;
        curve.reserve(result.volumes_mb.size());
        for (double v : result.volumes_mb)
            curve.push_back(longterm::monthly_ce(v, plan, scenario.omega_bar));
        result.ce.push_back(std::move(curve));
    }

    result.ledger.omega_bar = scenario.omega_bar;
    if (!scenario.ledger_file.empty()) {
        result.ledger = longterm::read_ledger_csv(scenario.ledger_file, scenario.omega_bar);
        if (result.ledger.daily_mb.size() > 30) result.ledger.daily_mb.resize(30);
    } else if (!scenario.ledger_mb.empty()) {
        result.ledger.daily_mb = scenario.ledger_mb;
        if (result.ledger.daily_mb.size() > 30) result.ledger.daily_mb.resize(30);
    } else {
        result.ledger.daily_mb.assign(30, scenario.plan.cap_mb / 30.0);
    }
    double running = 0.0;
    for (std::size_t d = 1; d <= result.ledger.daily_mb.size(); ++d) {
        running += result.ledger.daily_mb[d - 1];
        result.projected_mb.push_back(30.0 / static_cast<double>(d) * running);
        result.estimated_ce.push_back(
            longterm::estimate_month(result.ledger, static_cast<int>(d), scenario.plan));
    }
    return result;
}

LimitedResult run_limited(const Scenario& scenario) {
    LimitedResult result;
    result.inputs = prepare_inputs(scenario);
    const std::size_t total = result.inputs.weights.omega.cols();
    const int keep = scenario.max_apps == 0 ? static_cast<int>(total) : scenario.max_apps;

    result.unscheduled = make_row(
        "unscheduled", dayahead::evaluate_profile(result.inputs.baseline, result.inputs.weights,
                                                  result.inputs.prices));

    const auto run_strategy = [&](const std::string& name, const std::vector<double>& metric) {
        std::vector<int> order(total);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int l, int r) { return metric[l] < metric[r]; });
        std::vector<int> managed(order.begin() + (total - keep), order.end());
        std::sort(managed.begin(), managed.end());

        const dayahead::SchedulingProblem sp =
            subset_problem(scenario, result.inputs, scenario.demand_mode, managed);
        const dayahead::ScheduledProfile scheduled =
            dayahead::schedule(sp, scenario.strict_paper_matrix);

        demand::TrafficProfile combined = result.inputs.baseline;
        for (std::size_t i = 0; i < managed.size(); ++i)
            for (std::size_t k = 0; k < combined.volume_mb.rows(); ++k)
                combined.volume_mb(k, managed[i]) = scheduled.profile.volume_mb(k, i);

        LimitedStrategy strategy;
        strategy.strategy = name;
        strategy.managed = managed;
        strategy.combined = make_row(
            name, dayahead::evaluate_profile(combined, result.inputs.weights,
                                             result.inputs.prices));
        strategy.combined.iterations = scheduled.iterations;
        strategy.combined_profile = std::move(combined);
        return strategy;
    };

    std::vector<double> frequency(total), volume(total);
    for (std::size_t a = 0; a < total; ++a) {
        frequency[a] = result.inputs.week.back().history.foreground.col_sum(a);
        volume[a] = result.inputs.baseline.volume_mb.col_sum(a);
    }
    result.strategies.push_back(run_strategy("lowest_access_frequency", frequency));
    result.strategies.push_back(run_strategy("lowest_data_demand", volume));
    return result;
}

void write_dayahead_outputs(const DayAheadResult& result, const Scenario& scenario,
                            const std::string& out_dir) {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    json rows = json::array();
    for (const ReportRow& row : result.rows) rows.push_back(row_to_json(row));
    write_json(dir / "dayahead_report.json",
               json{{"scenario", scenario_to_json(scenario)},
                    {"rows", rows},
                    {"ce_fixed_trace", result.ce_fixed.objective_trace},
                    {"ce_elastic_trace", result.ce_elastic.objective_trace}});

    write_profile_csv(dir / "profile_unscheduled.csv", result.unscheduled.profile.volume_mb);
    write_profile_csv(dir / "profile_ce_fixed.csv", result.ce_fixed.profile.volume_mb);
    write_profile_csv(dir / "profile_ce_elastic.csv", result.ce_elastic.profile.volume_mb);
    write_profile_csv(dir / "profile_pm_fixed.csv", result.pm_fixed.profile.volume_mb);
    write_profile_csv(dir / "profile_pm_elastic.csv", result.pm_elastic.profile.volume_mb);

    if (scenario.dump_solver_trace) {
        fracprog::write_trace_csv(result.ce_fixed.solver, (dir / "trace_ce_fixed.csv").string());
        fracprog::write_trace_csv(result.ce_elastic.solver,
                                  (dir / "trace_ce_elastic.csv").string());
    }
}

void write_realtime_outputs(const RealtimeResult& result, const Scenario& scenario,
                            const std::string& out_dir) {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    json rows = json::array();
    for (const ReportRow& row : result.rows) rows.push_back(row_to_json(row));
    write_json(dir / "realtime_report.json",
               json{{"scenario", scenario_to_json(scenario)},
                    {"runs", result.runs.size()},
                    {"kappa", scenario.kappa},
                    {"fraction_ratio_above_one", result.fraction_above_one},
                    {"mean_ce_managed", result.mean_ce_managed},
                    {"mean_ce_unmanaged", result.mean_ce_unmanaged},
                    {"schedule", row_to_json(make_row("prebought_schedule", result.schedule))},
                    {"first_run_rows", rows}});

    {
        std::ofstream out = open_out(dir / "ratios.csv");
        out << "run,ce_managed,ce_unmanaged,ratio\n";
        for (std::size_t r = 0; r < result.runs.size(); ++r) {
            out << r + 1 << "," << format_cell(result.runs[r].ce_managed) << ","
                << format_cell(result.runs[r].ce_unmanaged) << ","
                << format_cell(result.runs[r].ratio) << "\n";
        }
    }
    {
        // Plot-ready distribution of the managed/unmanaged CE ratio.
        double lo = result.runs.front().ratio, hi = lo;
        for (const RealtimeRun& run : result.runs) {
            lo = std::min(lo, run.ratio);
            hi = std::max(hi, run.ratio);
        }
        const int bins = 20;
        const double width = hi > lo ? (hi - lo) / bins : 1.0;
        std::vector<int> counts(bins, 0);
        for (const RealtimeRun& run : result.runs) {
            int b = static_cast<int>((run.ratio - lo) / width);
            counts[std::clamp(b, 0, bins - 1)] += 1;
        }
        std::ofstream out = open_out(dir / "ratio_histogram.csv");
        out << "bin_low,bin_high,count\n";
        for (int b = 0; b < bins; ++b)
            out << format_cell(lo + b * width) << "," << format_cell(lo + (b + 1) * width) << ","
                << counts[b] << "\n";
    }

    write_profile_csv(dir / "consumed_managed.csv", result.first_managed.consumed.volume_mb);
    write_profile_csv(dir / "consumed_unmanaged.csv", result.first_unmanaged.consumed.volume_mb);
    write_json(dir / "billing.json",
               json{{"prebuy_payment_cents", result.schedule.payment_cents},
                    {"additional_managed_cents", result.first_managed.additional_payment_cents},
                    {"additional_unmanaged_cents",
                     result.first_unmanaged.additional_payment_cents},
                    {"realtime_prices_cents_per_mb", result.first_prices}});

    if (scenario.decision_log) {
        std::ofstream out = open_out(dir / "decisions.csv");
        out << "slot,minute,app,kind,volume_mb,decision,probability\n";
        for (const realtime::DecisionRecord& rec : result.first_managed.decisions) {
            out << rec.slot + 1 << "," << format_cell(rec.minute) << "," << rec.app + 1 << ","
                << realtime::to_string(rec.kind) << "," << format_cell(rec.volume_mb) << ","
                << realtime::to_string(rec.decision) << "," << format_cell(rec.probability)
                << "\n";
        }
    }
}

void write_longterm_outputs(const LongtermResult& result, const Scenario& scenario,
                            const std::string& out_dir) {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    {
        std::ofstream out = open_out(dir / "ce_curve.csv");
        out << "volume_mb";
        for (const longterm::BundlePlan& plan : result.plans) out << "," << plan.name;
        out << "\n";
        for (std::size_t i = 0; i < result.volumes_mb.size(); ++i) {
            out << format_cell(result.volumes_mb[i]);
            for (std::size_t p = 0; p < result.plans.size(); ++p)
                out << "," << format_cell(result.ce[p][i]);
            out << "\n";
        }
    }
    {
        std::ofstream out = open_out(dir / "estimate.csv");
        out << "day,projected_volume_mb,estimated_ce\n";
        for (std::size_t d = 0; d < result.estimated_ce.size(); ++d)
            out << d + 1 << "," << format_cell(result.projected_mb[d]) << ","
                << format_cell(result.estimated_ce[d]) << "\n";
    }

    json plans = json::array();
    for (const longterm::BundlePlan& plan : result.plans) {
        const auto peak = longterm::peak_volume(plan);
        plans.push_back({{"name", plan.name},
                         {"base_cost", plan.base_cost},
                         {"cap_mb", plan.cap_mb},
                         {"overage_per_mb", plan.overage_per_mb},
                         {"peak_volume_mb", peak ? json(*peak) : json()},
                         {"ce_at_cap",
                          longterm::monthly_ce(plan.cap_mb, plan, scenario.omega_bar)}});
    }
    write_json(dir / "longterm_report.json",
               json{{"scenario", scenario_to_json(scenario)}, {"plans", plans}});
}

void write_limited_outputs(const LimitedResult& result, const Scenario& scenario,
                           const std::string& out_dir) {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    json strategies = json::array();
    for (const LimitedStrategy& s : result.strategies) {
        json managed = json::array();
        for (int a : s.managed) managed.push_back(a + 1);
        strategies.push_back({{"strategy", s.strategy},
                              {"managed_apps", managed},
                              {"row", row_to_json(s.combined)}});
    }
    write_json(dir / "limited_report.json",
               json{{"scenario", scenario_to_json(scenario)},
                    {"unscheduled", row_to_json(result.unscheduled)},
                    {"strategies", strategies}});

    std::ofstream out = open_out(dir / "limited.csv");
    out << "strategy,managed_apps,volume_mb,benefit,payment_cents,cost_efficiency\n";
    for (const LimitedStrategy& s : result.strategies) {
        out << s.strategy << "," << s.managed.size() << "," << format_cell(s.combined.volume_mb)
            << "," << format_cell(s.combined.benefit) << ","
            << format_cell(s.combined.payment_cents) << ","
            << format_cell(s.combined.cost_efficiency) << "\n";
    }
}

void write_gen_outputs(const Scenario& scenario, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    const ScenarioInputs inputs = prepare_inputs(scenario);

    std::vector<demand::DailyRecord> records;
    for (const workload::DayData& day : inputs.week)
        records.push_back({day.history, day.profile});
    demand::write_history_csv(records, (dir / "history.csv").string());

    const workload::DayData next_day =
        workload::generate_day(scenario.apps, inputs.rates, scenario.cycle,
                               derive_seed(scenario.seed, kEventStream));
    realtime::write_events_csv(next_day.events, (dir / "events.csv").string());

    const std::vector<double> prices = workload::realtime_prices(
        inputs.prices, derive_seed(scenario.seed, kPriceStream));
    {
        std::ofstream out = open_out(dir / "realtime_prices.csv");
        out << "slot,price_cents_per_mb\n";
        for (std::size_t k = 0; k < prices.size(); ++k)
            out << k + 1 << "," << format_cell(prices[k]) << "\n";
    }

    json lambda_fg = json::array(), lambda_bg = json::array();
    for (std::size_t k = 0; k < inputs.rates.lambda_fg.rows(); ++k) {
        json fg_row = json::array(), bg_row = json::array();
        for (std::size_t a = 0; a < inputs.rates.lambda_fg.cols(); ++a) {
            fg_row.push_back(inputs.rates.lambda_fg(k, a));
            bg_row.push_back(inputs.rates.lambda_bg(k, a));
        }
        lambda_fg.push_back(fg_row);
        lambda_bg.push_back(bg_row);
    }
    write_json(dir / "gen_report.json", json{{"scenario", scenario_to_json(scenario)},
                                             {"lambda_fg", lambda_fg},
                                             {"lambda_bg", lambda_bg}});
}

}  // namespace cetm::pipeline
