#pragma once

#include <string>
#include <vector>

#include "cetm/dayahead.hpp"
#include "cetm/demand.hpp"
#include "cetm/realtime.hpp"
#include "cetm/scenario.hpp"
#include "cetm/workload.hpp"

namespace cetm::pipeline {

// One line of the indicator table: daily volume, benefit, payment and their
// ratio, plus the solver iteration count where one ran.
struct ReportRow {
    std::string profile;
    double volume_mb = 0.0;
    double benefit = 0.0;
    double payment_cents = 0.0;
    double cost_efficiency = 0.0;
    int iterations = 0;
};

ReportRow make_row(const std::string& name, const dayahead::ScheduledProfile& p);

// Generated (or ingested) scenario data shared by the batch commands.
struct ScenarioInputs {
    workload::RatePlan rates;
    std::vector<workload::DayData> week;   // 7-day history
    demand::BenefitWeights weights;        // from the latest day, overrides applied
    demand::ConsumptionBounds bounds;      // slot-level bounds, app_min unset
    demand::TrafficProfile baseline;       // latest day's profile
    dayahead::PriceCurve prices;
};

ScenarioInputs prepare_inputs(const Scenario& scenario);

// Applies the demand mode (and any configured cycle minimums) on top of the
// slot-level bounds: fixed pins each app's daily total to the baseline,
// elastic opens a +-band window around it.
dayahead::SchedulingProblem make_problem(const Scenario& scenario, const ScenarioInputs& inputs,
                                         DemandMode mode);

struct DayAheadResult {
    ScenarioInputs inputs;
    dayahead::ScheduledProfile unscheduled;
    dayahead::ScheduledProfile ce_fixed;
    dayahead::ScheduledProfile ce_elastic;
    dayahead::ScheduledProfile pm_fixed;
    dayahead::ScheduledProfile pm_elastic;
    std::vector<ReportRow> rows;  // the five profiles above, in order
};

DayAheadResult run_dayahead(const Scenario& scenario);

struct RealtimeRun {
    double ce_managed = 0.0;
    double ce_unmanaged = 0.0;
    double ratio = 0.0;
};

struct RealtimeResult {
    ScenarioInputs inputs;
    dayahead::ScheduledProfile schedule;  // plan the day bought (per demand_mode)
    std::vector<RealtimeRun> runs;
    double fraction_above_one = 0.0;
    double mean_ce_managed = 0.0;
    double mean_ce_unmanaged = 0.0;
    realtime::DayRunResult first_managed;
    realtime::DayRunResult first_unmanaged;
    std::vector<double> first_prices;
    std::vector<ReportRow> rows;  // managed / unmanaged rows for run 0
};

RealtimeResult run_realtime(const Scenario& scenario);

struct LongtermResult {
    std::vector<longterm::BundlePlan> plans;
    std::vector<double> volumes_mb;            // shared curve axis
    std::vector<std::vector<double>> ce;       // [plan][volume]
    longterm::DailyLedger ledger;
    std::vector<double> projected_mb;          // per recorded day
    std::vector<double> estimated_ce;          // per recorded day
};

LongtermResult run_longterm(const Scenario& scenario);

struct LimitedStrategy {
    std::string strategy;          // "lowest_access_frequency" | "lowest_data_demand"
    std::vector<int> managed;      // 0-based apps kept under management
    ReportRow combined;            // scheduled subset + pass-through rest
    demand::TrafficProfile combined_profile;
};

struct LimitedResult {
    ScenarioInputs inputs;
    ReportRow unscheduled;
    std::vector<LimitedStrategy> strategies;
};

LimitedResult run_limited(const Scenario& scenario);

// File emission. out_dir is created when missing; files inside are
// deterministic for a fixed scenario.
void write_dayahead_outputs(const DayAheadResult& result, const Scenario& scenario,
                            const std::string& out_dir);
void write_realtime_outputs(const RealtimeResult& result, const Scenario& scenario,
                            const std::string& out_dir);
void write_longterm_outputs(const LongtermResult& result, const Scenario& scenario,
                            const std::string& out_dir);
void write_limited_outputs(const LimitedResult& result, const Scenario& scenario,
                           const std::string& out_dir);
void write_gen_outputs(const Scenario& scenario, const std::string& out_dir);

}  // namespace cetm::pipeline
