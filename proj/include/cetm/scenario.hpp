#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cetm/demand.hpp"
#include "cetm/longterm.hpp"
#include "cetm/workload.hpp"

namespace cetm::pipeline {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class DemandMode { Fixed, Elastic };

struct WeightOverride {
    int slot = 1;  // 1-based, as in the config file
    int app = 1;
    double omega = 1.0;
};

struct BoundOverride {
    int slot = 1;
    int app = 1;
    std::optional<double> lower;
    std::optional<double> upper;
};

// Everything one batch run needs, validated up front. Defaults mirror the
// reference simulation setup: 24 hourly slots, five apps, delta 0.1,
// delta' 0.5, eta 0.2, background at five times foreground.
struct Scenario {
    demand::OperationCycle cycle;
    int num_apps = 5;
    std::vector<workload::AppTrafficSpec> apps;  // resolved, size num_apps
    std::vector<double> prices_cents_per_mb;     // size num_slots
    double delta = 0.1;
    double delta_prime = 0.5;
    double eta = 0.2;
    double kappa = 0.0;
    bool overage_permission = true;
    DemandMode demand_mode = DemandMode::Elastic;
    double elastic_band = 0.10;
    longterm::BundlePlan plan;
    double omega_bar = 1.0;
    std::uint64_t seed = 42;
    int runs = 1000;
    bool strict_paper_matrix = false;  // drop the per-app cycle-cap row group
    int max_apps = 0;                  // limited subcommand; 0 keeps all apps
    std::vector<double> min_cycle_demand_mb;     // optional per-app cycle minimum
    std::vector<WeightOverride> weight_overrides;
    std::vector<BoundOverride> bound_overrides;
    std::vector<double> ledger_mb;   // long-term daily volumes
    std::string ledger_file;         // or a day,volume_mb CSV
    std::vector<double> slot_shape;  // optional arrival-rate multipliers
    std::string history_file;        // optional CSV inputs instead of generation
    std::string events_file;
    bool decision_log = false;
    bool dump_solver_trace = false;
    std::string out_dir = "out";  // default output directory; CLI --out overrides
};

// Off-peak 1 cent/MB overnight, 2 cents/MB over hours 9-22.
std::vector<double> default_price_curve(int num_slots);

Scenario default_scenario();
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);
nlohmann::json scenario_to_json(const Scenario& s);

// Field-level checks; throws ConfigError naming the offending field.
void validate_scenario(const Scenario& s);

}  // namespace cetm::pipeline
