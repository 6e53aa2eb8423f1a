#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cetm::longterm {

// Usage-based monthly bundle: fixed fee up to the cap, linear overage beyond.
struct BundlePlan {
    std::string name;
    double base_cost = 0.0;       // currency for the bundle
    double cap_mb = 0.0;          // included volume
    double overage_per_mb = 0.0;  // currency per MB past the cap
};

// The three Singtel 30-day bundles; overage $0.27 per 10 KB = $27.648 per MB
// (1 MB = 1024 KB).
BundlePlan plan_200mb();
BundlePlan plan_500mb();
BundlePlan plan_1gb();
std::vector<BundlePlan> preset_plans();
std::optional<BundlePlan> find_preset(const std::string& name);

// Daily consumption totals plus the average benefit per MB.
struct DailyLedger {
    std::vector<double> daily_mb;  // up to 30 entries
    double omega_bar = 1.0;
};

struct ZeroVolume : std::domain_error {
    ZeroVolume() : std::domain_error("cost efficiency is undefined at zero volume") {}
};

struct MissingDays : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

double monthly_cost(double volume_mb, const BundlePlan& plan);

// omega_bar * volume / monthly_cost(volume).
double monthly_ce(double volume_mb, const BundlePlan& plan, double omega_bar);

// Projects the month from the first `day` entries (30/d * running total) and
// evaluates the monthly cost efficiency at that projection.
double estimate_month(const DailyLedger& ledger, int day, const BundlePlan& plan);

// The CE-maximizing monthly volume: the cap, whenever overage past the cap
// is dearer than the bundle average. Returns nullopt for degenerate plans
// whose CE keeps growing beyond the cap.
std::optional<double> peak_volume(const BundlePlan& plan);

// Ledger CSV: day,volume_mb with 1-based day indices.
DailyLedger read_ledger_csv(const std::string& path, double omega_bar);

}  // namespace cetm::longterm
