#pragma once

#include <string>
#include <vector>

#include "cetm/matrix.hpp"

namespace cetm::demand {

// The scheduling horizon: K time slots of fixed length.
struct OperationCycle {
    int num_slots = 24;
    int slot_minutes = 60;
};

// Per-slot, per-app access counts. foreground holds user-initiated
// activations; background holds requests issued by background processes.
struct AccessHistory {
    Matrix foreground;  // K x N
    Matrix background;  // K x N
};

// Per-app, per-slot data volumes in MB.
struct TrafficProfile {
    Matrix volume_mb;  // K x N
};

// Benefit valuation weights: omega(k, a) = app_factor[a] * slot_factor(k, a),
// each factor in (0, 1] with floors delta (slot) and delta_prime (app).
struct BenefitWeights {
    Matrix omega;                    // K x N
    std::vector<double> app_factor;  // N
    Matrix slot_factor;              // K x N
    double delta = 0.1;
    double delta_prime = 0.5;
};

// Consumption bounds in MB. app_min is the per-cycle minimum demand the user
// supplies; it is left empty by default_bounds.
struct ConsumptionBounds {
    Matrix slot_min;                     // K x N
    Matrix slot_max;                     // K x N
    std::vector<double> slot_total_max;  // K, cap on the device total per slot
    std::vector<double> app_min;         // N, user input
    std::vector<double> app_max;         // N
};

// Relative weight of each slot's access count within one app's day. The
// exponent compares the count variance against a uniform distribution over
// the observed range; low variance sharpens the weighting, high variance
// flattens it. Values lie in [delta, 1] with 1 at the most-accessed slot.
std::vector<double> iota_slot(const std::vector<double>& tau_row, double delta);

// Same functional form across apps, applied to per-cycle totals. A device
// with no recorded accesses at all floors every factor at delta_prime.
std::vector<double> iota_app(const std::vector<double>& tau_totals, double delta_prime);

// Composes the two factors from the latest day's foreground access counts.
BenefitWeights benefit_weights(const AccessHistory& history, double delta, double delta_prime);

// Default bounds from up to 7 daily profiles: componentwise min/max for the
// slot bounds, max of daily totals for the slot and app caps. app_min stays
// empty; see clamped_cycle_demand.
ConsumptionBounds default_bounds(const std::vector<TrafficProfile>& week);

// Clamps a requested per-cycle minimum demand into the feasible interval
// [sum of slot minimums, app maximum].
std::vector<double> clamped_cycle_demand(const ConsumptionBounds& bounds,
                                         const std::vector<double>& requested);

// Total benefit sum over omega(k, a) * x(k, a).
double benefit_of(const TrafficProfile& profile, const BenefitWeights& weights);

// History CSV: day,slot,app,foreground_accesses,background_accesses,volume_mb
// (1-based day/slot/app indices).
struct DailyRecord {
    AccessHistory history;
    TrafficProfile profile;
};
std::vector<DailyRecord> read_history_csv(const std::string& path, int num_slots, int num_apps);
void write_history_csv(const std::vector<DailyRecord>& days, const std::string& path);

// Boundary refresh: appends the day just consumed and keeps the latest 7
// days, the window default_bounds reads.
std::vector<DailyRecord> roll_history(std::vector<DailyRecord> days, DailyRecord latest);

}  // namespace cetm::demand
