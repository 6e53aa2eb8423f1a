#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cetm/demand.hpp"
#include "cetm/matrix.hpp"
#include "cetm/rng.hpp"

namespace cetm::realtime {

// Shape parameters of the background-admission probability. kappa > 0
// switches to the slack form that admits everything while the consumed
// fraction stays at or below kappa.
struct AdmissionParams {
    double m1 = 0.0;  // per-minute slope of the exponent
    double m2 = 0.0;  // exponent at the start of the slot
    double kappa = 0.0;
};

// Pins the exponent to the two calibration points: acceptance is a small
// probability event (0.05) at half consumption right at the slot start, and
// a large one (0.95) at 90% consumption when the hour is over.
AdmissionParams calibrate_admission(double kappa = 0.0);

// Probability of granting a background request given consumed MB, allocated
// MB and minutes elapsed in the slot. Zero allocation yields probability 0.
double accept_probability(double consumed, double allocated, double minutes,
                          const AdmissionParams& params);

enum class RequestKind { Foreground, Background };

struct RequestEvent {
    int slot = 0;          // 0-based
    double minute = 0.0;   // [0, 60)
    int app = 0;           // 0-based
    double volume_mb = 0.0;
    RequestKind kind = RequestKind::Foreground;
};

// Per-slot ledger while a slot is being consumed.
struct SlotState {
    int slot = 0;
    std::vector<double> allocated;  // current plan (may be reallocated), MB
    std::vector<double> consumed;   // MB
    std::vector<double> prebought;  // plan as purchased day-ahead, MB
    std::vector<double> overage;    // MB consumed beyond the allocation
    double elapsed_min = 0.0;
    double realtime_price = 0.0;    // cents per MB
};

struct UndefinedAtZeroElapsed : std::domain_error {
    UndefinedAtZeroElapsed()
        : std::domain_error("consumption-rate extrapolation is undefined at t = 0") {}
};

struct InfeasibleRebounds : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// New per-app bounds for the in-slot reallocation, rebuilt around the
// exhausted app's consumption rate. NoVolume means the slot has nothing left
// to shuffle and the caller must fall back to real-time purchase.
struct BoundsReset {
    enum class Status { Ok, NoVolume };
    Status status = Status::NoVolume;
    std::vector<double> lower;
    std::vector<double> upper;
};

BoundsReset reset_bounds(const SlotState& state, int exhausted_app,
                         std::span<const double> omega_slot, double t_minutes);

// Redistributes the slot total under the reset bounds, favouring high-omega
// apps. Greedy descending-omega fill is optimal for this LP; ties resolve to
// the lowest app index. The returned allocation preserves the slot total
// exactly.
std::vector<double> reallocate(const SlotState& state, const BoundsReset& bounds,
                               std::span<const double> omega_slot);

// Additional payment for the slot: real-time price on consumption beyond the
// pre-bought slot total, never negative.
double bill_slot(const SlotState& state, double realtime_price);

enum class Decision { Admitted, AdmittedAfterReallocation, AdmittedOverage, Denied };

const char* to_string(Decision d);
const char* to_string(RequestKind k);

// One request against the slot ledger. Background requests are admitted with
// accept_probability while they fit in the remaining allocation and denied
// otherwise. Foreground requests are admitted directly when they fit; when
// they do not and overage is allowed, slot volume is rebalanced towards the
// requesting app, and whatever cannot be covered is consumed at the
// real-time price.
Decision handle_request(SlotState& state, const RequestEvent& ev, RandomEngine& rng,
                        const AdmissionParams& params, std::span<const double> omega_slot,
                        bool allow_overage, double* probability_out = nullptr);

struct DecisionRecord {
    int slot = 0;
    double minute = 0.0;
    int app = 0;
    RequestKind kind = RequestKind::Foreground;
    double volume_mb = 0.0;
    Decision decision = Decision::Denied;
    double probability = 1.0;
};

struct SimulationOptions {
    AdmissionParams admission;
    bool managed = true;        // false: admit everything (no draws)
    bool allow_overage = true;  // user permission for extra foreground volume
    bool log_decisions = false;
};

struct DayRunResult {
    demand::TrafficProfile consumed;   // K x N
    Matrix overage_mb;                 // K x N
    double additional_payment_cents = 0.0;
    std::vector<DecisionRecord> decisions;
};

// Plays a day of requests against the pre-scheduled plan. omega carries the
// day-ahead benefit weights used when a slot has to be rebalanced. Events
// must be sorted by (slot, minute). Deterministic for a given engine state.
DayRunResult simulate_day(const demand::TrafficProfile& plan, const Matrix& omega,
                          const std::vector<double>& realtime_prices,
                          std::span<const RequestEvent> events, const SimulationOptions& options,
                          RandomEngine& rng);

// Event CSV: minute,slot,app,volume_mb,kind with 1-based slot/app indices.
std::vector<RequestEvent> read_events_csv(const std::string& path, int num_slots, int num_apps);
void write_events_csv(std::span<const RequestEvent> events, const std::string& path);

}  // namespace cetm::realtime
