#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cetm/demand.hpp"
#include "cetm/fracprog.hpp"

namespace cetm::dayahead {

// Ex-ante unit prices, one per slot, in cents per MB.
struct PriceCurve {
    std::vector<double> cents_per_mb;
};

// Everything the day-ahead optimizer needs. bounds.app_min must be set.
struct SchedulingProblem {
    demand::BenefitWeights weights;
    PriceCurve prices;
    demand::ConsumptionBounds bounds;
};

struct ScheduledProfile {
    demand::TrafficProfile profile;
    double benefit = 0.0;
    double payment_cents = 0.0;
    double cost_efficiency = 0.0;
    int iterations = 0;
    std::vector<double> objective_trace;
    fracprog::LfpSolution solver;  // full iteration detail for trace dumps
};

struct InfeasibleBounds : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SolveFailure : std::runtime_error {
    explicit SolveFailure(fracprog::LfpStatus s)
        : std::runtime_error(std::string("day-ahead solve failed: ") + fracprog::to_string(s)),
          status(s) {}
    fracprog::LfpStatus status;
};

// Fractional program over the shifted variables x* = x - slot_min, flattened
// app-major: index(a, k) = a * K + k. Row groups, in order:
//   (1) N*K upper-bound rows        x*  <= slot_max - slot_min
//   (2) N   cycle-demand rows      -sum_k x* <= sum_k slot_min - app_min
//   (3) K   slot-cap rows           sum_a x* <= slot_total_max - sum_a slot_min
//   (4) N   cycle-cap rows          sum_k x* <= app_max - sum_k slot_min
// Group (4) enforces the per-app cycle maximum; strict_matrix_layout drops it
// to reproduce the (NK+N+K)-row formulation without that cap.
struct StandardForm {
    fracprog::LfpProblem problem;
    std::vector<double> shift;  // flattened slot_min; x = x* + shift
};

StandardForm to_standard_form(const SchedulingProblem& sp, bool strict_matrix_layout = false);

// Maximizes benefit per cent over the consumption polytope.
ScheduledProfile schedule(const SchedulingProblem& sp, bool strict_matrix_layout = false,
                          const fracprog::LfpOptions& options = {});

// Profit-maximization baseline: maximizes benefit - eta * payment over the
// same polytope; cost efficiency is computed afterwards.
ScheduledProfile schedule_pm(const SchedulingProblem& sp, double eta,
                             bool strict_matrix_layout = false);

// Pre-buying payment: sum over slots of price * slot total.
double payment_of(const demand::TrafficProfile& profile, const PriceCurve& prices);

// Convenience: evaluate a fixed profile against weights and prices.
ScheduledProfile evaluate_profile(const demand::TrafficProfile& profile,
                                  const demand::BenefitWeights& weights,
                                  const PriceCurve& prices);

}  // namespace cetm::dayahead
