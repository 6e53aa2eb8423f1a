#include "cetm/dayahead.hpp"

#include <cmath>
#include <cstdio>

namespace cetm::dayahead {

namespace {

constexpr double kFeasTol = 1e-9;

std::string cell(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

void validate(const SchedulingProblem& sp) {
    const std::size_t num_slots = sp.weights.omega.rows();
    const std::size_t num_apps = sp.weights.omega.cols();
    if (num_slots == 0 || num_apps == 0) throw InfeasibleBounds("empty scheduling problem");
    if (sp.prices.cents_per_mb.size() != num_slots)
        throw InfeasibleBounds("price curve length does not match slot count");
    for (std::size_t k = 0; k < num_slots; ++k)
        if (sp.prices.cents_per_mb[k] <= 0.0)
            throw InfeasibleBounds("slot " + std::to_string(k + 1) + ": price must be positive");
    const demand::ConsumptionBounds& b = sp.bounds;
    if (!b.slot_min.same_shape(sp.weights.omega) || !b.slot_max.same_shape(sp.weights.omega))
        throw InfeasibleBounds("bounds shape does not match weights");
    if (b.slot_total_max.size() != num_slots || b.app_max.size() != num_apps)
        throw InfeasibleBounds("bounds vectors have wrong lengths");
    if (b.app_min.size() != num_apps)
        throw InfeasibleBounds("per-cycle minimum demand (app_min) is unset");

    for (std::size_t k = 0; k < num_slots; ++k) {
        double floor_total = 0.0;
        for (std::size_t a = 0; a < num_apps; ++a) {
            if (b.slot_min(k, a) < 0.0 || b.slot_max(k, a) < b.slot_min(k, a) - kFeasTol)
                throw InfeasibleBounds("slot " + std::to_string(k + 1) + ", app " +
                                       std::to_string(a + 1) + ": bad slot bounds [" +
                                       cell("%g", b.slot_min(k, a)) + ", " +
                                       cell("%g", b.slot_max(k, a)) + "]");
            floor_total += b.slot_min(k, a);
        }
        if (floor_total > b.slot_total_max[k] + kFeasTol)
            throw InfeasibleBounds("slot " + std::to_string(k + 1) +
                                   ": sum of per-app minimums " + cell("%g", floor_total) +
                                   " MB exceeds the slot cap " + cell("%g", b.slot_total_max[k]) +
                                   " MB");
    }
    for (std::size_t a = 0; a < num_apps; ++a) {
        const double floor_total = b.slot_min.col_sum(a);
        if (b.app_min[a] < floor_total - kFeasTol)
            throw InfeasibleBounds("app " + std::to_string(a + 1) + ": cycle minimum " +
                                   cell("%g", b.app_min[a]) +
                                   " MB is below the sum of slot minimums " +
                                   cell("%g", floor_total) + " MB");
        if (b.app_min[a] > b.app_max[a] + kFeasTol)
            throw InfeasibleBounds("app " + std::to_string(a + 1) + ": cycle minimum " +
                                   cell("%g", b.app_min[a]) + " MB exceeds the cycle maximum " +
                                   cell("%g", b.app_max[a]) + " MB");
    }
}

demand::TrafficProfile reconstruct(const std::vector<double>& x_star,
                                   const std::vector<double>& shift, std::size_t num_slots,
                                   std::size_t num_apps) {
    demand::TrafficProfile p;
    p.volume_mb = Matrix(num_slots, num_apps);
    for (std::size_t a = 0; a < num_apps; ++a)
        for (std::size_t k = 0; k < num_slots; ++k) {
            const std::size_t i = a * num_slots + k;
            p.volume_mb(k, a) = std::max(0.0, x_star[i] + shift[i]);
        }
    return p;
}

ScheduledProfile finish(const demand::TrafficProfile& profile, const SchedulingProblem& sp) {
    ScheduledProfile out;
    out.profile = profile;
    out.benefit = demand::benefit_of(profile, sp.weights);
    out.payment_cents = payment_of(profile, sp.prices);
    out.cost_efficiency = out.payment_cents > 0.0 ? out.benefit / out.payment_cents : 0.0;
    return out;
}

}  // namespace

StandardForm to_standard_form(const SchedulingProblem& sp, bool strict_matrix_layout) {
    validate(sp);
    const std::size_t num_slots = sp.weights.omega.rows();
    const std::size_t num_apps = sp.weights.omega.cols();
    const std::size_t n = num_slots * num_apps;
    const std::size_t m = n + num_apps + num_slots + (strict_matrix_layout ? 0 : num_apps);

    StandardForm sf;
    sf.shift.resize(n);
    fracprog::LfpProblem& p = sf.problem;
    p.constraint_matrix = Matrix(m, n);
    p.rhs.assign(m, 0.0);
    p.num_c.resize(n);
    p.den_d.resize(n);

    const demand::ConsumptionBounds& b = sp.bounds;
    for (std::size_t a = 0; a < num_apps; ++a)
        for (std::size_t k = 0; k < num_slots; ++k) {
            const std::size_t i = a * num_slots + k;
            sf.shift[i] = b.slot_min(k, a);
            p.num_c[i] = sp.weights.omega(k, a);
            p.den_d[i] = sp.prices.cents_per_mb[k];
        }
    p.num_alpha = dot(p.num_c, sf.shift);
    p.den_beta = dot(p.den_d, sf.shift);

    std::size_t r = 0;
    for (std::size_t i = 0; i < n; ++i, ++r) {  // per-slot upper bounds
        p.constraint_matrix(r, i) = 1.0;
        const std::size_t a = i / num_slots, k = i % num_slots;
        p.rhs[r] = b.slot_max(k, a) - b.slot_min(k, a);
    }
    for (std::size_t a = 0; a < num_apps; ++a, ++r) {  // per-cycle demand
        for (std::size_t k = 0; k < num_slots; ++k)
            p.constraint_matrix(r, a * num_slots + k) = -1.0;
        p.rhs[r] = b.slot_min.col_sum(a) - b.app_min[a];
    }
    for (std::size_t k = 0; k < num_slots; ++k, ++r) {  // per-slot device cap
        for (std::size_t a = 0; a < num_apps; ++a)
            p.constraint_matrix(r, a * num_slots + k) = 1.0;
        p.rhs[r] = b.slot_total_max[k] - b.slot_min.row_sum(k);
    }
    if (!strict_matrix_layout) {
        for (std::size_t a = 0; a < num_apps; ++a, ++r) {  // per-cycle cap
            for (std::size_t k = 0; k < num_slots; ++k)
                p.constraint_matrix(r, a * num_slots + k) = 1.0;
            p.rhs[r] = b.app_max[a] - b.slot_min.col_sum(a);
        }
    }
    return sf;
}

ScheduledProfile schedule(const SchedulingProblem& sp, bool strict_matrix_layout,
                          const fracprog::LfpOptions& options) {
    const StandardForm sf = to_standard_form(sp, strict_matrix_layout);
    const fracprog::LfpSolution sol = fracprog::lfp_solve(sf.problem, options);
    if (sol.status != fracprog::LfpStatus::Optimal) throw SolveFailure(sol.status);

    ScheduledProfile out = finish(
        reconstruct(sol.x, sf.shift, sp.weights.omega.rows(), sp.weights.omega.cols()), sp);
    out.iterations = sol.iterations;
    out.objective_trace = sol.trace;
    out.solver = sol;
    return out;
}

ScheduledProfile schedule_pm(const SchedulingProblem& sp, double eta, bool strict_matrix_layout) {
    if (eta < 0.0) throw std::invalid_argument("schedule_pm: eta must be nonnegative");
    const StandardForm sf = to_standard_form(sp, strict_matrix_layout);

    fracprog::LpProblem lp;
    lp.constraint_matrix = sf.problem.constraint_matrix;
    lp.rhs = sf.problem.rhs;
    lp.objective.resize(sf.problem.num_c.size());
    for (std::size_t i = 0; i < lp.objective.size(); ++i)
        lp.objective[i] = sf.problem.num_c[i] - eta * sf.problem.den_d[i];

    const fracprog::LpResult res = fracprog::lp_solve(lp);
    if (res.status != fracprog::LpStatus::Optimal) {
        throw SolveFailure(res.status == fracprog::LpStatus::Infeasible
                               ? fracprog::LfpStatus::Infeasible
                               : fracprog::LfpStatus::Unbounded);
    }
    ScheduledProfile out = finish(
        reconstruct(res.x, sf.shift, sp.weights.omega.rows(), sp.weights.omega.cols()), sp);
    out.iterations = 1;
    return out;
}

double payment_of(const demand::TrafficProfile& profile, const PriceCurve& prices) {
    if (profile.volume_mb.rows() != prices.cents_per_mb.size())
        throw DimensionMismatch("payment_of: profile slot count does not match price curve");
    double total = 0.0;
    for (std::size_t k = 0; k < profile.volume_mb.rows(); ++k)
        total += prices.cents_per_mb[k] * profile.volume_mb.row_sum(k);
    return total;
}

ScheduledProfile evaluate_profile(const demand::TrafficProfile& profile,
                                  const demand::BenefitWeights& weights,
                                  const PriceCurve& prices) {
    ScheduledProfile out;
    out.profile = profile;
    out.benefit = demand::benefit_of(profile, weights);
    out.payment_cents = payment_of(profile, prices);
    out.cost_efficiency = out.payment_cents > 0.0 ? out.benefit / out.payment_cents : 0.0;
    return out;
}

}  // namespace cetm::dayahead
