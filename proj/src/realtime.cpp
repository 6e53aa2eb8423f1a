#include "cetm/realtime.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace cetm::realtime {

namespace {

constexpr double kVolumeTol = 1e-12;

double remaining_of(const SlotState& state, int app) {
    return std::max(state.allocated[app] - state.consumed[app], 0.0);
}

double slack_of(const SlotState& state) {
    double s = 0.0;
    for (std::size_t a = 0; a < state.allocated.size(); ++a)
        s += std::max(state.allocated[a] - state.consumed[a], 0.0);
    return s;
}

// Adjusts x by ulp-scale amounts until its left-to-right sum equals `total`
// bit for bit. One coordinate rarely suffices: intermediate roundings can
// make the sum skip the target on that coordinate's grid, so each candidate
// coordinate gets a monotone bisection over its representable values and the
// next one takes over if the grid jumps past the target.
void pin_sum_exact(std::vector<double>& x, double total) {
    const std::size_t n = x.size();
    const auto sum_replacing = [&](std::size_t j, double z) {
        double s = 0.0;
        for (std::size_t a = 0; a < n; ++a) s += a == j ? z : x[a];
        return s;
    };
    const auto bits_of = [](double v) { return std::bit_cast<std::uint64_t>(v); };
    const auto value_of = [](std::uint64_t b) { return std::bit_cast<double>(b); };

    const auto try_coordinate = [&](std::size_t j) {
        double z = std::max(x[j] + (total - sum_replacing(j, x[j])), 0.0);
        if (sum_replacing(j, z) == total) {
            x[j] = z;
            return true;
        }
        // Bracket the target on the representable grid around z, then bisect.
        std::uint64_t lo = bits_of(z), hi = bits_of(z);
        std::uint64_t step = 1;
        while (sum_replacing(j, value_of(lo)) > total) {
            lo = lo > step ? lo - step : 0;
            if (lo == 0) break;
            step *= 2;
        }
        step = 1;
        while (sum_replacing(j, value_of(hi)) < total) {
            if (hi > bits_of(2.0 * std::max(total, 1.0))) return false;
            hi += step;
            step *= 2;
        }
        if (sum_replacing(j, value_of(lo)) > total || sum_replacing(j, value_of(hi)) < total)
            return false;
        while (lo + 1 < hi) {
            const std::uint64_t mid = lo + (hi - lo) / 2;
            const double s = sum_replacing(j, value_of(mid));
            if (s < total) {
                lo = mid;
            } else if (s > total) {
                hi = mid;
            } else {
                x[j] = value_of(mid);
                return true;
            }
        }
        for (std::uint64_t b : {lo, hi}) {
            if (sum_replacing(j, value_of(b)) == total) {
                x[j] = value_of(b);
                return true;
            }
        }
        return false;
    };

    std::size_t big = 0;
    for (std::size_t a = 1; a < n; ++a)
        if (x[a] > x[big]) big = a;
    if (try_coordinate(big)) return;
    for (std::size_t j = 0; j < n; ++j)
        if (j != big && try_coordinate(j)) return;
}

}  // namespace

const char* to_string(Decision d) {
    switch (d) {
        case Decision::Admitted: return "admitted";
        case Decision::AdmittedAfterReallocation: return "admitted_after_reallocation";
        case Decision::AdmittedOverage: return "admitted_overage";
        case Decision::Denied: return "denied";
    }
    return "unknown";
}

const char* to_string(RequestKind k) {
    return k == RequestKind::Foreground ? "foreground" : "background";
}

AdmissionParams calibrate_admission(double kappa) {
    if (kappa < 0.0 || kappa >= 1.0)
        throw std::invalid_argument("calibrate_admission: kappa must lie in [0, 1)");
    AdmissionParams p;
    p.m2 = std::log(0.05) / std::log(0.5);
    p.m1 = (std::log(0.95) / std::log(0.1) - p.m2) / 60.0;
    p.kappa = kappa;
    return p;
}

double accept_probability(double consumed, double allocated, double minutes,
                          const AdmissionParams& params) {
    if (allocated <= 0.0) return 0.0;
    if (consumed < 0.0 || consumed > allocated || minutes < 0.0 || minutes > 60.0)
        throw std::invalid_argument("accept_probability: arguments out of range");
    const double fraction = consumed / allocated;
    double base;
    if (params.kappa > 0.0) {
        base = std::min(1.0, 1.0 - (fraction - params.kappa) / (1.0 - params.kappa));
        base = std::max(base, 0.0);
    } else {
        base = 1.0 - fraction;
    }
    const double exponent = params.m1 * minutes + params.m2;
    return std::pow(base, exponent);
}

BoundsReset reset_bounds(const SlotState& state, int exhausted_app,
                         std::span<const double> omega_slot, double t_minutes) {
    const std::size_t n = state.allocated.size();
    if (omega_slot.size() != n || exhausted_app < 0 || static_cast<std::size_t>(exhausted_app) >= n)
        throw DimensionMismatch("reset_bounds: inconsistent app count");

    BoundsReset out;
    if (slack_of(state) <= kVolumeTol) {
        out.status = BoundsReset::Status::NoVolume;
        return out;
    }
    if (t_minutes <= 0.0) throw UndefinedAtZeroElapsed();

    out.status = BoundsReset::Status::Ok;
    out.lower.resize(n);
    out.upper.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
        const double rate_volume = 60.0 * state.consumed[a] / t_minutes;
        out.lower[a] = std::min(rate_volume, state.allocated[a]);
        out.upper[a] = state.allocated[a];
    }

    double spread = 0.0;
    for (std::size_t a = 0; a < n; ++a) spread += out.upper[a] - out.lower[a];
    if (spread <= kVolumeTol) {
        // Every basic bound collapsed; open up the least-valued app that still
        // has unconsumed volume so the exhausted one can grow.
        int pick = -1;
        for (std::size_t a = 0; a < n; ++a) {
            if (static_cast<int>(a) == exhausted_app) continue;
            if (state.consumed[a] >= state.allocated[a] - kVolumeTol) continue;
            if (pick < 0 || omega_slot[a] < omega_slot[pick]) pick = static_cast<int>(a);
        }
        if (pick >= 0) out.lower[pick] = state.consumed[pick];
    }

    double freed = 0.0;
    for (std::size_t a = 0; a < n; ++a) freed += state.allocated[a] - out.lower[a];
    const double g1 = state.consumed[exhausted_app];
    const double rate_volume = 60.0 * g1 / t_minutes;
    out.upper[exhausted_app] = std::max(rate_volume, g1 + freed);
    out.lower[exhausted_app] = std::min(rate_volume, g1 + freed);
    return out;
}

std::vector<double> reallocate(const SlotState& state, const BoundsReset& bounds,
                               std::span<const double> omega_slot) {
    const std::size_t n = state.allocated.size();
    if (bounds.status != BoundsReset::Status::Ok)
        throw InfeasibleRebounds("reallocate: bounds reset reported no volume");
    if (bounds.lower.size() != n || bounds.upper.size() != n || omega_slot.size() != n)
        throw DimensionMismatch("reallocate: inconsistent app count");

    double total = 0.0;
    for (double v : state.allocated) total += v;
    double lower_sum = 0.0, upper_sum = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        if (bounds.upper[a] < bounds.lower[a] - kVolumeTol)
            throw InfeasibleRebounds("reallocate: crossed bounds");
        lower_sum += bounds.lower[a];
        upper_sum += bounds.upper[a];
    }
    if (lower_sum > total + 1e-9 || upper_sum < total - 1e-9)
        throw InfeasibleRebounds("reallocate: slot total cannot satisfy the reset bounds");

    // Greedy fill in descending omega (ties to the lowest index) is optimal:
    // the objective is linear and the only coupling is the fixed slot total.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
        return omega_slot[lhs] > omega_slot[rhs];
    });

    std::vector<double> x(bounds.lower.begin(), bounds.lower.end());
    double leftover = total - lower_sum;
    for (std::size_t a : order) {
        if (leftover <= 0.0) break;
        const double head = std::min(bounds.upper[a] - x[a], leftover);
        if (head > 0.0) {
            x[a] += head;
            leftover -= head;
        }
    }
    if (n == 1) {
        x[0] = total;
        return x;
    }
    pin_sum_exact(x, total);
    return x;
}

double bill_slot(const SlotState& state, double realtime_price) {
    if (realtime_price <= 0.0)
        throw std::invalid_argument("bill_slot: real-time price must be positive");
    double consumed = 0.0, prebought = 0.0;
    for (double v : state.consumed) consumed += v;
    for (double v : state.prebought) prebought += v;
    return std::max(realtime_price * (consumed - prebought), 0.0);
}

Decision handle_request(SlotState& state, const RequestEvent& ev, RandomEngine& rng,
                        const AdmissionParams& params, std::span<const double> omega_slot,
                        bool allow_overage, double* probability_out) {
    if (ev.volume_mb <= 0.0) throw std::invalid_argument("handle_request: volume must be positive");
    if (ev.app < 0 || static_cast<std::size_t>(ev.app) >= state.allocated.size())
        throw DimensionMismatch("handle_request: app index out of range");
    if (ev.minute < state.elapsed_min - kVolumeTol)
        throw std::invalid_argument("handle_request: events must arrive in minute order");
    state.elapsed_min = std::max(state.elapsed_min, ev.minute);
    if (probability_out) *probability_out = 1.0;

    const int a = ev.app;
    double remaining = remaining_of(state, a);

    if (ev.kind == RequestKind::Background) {
        if (ev.volume_mb > remaining + kVolumeTol) {
            if (probability_out) *probability_out = 0.0;
            return Decision::Denied;
        }
        const double rho =
            accept_probability(state.consumed[a], state.allocated[a], ev.minute, params);
        if (probability_out) *probability_out = rho;
        if (uniform01(rng) < rho) {
            state.consumed[a] += ev.volume_mb;
            return Decision::Admitted;
        }
        return Decision::Denied;
    }

    // Foreground: direct acceptance while the allocation holds out.
    if (ev.volume_mb <= remaining + kVolumeTol) {
        state.consumed[a] += ev.volume_mb;
        return Decision::Admitted;
    }
    if (!allow_overage) return Decision::Denied;

    // Rebalance as if the requesting app had just drained its allocation;
    // that is the contract reset_bounds is built around, and it keeps the
    // reset feasible even when the app is already past its allocation from
    // an earlier overage.
    SlotState drained = state;
    drained.consumed[a] = drained.allocated[a];
    if (slack_of(drained) > kVolumeTol) {
        // Rate extrapolation is undefined at the slot start; defer to t = 1.
        const double t_eff = std::max(ev.minute, 1.0);
        const BoundsReset reset = reset_bounds(drained, a, omega_slot, t_eff);
        if (reset.status == BoundsReset::Status::Ok) {
            state.allocated = reallocate(state, reset, omega_slot);
            remaining = remaining_of(state, a);
            if (ev.volume_mb <= remaining + kVolumeTol) {
                state.consumed[a] += ev.volume_mb;
                return Decision::AdmittedAfterReallocation;
            }
        }
    }

    // Nothing (or not enough) left in the slot: the excess is bought at the
    // real-time price.
    state.overage[a] += ev.volume_mb - remaining;
    state.consumed[a] += ev.volume_mb;
    return Decision::AdmittedOverage;
}

DayRunResult simulate_day(const demand::TrafficProfile& plan, const Matrix& omega,
                          const std::vector<double>& realtime_prices,
                          std::span<const RequestEvent> events, const SimulationOptions& options,
                          RandomEngine& rng) {
    const std::size_t num_slots = plan.volume_mb.rows();
    const std::size_t num_apps = plan.volume_mb.cols();
    if (!omega.same_shape(plan.volume_mb))
        throw DimensionMismatch("simulate_day: weight matrix does not match the plan");
    if (realtime_prices.size() != num_slots)
        throw DimensionMismatch("simulate_day: price vector does not match slot count");

    DayRunResult result;
    result.consumed.volume_mb = Matrix(num_slots, num_apps);
    result.overage_mb = Matrix(num_slots, num_apps);

    std::size_t next = 0;
    for (std::size_t k = 0; k < num_slots; ++k) {
        SlotState state;
        state.slot = static_cast<int>(k);
        state.allocated.resize(num_apps);
        state.prebought.resize(num_apps);
        state.consumed.assign(num_apps, 0.0);
        state.overage.assign(num_apps, 0.0);
        state.realtime_price = realtime_prices[k];
        for (std::size_t a = 0; a < num_apps; ++a)
            state.allocated[a] = state.prebought[a] = plan.volume_mb(k, a);

        std::vector<double> omega_row(num_apps);
        for (std::size_t a = 0; a < num_apps; ++a) omega_row[a] = omega(k, a);

        for (; next < events.size() && events[next].slot == static_cast<int>(k); ++next) {
            const RequestEvent& ev = events[next];
            if (ev.app < 0 || static_cast<std::size_t>(ev.app) >= num_apps)
                throw DimensionMismatch("simulate_day: event app index out of range");
            Decision decision;
            double probability = 1.0;
            if (options.managed) {
                decision = handle_request(state, ev, rng, options.admission, omega_row,
                                          options.allow_overage, &probability);
            } else {
                state.elapsed_min = std::max(state.elapsed_min, ev.minute);
                state.consumed[ev.app] += ev.volume_mb;
                decision = Decision::Admitted;
            }
            if (options.log_decisions)
                result.decisions.push_back({static_cast<int>(k), ev.minute, ev.app, ev.kind,
                                            ev.volume_mb, decision, probability});
        }

        if (!options.managed)
            for (std::size_t a = 0; a < num_apps; ++a)
                state.overage[a] = std::max(state.consumed[a] - state.allocated[a], 0.0);

        result.additional_payment_cents += bill_slot(state, state.realtime_price);
        for (std::size_t a = 0; a < num_apps; ++a) {
            result.consumed.volume_mb(k, a) = state.consumed[a];
            result.overage_mb(k, a) = state.overage[a];
        }
    }
    if (next != events.size())
        throw std::invalid_argument("simulate_day: events must be sorted by slot");
    return result;
}

std::vector<RequestEvent> read_events_csv(const std::string& path, int num_slots, int num_apps) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open event file " + path);
    std::vector<RequestEvent> events;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("minute", 0) == 0) continue;
        }
        std::istringstream ss(line);
        std::string minute, slot, app, volume, kind;
        if (!std::getline(ss, minute, ',') || !std::getline(ss, slot, ',') ||
            !std::getline(ss, app, ',') || !std::getline(ss, volume, ',') ||
            !std::getline(ss, kind, ','))
            throw std::runtime_error("bad event row: " + line);
        RequestEvent ev;
        ev.minute = std::stod(minute);
        ev.slot = std::stoi(slot) - 1;
        ev.app = std::stoi(app) - 1;
        ev.volume_mb = std::stod(volume);
        if (kind == "foreground")
            ev.kind = RequestKind::Foreground;
        else if (kind == "background")
            ev.kind = RequestKind::Background;
        else
            throw std::runtime_error("unknown request kind: " + kind);
        if (ev.slot < 0 || ev.slot >= num_slots || ev.app < 0 || ev.app >= num_apps ||
            ev.minute < 0.0 || ev.minute >= 60.0 || ev.volume_mb <= 0.0)
            throw std::runtime_error("event row out of range: " + line);
        events.push_back(ev);
    }
    std::stable_sort(events.begin(), events.end(), [](const RequestEvent& l, const RequestEvent& r) {
        return l.slot != r.slot ? l.slot < r.slot : l.minute < r.minute;
    });
    return events;
}

void write_events_csv(std::span<const RequestEvent> events, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "minute,slot,app,volume_mb,kind\n";
    char buf[96];
    for (const RequestEvent& ev : events) {
        std::snprintf(buf, sizeof(buf), "%.10g,%d,%d,%.10g,%s", ev.minute, ev.slot + 1, ev.app + 1,
                      ev.volume_mb, to_string(ev.kind));
        out << buf << "\n";
    }
}

}  // namespace cetm::realtime
