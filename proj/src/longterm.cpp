#include "cetm/longterm.hpp"

#include <fstream>
#include <sstream>

namespace cetm::longterm {

namespace {
constexpr double kOveragePerMb = 27.648;  // $0.27 per 10 KB, 1 MB = 1024 KB
}

BundlePlan plan_200mb() { return {"singtel_200", 10.0, 200.0, kOveragePerMb}; }
BundlePlan plan_500mb() { return {"singtel_500", 15.0, 500.0, kOveragePerMb}; }
BundlePlan plan_1gb() { return {"singtel_1gb", 20.0, 1024.0, kOveragePerMb}; }

std::vector<BundlePlan> preset_plans() { return {plan_200mb(), plan_500mb(), plan_1gb()}; }

std::optional<BundlePlan> find_preset(const std::string& name) {
    for (const BundlePlan& plan : preset_plans())
        if (plan.name == name) return plan;
    return std::nullopt;
}

double monthly_cost(double volume_mb, const BundlePlan& plan) {
    if (volume_mb < 0.0) throw std::invalid_argument("monthly_cost: negative volume");
    if (volume_mb <= plan.cap_mb) return plan.base_cost;
    return plan.base_cost + plan.overage_per_mb * (volume_mb - plan.cap_mb);
}

double monthly_ce(double volume_mb, const BundlePlan& plan, double omega_bar) {
    if (volume_mb <= 0.0) throw ZeroVolume();
    return omega_bar * volume_mb / monthly_cost(volume_mb, plan);
}

double estimate_month(const DailyLedger& ledger, int day, const BundlePlan& plan) {
    if (day < 1 || day > 30) throw MissingDays("estimate_month: day must lie in 1..30");
    if (static_cast<std::size_t>(day) > ledger.daily_mb.size())
        throw MissingDays("estimate_month: only " + std::to_string(ledger.daily_mb.size()) +
                          " days recorded, asked for day " + std::to_string(day));
    double total = 0.0;
    for (int i = 0; i < day; ++i) total += ledger.daily_mb[i];
    const double projected = 30.0 / day * total;
    return monthly_ce(projected, plan, ledger.omega_bar);
}

std::optional<double> peak_volume(const BundlePlan& plan) {
    // Past the cap, CE' has the sign of base_cost - overage * cap.
    if (plan.base_cost >= plan.overage_per_mb * plan.cap_mb) return std::nullopt;
    return plan.cap_mb;
}

DailyLedger read_ledger_csv(const std::string& path, double omega_bar) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open ledger file " + path);
    DailyLedger ledger;
    ledger.omega_bar = omega_bar;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("day", 0) == 0) continue;
        }
        std::istringstream ss(line);
        std::string day_field, volume_field;
        if (!std::getline(ss, day_field, ',') || !std::getline(ss, volume_field, ','))
            throw std::runtime_error("bad ledger row: " + line);
        const int day = std::stoi(day_field);
        const double volume = std::stod(volume_field);
        if (day < 1 || day > 30 || volume < 0.0)
            throw std::runtime_error("ledger row out of range: " + line);
        if (static_cast<std::size_t>(day) > ledger.daily_mb.size())
            ledger.daily_mb.resize(day, 0.0);
        ledger.daily_mb[day - 1] = volume;
    }
    if (ledger.daily_mb.empty()) throw std::runtime_error("ledger file " + path + " is empty");
    return ledger;
}

}  // namespace cetm::longterm
