#include "cetm/demand.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cetm::demand {

namespace {

struct RowStats {
    double max = 0.0;
    double min = 0.0;
    double variance = 0.0;  // population variance
};

RowStats stats_of(const std::vector<double>& values) {
    RowStats s;
    s.max = *std::max_element(values.begin(), values.end());
    s.min = *std::min_element(values.begin(), values.end());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    for (double v : values) s.variance += (v - mean) * (v - mean);
    s.variance /= static_cast<double>(values.size());
    return s;
}

std::vector<double> weight_row(const std::vector<double>& values, double floor_value) {
    for (double v : values)
        if (v < 0.0) throw std::invalid_argument("access counts must be nonnegative");
    const RowStats s = stats_of(values);
    std::vector<double> out(values.size());
    if (s.variance == 0.0) {
        // Every entry is the maximum; any exponent convention yields 1.
        std::fill(out.begin(), out.end(), 1.0);
        return out;
    }
    const double exponent = (s.max - s.min) * (s.max - s.min) / 12.0 / s.variance;
    for (std::size_t i = 0; i < values.size(); ++i)
        out[i] = floor_value + (1.0 - floor_value) * std::pow(values[i] / s.max, exponent);
    return out;
}

}  // namespace

std::vector<double> iota_slot(const std::vector<double>& tau_row, double delta) {
    if (tau_row.empty()) throw DimensionMismatch("iota_slot: empty access row");
    return weight_row(tau_row, delta);
}

std::vector<double> iota_app(const std::vector<double>& tau_totals, double delta_prime) {
    if (tau_totals.empty()) throw DimensionMismatch("iota_app: empty totals");
    const double top = *std::max_element(tau_totals.begin(), tau_totals.end());
    if (top == 0.0) {
        // Device never accessed anything: no popularity signal, floor all apps.
        return std::vector<double>(tau_totals.size(), delta_prime);
    }
    return weight_row(tau_totals, delta_prime);
}

BenefitWeights benefit_weights(const AccessHistory& history, double delta, double delta_prime) {
    const std::size_t num_slots = history.foreground.rows();
    const std::size_t num_apps = history.foreground.cols();
    if (num_slots == 0 || num_apps == 0)
        throw DimensionMismatch("benefit_weights: empty access history");
    if (delta <= 0.0 || delta >= 1.0 || delta_prime <= 0.0 || delta_prime >= 1.0)
        throw std::invalid_argument("benefit_weights: floors must lie in (0, 1)");

    BenefitWeights w;
    w.delta = delta;
    w.delta_prime = delta_prime;
    w.omega = Matrix(num_slots, num_apps);
    w.slot_factor = Matrix(num_slots, num_apps);

    std::vector<double> totals(num_apps, 0.0);
    std::vector<double> column(num_slots);
    for (std::size_t a = 0; a < num_apps; ++a) {
        for (std::size_t k = 0; k < num_slots; ++k) {
            column[k] = history.foreground(k, a);
            totals[a] += column[k];
        }
        const std::vector<double> row = iota_slot(column, delta);
        for (std::size_t k = 0; k < num_slots; ++k) w.slot_factor(k, a) = row[k];
    }
    w.app_factor = iota_app(totals, delta_prime);
    for (std::size_t k = 0; k < num_slots; ++k)
        for (std::size_t a = 0; a < num_apps; ++a)
            w.omega(k, a) = w.app_factor[a] * w.slot_factor(k, a);
    return w;
}

ConsumptionBounds default_bounds(const std::vector<TrafficProfile>& week) {
    if (week.empty()) throw DimensionMismatch("default_bounds: no history days");
    const std::size_t num_slots = week.front().volume_mb.rows();
    const std::size_t num_apps = week.front().volume_mb.cols();
    for (const TrafficProfile& day : week)
        if (!day.volume_mb.same_shape(week.front().volume_mb))
            throw DimensionMismatch("default_bounds: history days have mixed shapes");

    ConsumptionBounds b;
    b.slot_min = week.front().volume_mb;
    b.slot_max = week.front().volume_mb;
    b.slot_total_max.assign(num_slots, 0.0);
    b.app_max.assign(num_apps, 0.0);

    for (const TrafficProfile& day : week) {
        for (std::size_t k = 0; k < num_slots; ++k) {
            for (std::size_t a = 0; a < num_apps; ++a) {
                const double v = day.volume_mb(k, a);
                b.slot_min(k, a) = std::min(b.slot_min(k, a), v);
                b.slot_max(k, a) = std::max(b.slot_max(k, a), v);
            }
            b.slot_total_max[k] = std::max(b.slot_total_max[k], day.volume_mb.row_sum(k));
        }
        for (std::size_t a = 0; a < num_apps; ++a)
            b.app_max[a] = std::max(b.app_max[a], day.volume_mb.col_sum(a));
    }
    return b;
}

std::vector<double> clamped_cycle_demand(const ConsumptionBounds& bounds,
                                         const std::vector<double>& requested) {
    const std::size_t num_apps = bounds.app_max.size();
    if (requested.size() != num_apps)
        throw DimensionMismatch("clamped_cycle_demand: wrong number of apps");
    std::vector<double> out(num_apps);
    for (std::size_t a = 0; a < num_apps; ++a) {
        const double lo = bounds.slot_min.col_sum(a);
        out[a] = std::clamp(requested[a], lo, std::max(lo, bounds.app_max[a]));
    }
    return out;
}

double benefit_of(const TrafficProfile& profile, const BenefitWeights& weights) {
    if (!profile.volume_mb.same_shape(weights.omega))
        throw DimensionMismatch("benefit_of: profile and weights have different shapes");
    double total = 0.0;
    const std::vector<double>& x = profile.volume_mb.data();
    const std::vector<double>& w = weights.omega.data();
    for (std::size_t i = 0; i < x.size(); ++i) total += w[i] * x[i];
    return total;
}

std::vector<DailyRecord> read_history_csv(const std::string& path, int num_slots, int num_apps) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open history file " + path);
    std::vector<DailyRecord> days;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("day", 0) == 0) continue;  // header
        }
        std::istringstream ss(line);
        std::string field;
        double value[6];
        for (int i = 0; i < 6; ++i) {
            if (!std::getline(ss, field, ',')) throw std::runtime_error("bad history row: " + line);
            value[i] = std::stod(field);
        }
        const int day = static_cast<int>(value[0]);
        const int slot = static_cast<int>(value[1]);
        const int app = static_cast<int>(value[2]);
        if (day < 1 || slot < 1 || slot > num_slots || app < 1 || app > num_apps)
            throw std::runtime_error("history row out of range: " + line);
        while (static_cast<int>(days.size()) < day) {
            DailyRecord rec;
            rec.history.foreground = Matrix(num_slots, num_apps);
            rec.history.background = Matrix(num_slots, num_apps);
            rec.profile.volume_mb = Matrix(num_slots, num_apps);
            days.push_back(std::move(rec));
        }
        DailyRecord& rec = days[day - 1];
        rec.history.foreground(slot - 1, app - 1) = value[3];
        rec.history.background(slot - 1, app - 1) = value[4];
        rec.profile.volume_mb(slot - 1, app - 1) = value[5];
    }
    if (days.empty()) throw std::runtime_error("history file " + path + " holds no rows");
    return days;
}

std::vector<DailyRecord> roll_history(std::vector<DailyRecord> days, DailyRecord latest) {
    days.push_back(std::move(latest));
    if (days.size() > 7) days.erase(days.begin(), days.end() - 7);
    return days;
}

void write_history_csv(const std::vector<DailyRecord>& days, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "day,slot,app,foreground_accesses,background_accesses,volume_mb\n";
    char buf[64];
    for (std::size_t d = 0; d < days.size(); ++d) {
        const DailyRecord& rec = days[d];
        for (std::size_t k = 0; k < rec.profile.volume_mb.rows(); ++k)
            for (std::size_t a = 0; a < rec.profile.volume_mb.cols(); ++a) {
                std::snprintf(buf, sizeof(buf), "%zu,%zu,%zu,%g,%g,%.10g", d + 1, k + 1, a + 1,
                              rec.history.foreground(k, a), rec.history.background(k, a),
                              rec.profile.volume_mb(k, a));
                out << buf << "\n";
            }
    }
}

}  // namespace cetm::demand
