#include "cetm/scenario.hpp"

#include <fstream>

namespace cetm::pipeline {

using nlohmann::json;

std::vector<double> default_price_curve(int num_slots) {
    std::vector<double> p(num_slots, 1.0);
    for (int k = 8; k < 22 && k < num_slots; ++k) p[k] = 2.0;  // hours 9-22
    return p;
}

Scenario default_scenario() {
    Scenario s;
    s.apps = workload::default_app_specs();
    s.num_apps = static_cast<int>(s.apps.size());
    s.prices_cents_per_mb = default_price_curve(s.cycle.num_slots);
    s.plan = longterm::plan_500mb();
    return s;
}

namespace {

template <typename T>
T field_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config field '") + key + "' has the wrong type");
    }
}

std::vector<double> vector_field(const json& j, const char* key, std::size_t want,
                                 std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    std::vector<double> v;
    try {
        v = j.at(key).get<std::vector<double>>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config field '") + key + "' must be an array of numbers");
    }
    if (want != 0 && v.size() != want)
        throw ConfigError(std::string("config field '") + key + "' must hold " +
                          std::to_string(want) + " values, got " + std::to_string(v.size()));
    return v;
}

workload::AppTrafficSpec app_from_json(const json& j, int index) {
    workload::AppTrafficSpec spec;
    const std::string where = "apps[" + std::to_string(index) + "]";
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    spec.lambda_fg_lo = field_or(j, "lambda_fg_lo", 0.0);
    spec.lambda_fg_hi = field_or(j, "lambda_fg_hi", 0.0);
    spec.lambda_bg_lo = field_or(j, "lambda_bg_lo", 0.0);
    spec.lambda_bg_hi = field_or(j, "lambda_bg_hi", 0.0);
    spec.bg_ratio = field_or(j, "bg_ratio", 5.0);
    spec.mean_volume_kb = field_or(j, "mean_volume_kb", 0.0);
    spec.var_volume_kb2 = field_or(j, "var_volume_kb2", 0.0);
    if (spec.lambda_fg_hi <= 0.0)
        throw ConfigError(where + ".lambda_fg_hi must be positive");
    if (spec.mean_volume_kb <= 0.0 || spec.var_volume_kb2 <= 0.0)
        throw ConfigError(where + " volume moments must be positive");
    return spec;
}

longterm::BundlePlan plan_from_json(const json& j) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (auto preset = longterm::find_preset(name)) return *preset;
        throw ConfigError("unknown plan preset '" + name +
                          "' (expected singtel_200, singtel_500 or singtel_1gb)");
    }
    if (!j.is_object()) throw ConfigError("config field 'plan' must be a preset name or object");
    longterm::BundlePlan plan;
    plan.name = field_or<std::string>(j, "name", "custom");
    plan.base_cost = field_or(j, "base_cost", 0.0);
    plan.cap_mb = field_or(j, "cap_mb", 0.0);
    plan.overage_per_mb = field_or(j, "overage_per_mb", 27.648);
    if (plan.base_cost <= 0.0 || plan.cap_mb <= 0.0 || plan.overage_per_mb <= 0.0)
        throw ConfigError("custom plan fields must be positive");
    return plan;
}

}  // namespace

Scenario scenario_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    Scenario s = default_scenario();

    s.cycle.num_slots = field_or(j, "num_slots", s.cycle.num_slots);
    s.cycle.slot_minutes = field_or(j, "slot_minutes", s.cycle.slot_minutes);
    s.num_apps = field_or(j, "num_apps", s.num_apps);

    if (j.contains("apps")) {
        if (!j.at("apps").is_array()) throw ConfigError("config field 'apps' must be an array");
        s.apps.clear();
        int i = 0;
        for (const json& item : j.at("apps")) s.apps.push_back(app_from_json(item, i++));
        if (!j.contains("num_apps")) s.num_apps = static_cast<int>(s.apps.size());
    }
    if (static_cast<int>(s.apps.size()) != s.num_apps) {
        if (s.apps.empty()) throw ConfigError("num_apps set but 'apps' is empty");
        s.apps = workload::extend_app_specs(s.apps, s.num_apps,
                                            field_or<std::uint64_t>(j, "seed", s.seed));
    }

    s.prices_cents_per_mb =
        vector_field(j, "prices_cents_per_mb", static_cast<std::size_t>(s.cycle.num_slots),
                     default_price_curve(s.cycle.num_slots));
    s.delta = field_or(j, "delta", s.delta);
    s.delta_prime = field_or(j, "delta_prime", s.delta_prime);
    s.eta = field_or(j, "eta", s.eta);
    s.kappa = field_or(j, "kappa", s.kappa);
    s.overage_permission = field_or(j, "overage_permission", s.overage_permission);

    const std::string mode = field_or<std::string>(j, "demand_mode", "elastic");
    if (mode == "fixed")
        s.demand_mode = DemandMode::Fixed;
    else if (mode == "elastic")
        s.demand_mode = DemandMode::Elastic;
    else
        throw ConfigError("config field 'demand_mode' must be 'fixed' or 'elastic'");
    s.elastic_band = field_or(j, "elastic_band", s.elastic_band);

    if (j.contains("plan")) s.plan = plan_from_json(j.at("plan"));
    s.omega_bar = field_or(j, "omega_bar", s.omega_bar);
    s.seed = field_or<std::uint64_t>(j, "seed", s.seed);
    s.runs = field_or(j, "runs", s.runs);
    s.strict_paper_matrix = field_or(j, "strict_paper_matrix", s.strict_paper_matrix);
    s.max_apps = field_or(j, "max_apps", s.max_apps);
    s.min_cycle_demand_mb = vector_field(j, "min_cycle_demand_mb",
                                         static_cast<std::size_t>(s.num_apps), {});
    s.ledger_mb = vector_field(j, "ledger_mb", 0, {});
    s.slot_shape =
        vector_field(j, "slot_shape", static_cast<std::size_t>(s.cycle.num_slots), {});

    if (j.contains("weight_overrides")) {
        for (const json& item : j.at("weight_overrides")) {
            WeightOverride w;
            w.slot = field_or(item, "slot", 0);
            w.app = field_or(item, "app", 0);
            w.omega = field_or(item, "omega", 1.0);
            s.weight_overrides.push_back(w);
        }
    }
    if (j.contains("bound_overrides")) {
        for (const json& item : j.at("bound_overrides")) {
            BoundOverride b;
            b.slot = field_or(item, "slot", 0);
            b.app = field_or(item, "app", 0);
            if (item.contains("lower")) b.lower = item.at("lower").get<double>();
            if (item.contains("upper")) b.upper = item.at("upper").get<double>();
            s.bound_overrides.push_back(b);
        }
    }

    s.history_file = field_or<std::string>(j, "history_file", "");
    s.ledger_file = field_or<std::string>(j, "ledger_file", "");
    s.events_file = field_or<std::string>(j, "events_file", "");
    s.decision_log = field_or(j, "decision_log", s.decision_log);
    s.out_dir = field_or<std::string>(j, "out_dir", s.out_dir);
    s.dump_solver_trace = field_or(j, "dump_solver_trace", s.dump_solver_trace);

    validate_scenario(s);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
    }
    return scenario_from_json(j);
}

json scenario_to_json(const Scenario& s) {
    json apps = json::array();
    for (const workload::AppTrafficSpec& spec : s.apps) {
        apps.push_back({{"lambda_fg_lo", spec.lambda_fg_lo},
                        {"lambda_fg_hi", spec.lambda_fg_hi},
                        {"lambda_bg_lo", spec.lambda_bg_lo},
                        {"lambda_bg_hi", spec.lambda_bg_hi},
                        {"bg_ratio", spec.bg_ratio},
                        {"mean_volume_kb", spec.mean_volume_kb},
                        {"var_volume_kb2", spec.var_volume_kb2}});
    }
    json j{{"num_slots", s.cycle.num_slots},
           {"slot_minutes", s.cycle.slot_minutes},
           {"num_apps", s.num_apps},
           {"apps", apps},
           {"prices_cents_per_mb", s.prices_cents_per_mb},
           {"delta", s.delta},
           {"delta_prime", s.delta_prime},
           {"eta", s.eta},
           {"kappa", s.kappa},
           {"overage_permission", s.overage_permission},
           {"demand_mode", s.demand_mode == DemandMode::Fixed ? "fixed" : "elastic"},
           {"elastic_band", s.elastic_band},
           {"plan",
            {{"name", s.plan.name},
             {"base_cost", s.plan.base_cost},
             {"cap_mb", s.plan.cap_mb},
             {"overage_per_mb", s.plan.overage_per_mb}}},
           {"omega_bar", s.omega_bar},
           {"seed", s.seed},
           {"runs", s.runs},
           {"strict_paper_matrix", s.strict_paper_matrix},
           {"max_apps", s.max_apps},
           {"decision_log", s.decision_log},
           {"dump_solver_trace", s.dump_solver_trace},
           {"rng", kGeneratorName}};
    if (!s.min_cycle_demand_mb.empty()) j["min_cycle_demand_mb"] = s.min_cycle_demand_mb;
    if (!s.ledger_mb.empty()) j["ledger_mb"] = s.ledger_mb;
    if (!s.slot_shape.empty()) j["slot_shape"] = s.slot_shape;
    if (!s.history_file.empty()) j["history_file"] = s.history_file;
    if (!s.ledger_file.empty()) j["ledger_file"] = s.ledger_file;
    if (!s.events_file.empty()) j["events_file"] = s.events_file;
    return j;
}

void validate_scenario(const Scenario& s) {
    if (s.cycle.num_slots < 1) throw ConfigError("num_slots must be at least 1");
    if (s.cycle.slot_minutes < 1 || s.cycle.slot_minutes > 60)
        throw ConfigError(
            "slot_minutes must lie in 1..60 (the admission exponent is calibrated on a "
            "60-minute slot)");
    if (s.num_apps < 1) throw ConfigError("num_apps must be at least 1");
    if (static_cast<int>(s.apps.size()) != s.num_apps)
        throw ConfigError("apps list does not match num_apps");
    if (static_cast<int>(s.prices_cents_per_mb.size()) != s.cycle.num_slots)
        throw ConfigError("prices_cents_per_mb must hold one value per slot");
    for (std::size_t k = 0; k < s.prices_cents_per_mb.size(); ++k)
        if (s.prices_cents_per_mb[k] <= 0.0)
            throw ConfigError("prices_cents_per_mb[" + std::to_string(k + 1) +
                              "] must be positive");
    if (s.delta <= 0.0 || s.delta >= 1.0) throw ConfigError("delta must lie in (0, 1)");
    if (s.delta_prime <= 0.0 || s.delta_prime >= 1.0)
        throw ConfigError("delta_prime must lie in (0, 1)");
    if (s.eta < 0.0) throw ConfigError("eta must be nonnegative");
    if (s.kappa < 0.0 || s.kappa >= 1.0) throw ConfigError("kappa must lie in [0, 1)");
    if (s.elastic_band < 0.0 || s.elastic_band >= 1.0)
        throw ConfigError("elastic_band must lie in [0, 1)");
    if (s.runs < 1) throw ConfigError("runs must be at least 1");
    if (s.max_apps < 0 || s.max_apps > s.num_apps)
        throw ConfigError("max_apps must lie in 0..num_apps");
    if (s.omega_bar <= 0.0) throw ConfigError("omega_bar must be positive");
    for (const WeightOverride& w : s.weight_overrides) {
        if (w.slot < 1 || w.slot > s.cycle.num_slots || w.app < 1 || w.app > s.num_apps)
            throw ConfigError("weight_overrides entry out of range (slot " +
                              std::to_string(w.slot) + ", app " + std::to_string(w.app) + ")");
        if (w.omega <= 0.0 || w.omega > 1.0)
            throw ConfigError("weight_overrides omega must lie in (0, 1]");
    }
    for (const BoundOverride& b : s.bound_overrides) {
        if (b.slot < 1 || b.slot > s.cycle.num_slots || b.app < 1 || b.app > s.num_apps)
            throw ConfigError("bound_overrides entry out of range (slot " +
                              std::to_string(b.slot) + ", app " + std::to_string(b.app) + ")");
        if (b.lower && *b.lower < 0.0) throw ConfigError("bound_overrides lower must be >= 0");
        if (b.lower && b.upper && *b.upper < *b.lower)
            throw ConfigError("bound_overrides upper must be >= lower");
    }
    for (double v : s.ledger_mb)
        if (v < 0.0) throw ConfigError("ledger_mb entries must be nonnegative");
    for (double v : s.slot_shape)
        if (v < 0.0) throw ConfigError("slot_shape entries must be nonnegative");
    for (double v : s.min_cycle_demand_mb)
        if (v < 0.0) throw ConfigError("min_cycle_demand_mb entries must be nonnegative");
}

}  // namespace cetm::pipeline
