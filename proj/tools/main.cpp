#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cetm/dayahead.hpp"
#include "cetm/pipeline.hpp"
#include "cetm/scenario.hpp"

namespace {

using namespace cetm;

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int runs = 0;
    double kappa = -1.0;
    int max_apps = -1;
    bool strict_paper_matrix = false;
    bool seed_set = false, runs_set = false, kappa_set = false, max_apps_set = false;
};

pipeline::Scenario load(const CliOptions& opt) {
    pipeline::Scenario scenario =
        opt.config_path.empty() ? pipeline::default_scenario()
                                : pipeline::load_scenario(opt.config_path);
    if (opt.seed_set) scenario.seed = opt.seed;
    if (opt.runs_set) scenario.runs = opt.runs;
    if (opt.kappa_set) scenario.kappa = opt.kappa;
    if (opt.max_apps_set) scenario.max_apps = opt.max_apps;
    if (opt.strict_paper_matrix) scenario.strict_paper_matrix = true;
    if (!opt.out_dir.empty()) scenario.out_dir = opt.out_dir;
    pipeline::validate_scenario(scenario);
    return scenario;
}

void print_rows(const std::vector<pipeline::ReportRow>& rows) {
    std::printf("%-24s %12s %12s %14s %10s\n", "profile", "volume_mb", "benefit",
                "payment_cents", "ce");
    for (const pipeline::ReportRow& row : rows)
        std::printf("%-24s %12.4f %12.4f %14.4f %10.4f\n", row.profile.c_str(), row.volume_mb,
                    row.benefit, row.payment_cents, row.cost_efficiency);
}

int run_command(const std::string& command, const CliOptions& opt) {
    const pipeline::Scenario scenario = load(opt);
    if (command == "dayahead") {
        const pipeline::DayAheadResult result = pipeline::run_dayahead(scenario);
        pipeline::write_dayahead_outputs(result, scenario, scenario.out_dir);
        print_rows(result.rows);
        std::printf("wrote day-ahead report to %s\n", scenario.out_dir.c_str());
    } else if (command == "realtime") {
        const pipeline::RealtimeResult result = pipeline::run_realtime(scenario);
        pipeline::write_realtime_outputs(result, scenario, scenario.out_dir);
        print_rows(result.rows);
        std::printf("runs=%zu kappa=%.3f fraction(CE ratio > 1)=%.4f\n", result.runs.size(),
                    scenario.kappa, result.fraction_above_one);
        std::printf("wrote real-time report to %s\n", scenario.out_dir.c_str());
    } else if (command == "longterm") {
        const pipeline::LongtermResult result = pipeline::run_longterm(scenario);
        pipeline::write_longterm_outputs(result, scenario, scenario.out_dir);
        for (std::size_t p = 0; p < result.plans.size(); ++p) {
            const auto peak = longterm::peak_volume(result.plans[p]);
            std::printf("%-12s cap=%7.1f MB  ce(cap)=%8.4f  peak=%s\n",
                        result.plans[p].name.c_str(), result.plans[p].cap_mb,
                        longterm::monthly_ce(result.plans[p].cap_mb, result.plans[p],
                                             scenario.omega_bar),
                        peak ? "at cap" : "none (degenerate overage)");
        }
        std::printf("wrote long-term tables to %s\n", scenario.out_dir.c_str());
    } else if (command == "limited") {
        const pipeline::LimitedResult result = pipeline::run_limited(scenario);
        pipeline::write_limited_outputs(result, scenario, scenario.out_dir);
        std::vector<pipeline::ReportRow> rows{result.unscheduled};
        for (const pipeline::LimitedStrategy& s : result.strategies) rows.push_back(s.combined);
        print_rows(rows);
        std::printf("wrote limited-management report to %s\n", scenario.out_dir.c_str());
    } else if (command == "gen") {
        pipeline::write_gen_outputs(scenario, scenario.out_dir);
        std::printf("wrote history.csv, events.csv, realtime_prices.csv, gen_report.json to %s\n",
                    scenario.out_dir.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cost-efficiency-based mobile data traffic management"};
    app.require_subcommand(1);
    app.fallthrough();

    CliOptions opt;
    app.add_option("--config", opt.config_path, "scenario config file (JSON)");
    app.add_option("--out", opt.out_dir, "output directory (default: config out_dir or 'out')");
    auto* seed_opt = app.add_option("--seed", opt.seed, "override the scenario seed");
    auto* runs_opt = app.add_option("--runs", opt.runs, "override the simulation run count");
    auto* kappa_opt =
        app.add_option("--kappa", opt.kappa, "override the slack admission threshold");
    app.add_flag("--strict-paper-matrix", opt.strict_paper_matrix,
                 "build the day-ahead polytope without the per-app cycle-cap rows");

    app.add_subcommand("dayahead", "pre-schedule the next day's traffic profile");
    app.add_subcommand("realtime", "seeded real-time management simulations");
    app.add_subcommand("longterm", "bundle-plan cost-efficiency tables");
    auto* limited =
        app.add_subcommand("limited", "schedule only a subset of apps, both strategies");
    auto* max_apps_opt =
        limited->add_option("--max-apps", opt.max_apps, "how many apps stay managed");
    app.add_subcommand("gen", "emit the synthetic workload files only");

    CLI11_PARSE(app, argc, argv);
    opt.seed_set = seed_opt->count() > 0;
    opt.runs_set = runs_opt->count() > 0;
    opt.kappa_set = kappa_opt->count() > 0;
    opt.max_apps_set = max_apps_opt->count() > 0;

    try {
        return run_command(app.get_subcommands().front()->get_name(), opt);
    } catch (const cetm::pipeline::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const cetm::dayahead::InfeasibleBounds& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const cetm::dayahead::SolveFailure& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
