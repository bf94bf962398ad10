#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vmsched/engine.hpp"
#include "vmsched/errors.hpp"
#include "vmsched/harness.hpp"
#include "vmsched/scenario.hpp"

namespace {

using namespace vmsched;

std::string describe(const SimulationReport& report) {
    char line[256];
    std::string out;
    out += "scenario: " + report.scenario_name + " (seed " +
           std::to_string(report.seed) + ")\n";
    std::snprintf(line, sizeof(line),
                  "  jobs: %llu total, %llu on time, %llu late, %llu terminated\n",
                  static_cast<unsigned long long>(report.jobs_total),
                  static_cast<unsigned long long>(report.on_time),
                  static_cast<unsigned long long>(report.late),
                  static_cast<unsigned long long>(report.terminated));
    out += line;
    std::snprintf(line, sizeof(line),
                  "  rates: global %.4f, deadline %.4f, miss %.4f, terminated %.4f\n",
                  report.rates.global_success_rate, report.rates.deadline_success_rate,
                  report.rates.deadline_miss_rate, report.rates.termination_rate);
    out += line;
    std::snprintf(line, sizeof(line),
                  "  utilization: cpu %.4f, mem %.4f, wasted %.1f core-hours\n",
                  report.utilization.cpu_utilization, report.utilization.mem_utilization,
                  report.ledger.wasted_core_hours);
    out += line;
    std::snprintf(line, sizeof(line),
                  "  end: %.1f h simulated, failure rate %.4f, threshold %.2f\n",
                  report.end_time_h, report.final_failure_rate, report.final_threshold);
    out += line;
    return out;
}

std::string summarize_sweep(const std::vector<SimulationReport>& reports) {
    // Aggregate per grid point, preserving first-seen order.
    std::vector<std::string> order;
    std::map<std::string, std::vector<const SimulationReport*>> groups;
    for (const auto& report : reports) {
        auto& group = groups[report.scenario_name];
        if (group.empty()) {
            order.push_back(report.scenario_name);
        }
        group.push_back(&report);
    }

    std::string out = "scenario        miss mean [min, max]      global mean [min, max]\n";
    for (const auto& name : order) {
        const auto& group = groups[name];
        double miss_sum = 0.0, miss_min = 1.0, miss_max = 0.0;
        double global_sum = 0.0, global_min = 1.0, global_max = 0.0;
        for (const auto* report : group) {
            const double miss = report->rates.deadline_miss_rate;
            const double global = report->rates.global_success_rate;
            miss_sum += miss;
            miss_min = std::min(miss_min, miss);
            miss_max = std::max(miss_max, miss);
            global_sum += global;
            global_min = std::min(global_min, global);
            global_max = std::max(global_max, global);
        }
        const double count = static_cast<double>(group.size());
        char line[160];
        std::snprintf(line, sizeof(line), "%-12s  %.4f [%.4f, %.4f]    %.4f [%.4f, %.4f]\n",
                      name.c_str(), miss_sum / count, miss_min, miss_max,
                      global_sum / count, global_min, global_max);
        out += line;
    }
    return out;
}

std::string trace_file_name(const SimulationReport& report) {
    return "trace_" + report.scenario_name + "_s" + std::to_string(report.seed) + ".csv";
}

int run_command(const std::string& scenario_file, std::optional<std::uint64_t> seed,
                const std::optional<std::string>& out_dir, bool trace) {
    ScenarioConfig config = load_scenario(scenario_file);
    if (seed) {
        config.seed = *seed;
    }
    SimulationReport report = run_simulation(config);
    std::cout << describe(report);

    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        const auto base = std::filesystem::path(*out_dir);
        emit_csv({report}, base / (report.scenario_name + ".csv"));
        if (trace) {
            emit_failure_trace(report, base / trace_file_name(report));
        }
    }
    return 0;
}

int sweep_command(SweepKind kind, const std::string& kind_name, std::uint64_t base_seed,
                  const std::optional<std::string>& out_dir, bool trace) {
    ScenarioConfig base = default_scenario();
    base.seed = base_seed;
    SweepSpec spec = make_sweep(kind, base, {base_seed, base_seed + 1, base_seed + 2});
    std::vector<SimulationReport> reports = run_sweep(spec);
    std::cout << summarize_sweep(reports);

    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        const auto base_path = std::filesystem::path(*out_dir);
        emit_csv(reports, base_path / (kind_name + ".csv"));
        if (trace) {
            for (const auto& report : reports) {
                emit_failure_trace(report, base_path / trace_file_name(report));
            }
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deadline-aware virtual machine node simulator"};
    app.require_subcommand(1);

    std::string scenario_file;
    std::string sweep_kind;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    bool trace = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "Base random seed");
        cmd->add_option("--out", out_dir, "Directory for CSV tables and traces");
        cmd->add_flag("--trace", trace, "Also write per-run failure-rate traces");
    };

    auto* run = app.add_subcommand("run", "Run one scenario file");
    run->add_option("scenario", scenario_file, "Scenario config (JSON, // comments allowed)")
        ->required();
    add_common(run);

    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
    sweep->add_option("kind", sweep_kind, "One of: ratio, alphadelta, xthreshold, steady")
        ->required();
    add_common(sweep);

    auto* steady = app.add_subcommand("steady", "Run the five steady-phase scenarios");
    add_common(steady);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return run_command(scenario_file, seed, out_dir, trace);
        }
        const std::uint64_t base_seed = seed.value_or(1);
        if (steady->parsed()) {
            return sweep_command(SweepKind::SteadyPhase, "steady", base_seed, out_dir, trace);
        }
        static const std::map<std::string, SweepKind> kinds = {
            {"ratio", SweepKind::ResourceRatio},
            {"alphadelta", SweepKind::AlphaDelta},
            {"xthreshold", SweepKind::XThreshold},
            {"steady", SweepKind::SteadyPhase},
        };
        auto it = kinds.find(sweep_kind);
        if (it == kinds.end()) {
            std::cerr << "unknown sweep kind '" << sweep_kind
                      << "' (expected ratio|alphadelta|xthreshold|steady)\n";
            return 1;
        }
        return sweep_command(it->second, sweep_kind, base_seed, out_dir, trace);
    } catch (const ConfigError& error) {
        std::cerr << "configuration error: " << error.what() << '\n';
        return 1;
    } catch (const IoError& error) {
        std::cerr << "i/o error: " << error.what() << '\n';
        return 1;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 2;
    }
}
