#include "vmsched/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "vmsched/errors.hpp"

namespace vmsched {

namespace {

constexpr double kSteadyHours = 100000.0;

std::string fixed4(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.4f", value);
    return buffer;
}

std::string fixed6(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.6f", value);
    return buffer;
}

ScenarioConfig named(ScenarioConfig config, std::string name) {
    config.name = std::move(name);
    return config;
}

} // namespace

void SweepSpec::validate() const {
    if (grid.empty()) {
        throw ConfigError("sweep: grid must not be empty");
    }
    if (replicate_seeds.empty()) {
        throw ConfigError("sweep: at least one replicate seed is required");
    }
    std::set<std::uint64_t> distinct(replicate_seeds.begin(), replicate_seeds.end());
    if (distinct.size() != replicate_seeds.size()) {
        throw ConfigError("sweep: replicate seeds must be distinct");
    }
}

std::vector<ScenarioConfig> steady_configs(std::uint64_t seed, double total_hours) {
    ScenarioConfig base = default_scenario();
    base.seed = seed;
    base.workload.total_hours = total_hours;

    ScenarioConfig alg1 = named(base, "alg_1");
    alg1.overhead.mode = OverheadMode::Off;
    alg1.policy.kind = PolicyKind::None;

    ScenarioConfig alg2 = named(base, "alg_2");
    alg2.overhead.mode = OverheadMode::Static;
    alg2.overhead.base_coefficient = 0.15;
    alg2.policy.kind = PolicyKind::None;

    ScenarioConfig alg3 = named(base, "alg_3");
    alg3.overhead.mode = OverheadMode::Dynamic;
    alg3.policy.kind = PolicyKind::None;

    ScenarioConfig alg4 = named(base, "alg_4");
    alg4.overhead.mode = OverheadMode::Dynamic;
    alg4.policy.kind = PolicyKind::Adaptive;

    ScenarioConfig alg5 = named(base, "alg_5");
    alg5.overhead.mode = OverheadMode::Dynamic;
    alg5.policy.kind = PolicyKind::Statistical;

    return {alg1, alg2, alg3, alg4, alg5};
}

std::vector<ScenarioConfig> steady_configs() {
    return steady_configs(default_scenario().seed, kSteadyHours);
}

SweepSpec make_sweep(SweepKind kind, const ScenarioConfig& base,
                     std::vector<std::uint64_t> seeds) {
    SweepSpec spec;
    spec.kind = kind;
    spec.replicate_seeds = std::move(seeds);

    switch (kind) {
    case SweepKind::ResourceRatio: {
        const double ratios[] = {1.0, 1.5, 2.0, 3.0};
        int index = 1;
        for (double ratio : ratios) {
            ScenarioConfig config = named(base, "res_" + std::to_string(index++));
            config.node.memory_gb = ratio * config.node.cpu_cores;
            spec.grid.push_back({config.name, config});
        }
        break;
    }
    case SweepKind::AlphaDelta: {
        const double alphas[] = {0.01, 0.05, 0.1};
        const double deltas[] = {0.05, 0.1, 0.2};
        int index = 1;
        for (double alpha : alphas) {
            ScenarioConfig config = named(base, "alpha_" + std::to_string(index++));
            config.policy.kind = PolicyKind::Adaptive;
            config.policy.alpha = alpha;
            config.policy.delta_step = 0.1;
            spec.grid.push_back({config.name, config});
        }
        index = 1;
        for (double delta : deltas) {
            ScenarioConfig config = named(base, "delta_" + std::to_string(index++));
            config.policy.kind = PolicyKind::Adaptive;
            config.policy.alpha = 0.01;
            config.policy.delta_step = delta;
            spec.grid.push_back({config.name, config});
        }
        break;
    }
    case SweepKind::XThreshold: {
        const double thresholds[] = {0.3, 0.4, 0.5, 0.6, 0.7};
        for (double threshold : thresholds) {
            char label[16];
            std::snprintf(label, sizeof(label), "x_%.1f", threshold);
            ScenarioConfig config = named(base, label);
            config.policy.kind = PolicyKind::Adaptive;
            config.policy.alpha = 0.05;
            config.policy.delta_step = 0.1;
            config.policy.initial_threshold = threshold;
            spec.grid.push_back({config.name, config});
        }
        break;
    }
    case SweepKind::SteadyPhase: {
        for (auto& config : steady_configs(base.seed, kSteadyHours)) {
            spec.grid.push_back({config.name, config});
        }
        break;
    }
    }
    return spec;
}

std::vector<SimulationReport> run_sweep(const SweepSpec& spec) {
    spec.validate();
    for (const auto& point : spec.grid) {
        try {
            point.config.validate();
        } catch (const ConfigError& error) {
            throw ConfigError("sweep: grid point '" + point.label + "': " + error.what());
        }
    }

    std::vector<SimulationReport> reports;
    reports.reserve(spec.grid.size() * spec.replicate_seeds.size());
    for (const auto& point : spec.grid) {
        for (std::uint64_t seed : spec.replicate_seeds) {
            ScenarioConfig config = point.config;
            config.name = point.label;
            config.seed = seed;
            reports.push_back(run_simulation(config));
        }
    }
    return reports;
}

std::string csv_header() {
    return "scenario,seed,param_r,param_alpha,param_delta,param_theta,jobs_total,"
           "on_time,late,terminated,global_success,deadline_success,deadline_miss,"
           "cpu_util,mem_util,wasted_core_hours\n";
}

std::string csv_row(const SimulationReport& report) {
    std::ostringstream row;
    row << report.scenario_name << ',' << report.seed << ','
        << fixed4(report.param_resource_ratio) << ',' << fixed4(report.param_alpha) << ','
        << fixed4(report.param_delta) << ',' << fixed4(report.param_theta) << ','
        << report.jobs_total << ',' << report.on_time << ',' << report.late << ','
        << report.terminated << ',' << fixed4(report.rates.global_success_rate) << ','
        << fixed4(report.rates.deadline_success_rate) << ','
        << fixed4(report.rates.deadline_miss_rate) << ','
        << fixed4(report.utilization.cpu_utilization) << ','
        << fixed4(report.utilization.mem_utilization) << ','
        << fixed4(report.ledger.wasted_core_hours) << '\n';
    return row.str();
}

std::string to_csv(const std::vector<SimulationReport>& reports) {
    std::string out = csv_header();
    for (const auto& report : reports) {
        out += csv_row(report);
    }
    return out;
}

void emit_csv(const std::vector<SimulationReport>& reports,
              const std::filesystem::path& destination) {
    std::ofstream output(destination, std::ios::binary);
    if (!output) {
        throw IoError("cannot write CSV: " + destination.string());
    }
    output << to_csv(reports);
    if (!output) {
        throw IoError("write failed: " + destination.string());
    }
}

std::string to_failure_trace(const SimulationReport& report) {
    std::string out = "clock,f_measured,theta\n";
    for (const auto& point : report.trace) {
        out += fixed4(point.clock_h);
        out += ',';
        out += fixed6(point.failure_rate);
        out += ',';
        out += fixed6(point.threshold);
        out += '\n';
    }
    return out;
}

void emit_failure_trace(const SimulationReport& report,
                        const std::filesystem::path& destination) {
    std::ofstream output(destination, std::ios::binary);
    if (!output) {
        throw IoError("cannot write trace: " + destination.string());
    }
    output << to_failure_trace(report);
    if (!output) {
        throw IoError("write failed: " + destination.string());
    }
}

double tail_mean_failure_rate(const SimulationReport& report) {
    const double cutoff = 0.75 * report.end_time_h;
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& point : report.trace) {
        if (point.clock_h >= cutoff) {
            sum += point.failure_rate;
            count += 1;
        }
    }
    return count == 0 ? std::nan("") : sum / static_cast<double>(count);
}

} // namespace vmsched
