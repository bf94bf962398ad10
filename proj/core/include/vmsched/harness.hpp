#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vmsched/engine.hpp"
#include "vmsched/scenario.hpp"

namespace vmsched {

enum class SweepKind { ResourceRatio, AlphaDelta, XThreshold, SteadyPhase };

struct GridPoint {
    std::string label;       // becomes the scenario name of its rows
    ScenarioConfig config;
};

struct SweepSpec {
    SweepKind kind = SweepKind::ResourceRatio;
    std::vector<GridPoint> grid;
    std::vector<std::uint64_t> replicate_seeds;

    void validate() const;
};

/// The five steady-phase scenarios sharing workload, node and clock:
/// alg_1 no overhead, alg_2 static overhead, alg_3 dynamic overhead, all
/// without a policy; alg_4 adds the adaptive threshold and alg_5 the
/// statistical one on top of alg_3.
std::vector<ScenarioConfig> steady_configs();
std::vector<ScenarioConfig> steady_configs(std::uint64_t seed, double total_hours);

/// Training and comparison sweeps over the shipped grids: memory-to-core
/// ratios {1, 1.5, 2, 3}, the 3+3 alpha/delta combinations, initial
/// thresholds 0.3..0.7, or the steady-phase quintet.
SweepSpec make_sweep(SweepKind kind, const ScenarioConfig& base,
                     std::vector<std::uint64_t> seeds);

/// Run every grid point for every seed, rows ordered by (grid index, seed).
/// Scenario validation failures abort the sweep naming the grid point.
std::vector<SimulationReport> run_sweep(const SweepSpec& spec);

/// Result table serialization. The header and the 4-decimal rate formatting
/// are fixed; identical input yields byte-identical output.
std::string csv_header();
std::string csv_row(const SimulationReport& report);
std::string to_csv(const std::vector<SimulationReport>& reports);
void emit_csv(const std::vector<SimulationReport>& reports,
              const std::filesystem::path& destination);

/// Feedback-loop time series (clock, failure rate, threshold), one row per
/// estimator update. Runs without an estimator produce a header-only file.
std::string to_failure_trace(const SimulationReport& report);
void emit_failure_trace(const SimulationReport& report,
                        const std::filesystem::path& destination);

/// Mean failure rate over trace points in the last quarter of the run.
/// NaN when the trace has no points there.
double tail_mean_failure_rate(const SimulationReport& report);

} // namespace vmsched
