#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "vmsched/overhead.hpp"
#include "vmsched/policy.hpp"
#include "vmsched/workload.hpp"

namespace vmsched {

/// Capacity of the simulated worker node.
struct NodeConfig {
    int cpu_cores = 4;
    double memory_gb = 8.0;

    double resource_ratio() const { return memory_gb / cpu_cores; }
    void validate() const;
};

/// Which outcomes count as failures for the rate estimator that drives the
/// adaptive loop. Reported metrics are unaffected.
enum class MissDefinition { LateAndTerminated, LateOnly, TerminatedOnly };

/// Complete description of one simulation run.
struct ScenarioConfig {
    std::string name = "scenario";
    std::uint64_t seed = 42;
    NodeConfig node;
    WorkloadConfig workload;
    OverheadModel overhead;
    PolicyConfig policy;
    SlotClock clock;
    MissDefinition miss_definition = MissDefinition::LateAndTerminated;

    /// Validates every section plus cross-section constraints (each job class
    /// must fit the node). Throws ConfigError naming the offending field.
    void validate() const;
};

/// Shipped defaults: 4-core/8-GB node, the three-class mix, 5% deadline
/// buffer, 0.1 h tick, adaptive policy, dynamic overhead.
ScenarioConfig default_scenario();

/// Mix-keyed surcharge table used by the default dynamic overhead model.
std::map<ClassMix, double> default_contention_table();

/// JSON (with // comments allowed) <-> ScenarioConfig. Unknown keys are
/// rejected; missing sections keep their defaults.
ScenarioConfig load_scenario(const std::filesystem::path& file);
ScenarioConfig parse_scenario(const std::string& json_text);
std::string scenario_to_json(const ScenarioConfig& config);

} // namespace vmsched
