#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vmsched {

/// One job family of the simulated production mix. Durations are drawn
/// uniformly from [duration_min_h, duration_max_h].
struct JobClass {
    std::string name;
    double duration_min_h = 1.0;
    double duration_max_h = 1.0;
    int cpu_demand = 1;          // whole cores
    double mem_demand_gb = 1.0;
    double mix_weight = 1.0;     // weights over all classes sum to 1
};

struct WorkloadConfig {
    std::vector<JobClass> classes;
    double buffer_fraction = 0.05; // deadline slack as a fraction of duration
    double total_hours = 10000.0;  // queue length in hours of physical work

    /// Throws ConfigError on empty class list, weights that do not sum to 1
    /// (1e-9 tolerance), malformed duration ranges, or a negative buffer.
    void validate() const;
};

/// Static description of one job as it sits in the queue.
struct JobSpec {
    std::uint64_t id = 0;
    std::size_t class_index = 0;
    std::string class_name;
    double duration_h = 0.0;   // physical execution time
    double submit_time_h = 0.0;
    double deadline_h = 0.0;   // absolute, submit_time + duration*(1+buffer)
    int cpu_demand = 1;
    double mem_demand_gb = 0.0;

    bool operator==(const JobSpec&) const = default;
};

/// Absolute deadline for a job of the given duration started (or submitted)
/// at `reference_time_h`. Throws ConfigError for a negative buffer and
/// std::invalid_argument for a non-positive duration.
double assign_deadline(double duration_h, double buffer_fraction, double reference_time_h);

/// Draws jobs from the class mix until their summed physical duration first
/// reaches `total_hours`; the list minus its last element sums below the
/// target. Identical (config, seed) inputs produce bit-identical lists.
/// All jobs carry submit_time 0 and are ordered by (submit_time, id).
std::vector<JobSpec> generate_workload(const WorkloadConfig& config,
                                       std::uint64_t seed,
                                       double total_hours);

/// Default three-class production mix: short event-generation jobs, mid-range
/// simulation jobs and long memory-heavy reconstruction jobs.
WorkloadConfig default_workload();

} // namespace vmsched
