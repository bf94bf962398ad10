#include "vmsched/workload.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "vmsched/errors.hpp"

namespace vmsched {

namespace {

// Uniform double in [0,1) from the top 53 bits, so generated workloads are
// bit-identical across standard library implementations.
double canonical_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

void WorkloadConfig::validate() const {
    if (classes.empty()) {
        throw ConfigError("workload: at least one job class is required");
    }
    double weight_sum = 0.0;
    for (const auto& cls : classes) {
        if (cls.name.empty()) {
            throw ConfigError("workload: job class with empty name");
        }
        if (!(cls.duration_min_h > 0.0) || cls.duration_min_h > cls.duration_max_h) {
            throw ConfigError("workload: class '" + cls.name +
                              "' needs 0 < duration_min <= duration_max");
        }
        if (cls.cpu_demand < 1) {
            throw ConfigError("workload: class '" + cls.name + "' needs cpu_demand >= 1");
        }
        if (!(cls.mem_demand_gb > 0.0)) {
            throw ConfigError("workload: class '" + cls.name + "' needs mem_demand_gb > 0");
        }
        if (cls.mix_weight < 0.0) {
            throw ConfigError("workload: class '" + cls.name + "' has negative mix_weight");
        }
        weight_sum += cls.mix_weight;
    }
    if (std::abs(weight_sum - 1.0) > 1e-9) {
        throw ConfigError("workload: mix weights must sum to 1, got " +
                          std::to_string(weight_sum));
    }
    if (buffer_fraction < 0.0) {
        throw ConfigError("workload: buffer_fraction must be >= 0");
    }
    if (!(total_hours > 0.0)) {
        throw ConfigError("workload: total_hours must be > 0");
    }
}

double assign_deadline(double duration_h, double buffer_fraction, double reference_time_h) {
    if (!(duration_h > 0.0)) {
        throw std::invalid_argument("assign_deadline: duration must be > 0");
    }
    if (buffer_fraction < 0.0) {
        throw ConfigError("assign_deadline: buffer_fraction must be >= 0");
    }
    return reference_time_h + duration_h * (1.0 + buffer_fraction);
}

std::vector<JobSpec> generate_workload(const WorkloadConfig& config,
                                       std::uint64_t seed,
                                       double total_hours) {
    if (!(total_hours > 0.0)) {
        throw ConfigError("generate_workload: total_hours must be > 0");
    }
    config.validate();

    std::mt19937_64 rng(seed);
    std::vector<JobSpec> jobs;
    double generated_hours = 0.0;

    while (generated_hours < total_hours) {
        const double pick = canonical_unit(rng);
        std::size_t class_index = config.classes.size() - 1;
        double cumulative = 0.0;
        for (std::size_t i = 0; i < config.classes.size(); ++i) {
            cumulative += config.classes[i].mix_weight;
            if (pick < cumulative) {
                class_index = i;
                break;
            }
        }
        const JobClass& cls = config.classes[class_index];

        const double span = cls.duration_max_h - cls.duration_min_h;
        const double duration = cls.duration_min_h + canonical_unit(rng) * span;

        JobSpec job;
        job.id = jobs.size();
        job.class_index = class_index;
        job.class_name = cls.name;
        job.duration_h = duration;
        job.submit_time_h = 0.0;
        job.deadline_h = assign_deadline(duration, config.buffer_fraction, 0.0);
        job.cpu_demand = cls.cpu_demand;
        job.mem_demand_gb = cls.mem_demand_gb;
        jobs.push_back(std::move(job));

        generated_hours += duration;
    }
    return jobs;
}

WorkloadConfig default_workload() {
    WorkloadConfig config;
    config.classes = {
        {"EventGeneration", 1.0, 6.0, 1, 0.5, 0.4},
        {"Simulation", 6.0, 12.0, 1, 1.0, 0.4},
        {"Reconstruction", 12.0, 24.0, 1, 2.0, 0.2},
    };
    config.buffer_fraction = 0.05;
    config.total_hours = 10000.0;
    return config;
}

} // namespace vmsched
