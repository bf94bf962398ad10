#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "vmsched/metrics.hpp"
#include "vmsched/scenario.hpp"

namespace vmsched {

enum class JobStatus { Queued, Running, CompletedOnTime, CompletedLate, Terminated };

/// Execution state of one job. Deadlines are anchored at dispatch: the queue
/// models a backlog of work, and a job's clock starts when the node picks
/// it up.
struct JobRuntime {
    JobSpec spec;
    JobStatus status = JobStatus::Queued;
    double physical_work_done_h = 0.0;  // in [0, duration]
    double start_time_h = -1.0;
    double finish_time_h = -1.0;        // completion or termination, tick end
    double deadline_h = 0.0;            // start + duration * (1 + buffer)
    int booked_slots = 0;
    std::optional<double> first_projected_miss_ratio;
    double core_hours_consumed = 0.0;
};

/// One sample of the feedback loop, appended per estimator update.
struct TracePoint {
    double clock_h = 0.0;
    double failure_rate = 0.0;
    double threshold = 0.0;
};

struct SimulationReport {
    std::string scenario_name;
    std::uint64_t seed = 0;

    std::uint64_t jobs_total = 0;
    std::uint64_t on_time = 0;
    std::uint64_t late = 0;
    std::uint64_t terminated = 0;

    RateSummary rates;
    UtilizationRates utilization;
    UtilizationLedger ledger;

    double end_time_h = 0.0;
    int max_cores_in_use = 0;
    double max_memory_in_use_gb = 0.0;

    double final_failure_rate = 0.0;
    double final_threshold = 0.0;

    // Echo of the parameters a result row reports alongside the rates.
    double param_resource_ratio = 0.0;
    double param_alpha = 0.0;
    double param_delta = 0.0;
    double param_theta = 0.0;

    std::vector<JobRuntime> jobs;     // terminal states, completion order
    std::vector<TracePoint> trace;    // empty when the policy has no estimator
};

/// True when finishing the job's remaining physical work under the given
/// overhead cannot fit into the time left before its deadline. Exactly on
/// time is not a miss.
bool projected_to_miss(const JobRuntime& job, double overhead, double clock_h);

/// Deterministic tick-driven simulation of one scenario. The heavy lifting
/// sits in step(); run() loops until both queue and running set drain.
class Simulation {
public:
    explicit Simulation(const ScenarioConfig& config);

    /// Admit jobs from the queue head while cores and memory allow. Strict
    /// FIFO: a blocked head blocks everything behind it.
    void admit_from_queue();

    /// Advance the node by one tick: accrue work under the current overhead,
    /// settle completions, expire overdue jobs, apply the termination policy,
    /// refill free slots and record the ledger.
    void step();

    bool finished() const { return queue_pos_ >= queue_.size() && running_.empty(); }
    SimulationReport take_report();

    double clock_h() const { return static_cast<double>(tick_index_) * config_.clock.tick_h; }
    const std::vector<JobRuntime>& running() const { return running_; }
    const std::vector<JobRuntime>& finished_jobs() const { return finished_; }
    const PolicyState& policy() const { return policy_; }
    const UtilizationLedger& ledger() const { return ledger_; }

private:
    double current_overhead() const;
    ClassMix running_mix() const;
    void finalize(JobRuntime&& job, JobStatus status, double finish_time);

    ScenarioConfig config_;
    std::vector<JobSpec> queue_;
    std::size_t queue_pos_ = 0;
    std::vector<JobRuntime> running_;
    std::vector<JobRuntime> finished_;
    PolicyState policy_;
    UtilizationLedger ledger_;
    std::vector<TracePoint> trace_;
    std::uint64_t tick_index_ = 0;
    int cores_in_use_ = 0;
    double memory_in_use_gb_ = 0.0;
    int max_cores_in_use_ = 0;
    double max_memory_in_use_gb_ = 0.0;
};

/// Validate, generate the workload, run to completion and summarize.
/// Bit-identical reports for identical (config, seed).
SimulationReport run_simulation(const ScenarioConfig& config);

} // namespace vmsched
