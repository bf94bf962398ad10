#include "vmsched/engine.hpp"

#include <algorithm>
#include <cassert>
#include <utility>

#include "vmsched/errors.hpp"

namespace vmsched {

namespace {

// Slack for comparisons on the tick grid; far below one tick.
constexpr double kTimeEps = 1e-9;

} // namespace

bool projected_to_miss(const JobRuntime& job, double overhead, double clock_h) {
    const double remaining_physical = job.spec.duration_h - job.physical_work_done_h;
    if (!(remaining_physical > 0.0)) {
        return false;
    }
    const double remaining_virtual = remaining_physical * (1.0 + overhead);
    return remaining_virtual > job.deadline_h - clock_h;
}

Simulation::Simulation(const ScenarioConfig& config) : config_(config) {
    config_.validate();
    queue_ = generate_workload(config_.workload, config_.seed, config_.workload.total_hours);
    policy_ = PolicyState::from_config(config_.policy);
    admit_from_queue();
}

double Simulation::current_overhead() const {
    if (config_.overhead.mode != OverheadMode::Dynamic) {
        return effective_overhead(config_.overhead, {});
    }
    return effective_overhead(config_.overhead, running_mix());
}

ClassMix Simulation::running_mix() const {
    ClassMix mix;
    for (const auto& job : running_) {
        mix[job.spec.class_name] += 1;
    }
    return mix;
}

void Simulation::admit_from_queue() {
    const double clock = clock_h();
    const std::size_t first_new = running_.size();

    while (queue_pos_ < queue_.size()) {
        const JobSpec& head = queue_[queue_pos_];
        const int free_cores = config_.node.cpu_cores - cores_in_use_;
        const double free_memory = config_.node.memory_gb - memory_in_use_gb_;
        if (head.cpu_demand > free_cores || head.mem_demand_gb > free_memory + kTimeEps) {
            break;
        }

        JobRuntime job;
        job.spec = head;
        job.status = JobStatus::Running;
        job.start_time_h = clock;
        // The queue is a backlog: a job's deadline clock starts when the node
        // picks it up, not while it waits for a slot.
        job.deadline_h = clock + (head.deadline_h - head.submit_time_h);
        cores_in_use_ += head.cpu_demand;
        memory_in_use_gb_ += head.mem_demand_gb;
        running_.push_back(std::move(job));
        ++queue_pos_;
    }

    if (first_new < running_.size()) {
        const double admission_overhead = current_overhead();
        for (std::size_t i = first_new; i < running_.size(); ++i) {
            auto& job = running_[i];
            job.booked_slots = slots_required(
                virtual_exec_time(job.spec.duration_h, admission_overhead), config_.clock);
        }
    }

    max_cores_in_use_ = std::max(max_cores_in_use_, cores_in_use_);
    max_memory_in_use_gb_ = std::max(max_memory_in_use_gb_, memory_in_use_gb_);
}

void Simulation::finalize(JobRuntime&& job, JobStatus status, double finish_time) {
    job.status = status;
    job.finish_time_h = finish_time;
    cores_in_use_ -= job.spec.cpu_demand;
    memory_in_use_gb_ -= job.spec.mem_demand_gb;

    const bool met_deadline = status == JobStatus::CompletedOnTime;
    if (status == JobStatus::CompletedLate || status == JobStatus::Terminated) {
        ledger_.wasted_core_hours += job.core_hours_consumed;
    }

    bool met_for_estimator = met_deadline;
    switch (config_.miss_definition) {
    case MissDefinition::LateAndTerminated:
        met_for_estimator = met_deadline;
        break;
    case MissDefinition::LateOnly:
        met_for_estimator = status != JobStatus::CompletedLate;
        break;
    case MissDefinition::TerminatedOnly:
        met_for_estimator = status != JobStatus::Terminated;
        break;
    }

    if (policy_.kind != PolicyKind::None) {
        policy_.on_job_finished(met_for_estimator,
                                job.first_projected_miss_ratio.has_value(),
                                job.first_projected_miss_ratio.value_or(0.0),
                                met_deadline);
        trace_.push_back({finish_time, policy_.estimator.failure_rate, policy_.threshold});
    }

    finished_.push_back(std::move(job));
}

void Simulation::step() {
    const double tick = config_.clock.tick_h;
    const double tick_end = static_cast<double>(tick_index_ + 1) * tick;

    // (1) Overhead for this tick comes from the mix that runs through it.
    const double overhead = current_overhead();
    const int busy_cores = cores_in_use_;
    const double busy_memory = memory_in_use_gb_;

    assert(busy_cores <= config_.node.cpu_cores);
    assert(busy_memory <= config_.node.memory_gb + kTimeEps);

    // (2) Work accrual, slowed by the overhead coefficient, then
    // (3) completions and (4) expiries: a job is terminated by the node
    // once its deadline passes without the work being done.
    // (5) Still-running jobs projected to miss face the threshold policy.
    const double work_per_tick = tick / (1.0 + overhead);
    std::vector<JobRuntime> survivors;
    survivors.reserve(running_.size());
    for (auto& job : running_) {
        const double work_before = job.physical_work_done_h;
        job.physical_work_done_h =
            std::min(work_before + work_per_tick, job.spec.duration_h);
        job.core_hours_consumed += job.spec.cpu_demand * tick;

        if (job.physical_work_done_h >= job.spec.duration_h - kTimeEps) {
            job.physical_work_done_h = job.spec.duration_h;
            // The job crossed its full duration inside this tick; place the
            // completion instant where the remaining work actually ran out
            // (the slot itself stays booked through the tick).
            const double clock_start = tick_end - tick;
            const double completion = std::min(
                clock_start + (job.spec.duration_h - work_before) * (1.0 + overhead),
                tick_end);
            const bool on_time = completion <= job.deadline_h + kTimeEps;
            finalize(std::move(job),
                     on_time ? JobStatus::CompletedOnTime : JobStatus::CompletedLate,
                     completion);
            continue;
        }
        if (tick_end > job.deadline_h + kTimeEps) {
            finalize(std::move(job), JobStatus::Terminated, tick_end);
            continue;
        }
        const double time_to_deadline = job.deadline_h - tick_end;
        if (policy_.kind != PolicyKind::None && time_to_deadline > 0.0 &&
            projected_to_miss(job, overhead, tick_end)) {
            const double remaining_virtual =
                (job.spec.duration_h - job.physical_work_done_h) * (1.0 + overhead);
            const double ratio = miss_ratio(remaining_virtual, time_to_deadline);
            if (!job.first_projected_miss_ratio) {
                job.first_projected_miss_ratio = ratio;
            }
            if (decide(ratio, policy_.threshold) == Decision::Terminate) {
                finalize(std::move(job), JobStatus::Terminated, tick_end);
                continue;
            }
        }
        survivors.push_back(std::move(job));
    }
    running_ = std::move(survivors);

    // (8) Ledger covers the mix that actually occupied this tick.
    ledger_.busy_core_hours += busy_cores * tick;
    ledger_.idle_core_hours += (config_.node.cpu_cores - busy_cores) * tick;
    ledger_.busy_gb_hours += busy_memory * tick;
    ledger_.idle_gb_hours += (config_.node.memory_gb - busy_memory) * tick;

    // (9) Advance the clock, then (7) refill freed capacity for the next tick.
    tick_index_ += 1;
    admit_from_queue();
}

SimulationReport Simulation::take_report() {
    SimulationReport report;
    report.scenario_name = config_.name;
    report.seed = config_.seed;
    report.jobs_total = finished_.size();
    for (const auto& job : finished_) {
        switch (job.status) {
        case JobStatus::CompletedOnTime: report.on_time += 1; break;
        case JobStatus::CompletedLate: report.late += 1; break;
        case JobStatus::Terminated: report.terminated += 1; break;
        default: break;
        }
    }
    report.rates = summarize(finished_);
    report.utilization = utilization_rates(ledger_);
    report.ledger = ledger_;
    report.end_time_h = clock_h();
    report.max_cores_in_use = max_cores_in_use_;
    report.max_memory_in_use_gb = max_memory_in_use_gb_;
    report.final_failure_rate = policy_.estimator.failure_rate;
    report.final_threshold = policy_.threshold;
    report.param_resource_ratio = config_.node.resource_ratio();
    report.param_alpha = config_.policy.alpha;
    report.param_delta = config_.policy.delta_step;
    report.param_theta = config_.policy.initial_threshold;
    report.jobs = std::move(finished_);
    report.trace = std::move(trace_);
    return report;
}

SimulationReport run_simulation(const ScenarioConfig& config) {
    Simulation simulation(config);
    while (!simulation.finished()) {
        simulation.step();
    }
    return simulation.take_report();
}

} // namespace vmsched
