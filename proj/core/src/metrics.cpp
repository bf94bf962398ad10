#include "vmsched/metrics.hpp"

#include <limits>

#include "vmsched/engine.hpp"

namespace vmsched {

RateSummary summarize(const std::vector<JobRuntime>& finished) {
    RateSummary summary;
    if (finished.empty()) {
        const double undefined = std::numeric_limits<double>::quiet_NaN();
        summary.global_success_rate = undefined;
        summary.deadline_success_rate = undefined;
        summary.deadline_miss_rate = undefined;
        summary.termination_rate = undefined;
        return summary;
    }

    std::uint64_t on_time = 0;
    std::uint64_t late = 0;
    std::uint64_t terminated = 0;
    for (const auto& job : finished) {
        switch (job.status) {
        case JobStatus::CompletedOnTime: on_time += 1; break;
        case JobStatus::CompletedLate: late += 1; break;
        case JobStatus::Terminated: terminated += 1; break;
        case JobStatus::Queued:
        case JobStatus::Running:
            break; // summarize expects terminal states only
        }
    }

    const auto total = static_cast<double>(finished.size());
    summary.global_success_rate = static_cast<double>(on_time + late) / total;
    summary.deadline_success_rate = static_cast<double>(on_time) / total;
    summary.deadline_miss_rate = static_cast<double>(late + terminated) / total;
    summary.termination_rate = static_cast<double>(terminated) / total;
    return summary;
}

UtilizationRates utilization_rates(const UtilizationLedger& ledger) {
    UtilizationRates rates;
    const double core_hours = ledger.busy_core_hours + ledger.idle_core_hours;
    const double gb_hours = ledger.busy_gb_hours + ledger.idle_gb_hours;
    rates.cpu_utilization = core_hours > 0.0 ? ledger.busy_core_hours / core_hours : 0.0;
    rates.mem_utilization = gb_hours > 0.0 ? ledger.busy_gb_hours / gb_hours : 0.0;
    return rates;
}

} // namespace vmsched
