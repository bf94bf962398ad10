#pragma once

#include <cstdint>
#include <vector>

namespace vmsched {

struct JobRuntime;

/// Resource bookkeeping accumulated tick by tick. Busy plus idle core-hours
/// always equals cores x simulated time (within one tick); wasted core-hours
/// are the share of busy time spent on jobs that ended late or terminated.
struct UtilizationLedger {
    double busy_core_hours = 0.0;
    double idle_core_hours = 0.0;
    double busy_gb_hours = 0.0;
    double idle_gb_hours = 0.0;
    double wasted_core_hours = 0.0;
};

/// Outcome rates over finished jobs. All values are NaN when no job finished;
/// deadline success and miss always sum to 1 otherwise.
struct RateSummary {
    double global_success_rate = 0.0;   // completed at all, on time or late
    double deadline_success_rate = 0.0; // completed on time
    double deadline_miss_rate = 0.0;    // late completions plus terminations
    double termination_rate = 0.0;
};

struct UtilizationRates {
    double cpu_utilization = 0.0; // busy / (busy + idle) core-hours
    double mem_utilization = 0.0;
};

RateSummary summarize(const std::vector<JobRuntime>& finished);
UtilizationRates utilization_rates(const UtilizationLedger& ledger);

} // namespace vmsched
