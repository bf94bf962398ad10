#pragma once

#include <cstdint>
#include <vector>

namespace vmsched {

/// Normalized shortfall of a job projected to miss its deadline:
/// (remaining_virtual - time_to_deadline) / remaining_virtual.
/// Both inputs must be positive with remaining strictly larger, so the
/// result lies in (0, 1). Throws std::invalid_argument otherwise.
double miss_ratio(double remaining_virtual_h, double time_to_deadline_h);

enum class Decision { Continue, Terminate };

/// Keep the job while its miss ratio stays below the threshold; a tie
/// terminates. A threshold of 1 never terminates since ratios stay below 1.
Decision decide(double ratio, double threshold);

/// Blend of the global success ratio and the most recent outcome:
/// f = 1 - ((met/total)(1 - alpha) + last*alpha).
double failure_rate_from(std::uint64_t met, std::uint64_t total,
                         int last_outcome, double alpha);

/// Running failure-rate estimate over finished jobs.
struct FailureRateEstimator {
    std::uint64_t met = 0;    // jobs that met their deadline
    std::uint64_t total = 0;  // all finished jobs seen
    double alpha = 0.05;      // weight of the most recent outcome, in (0,1)
    int last_outcome = 0;     // 1 if the latest job met its deadline
    double failure_rate = 0.0;

    void record_outcome(bool met_deadline);
};

/// Feedback controller nudging the termination threshold by one quantized
/// step per update: measured failure above target lowers the threshold,
/// below target raises it, a tie leaves it alone. The threshold is clamped
/// to [min_threshold, max_threshold].
struct ThresholdController {
    double threshold = 0.6;
    double step = 0.1;                // delta applied per update
    double target_failure_rate = 0.2;
    double min_threshold = 0.0;
    double max_threshold = 1.0;

    void update(double measured_failure_rate);
};

/// Streaming histogram of miss ratios observed on jobs that later met their
/// deadline. Drives the statistical threshold: the largest bin edge u with
/// empirical P[ratio < u] <= target_probability.
struct CdfEstimator {
    double bin_width = 0.01;
    std::uint64_t min_samples = 1000;     // gate before the CDF is trusted
    double target_probability = 0.8;
    double initial_threshold = 0.6;       // returned while below the gate
    std::vector<std::uint64_t> bins;      // lazily sized to ceil(1/bin_width)
    std::uint64_t sample_count = 0;

    /// Failed jobs are ignored; only successes enter the histogram.
    void record_sample(double ratio, bool eventually_succeeded);

    /// Quantile of the success-side ratio distribution at bin resolution,
    /// or the initial threshold while fewer than min_samples were recorded.
    double threshold() const;
};

enum class PolicyKind { None, Fixed, Adaptive, Statistical };

struct PolicyConfig {
    PolicyKind kind = PolicyKind::None;
    double initial_threshold = 0.6;
    // A zero floor lets an adaptive descent park where every projected job
    // is terminated on any transient; the shipped floor keeps that corner
    // out of reach while still allowing near-total strictness.
    double threshold_min = 0.05;
    double threshold_max = 1.0;
    double delta_step = 0.1;
    double alpha = 0.05;
    double target_failure_rate = 0.2;
    double target_probability = 0.8;   // statistical kind
    // Recovered-after-projection jobs are rare (a few percent of the mix),
    // so the shipped gate is lower than the estimator's own default; a
    // 1000-sample gate would keep the statistical policy dormant for an
    // entire steady run.
    std::uint64_t min_samples = 100;   // statistical kind
    double bin_width = 0.01;           // statistical kind
    std::uint64_t refresh_period = 100; // finished jobs between CDF refreshes

    void validate() const;
};

/// Mutable per-run policy state. Owned by a single simulation; never shared.
struct PolicyState {
    PolicyKind kind = PolicyKind::None;
    double threshold = 0.6;
    FailureRateEstimator estimator;
    ThresholdController controller;
    CdfEstimator cdf;
    std::uint64_t finished_jobs = 0;
    std::uint64_t refresh_period = 100;

    static PolicyState from_config(const PolicyConfig& config);

    /// Feed one finished job into the estimator and, depending on the kind,
    /// advance the threshold. `met_for_estimator` is the outcome under the
    /// configured miss definition; `first_ratio`/`has_ratio` carry the miss
    /// ratio recorded when the job first appeared to miss, and `met_deadline`
    /// says whether it recovered. The controller consumes the failure rate
    /// from before this outcome (one-update delay).
    void on_job_finished(bool met_for_estimator, bool has_ratio,
                         double first_ratio, bool met_deadline);
};

} // namespace vmsched
