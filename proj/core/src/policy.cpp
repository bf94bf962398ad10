#include "vmsched/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vmsched/errors.hpp"

namespace vmsched {

double miss_ratio(double remaining_virtual_h, double time_to_deadline_h) {
    if (!(remaining_virtual_h > 0.0) || !(time_to_deadline_h > 0.0)) {
        throw std::invalid_argument("miss_ratio: inputs must be > 0");
    }
    if (!(remaining_virtual_h > time_to_deadline_h)) {
        throw std::invalid_argument("miss_ratio: job is not projected to miss");
    }
    return (remaining_virtual_h - time_to_deadline_h) / remaining_virtual_h;
}

Decision decide(double ratio, double threshold) {
    return ratio < threshold ? Decision::Continue : Decision::Terminate;
}

double failure_rate_from(std::uint64_t met, std::uint64_t total,
                         int last_outcome, double alpha) {
    const double success_ratio = static_cast<double>(met) / static_cast<double>(total);
    return 1.0 - (success_ratio * (1.0 - alpha) + static_cast<double>(last_outcome) * alpha);
}

void FailureRateEstimator::record_outcome(bool met_deadline) {
    total += 1;
    if (met_deadline) {
        met += 1;
    }
    last_outcome = met_deadline ? 1 : 0;
    failure_rate = failure_rate_from(met, total, last_outcome, alpha);
}

void ThresholdController::update(double measured_failure_rate) {
    if (measured_failure_rate > target_failure_rate) {
        threshold = std::max(threshold - step, min_threshold);
    } else if (measured_failure_rate < target_failure_rate) {
        threshold = std::min(threshold + step, max_threshold);
    }
}

void CdfEstimator::record_sample(double ratio, bool eventually_succeeded) {
    if (!eventually_succeeded) {
        return;
    }
    if (!(ratio >= 0.0) || !(ratio < 1.0)) {
        throw std::invalid_argument("record_sample: ratio must lie in [0,1)");
    }
    if (bins.empty()) {
        bins.assign(static_cast<std::size_t>(std::ceil(1.0 / bin_width - 1e-9)), 0);
    }
    auto index = static_cast<std::size_t>(ratio / bin_width);
    index = std::min(index, bins.size() - 1);
    bins[index] += 1;
    sample_count += 1;
}

double CdfEstimator::threshold() const {
    if (sample_count < min_samples) {
        return initial_threshold;
    }
    // Largest bin edge u with P[ratio < u] <= target; edge 0 always qualifies.
    double best_edge = 0.0;
    std::uint64_t below = 0;
    for (std::size_t i = 0; i <= bins.size(); ++i) {
        const double share = static_cast<double>(below) / static_cast<double>(sample_count);
        if (share > target_probability) {
            break;
        }
        best_edge = static_cast<double>(i) * bin_width;
        if (i < bins.size()) {
            below += bins[i];
        }
    }
    return best_edge;
}

void PolicyConfig::validate() const {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw ConfigError("policy: alpha must lie in (0,1)");
    }
    if (!(delta_step > 0.0)) {
        throw ConfigError("policy: delta_step must be > 0");
    }
    if (threshold_min < 0.0 || threshold_max > 1.0 || threshold_min > threshold_max) {
        throw ConfigError("policy: thresholds must satisfy 0 <= min <= max <= 1");
    }
    if (initial_threshold < threshold_min || initial_threshold > threshold_max) {
        throw ConfigError("policy: initial_threshold outside [threshold_min, threshold_max]");
    }
    if (!(target_failure_rate >= 0.0) || !(target_failure_rate <= 1.0)) {
        throw ConfigError("policy: target_failure_rate must lie in [0,1]");
    }
    if (!(target_probability > 0.0) || !(target_probability < 1.0)) {
        throw ConfigError("policy: target_probability must lie in (0,1)");
    }
    if (!(bin_width > 0.0) || bin_width > 1.0) {
        throw ConfigError("policy: bin_width must lie in (0,1]");
    }
    if (refresh_period == 0) {
        throw ConfigError("policy: refresh_period must be >= 1");
    }
}

PolicyState PolicyState::from_config(const PolicyConfig& config) {
    PolicyState state;
    state.kind = config.kind;
    state.threshold = config.initial_threshold;
    state.estimator.alpha = config.alpha;
    state.controller.threshold = config.initial_threshold;
    state.controller.step = config.delta_step;
    state.controller.target_failure_rate = config.target_failure_rate;
    state.controller.min_threshold = config.threshold_min;
    state.controller.max_threshold = config.threshold_max;
    state.cdf.bin_width = config.bin_width;
    state.cdf.min_samples = config.min_samples;
    state.cdf.target_probability = config.target_probability;
    state.cdf.initial_threshold = config.initial_threshold;
    state.refresh_period = config.refresh_period;
    return state;
}

void PolicyState::on_job_finished(bool met_for_estimator, bool has_ratio,
                                  double first_ratio, bool met_deadline) {
    if (kind == PolicyKind::None) {
        return;
    }
    // Delay element: the controller sees the rate as of the previous update.
    const bool have_previous = estimator.total > 0;
    const double previous_rate = estimator.failure_rate;
    estimator.record_outcome(met_for_estimator);
    finished_jobs += 1;

    switch (kind) {
    case PolicyKind::Adaptive:
        if (have_previous) {
            controller.update(previous_rate);
            threshold = controller.threshold;
        }
        break;
    case PolicyKind::Statistical:
        if (has_ratio) {
            cdf.record_sample(first_ratio, met_deadline);
        }
        if (finished_jobs % refresh_period == 0) {
            threshold = std::clamp(cdf.threshold(), controller.min_threshold,
                                   controller.max_threshold);
        }
        break;
    case PolicyKind::Fixed:
    case PolicyKind::None:
        break;
    }
}

} // namespace vmsched
