#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "vmsched/policy.hpp"

using namespace vmsched;

namespace {

// Quantile oracle over the raw sample list: the largest value u such that the
// share of samples strictly below u stays within the probability target.
double brute_force_quantile(std::vector<double> samples, double probability) {
    std::sort(samples.begin(), samples.end());
    const auto index = static_cast<std::size_t>(
        std::floor(static_cast<double>(samples.size()) * probability));
    return samples[std::min(index, samples.size() - 1)];
}

} // namespace

TEST_CASE("miss ratio of a projected job") {
    CHECK(miss_ratio(10.0, 4.0) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(miss_ratio(8.0, 2.0) == doctest::Approx(0.75).epsilon(1e-12));

    // Near-equal inputs push the ratio toward zero but never to it.
    const double boundary = miss_ratio(10.0, 9.9999999);
    CHECK(boundary > 0.0);
    CHECK(boundary < 1e-7);

    CHECK_THROWS_AS(miss_ratio(10.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(miss_ratio(4.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(miss_ratio(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(miss_ratio(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("miss ratio is scale invariant and stays inside (0,1)") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> remaining(0.01, 500.0);
    std::uniform_real_distribution<double> fraction(0.001, 0.999);
    std::uniform_real_distribution<double> scale(0.01, 1000.0);
    for (int i = 0; i < 1000; ++i) {
        const double r = remaining(rng);
        const double ttd = r * fraction(rng);
        const double ratio = miss_ratio(r, ttd);
        CHECK(ratio > 0.0);
        CHECK(ratio < 1.0);
        const double k = scale(rng);
        CHECK(miss_ratio(k * r, k * ttd) == doctest::Approx(ratio).epsilon(1e-9));
    }
}

TEST_CASE("termination decision") {
    CHECK(decide(0.3, 0.6) == Decision::Continue);
    CHECK(decide(0.6, 0.6) == Decision::Terminate); // tie rejects
    CHECK(decide(0.95, 1.0) == Decision::Continue); // threshold 1 disables

    // Monotone: anything below a continued ratio also continues.
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double threshold = unit(rng);
        double a = unit(rng);
        double b = unit(rng);
        if (a > b) {
            std::swap(a, b);
        }
        if (decide(b, threshold) == Decision::Continue) {
            CHECK(decide(a, threshold) == Decision::Continue);
        }
    }
}

TEST_CASE("failure rate blend from counts") {
    // n=80 of N=100 with a met latest outcome at alpha 0.05.
    CHECK(failure_rate_from(80, 100, 1, 0.05) == doctest::Approx(0.19).epsilon(1e-12));
}

TEST_CASE("estimator identities at the extremes") {
    for (double alpha : {0.01, 0.05, 0.3, 0.9}) {
        FailureRateEstimator all_met{0, 0, alpha, 0, 0.0};
        FailureRateEstimator none_met{0, 0, alpha, 0, 0.0};
        for (int i = 0; i < 50; ++i) {
            all_met.record_outcome(true);
            none_met.record_outcome(false);
            CHECK(all_met.failure_rate == doctest::Approx(0.0).epsilon(1e-12));
            CHECK(none_met.failure_rate == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("incremental estimator matches a from-scratch recomputation") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int sequence = 0; sequence < 200; ++sequence) {
        const double alpha = 0.01 + 0.98 * unit(rng);
        FailureRateEstimator estimator{0, 0, alpha, 0, 0.0};
        std::uint64_t met = 0;
        std::uint64_t total = 0;
        int last = 0;
        const int length = 1 + static_cast<int>(unit(rng) * 300);
        for (int i = 0; i < length; ++i) {
            const bool met_deadline = unit(rng) < 0.7;
            estimator.record_outcome(met_deadline);

            total += 1;
            met += met_deadline ? 1 : 0;
            last = met_deadline ? 1 : 0;
            const double oracle =
                1.0 - ((static_cast<double>(met) / static_cast<double>(total)) * (1.0 - alpha) +
                       last * alpha);
            CHECK(std::abs(estimator.failure_rate - oracle) <= 1e-12);
        }
        CHECK(estimator.met == met);
        CHECK(estimator.total == total);
    }
}

TEST_CASE("threshold controller steps") {
    ThresholdController controller{0.6, 0.1, 0.2, 0.0, 1.0};
    controller.update(0.30);
    CHECK(controller.threshold == doctest::Approx(0.5).epsilon(1e-12));

    controller.update(0.20); // equal to target: no move
    CHECK(controller.threshold == doctest::Approx(0.5).epsilon(1e-12));

    ThresholdController near_floor{0.05, 0.1, 0.2, 0.0, 1.0};
    near_floor.update(0.9);
    CHECK(near_floor.threshold == 0.0); // clamp eats the remainder

    ThresholdController near_ceiling{0.95, 0.1, 0.2, 0.0, 1.0};
    near_ceiling.update(0.0);
    CHECK(near_ceiling.threshold == 1.0);
}

TEST_CASE("controller stays bounded and moves by at most one step") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ThresholdController controller{0.5, 0.07, 0.2, 0.1, 0.9};
    for (int i = 0; i < 2000; ++i) {
        const double before = controller.threshold;
        controller.update(unit(rng));
        CHECK(controller.threshold >= 0.1);
        CHECK(controller.threshold <= 0.9);
        CHECK(std::abs(controller.threshold - before) <= 0.07 + 1e-12);
    }
}

TEST_CASE("controller settles around the threshold where the target rate is met") {
    // Stationary environment whose failure rate rises with a laxer threshold,
    // crossing the 0.2 target at 0.14.
    const auto environment = [](double threshold) { return 0.13 + 0.5 * threshold; };
    for (double start : {0.05, 0.5, 0.9}) {
        ThresholdController controller{start, 0.05, 0.2, 0.0, 1.0};
        for (int i = 0; i < 200; ++i) {
            controller.update(environment(controller.threshold));
        }
        for (int i = 0; i < 100; ++i) {
            const double rate = environment(controller.threshold);
            CHECK(std::abs(rate - 0.2) <= 0.5 * 0.05 + 1e-9);
            CHECK(std::abs(controller.threshold - 0.14) <= 0.05 + 1e-9);
            controller.update(rate);
        }
    }
}

TEST_CASE("cdf estimator ignores failures and gates on sample count") {
    CdfEstimator estimator;
    estimator.min_samples = 1000;
    estimator.initial_threshold = 0.6;

    estimator.record_sample(0.45, false);
    CHECK(estimator.sample_count == 0);
    CHECK(estimator.bins.empty());

    estimator.record_sample(0.45, true);
    CHECK(estimator.sample_count == 1);

    for (int i = 0; i < 998; ++i) {
        estimator.record_sample(0.45, true);
    }
    CHECK(estimator.sample_count == 999);
    CHECK(estimator.threshold() == 0.6); // still below the gate

    estimator.record_sample(0.45, true);
    CHECK(estimator.sample_count == 1000);
    CHECK(estimator.threshold() != 0.6);
}

TEST_CASE("cdf threshold matches the decile example") {
    CdfEstimator estimator;
    estimator.min_samples = 10;
    estimator.target_probability = 0.5;
    std::vector<double> samples;
    for (int i = 0; i < 10; ++i) {
        samples.push_back(0.05 + 0.1 * i);
        estimator.record_sample(samples.back(), true);
    }
    const double threshold = estimator.threshold();
    CHECK(std::abs(threshold - 0.55) <= estimator.bin_width + 1e-12);
    CHECK(std::abs(threshold - brute_force_quantile(samples, 0.5)) <=
          estimator.bin_width + 1e-12);
}

TEST_CASE("a point mass pins the threshold to its own bin") {
    for (double target : {0.1, 0.5, 0.9}) {
        CdfEstimator estimator;
        estimator.min_samples = 100;
        estimator.target_probability = target;
        for (int i = 0; i < 1000; ++i) {
            estimator.record_sample(0.37, true);
        }
        CHECK(std::abs(estimator.threshold() - 0.37) <= estimator.bin_width + 1e-12);
    }

    // Degenerate step distribution at 0.5.
    CdfEstimator step;
    step.min_samples = 100;
    step.target_probability = 0.8;
    for (int i = 0; i < 1000; ++i) {
        step.record_sample(0.5, true);
    }
    CHECK(std::abs(step.threshold() - 0.5) <= step.bin_width + 1e-12);
}

TEST_CASE("cdf threshold tracks the brute-force quantile within one bin") {
    std::mt19937 rng(47);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    CdfEstimator estimator;
    estimator.min_samples = 100;
    std::vector<double> samples;
    for (int i = 0; i < 5000; ++i) {
        // Mixture: a low hump plus a uniform tail.
        const double u = unit(rng);
        const double x = u < 0.6 ? 0.4 * unit(rng) * unit(rng) : unit(rng) * 0.999;
        samples.push_back(x);
        estimator.record_sample(x, true);
    }
    for (double target : {0.5, 0.8, 0.9}) {
        estimator.target_probability = target;
        CHECK(std::abs(estimator.threshold() - brute_force_quantile(samples, target)) <=
              estimator.bin_width + 1e-12);
    }
}
