#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vmsched/engine.hpp"
#include "vmsched/errors.hpp"
#include "vmsched/scenario.hpp"

using namespace vmsched;

namespace {

ScenarioConfig one_class_scenario(double duration_h, double buffer, OverheadMode mode,
                                  double coefficient, PolicyKind kind, double total_hours) {
    ScenarioConfig config = default_scenario();
    config.workload.classes = {{"Fixed", duration_h, duration_h, 1, 1.0, 1.0}};
    config.workload.buffer_fraction = buffer;
    config.workload.total_hours = total_hours;
    config.overhead.mode = mode;
    config.overhead.base_coefficient = coefficient;
    config.overhead.contention_table.clear();
    config.policy.kind = kind;
    return config;
}

} // namespace

TEST_CASE("admission honors cores") {
    // Six 1-core jobs on a 4-core node: exactly four start.
    auto config = one_class_scenario(10.0, 0.05, OverheadMode::Off, 0.0, PolicyKind::None, 60.0);
    config.workload.classes[0].mem_demand_gb = 0.5;
    Simulation simulation(config);
    CHECK(simulation.running().size() == 4);

    const auto report = run_simulation(config);
    CHECK(report.max_cores_in_use == 4);
    CHECK(report.jobs_total == 6);
    // The fifth job enters the tick the first four finish.
    CHECK(report.jobs.at(4).start_time_h == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("admission blocks on memory even with a free core") {
    auto config = one_class_scenario(10.0, 0.0, OverheadMode::Static, 0.05,
                                     PolicyKind::None, 60.0);
    config.workload.classes[0].mem_demand_gb = 2.34; // three fit in 8 GB, a core stays idle
    Simulation simulation(config);
    CHECK(simulation.running().size() == 3);

    const auto report = run_simulation(config);
    CHECK(report.max_cores_in_use == 3);
    CHECK(report.max_memory_in_use_gb == doctest::Approx(7.02).epsilon(1e-9));

    // Zero buffer with a 5% slowdown: the head trio is terminated at the
    // first tick past its deadline, freeing all slots for the next trio.
    CHECK(report.jobs.at(0).status == JobStatus::Terminated);
    CHECK(report.jobs.at(0).finish_time_h == doctest::Approx(10.1).epsilon(1e-9));
    CHECK(report.jobs.at(3).start_time_h == doctest::Approx(10.1).epsilon(1e-9));
}

TEST_CASE("work accrues tick by tick and completes at the physical duration") {
    auto config = one_class_scenario(10.0, 0.05, OverheadMode::Off, 0.0, PolicyKind::None, 10.0);
    Simulation simulation(config);
    simulation.step();
    REQUIRE(simulation.running().size() == 1);
    CHECK(simulation.running().front().physical_work_done_h ==
          doctest::Approx(0.1).epsilon(1e-12));

    const auto report = run_simulation(config);
    REQUIRE(report.jobs_total == 1);
    CHECK(report.jobs.front().status == JobStatus::CompletedOnTime);
    CHECK(report.jobs.front().finish_time_h == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(report.rates.deadline_miss_rate == 0.0);
}

TEST_CASE("a static slowdown stretches wall time to the virtual execution time") {
    const auto config =
        one_class_scenario(10.0, 0.5, OverheadMode::Static, 0.2, PolicyKind::None, 10.0);
    const auto report = run_simulation(config);
    REQUIRE(report.jobs_total == 1);
    CHECK(report.jobs.front().status == JobStatus::CompletedOnTime);
    CHECK(report.jobs.front().finish_time_h == doctest::Approx(12.0).epsilon(1e-9));
}

TEST_CASE("a job that cannot meet its deadline is terminated when the deadline passes") {
    const auto config =
        one_class_scenario(10.0, 0.0, OverheadMode::Static, 0.05, PolicyKind::None, 10.0);
    const auto report = run_simulation(config);
    REQUIRE(report.jobs_total == 1);
    const auto& job = report.jobs.front();
    CHECK(job.status == JobStatus::Terminated);
    CHECK(job.finish_time_h == doctest::Approx(10.1).epsilon(1e-9));
    CHECK(job.physical_work_done_h < job.spec.duration_h);
    CHECK(report.rates.deadline_success_rate == 0.0);
    CHECK(report.ledger.wasted_core_hours > 0.0);
}

TEST_CASE("a short job crossing its duration in the expiry tick completes late") {
    const auto config =
        one_class_scenario(1.0, 0.0, OverheadMode::Static, 0.05, PolicyKind::None, 1.0);
    const auto report = run_simulation(config);
    REQUIRE(report.jobs_total == 1);
    CHECK(report.jobs.front().status == JobStatus::CompletedLate);
    CHECK(report.jobs.front().finish_time_h == doctest::Approx(1.05).epsilon(1e-9));
    CHECK(report.rates.deadline_success_rate == 0.0);
    CHECK(report.rates.global_success_rate == 1.0);
}

TEST_CASE("miss projection compares remaining virtual work against the time left") {
    JobRuntime job;
    job.spec.duration_h = 10.0;
    job.physical_work_done_h = 0.0;
    job.deadline_h = 12.0;
    // Remaining 10 h at 10% slowdown is 11 h of wall time against 12 h left.
    CHECK(!projected_to_miss(job, 0.1, 0.0));
    job.deadline_h = 11.0; // exactly on time is not a miss
    CHECK(!projected_to_miss(job, 0.1, 0.0));
    job.deadline_h = 10.0;
    CHECK(projected_to_miss(job, 0.1, 0.0));
}

TEST_CASE("threshold policy records the first projected ratio and cuts when it crosses") {
    auto config =
        one_class_scenario(100.0, 0.05, OverheadMode::Static, 0.10, PolicyKind::Fixed, 100.0);
    config.policy.initial_threshold = 0.6;
    const auto report = run_simulation(config);
    REQUIRE(report.jobs_total == 1);
    const auto& job = report.jobs.front();

    // First evaluation, one tick in: remaining virtual 109.9 against 104.9.
    REQUIRE(job.first_projected_miss_ratio.has_value());
    CHECK(*job.first_projected_miss_ratio == doctest::Approx(5.0 / 109.9).epsilon(1e-9));

    // The ratio 5/(110-t) reaches 0.6 at t=101.67, one tick before which the
    // job is still running; it never survives to its own deadline.
    CHECK(job.status == JobStatus::Terminated);
    CHECK(job.finish_time_h == doctest::Approx(101.7).epsilon(1e-9));

    // A threshold of 1 keeps the same job running to a late completion at
    // the expiry boundary check instead.
    auto lax = config;
    lax.policy.initial_threshold = 1.0;
    lax.policy.threshold_max = 1.0;
    const auto lax_report = run_simulation(lax);
    CHECK(lax_report.jobs.front().status == JobStatus::Terminated);
    CHECK(lax_report.jobs.front().finish_time_h == doctest::Approx(105.1).epsilon(1e-9));
}

TEST_CASE("unlimited deadlines never miss under any overhead") {
    auto config = default_scenario();
    config.workload.total_hours = 2000.0;
    config.workload.buffer_fraction = 1e6;
    config.overhead.mode = OverheadMode::Static;
    config.overhead.base_coefficient = 0.3;
    CHECK(run_simulation(config).rates.deadline_miss_rate == 0.0);

    config.overhead.mode = OverheadMode::Dynamic;
    config.overhead.base_coefficient = 0.02;
    config.overhead.contention_table = default_contention_table();
    CHECK(run_simulation(config).rates.deadline_miss_rate == 0.0);
}

TEST_CASE("zero buffer with any slowdown kills every deadline") {
    for (double coefficient : {0.05, 0.2, 0.8}) {
        auto config = default_scenario();
        config.workload.total_hours = 1000.0;
        config.workload.buffer_fraction = 0.0;
        config.overhead.mode = OverheadMode::Static;
        config.overhead.base_coefficient = coefficient;
        config.policy.kind = PolicyKind::None;
        CHECK(run_simulation(config).rates.deadline_success_rate == 0.0);
    }
}

TEST_CASE("no overhead and a zero-coefficient static model are indistinguishable") {
    auto off = default_scenario();
    off.workload.total_hours = 2000.0;
    off.overhead.mode = OverheadMode::Off;
    off.policy.kind = PolicyKind::Adaptive;

    auto zero = off;
    zero.overhead.mode = OverheadMode::Static;
    zero.overhead.base_coefficient = 0.0;

    const auto a = run_simulation(off);
    const auto b = run_simulation(zero);
    CHECK(a.jobs_total == b.jobs_total);
    CHECK(a.on_time == b.on_time);
    CHECK(a.late == b.late);
    CHECK(a.terminated == b.terminated);
    CHECK(a.end_time_h == b.end_time_h);
    CHECK(a.ledger.busy_core_hours == b.ledger.busy_core_hours);
    REQUIRE(a.jobs.size() == b.jobs.size());
    for (std::size_t i = 0; i < a.jobs.size(); ++i) {
        CHECK(a.jobs[i].finish_time_h == b.jobs[i].finish_time_h);
        CHECK(a.jobs[i].status == b.jobs[i].status);
    }
}

TEST_CASE("identical scenarios give identical reports") {
    auto config = default_scenario();
    config.workload.total_hours = 2000.0;
    const auto a = run_simulation(config);
    const auto b = run_simulation(config);
    CHECK(a.jobs_total == b.jobs_total);
    CHECK(a.rates.deadline_miss_rate == b.rates.deadline_miss_rate);
    CHECK(a.ledger.wasted_core_hours == b.ledger.wasted_core_hours);
    CHECK(a.trace.size() == b.trace.size());
    REQUIRE(a.jobs.size() == b.jobs.size());
    for (std::size_t i = 0; i < a.jobs.size(); ++i) {
        CHECK(a.jobs[i].finish_time_h == b.jobs[i].finish_time_h);
    }
}

TEST_CASE("capacity, ledger and work conservation hold on a default run") {
    auto config = default_scenario();
    config.workload.total_hours = 3000.0;
    const auto report = run_simulation(config);
    const auto& node = config.node;

    CHECK(report.max_cores_in_use <= node.cpu_cores);
    CHECK(report.max_memory_in_use_gb <= node.memory_gb + 1e-9);

    const double core_hours = report.ledger.busy_core_hours + report.ledger.idle_core_hours;
    CHECK(std::abs(core_hours - node.cpu_cores * report.end_time_h) <=
          node.cpu_cores * config.clock.tick_h + 1e-6);
    const double gb_hours = report.ledger.busy_gb_hours + report.ledger.idle_gb_hours;
    CHECK(std::abs(gb_hours - node.memory_gb * report.end_time_h) <=
          node.memory_gb * config.clock.tick_h + 1e-6);
    CHECK(report.ledger.wasted_core_hours <= report.ledger.busy_core_hours + 1e-9);

    for (const auto& job : report.jobs) {
        CHECK(job.status != JobStatus::Queued);
        CHECK(job.status != JobStatus::Running);
        CHECK(job.start_time_h >= 0.0);
        CHECK(job.finish_time_h >= job.start_time_h);
        if (job.status == JobStatus::Terminated) {
            CHECK(job.physical_work_done_h < job.spec.duration_h);
        } else {
            CHECK(job.physical_work_done_h ==
                  doctest::Approx(job.spec.duration_h).epsilon(1e-12));
        }
        if (job.status == JobStatus::CompletedOnTime) {
            CHECK(job.finish_time_h <= job.deadline_h + 1e-9);
        }
        if (job.status == JobStatus::CompletedLate) {
            CHECK(job.finish_time_h > job.deadline_h);
        }
    }
}

TEST_CASE("the miss definition controls what the estimator counts") {
    auto late_config =
        one_class_scenario(1.0, 0.0, OverheadMode::Static, 0.05, PolicyKind::Fixed, 1.0);
    late_config.policy.initial_threshold = 0.9;

    late_config.miss_definition = MissDefinition::LateAndTerminated;
    CHECK(run_simulation(late_config).final_failure_rate == doctest::Approx(1.0));
    late_config.miss_definition = MissDefinition::TerminatedOnly;
    CHECK(run_simulation(late_config).final_failure_rate == doctest::Approx(0.0));
    late_config.miss_definition = MissDefinition::LateOnly;
    CHECK(run_simulation(late_config).final_failure_rate == doctest::Approx(1.0));

    auto killed_config =
        one_class_scenario(10.0, 0.0, OverheadMode::Static, 0.05, PolicyKind::Fixed, 10.0);
    killed_config.policy.initial_threshold = 1.0;

    killed_config.miss_definition = MissDefinition::LateAndTerminated;
    CHECK(run_simulation(killed_config).final_failure_rate == doctest::Approx(1.0));
    killed_config.miss_definition = MissDefinition::TerminatedOnly;
    CHECK(run_simulation(killed_config).final_failure_rate == doctest::Approx(1.0));
    killed_config.miss_definition = MissDefinition::LateOnly;
    CHECK(run_simulation(killed_config).final_failure_rate == doctest::Approx(0.0));
}

TEST_CASE("scenario validation rejects jobs that can never fit the node") {
    auto config = default_scenario();
    config.workload.classes[2].mem_demand_gb = 32.0;
    CHECK_THROWS_AS(run_simulation(config), ConfigError);

    auto wide = default_scenario();
    wide.workload.classes[0].cpu_demand = 8;
    CHECK_THROWS_AS(run_simulation(wide), ConfigError);
}
