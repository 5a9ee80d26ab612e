#include <doctest.h>

#include "fogsim/metrics.hpp"
#include "fogsim/rng.hpp"

#include "helpers.hpp"

#include <string>

using namespace fogsim;
using namespace testutil;

namespace {

// Single node with the gateway power profile used in the worked examples.
Topology one_node(double busy_power, double idle_power) {
    Topology t;
    FogNode n = make_node(0, "solo", 0, kNoNode);
    n.busy_power = busy_power;
    n.idle_power = idle_power;
    t.add_node(n);
    return t;
}

} // namespace

TEST_CASE("an idle node accrues idle power for the whole run") {
    Topology t = one_node(206.0, 170.0);
    MetricsCollector mc(&t);
    MetricsReport r = mc.finalize(500'000.0);  // 500 s
    CHECK(r.node_energy.at(0).energy == doctest::Approx(85'000.0));
    CHECK(r.total_energy == doctest::Approx(85'000.0));
}

TEST_CASE("a fully busy second at 206 units costs 206") {
    Topology t = one_node(206.0, 0.0);
    MetricsCollector mc(&t);
    mc.accrue_busy(0, 1'000.0);
    MetricsReport r = mc.finalize(1'000.0);
    CHECK(r.node_energy.at(0).energy == doctest::Approx(206.0));
}

TEST_CASE("energy interpolates between idle and busy power by utilization") {
    // Busy 206 / idle 170, 10 s run, 5 s busy: 170*10 + 36*5 = 1880.
    Topology t = one_node(206.0, 170.0);
    MetricsCollector mc(&t);
    mc.accrue_busy(0, 2'000.0);
    mc.accrue_busy(0, 3'000.0);  // accrual is additive
    MetricsReport r = mc.finalize(10'000.0);
    CHECK(r.node_energy.at(0).energy == doctest::Approx(1'880.0));
}

TEST_CASE("energy is bounded by the idle and busy envelopes") {
    RngStream rng(21, "test/energy");
    for (int trial = 0; trial < 50; ++trial) {
        double idle = rng.uniform(10.0, 300.0);
        double busy = idle + rng.uniform(0.0, 300.0);
        double t_end = rng.uniform(1'000.0, 100'000.0);
        Topology t = one_node(busy, idle);
        MetricsCollector mc(&t);
        mc.accrue_busy(0, rng.uniform(0.0, 2.0 * t_end));  // may exceed the run
        MetricsReport r = mc.finalize(t_end);
        double secs = t_end / 1000.0;
        CHECK(r.node_energy.at(0).energy >= idle * secs - 1e-9);
        CHECK(r.node_energy.at(0).energy <= busy * secs + 1e-9);
    }
}

TEST_CASE("migration-tagged busy time feeds the migration overhead bucket") {
    Topology t = one_node(206.0, 170.0);
    MetricsCollector mc(&t);
    mc.accrue_busy(0, 4'000.0, true);
    mc.accrue_busy(0, 4'000.0, false);
    MetricsReport r = mc.finalize(20'000.0);
    // Overhead counts only the above-idle delta on migration seconds.
    CHECK(r.migration_energy == doctest::Approx((206.0 - 170.0) * 4.0));
    CHECK(r.node_energy.at(0).busy_ms == doctest::Approx(8'000.0));
}

TEST_CASE("per-tier energy sums to the total") {
    Topology t = two_block_tree();
    MetricsCollector mc(&t);
    mc.accrue_busy(2, 5'000.0);
    mc.accrue_busy(0, 1'000.0);
    MetricsReport r = mc.finalize(60'000.0);
    double tiers = 0.0;
    for (const auto& [tier, e] : r.tier_energy) tiers += e;
    CHECK(tiers == doctest::Approx(r.total_energy));
    CHECK(r.tier_energy.size() == 3);
}

TEST_CASE("a payload is charged once per hop it crosses") {
    Topology t = two_block_tree();
    MetricsCollector mc(&t);
    // 2.5 MB over a three-hop route: every hop books the full payload.
    mc.record_transfer(2, 1, 2.5, TransferCategory::MigrationPayload);
    mc.record_transfer(1, 0, 2.5, TransferCategory::MigrationPayload);
    mc.record_transfer(0, 4, 2.5, TransferCategory::MigrationPayload);
    MetricsReport r = mc.finalize(1'000.0);
    CHECK(r.network_migration_mb == doctest::Approx(7.5));
    CHECK(r.network_total_mb == doctest::Approx(7.5));
}

TEST_CASE("network buckets are disjoint and additive") {
    Topology t = two_block_tree();
    MetricsCollector mc(&t);
    mc.record_transfer(2, 1, 1.25, TransferCategory::AppTuple);
    mc.record_transfer(2, 1, 0.5, TransferCategory::MigrationPayload);
    mc.record_transfer(2, 3, 0.001, TransferCategory::ClusteringControl);
    MetricsReport r = mc.finalize(1'000.0);
    CHECK(r.network_app_mb == doctest::Approx(1.25));
    CHECK(r.network_migration_mb == doctest::Approx(0.5));
    CHECK(r.network_clustering_mb == doctest::Approx(0.001));
    CHECK(r.network_total_mb ==
          doctest::Approx(r.network_app_mb + r.network_migration_mb +
                          r.network_clustering_mb));
}

TEST_CASE("loop statistics track count, mean, and max") {
    Topology t = one_node(1.0, 0.0);
    MetricsCollector mc(&t);
    mc.record_loop("control", 0.0, 100.0);
    mc.record_loop("control", 50.0, 250.0);
    mc.record_loop("control", 100.0, 150.0);
    MetricsReport r = mc.finalize(1'000.0);
    const LoopStats& s = r.loop_delays.at("control");
    CHECK(s.count == 3);
    CHECK(s.mean_ms == doctest::Approx((100.0 + 200.0 + 50.0) / 3.0));
    CHECK(s.max_ms == doctest::Approx(200.0));
    CHECK(s.mean_ms <= s.max_ms);
    CHECK_THROWS_AS(mc.record_loop("control", 10.0, 5.0), SimulationError);
}

TEST_CASE("report serialization is deterministic") {
    Topology t = two_block_tree();
    MetricsCollector mc(&t);
    mc.accrue_busy(2, 123.456);
    mc.record_loop("l", 0.0, 42.0);
    mc.record_transfer(2, 1, 0.75, TransferCategory::AppTuple);
    MetricsReport r = mc.finalize(10'000.0);
    std::string a = report_to_json(r, t, false);
    std::string b = report_to_json(r, t, false);
    CHECK(a == b);
    CHECK(a.find("\"loop_delays\"") != std::string::npos);
    CHECK(a.find("run_footprint") == std::string::npos);
    CHECK(report_to_json(r, t, true).find("run_footprint") != std::string::npos);

    std::string csv = report_to_csv(r, t);
    CHECK(csv.rfind("metric,key,value\n", 0) == 0);
}
