#pragma once

#include "fogsim/infrastructure.hpp"
#include "fogsim/mobility.hpp"

#include <map>
#include <string>
#include <vector>

namespace fogsim {

enum class TransferCategory { AppTuple, MigrationPayload, ClusteringControl };

struct LoopStats {
    uint64_t count = 0;
    double mean_ms = 0.0;
    double max_ms = 0.0;
};

struct NodeEnergy {
    double busy_ms = 0.0;        // CPU + transfer handling time
    double migration_busy_ms = 0.0;
    double energy = 0.0;         // filled at finalize
};

struct MigrationRecord {
    int entity = -1;
    SimTime trigger_ms = 0.0;
    SimTime complete_ms = 0.0;
    std::vector<NodeId> route;
    std::string policy;
};

struct RunFootprint {
    double wall_seconds = 0.0;
    double peak_rss_mb = 0.0;
};

struct MetricsReport {
    std::map<std::string, LoopStats> loop_delays;
    std::map<NodeId, NodeEnergy> node_energy;
    std::map<int, double> tier_energy;
    double total_energy = 0.0;
    double migration_energy = 0.0;  // above-idle energy spent relaying migrations
    double network_total_mb = 0.0;
    double network_app_mb = 0.0;
    double network_migration_mb = 0.0;
    double network_clustering_mb = 0.0;
    std::vector<MigrationRecord> migrations;
    uint64_t routing_faults = 0;
    uint64_t service_unavailable = 0;
    uint64_t saturated_nodes = 0;
    uint64_t location_events = 0;
    uint64_t tuples_executed = 0;
    RunFootprint footprint;
};

class MetricsCollector {
public:
    explicit MetricsCollector(const Topology* topo) : topo_(topo) {}

    void record_loop(const std::string& loop_name, SimTime emit, SimTime complete);
    // energy += interval_seconds * (idle + (busy - idle) * utilization),
    // applied at finalize from accumulated busy time.
    void accrue_busy(NodeId node, double busy_ms, bool migration_related = false);
    void record_transfer(NodeId from, NodeId to, double mb, TransferCategory cat);
    void count_routing_fault() { ++report_.routing_faults; }
    void count_service_unavailable() { ++report_.service_unavailable; }
    void count_location_event() { ++report_.location_events; }
    void count_tuple_executed() { ++report_.tuples_executed; }
    void record_migration(MigrationRecord rec) {
        report_.migrations.push_back(std::move(rec));
    }
    void flag_saturation() { ++report_.saturated_nodes; }

    // Closes residual energy intervals at t_end and fills totals.
    MetricsReport finalize(SimTime t_end);

    const MetricsReport& peek() const { return report_; }

private:
    const Topology* topo_;
    MetricsReport report_;
    std::map<std::string, double> loop_sum_ms_;
};

// Deterministic serializations (stable key order).
std::string report_to_json(const MetricsReport& report, const Topology& topo,
                           bool include_footprint);
std::string report_to_csv(const MetricsReport& report, const Topology& topo);

} // namespace fogsim
