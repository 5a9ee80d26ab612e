#pragma once

#include "fogsim/app.hpp"
#include "fogsim/clustering.hpp"
#include "fogsim/kernel.hpp"
#include "fogsim/metrics.hpp"
#include "fogsim/microservices.hpp"
#include "fogsim/mobility.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fogsim {

enum class PlacementPolicy { Edgeward, SmpNoClustering, SmpClustering };

const char* placement_policy_name(PlacementPolicy p);
const char* migration_policy_name(MigrationPolicy p);

struct DeviceSpec {
    double mips = 500.0;
    double uplink_mbps = 100.0;
    double downlink_mbps = 200.0;
    double busy_power = 60.0;
    double idle_power = 35.0;
};

struct SimulationConfig {
    Topology topo;
    Application app;
    std::vector<MobileEntity> devices;  // traces drive LocationChanged events
    DeviceSpec device_spec;
    PlacementPolicy placement = PlacementPolicy::Edgeward;
    std::optional<MigrationPolicy> migration;
    bool clustering_enabled = false;
    ClusterTrigger cluster_trigger;
    bool latency_flag = false;
    double duration_ms = 0.0;
    uint64_t seed = 1;
    double clustering_probe_mb = 0.001;  // per sibling pair per trigger
    double max_distance_km = kDefaultMaxDistanceKm;
    bool strict_checks = true;
    // When a module on a mobile path would not fit on the migration target,
    // it escalates along the target's path to the root.
};

class Simulation {
public:
    explicit Simulation(SimulationConfig cfg);

    MetricsReport run();

    const PlacementPlan& plan() const { return plan_; }
    const Topology& topology() const { return cfg_.topo; }
    const SimulationConfig& config() const { return cfg_; }
    std::string cluster_view_json() const;

private:
    struct InFlightTuple {
        Tuple tuple;
        std::vector<NodeId> route;  // device keys allowed at the endpoints
        size_t hop = 0;
    };
    struct InFlightMigration {
        MigrationDecision decision;
        double payload_mb = 0.0;
        size_t hop = 0;
    };

    void dispatch(const Event& e);
    void on_emission(const Event& e);
    void on_transfer_complete(const Event& e);
    void on_tuple_executed(const Event& e);
    void on_location_changed(const Event& e);
    void on_migration_step(const Event& e);
    void on_clustering_trigger(const Event& e);

    void start_tuple(Tuple t, NodeId from, NodeId to);
    void start_hop(uint64_t tuple_id);
    void deliver(uint64_t tuple_id);
    void book_execution(uint64_t tuple_id, NodeId where);
    void emit_downstream(const Tuple& executed, NodeId at);
    std::optional<NodeId> resolve_destination(NodeId from, int origin_entity,
                                              const std::string& service);
    std::vector<NodeId> route_between(NodeId from, NodeId to);
    void start_migration_hop(int64_t mig_id);
    void commit_migration(int64_t mig_id);
    void run_clustering();
    void rebuild_routes();
    void check_parent_optimality(const MobileEntity& m);
    NodeId exec_node_of(NodeId key) const;

    // Link/CPU FIFO bookkeeping.
    struct HopTiming {
        double start_ms;
        double arrive_ms;
        double tx_ms;
    };
    HopTiming book_link(NodeId from, NodeId to, double mb, bool migration_related);
    double hop_bw_mbps(NodeId from, NodeId to) const;
    double hop_latency(NodeId from, NodeId to) const;

    const FogNode* fog(NodeId key) const {
        return key >= 0 ? &cfg_.topo.node(key) : nullptr;
    }
    MobileEntity& device_by_key(NodeId key) {
        return cfg_.devices.at(static_cast<size_t>(-(key + 2)));
    }

    SimulationConfig cfg_;
    Kernel kernel_;
    MetricsCollector metrics_;
    PlacementPlan plan_;
    RoutingTable routes_;
    LoadBalancerState lb_;
    RngStream selectivity_rng_;

    std::map<NodeId, std::multiset<std::string>> instances_;  // runtime locations
    std::map<NodeId, double> cpu_busy_until_;
    std::map<NodeId, double> offered_mi_;
    std::map<std::pair<NodeId, NodeId>, double> link_busy_until_;
    std::map<uint64_t, InFlightTuple> tuples_;
    std::map<int64_t, InFlightMigration> migrations_;
    std::map<int, int64_t> device_migration_;  // in-flight, by entity
    uint64_t next_tuple_id_ = 1;
    int64_t next_migration_id_ = 1;
    double last_dispatch_time_ = 0.0;
};

} // namespace fogsim
