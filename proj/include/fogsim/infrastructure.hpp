#pragma once

#include "fogsim/geo.hpp"
#include "fogsim/kernel.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fogsim {

using NodeId = int;
inline constexpr NodeId kNoNode = -1;

struct FogNode {
    NodeId id = kNoNode;
    std::string name;
    int tier = 0;               // 0 = Cloud, 1 = proxy, 2 = gateway
    double mips = 1.0;          // million instructions per second
    double ram_total = 0.0;     // GB
    double ram_free = 0.0;      // GB
    double uplink_mbps = 0.0;
    double downlink_mbps = 0.0;
    double busy_power = 0.0;    // abstract power units
    double idle_power = 0.0;
    NodeId parent = kNoNode;
    std::vector<NodeId> children;
    Location location;
    double comm_range_km = 0.0;
    double latency_threshold_ms = 0.0;
    std::vector<NodeId> cluster_members;       // excludes self
    std::map<NodeId, double> cm_latency_ms;
};

struct TraceSample {
    SimTime time_ms = 0.0;
    Location loc;
};

struct MobilityTrace {
    int entity = -1;
    std::vector<TraceSample> samples;  // times strictly increasing, >= 1
};

struct MobileEntity {
    int id = -1;
    NodeId current_parent = kNoNode;  // always a tier (tier-1) node
    int tier = 3;                     // devices attach below tier 2
    MobilityTrace trace;
    std::vector<std::string> hosted_modules;  // migratable module set
    Location location;
};

struct ValidationError : SimulationError {
    using SimulationError::SimulationError;
};

class Topology {
public:
    NodeId add_node(FogNode n);  // id must equal nodes().size()

    const FogNode& node(NodeId id) const { return nodes_.at(static_cast<size_t>(id)); }
    FogNode& node(NodeId id) { return nodes_.at(static_cast<size_t>(id)); }
    const std::vector<FogNode>& nodes() const { return nodes_; }
    size_t size() const { return nodes_.size(); }

    std::vector<NodeId> nodes_at_tier(int tier) const;

    // Checks tier/parent structure: forest rooted at tier-0 nodes, parent
    // tier exactly one above, no cycles, no orphan non-roots.
    void validate() const;

    // [n, parent(n), ..., tier-0 root]
    std::vector<NodeId> path_to_root(NodeId n) const;

    // First element of path_to_root(a) that also occurs in path_to_root(b);
    // the lowest common ancestor when tiers are strict levels.
    NodeId common_accessible_node(NodeId a, NodeId b) const;

    // Tree path between two nodes via their common accessible node.
    std::vector<NodeId> tree_path(NodeId a, NodeId b) const;

    // Link model. Latency defaults by tier when no override is present:
    // gateway-proxy 2 ms, proxy-cloud 100 ms, mesh/cluster 2 ms.
    void set_link_latency(NodeId a, NodeId b, double ms);
    double link_latency_ms(NodeId a, NodeId b) const;

    // Effective bandwidth of a directed hop: min(sender uplink, receiver
    // downlink) in Mbit/s.
    double hop_bandwidth_mbps(NodeId from, NodeId to) const;

    void add_mesh_edge(NodeId a, NodeId b);
    bool has_mesh_edge(NodeId a, NodeId b) const;
    const std::set<std::pair<NodeId, NodeId>>& mesh_edges() const { return mesh_edges_; }

    double default_tier_latency_ms(int tier_a, int tier_b) const;

    double mesh_bandwidth_mbps = 100.0;
    double mesh_latency_ms = 2.0;
    double cluster_latency_base_ms = 1.0;
    double cluster_latency_per_km_ms = 0.01;

private:
    std::vector<FogNode> nodes_;
    std::map<std::pair<NodeId, NodeId>, double> link_latency_;  // key normalized (lo,hi)
    std::set<std::pair<NodeId, NodeId>> mesh_edges_;            // normalized
};

// Builds and validates a topology from a JSON config string. Expected shape:
//   {"nodes":[{"name":..,"tier":..,"parent":..,"mips":..,"ram":..,
//              "uplink":..,"downlink":..,"busy_power":..,"idle_power":..,
//              "lat":..,"lon":..,"block":..,"range_km":..,
//              "latency_threshold_ms":..}, ...],
//    "link_latency":[{"a":name,"b":name,"ms":..}, ...]}
Topology build_topology(const std::string& json_text);

// Node-location CSV in the EUA-compatible schema:
//   id,latitude,longitude,block
std::map<int, Location> parse_locations(const std::string& csv_text,
                                        std::vector<std::string>* warnings = nullptr);

} // namespace fogsim
