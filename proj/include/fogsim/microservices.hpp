#pragma once

#include "fogsim/app.hpp"
#include "fogsim/infrastructure.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fogsim {

// Per-node map: microservice name -> hosting nodes, kept sorted ascending.
// Node id -1 keys the per-device tables (device entries are keyed by
// -(entity id + 2) so they never collide with fog node ids).
using ServiceCandidates = std::map<std::string, std::vector<NodeId>>;

inline NodeId device_key(int entity) { return -(entity + 2); }

class ServiceDiscoveryTable {
public:
    void add(NodeId at, const std::string& service, NodeId target);
    // Removing a non-existent entry is a warned no-op.
    bool remove(NodeId at, const std::string& service, NodeId target);
    const std::vector<NodeId>* candidates(NodeId at, const std::string& service) const;
    const std::map<NodeId, ServiceCandidates>& tables() const { return tables_; }

private:
    std::map<NodeId, ServiceCandidates> tables_;
};

class LoadBalancerState {
public:
    // Round robin over the candidate list; the cursor advances modulo the
    // list length and is clamped when the list shrinks.
    NodeId select(NodeId at, const std::string& service,
                  const std::vector<NodeId>& candidates);

private:
    std::map<std::pair<NodeId, std::string>, size_t> cursors_;
};

struct RoutingTable {
    // next_hop[src][dst], absent when unreachable.
    std::map<NodeId, std::map<NodeId, NodeId>> next_hop;
    std::map<NodeId, std::map<NodeId, double>> cost_ms;

    NodeId hop(NodeId src, NodeId dst) const;
};

// Shortest-path next-hop tables over tree links plus cluster links (when
// formed) plus mesh links (when include_mesh). Edge weight is hop latency;
// ties break toward the lexicographically smallest node-id path.
RoutingTable compute_routes(const Topology& topo, bool include_mesh = false);

struct InstanceRecord {
    std::string microservice;
    double ram_gb = 0.0;
    int path = -1;          // leaf-to-root path (device) the instance serves
};

struct PlacementPlan {
    std::map<NodeId, std::vector<InstanceRecord>> node_instances;
    // instance node chosen for (path, microservice)
    std::map<std::pair<int, std::string>, NodeId> path_instance;
    ServiceDiscoveryTable sd;

    int instances_at_tier(const Topology& topo, int tier) const;
};

struct PlacementPath {
    int device = -1;                // mobile entity id
    std::vector<NodeId> nodes;      // gateway upward to the cloud
};

struct PlacementOptions {
    bool use_clusters = false;
    // When set, paths meeting a node that already hosts the instance for the
    // same microservice reuse it instead of charging RAM again.
    bool reuse_instances = false;
};

// Scalable placement: microservice-major over paths; per path the instance
// lands on the path cursor when RAM suffices, else on the first cluster
// member (ascending node id) with capacity, else the cursor walks up-tier.
// Client microservices are pinned to devices and take no fog RAM.
PlacementPlan smp_place(Topology& topo, const Application& app,
                        const std::vector<PlacementPath>& paths,
                        const PlacementOptions& opts);

// Baseline: path-major, modules placed upward greedily by RAM fit, no
// cluster consultation, no horizontal scaling.
PlacementPlan edgeward_place(Topology& topo, const Application& app,
                             const std::vector<PlacementPath>& paths);

// Candidate resolution + round robin; kNoNode (with fault intent) when the
// service has no candidates at src.
std::optional<NodeId> select_destination(NodeId src, const std::string& microservice,
                                         const ServiceDiscoveryTable& sd,
                                         LoadBalancerState& lb);

std::string placement_to_json(const PlacementPlan& plan, const Topology& topo);

} // namespace fogsim
