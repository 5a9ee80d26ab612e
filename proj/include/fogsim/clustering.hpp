#pragma once

#include "fogsim/infrastructure.hpp"

#include <map>
#include <vector>

namespace fogsim {

struct ClusterResult {
    std::vector<NodeId> members;             // excludes f itself
    std::map<NodeId, double> latency_ms;
};

// Sibling clustering by communication range, optionally pruned by the
// latency threshold when `latency_flag` is set. Candidates are the children
// of f's parent. A childless or parentless node yields an empty result.
ClusterResult form_cluster(NodeId f, const Topology& topo, bool latency_flag);

// Estimated pairwise latency: configured link latency override when present,
// otherwise distance-proportional (base + per-km term).
double estimate_latency_ms(NodeId a, NodeId b, const Topology& topo);

// Runs form_cluster for every node that has a parent and swaps the views
// stored on the nodes.
void apply_clustering(Topology& topo, bool latency_flag);

// Symmetric membership (the default mode): true iff each node appears in the
// other's member list. a == b is true by convention.
bool in_same_cluster(NodeId a, NodeId b, const Topology& topo);

struct ClusterTrigger {
    enum class When { AtStart, AtTime, OnLocationChanged };
    When when = When::AtStart;
    SimTime at_ms = 0.0;
};

} // namespace fogsim
