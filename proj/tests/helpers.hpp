#pragma once

// Shared fixtures and independent reference implementations ("oracles") used
// by the unit and acceptance tests. The oracles deliberately use different
// algorithms from the library code (e.g. Floyd-Warshall vs Dijkstra,
// spherical law of cosines vs haversine) so agreement is meaningful.

#include "fogsim/clustering.hpp"
#include "fogsim/geo.hpp"
#include "fogsim/infrastructure.hpp"
#include "fogsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace testutil {

using namespace fogsim;

// ---------------------------------------------------------------------------
// Topology construction helpers

inline FogNode make_node(NodeId id, const std::string& name, int tier,
                         NodeId parent, double lat = 0.0, double lon = 0.0,
                         double range_km = 0.0) {
    FogNode n;
    n.id = id;
    n.name = name;
    n.tier = tier;
    n.parent = parent;
    n.mips = 1000.0;
    n.ram_total = n.ram_free = 8.0;
    n.uplink_mbps = 100.0;
    n.downlink_mbps = 100.0;
    n.busy_power = 200.0;
    n.idle_power = 100.0;
    n.location = {lat, lon, std::nullopt};
    n.comm_range_km = range_km;
    return n;
}

// Cloud(0) - proxy(1) - two gateways(2,3); a second proxy(4) with one
// gateway(5). Small enough to reason about by hand.
inline Topology two_block_tree() {
    Topology t;
    t.add_node(make_node(0, "cloud", 0, kNoNode, 0.0, 0.0));
    t.add_node(make_node(1, "proxy-a", 1, 0, 0.01, 0.0));
    t.add_node(make_node(2, "gw-a1", 2, 1, 0.02, 0.0, 5.0));
    t.add_node(make_node(3, "gw-a2", 2, 1, 0.02, 0.01, 5.0));
    t.add_node(make_node(4, "proxy-b", 1, 0, 0.0, 0.05));
    t.add_node(make_node(5, "gw-b1", 2, 4, 0.01, 0.05, 5.0));
    t.validate();
    return t;
}

// Random strict-tier tree: one cloud root, `proxies` tier-1 nodes, and
// `gateways` tier-2 nodes with random proxy parents.
inline Topology random_tree(RngStream& rng, int proxies, int gateways) {
    Topology t;
    t.add_node(make_node(0, "cloud", 0, kNoNode));
    for (int p = 0; p < proxies; ++p) {
        NodeId id = static_cast<NodeId>(t.size());
        t.add_node(make_node(id, "proxy-" + std::to_string(p), 1, 0));
    }
    for (int g = 0; g < gateways; ++g) {
        NodeId parent = 1 + static_cast<NodeId>(rng.uniform_int(0, proxies - 1));
        NodeId id = static_cast<NodeId>(t.size());
        t.add_node(make_node(id, "gw-" + std::to_string(g), 2, parent));
    }
    t.validate();
    return t;
}

// ---------------------------------------------------------------------------
// Geodesic oracle: spherical law of cosines (independent of the haversine
// formula used by the library; numerically fine at >1 km scales).

inline double law_of_cosines_km(const Location& a, const Location& b) {
    constexpr double kDeg = 3.14159265358979323846 / 180.0;
    double p1 = a.latitude * kDeg, p2 = b.latitude * kDeg;
    double dl = (b.longitude - a.longitude) * kDeg;
    double c = std::sin(p1) * std::sin(p2) + std::cos(p1) * std::cos(p2) * std::cos(dl);
    c = std::clamp(c, -1.0, 1.0);
    return kEarthRadiusKm * std::acos(c);
}

// ---------------------------------------------------------------------------
// Common-accessible-node oracle: materialize both root paths and intersect
// them, preferring the node that appears earliest on a's path.

inline NodeId common_node_oracle(const Topology& t, NodeId a, NodeId b) {
    std::vector<NodeId> pa, pb;
    for (NodeId c = a; c != kNoNode; c = t.node(c).parent) pa.push_back(c);
    for (NodeId c = b; c != kNoNode; c = t.node(c).parent) pb.push_back(c);
    std::set<NodeId> on_b(pb.begin(), pb.end());
    for (NodeId c : pa)
        if (on_b.count(c)) return c;
    return kNoNode;
}

// ---------------------------------------------------------------------------
// All-pairs shortest path oracle: Floyd-Warshall over the same edge set the
// router uses (tree links, symmetric cluster pairs, optional mesh links).

inline std::vector<std::vector<double>> floyd_warshall_oracle(const Topology& t,
                                                              bool include_mesh) {
    size_t n = t.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
    auto add = [&](NodeId a, NodeId b, double w) {
        auto ia = static_cast<size_t>(a), ib = static_cast<size_t>(b);
        d[ia][ib] = std::min(d[ia][ib], w);
        d[ib][ia] = std::min(d[ib][ia], w);
    };
    for (size_t i = 0; i < n; ++i) d[i][i] = 0.0;
    for (const auto& node : t.nodes()) {
        if (node.parent != kNoNode)
            add(node.id, node.parent, t.link_latency_ms(node.id, node.parent));
        for (NodeId cm : node.cluster_members)
            if (cm > node.id && in_same_cluster(node.id, cm, t))
                add(node.id, cm, estimate_latency_ms(node.id, cm, t));
    }
    if (include_mesh)
        for (const auto& [a, b] : t.mesh_edges()) add(a, b, t.mesh_latency_ms);
    for (size_t k = 0; k < n; ++k)
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    return d;
}

// ---------------------------------------------------------------------------
// Clustering oracle: brute-force pairwise distance filter over the sibling
// set of f, optionally pruned by f's latency threshold.

inline std::vector<NodeId> cluster_oracle(const Topology& t, NodeId f,
                                          bool latency_flag) {
    const FogNode& self = t.node(f);
    std::vector<NodeId> out;
    if (self.parent == kNoNode) return out;
    for (NodeId sib : t.node(self.parent).children) {
        if (sib == f) continue;
        if (haversine_km(self.location, t.node(sib).location) > self.comm_range_km)
            continue;
        if (latency_flag &&
            estimate_latency_ms(f, sib, t) > self.latency_threshold_ms)
            continue;
        out.push_back(sib);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Topological-order oracle (Kahn): returns true iff `order` is a complete
// topological order of the UP-direction microservice dependency graph.

inline bool is_topo_order_oracle(const std::vector<std::string>& order,
                                 const std::vector<std::pair<std::string, std::string>>& up_edges,
                                 size_t module_count) {
    if (order.size() != module_count) return false;
    std::map<std::string, size_t> pos;
    for (size_t i = 0; i < order.size(); ++i) {
        if (pos.count(order[i])) return false;  // duplicate
        pos[order[i]] = i;
    }
    for (const auto& [src, dst] : up_edges) {
        auto s = pos.find(src), d = pos.find(dst);
        if (s == pos.end() || d == pos.end()) return false;
        if (s->second >= d->second) return false;
    }
    return true;
}

} // namespace testutil
