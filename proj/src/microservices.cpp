#include "fogsim/microservices.hpp"
#include "fogsim/clustering.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include <json.hpp>

namespace fogsim {

void ServiceDiscoveryTable::add(NodeId at, const std::string& service, NodeId target) {
    auto& list = tables_[at][service];
    auto it = std::lower_bound(list.begin(), list.end(), target);
    if (it == list.end() || *it != target) list.insert(it, target);
}

bool ServiceDiscoveryTable::remove(NodeId at, const std::string& service, NodeId target) {
    auto t = tables_.find(at);
    if (t == tables_.end()) return false;
    auto s = t->second.find(service);
    if (s == t->second.end()) return false;
    auto it = std::find(s->second.begin(), s->second.end(), target);
    if (it == s->second.end()) return false;
    s->second.erase(it);
    return true;
}

const std::vector<NodeId>* ServiceDiscoveryTable::candidates(
    NodeId at, const std::string& service) const {
    auto t = tables_.find(at);
    if (t == tables_.end()) return nullptr;
    auto s = t->second.find(service);
    if (s == t->second.end()) return nullptr;
    return &s->second;
}

NodeId LoadBalancerState::select(NodeId at, const std::string& service,
                                 const std::vector<NodeId>& candidates) {
    auto& cursor = cursors_[{at, service}];
    if (candidates.empty())
        throw SimulationError("load balancer: empty candidate list for " + service);
    if (cursor >= candidates.size()) cursor = 0;  // clamp after list shrink
    NodeId chosen = candidates[cursor];
    cursor = (cursor + 1) % candidates.size();
    return chosen;
}

NodeId RoutingTable::hop(NodeId src, NodeId dst) const {
    auto s = next_hop.find(src);
    if (s == next_hop.end()) return kNoNode;
    auto d = s->second.find(dst);
    return d == s->second.end() ? kNoNode : d->second;
}

namespace {

struct Adj {
    NodeId to;
    double w;
};

std::vector<std::vector<Adj>> build_graph(const Topology& topo, bool include_mesh) {
    std::vector<std::vector<Adj>> adj(topo.size());
    auto add = [&](NodeId a, NodeId b, double w) {
        adj[static_cast<size_t>(a)].push_back({b, w});
        adj[static_cast<size_t>(b)].push_back({a, w});
    };
    for (const auto& n : topo.nodes()) {
        if (n.parent != kNoNode) add(n.id, n.parent, topo.link_latency_ms(n.id, n.parent));
        for (NodeId cm : n.cluster_members) {
            // Symmetric pairs only, added once from the lower id.
            if (cm > n.id && in_same_cluster(n.id, cm, topo))
                add(n.id, cm, estimate_latency_ms(n.id, cm, topo));
        }
    }
    if (include_mesh)
        for (const auto& [a, b] : topo.mesh_edges())
            add(a, b, topo.mesh_latency_ms);
    return adj;
}

} // namespace

RoutingTable compute_routes(const Topology& topo, bool include_mesh) {
    RoutingTable rt;
    auto adj = build_graph(topo, include_mesh);
    size_t n = topo.size();
    for (NodeId src = 0; src < static_cast<NodeId>(n); ++src) {
        std::vector<double> dist(n, std::numeric_limits<double>::infinity());
        std::vector<NodeId> prev(n, kNoNode);
        std::vector<bool> done(n, false);
        dist[static_cast<size_t>(src)] = 0.0;

        auto path_of = [&](NodeId v) {
            std::vector<NodeId> p;
            for (NodeId cur = v; cur != kNoNode; cur = prev[static_cast<size_t>(cur)])
                p.push_back(cur);
            std::reverse(p.begin(), p.end());
            return p;
        };

        for (size_t iter = 0; iter < n; ++iter) {
            NodeId u = kNoNode;
            for (NodeId v = 0; v < static_cast<NodeId>(n); ++v)
                if (!done[static_cast<size_t>(v)] &&
                    (u == kNoNode || dist[static_cast<size_t>(v)] < dist[static_cast<size_t>(u)]))
                    u = v;
            if (u == kNoNode || dist[static_cast<size_t>(u)] ==
                                    std::numeric_limits<double>::infinity())
                break;
            done[static_cast<size_t>(u)] = true;
            for (const auto& e : adj[static_cast<size_t>(u)]) {
                double cand = dist[static_cast<size_t>(u)] + e.w;
                double& cur = dist[static_cast<size_t>(e.to)];
                if (cand < cur) {
                    cur = cand;
                    prev[static_cast<size_t>(e.to)] = u;
                } else if (cand == cur && prev[static_cast<size_t>(e.to)] != u) {
                    // Deterministic tie-break: lexicographically smallest path.
                    auto via_u = path_of(u);
                    via_u.push_back(e.to);
                    if (via_u < path_of(e.to)) prev[static_cast<size_t>(e.to)] = u;
                }
            }
        }
        for (NodeId dst = 0; dst < static_cast<NodeId>(n); ++dst) {
            if (dst == src || dist[static_cast<size_t>(dst)] ==
                                  std::numeric_limits<double>::infinity())
                continue;
            auto p = path_of(dst);
            rt.next_hop[src][dst] = p.at(1);
            rt.cost_ms[src][dst] = dist[static_cast<size_t>(dst)];
        }
    }
    return rt;
}

namespace {

// Pinned modules land at a fixed tier of the path (escalating upward only if
// that node is full).
void place_pinned(PlacementPlan& plan, Topology& topo, const AppModule& m,
                  const std::vector<PlacementPath>& paths) {
    for (size_t pi = 0; pi < paths.size(); ++pi) {
        size_t start = 0;
        while (start < paths[pi].nodes.size() &&
               topo.node(paths[pi].nodes[start]).tier != m.pin_tier)
            ++start;
        if (start == paths[pi].nodes.size())
            throw ValidationError("placement: path " + std::to_string(pi) +
                                  " has no tier-" + std::to_string(m.pin_tier) +
                                  " node for pinned module " + m.name);
        for (size_t k = start;; ++k) {
            if (k >= paths[pi].nodes.size())
                throw ValidationError("placement: no capacity for pinned module " +
                                      m.name);
            NodeId f = paths[pi].nodes[k];
            if (topo.node(f).ram_free >= m.ram_gb) {
                topo.node(f).ram_free -= m.ram_gb;
                plan.node_instances[f].push_back({m.name, m.ram_gb, static_cast<int>(pi)});
                plan.path_instance[{static_cast<int>(pi), m.name}] = f;
                break;
            }
        }
    }
}

bool hosts_instance(const PlacementPlan& plan, NodeId node, const std::string& ms) {
    auto it = plan.node_instances.find(node);
    if (it == plan.node_instances.end()) return false;
    for (const auto& inst : it->second)
        if (inst.microservice == ms) return true;
    return false;
}

void place_instance(PlacementPlan& plan, Topology& topo, NodeId node,
                    const AppModule& m, int path) {
    topo.node(node).ram_free -= m.ram_gb;
    plan.node_instances[node].push_back({m.name, m.ram_gb, path});
    plan.path_instance[{path, m.name}] = node;
}

// Consumer-side discovery scope: a node learns the instances that serve the
// paths passing through it, so the load balancer's rotation mirrors the
// placement plan instead of spraying traffic at every host of the service.
void generate_sd(PlacementPlan& plan, const std::vector<PlacementPath>& paths,
                 const Application& app) {
    for (size_t pi = 0; pi < paths.size(); ++pi) {
        int p = static_cast<int>(pi);
        for (const auto& m : app.modules) {
            auto host_it = plan.path_instance.find({p, m.name});
            if (host_it == plan.path_instance.end()) continue;
            NodeId host = host_it->second;
            for (const auto& service : m.consumes) {
                auto tgt_it = plan.path_instance.find({p, service});
                if (tgt_it == plan.path_instance.end()) continue;
                plan.sd.add(host, service, tgt_it->second);
            }
        }
    }
}

} // namespace

int PlacementPlan::instances_at_tier(const Topology& topo, int tier) const {
    int count = 0;
    for (const auto& [node, list] : node_instances) {
        if (node < 0) continue;
        if (topo.node(node).tier == tier) count += static_cast<int>(list.size());
    }
    return count;
}

PlacementPlan smp_place(Topology& topo, const Application& app,
                        const std::vector<PlacementPath>& paths,
                        const PlacementOptions& opts) {
    app.validate();
    PlacementPlan plan;
    std::vector<size_t> cursor(paths.size(), 0);

    std::set<std::string> placed;
    // Client microservices never leave the device.
    for (const auto& m : app.modules) {
        if (!m.is_client) continue;
        placed.insert(m.name);
        for (size_t pi = 0; pi < paths.size(); ++pi)
            plan.path_instance[{static_cast<int>(pi), m.name}] =
                device_key(paths[pi].device);
    }

    while (auto next = app.next_eligible_microservice(placed)) {
        const AppModule& m = *app.find_module(*next);
        if (m.pin_tier >= 0) {
            place_pinned(plan, topo, m, paths);
            placed.insert(m.name);
            continue;
        }
        std::vector<size_t> not_placed;
        for (size_t pi = 0; pi < paths.size(); ++pi) {
            NodeId f = paths[pi].nodes.at(cursor[pi]);
            if (opts.reuse_instances && hosts_instance(plan, f, m.name)) {
                plan.path_instance[{static_cast<int>(pi), m.name}] = f;
            } else if (topo.node(f).ram_free >= m.ram_gb) {
                place_instance(plan, topo, f, m, static_cast<int>(pi));
            } else {
                not_placed.push_back(pi);
            }
        }
        for (size_t pi : not_placed) {
            NodeId f = paths[pi].nodes.at(cursor[pi]);
            bool done = false;
            if (opts.use_clusters) {
                // Cluster members in ascending node-id order.
                for (NodeId cm : topo.node(f).cluster_members) {
                    if (!in_same_cluster(f, cm, topo)) continue;
                    if (opts.reuse_instances && hosts_instance(plan, cm, m.name)) {
                        plan.path_instance[{static_cast<int>(pi), m.name}] = cm;
                        done = true;
                        break;
                    }
                    if (topo.node(cm).ram_free >= m.ram_gb) {
                        place_instance(plan, topo, cm, m, static_cast<int>(pi));
                        done = true;
                        break;
                    }
                }
            }
            while (!done) {
                if (cursor[pi] + 1 >= paths[pi].nodes.size())
                    throw ValidationError("placement: no capacity for " + m.name +
                                          " anywhere on path " + std::to_string(pi));
                ++cursor[pi];
                NodeId up = paths[pi].nodes.at(cursor[pi]);
                if (opts.reuse_instances && hosts_instance(plan, up, m.name)) {
                    plan.path_instance[{static_cast<int>(pi), m.name}] = up;
                    done = true;
                } else if (topo.node(up).ram_free >= m.ram_gb) {
                    place_instance(plan, topo, up, m, static_cast<int>(pi));
                    done = true;
                }
            }
        }
        placed.insert(m.name);
    }
    generate_sd(plan, paths, app);
    return plan;
}

PlacementPlan edgeward_place(Topology& topo, const Application& app,
                             const std::vector<PlacementPath>& paths) {
    app.validate();
    PlacementPlan plan;

    // Deterministic module order: eligibility order of the DAG.
    std::vector<std::string> order;
    std::set<std::string> placed;
    for (const auto& m : app.modules)
        if (m.is_client) placed.insert(m.name);
    while (auto next = app.next_eligible_microservice(placed)) {
        order.push_back(*next);
        placed.insert(*next);
    }

    for (const auto& m : app.modules)
        if (m.is_client)
            for (size_t pi = 0; pi < paths.size(); ++pi)
                plan.path_instance[{static_cast<int>(pi), m.name}] =
                    device_key(paths[pi].device);

    for (const auto& name : order) {
        const AppModule& pm = *app.find_module(name);
        if (pm.pin_tier >= 0) place_pinned(plan, topo, pm, paths);
    }

    for (size_t pi = 0; pi < paths.size(); ++pi) {
        size_t cursor = 0;
        for (const auto& name : order) {
            const AppModule& m = *app.find_module(name);
            if (m.pin_tier >= 0) continue;
            while (true) {
                NodeId f = paths[pi].nodes.at(cursor);
                if (topo.node(f).ram_free >= m.ram_gb) {
                    place_instance(plan, topo, f, m, static_cast<int>(pi));
                    break;
                }
                if (cursor + 1 >= paths[pi].nodes.size())
                    throw ValidationError("placement: no capacity for " + m.name +
                                          " anywhere on path " + std::to_string(pi));
                ++cursor;
            }
        }
    }
    generate_sd(plan, paths, app);
    return plan;
}

std::optional<NodeId> select_destination(NodeId src, const std::string& microservice,
                                         const ServiceDiscoveryTable& sd,
                                         LoadBalancerState& lb) {
    const auto* cands = sd.candidates(src, microservice);
    if (!cands || cands->empty()) return std::nullopt;
    return lb.select(src, microservice, *cands);
}

std::string placement_to_json(const PlacementPlan& plan, const Topology& topo) {
    nlohmann::ordered_json j;
    auto& nodes = j["nodes"];
    nodes = nlohmann::ordered_json::object();
    for (const auto& [node, list] : plan.node_instances) {
        std::string key = node >= 0 ? topo.node(node).name
                                    : "device-" + std::to_string(-(node + 2));
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& inst : list) {
            arr.push_back({{"microservice", inst.microservice},
                           {"ram", inst.ram_gb},
                           {"path", inst.path}});
        }
        nodes[key] = arr;
    }
    auto& sd = j["service_discovery"];
    sd = nlohmann::ordered_json::object();
    for (const auto& [at, table] : plan.sd.tables()) {
        std::string key = at >= 0 ? topo.node(at).name
                                  : "device-" + std::to_string(-(at + 2));
        nlohmann::ordered_json entry = nlohmann::ordered_json::object();
        for (const auto& [service, cands] : table) {
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (NodeId c : cands)
                arr.push_back(c >= 0 ? topo.node(c).name
                                     : "device-" + std::to_string(-(c + 2)));
            entry[service] = arr;
        }
        sd[key] = entry;
    }
    return j.dump(2);
}

} // namespace fogsim
