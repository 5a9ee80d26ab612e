#include "fogsim/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fogsim {

const char* placement_policy_name(PlacementPolicy p) {
    switch (p) {
        case PlacementPolicy::Edgeward: return "edgeward";
        case PlacementPolicy::SmpNoClustering: return "smp-no-clustering";
        case PlacementPolicy::SmpClustering: return "smp-clustering";
    }
    return "?";
}

const char* migration_policy_name(MigrationPolicy p) {
    switch (p) {
        case MigrationPolicy::CloudCentric: return "cloud-centric";
        case MigrationPolicy::NonHierarchical: return "non-hierarchical";
        case MigrationPolicy::IntraInterCluster: return "intra-inter-cluster";
    }
    return "?";
}

namespace {

double peak_rss_mb() {
    std::ifstream in("/proc/self/status");
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("VmHWM:", 0) == 0) {
            std::istringstream ls(line.substr(6));
            double kb = 0.0;
            ls >> kb;
            return kb / 1024.0;
        }
    }
    return 0.0;
}

std::string loop_name(const AppLoop& loop) {
    std::string out;
    for (size_t i = 0; i < loop.modules.size(); ++i) {
        if (i) out += ">";
        out += loop.modules[i];
    }
    return out;
}

constexpr const char* kSenseType = "__sense";

} // namespace

Simulation::Simulation(SimulationConfig cfg)
    : cfg_(std::move(cfg)),
      metrics_(&cfg_.topo),
      selectivity_rng_(cfg_.seed, "selectivity") {
    cfg_.app.validate();
    cfg_.topo.validate();
    kernel_.set_dispatcher([this](const Event& e) { dispatch(e); });
}

NodeId Simulation::exec_node_of(NodeId key) const { return key; }

double Simulation::hop_bw_mbps(NodeId from, NodeId to) const {
    double up = from < 0 ? cfg_.device_spec.uplink_mbps : cfg_.topo.node(from).uplink_mbps;
    double down =
        to < 0 ? cfg_.device_spec.downlink_mbps : cfg_.topo.node(to).downlink_mbps;
    if (from >= 0 && to >= 0) {
        const FogNode& a = cfg_.topo.node(from);
        const FogNode& b = cfg_.topo.node(to);
        bool tree_hop = a.parent == to || b.parent == from;
        if (!tree_hop && in_same_cluster(from, to, cfg_.topo))
            return a.uplink_mbps;  // cluster links run at the sender's uplink
        if (!tree_hop && cfg_.topo.has_mesh_edge(from, to))
            return cfg_.topo.mesh_bandwidth_mbps;
    }
    return std::min(up, down);
}

double Simulation::hop_latency(NodeId from, NodeId to) const {
    if (from < 0 || to < 0)
        return cfg_.topo.default_tier_latency_ms(2, 3);
    const FogNode& a = cfg_.topo.node(from);
    const FogNode& b = cfg_.topo.node(to);
    bool tree_hop = a.parent == to || b.parent == from;
    if (!tree_hop && in_same_cluster(from, to, cfg_.topo))
        return estimate_latency_ms(from, to, cfg_.topo);
    if (!tree_hop && cfg_.topo.has_mesh_edge(from, to)) return cfg_.topo.mesh_latency_ms;
    return cfg_.topo.link_latency_ms(from, to);
}

Simulation::HopTiming Simulation::book_link(NodeId from, NodeId to, double mb,
                                            bool migration_related) {
    double bw = hop_bw_mbps(from, to);
    double lat = hop_latency(from, to);
    double& busy = link_busy_until_[{from, to}];
    double start = std::max(kernel_.now(), busy);
    double tx = mb > 0.0 ? mb * 8.0 / bw * 1000.0 : 0.0;
    busy = start + tx;
    metrics_.accrue_busy(from, tx, migration_related);
    metrics_.accrue_busy(to, tx, migration_related);
    return {start, start + tx + lat, tx};
}

std::vector<NodeId> Simulation::route_between(NodeId from, NodeId to) {
    if (from == to) return {};
    NodeId f = from < 0 ? device_by_key(from).current_parent : from;
    NodeId g = to < 0 ? device_by_key(to).current_parent : to;
    std::vector<NodeId> route;
    if (from < 0) route.push_back(from);
    route.push_back(f);
    if (f != g) {
        NodeId cur = f;
        size_t guard = 0;
        while (cur != g) {
            NodeId nh = routes_.hop(cur, g);
            if (nh == kNoNode || ++guard > cfg_.topo.size()) {
                metrics_.count_routing_fault();
                return {};
            }
            route.push_back(nh);
            cur = nh;
        }
    }
    if (to < 0) route.push_back(to);
    if (route.size() < 2) return {};  // degenerate: same endpoint
    return route;
}

std::optional<NodeId> Simulation::resolve_destination(NodeId from, int origin_entity,
                                                      const std::string& service) {
    const AppModule* svc = cfg_.app.find_module(service);
    if (svc && svc->is_client) return device_key(origin_entity);

    if (cfg_.placement == PlacementPolicy::Edgeward) {
        // No orchestration layer: each path talks to its own instance.
        auto it = plan_.path_instance.find({origin_entity, service});
        if (it == plan_.path_instance.end()) return std::nullopt;
        return it->second;
    }
    auto chosen = select_destination(from, service, plan_.sd, lb_);
    if (chosen) return chosen;
    // Fall back to the path's own instance before declaring a fault.
    auto it = plan_.path_instance.find({origin_entity, service});
    if (it != plan_.path_instance.end()) return it->second;
    return std::nullopt;
}

void Simulation::start_tuple(Tuple t, NodeId from, NodeId to) {
    if (from == to) {
        uint64_t id = next_tuple_id_++;
        t.dst_node = to;
        tuples_[id] = {std::move(t), {}, 0};
        book_execution(id, to);
        return;
    }
    auto route = route_between(from, to);
    if (route.empty()) return;  // fault already counted
    uint64_t id = next_tuple_id_++;
    t.dst_node = to;
    tuples_[id] = {std::move(t), std::move(route), 0};
    start_hop(id);
}

void Simulation::start_hop(uint64_t tuple_id) {
    auto& ift = tuples_.at(tuple_id);
    NodeId from = ift.route[ift.hop];
    NodeId to = ift.route[ift.hop + 1];
    auto timing = book_link(from, to, ift.tuple.nw_length_mb, false);
    metrics_.record_transfer(from, to, ift.tuple.nw_length_mb,
                             TransferCategory::AppTuple);
    kernel_.schedule(timing.arrive_ms, to, EventKind::TransferComplete,
                     static_cast<int64_t>(tuple_id));
}

void Simulation::on_transfer_complete(const Event& e) {
    auto it = tuples_.find(static_cast<uint64_t>(e.a));
    if (it == tuples_.end()) return;
    auto& ift = it->second;
    ++ift.hop;
    if (ift.hop + 1 >= ift.route.size()) {
        book_execution(it->first, ift.route.back());
    } else {
        start_hop(it->first);
    }
}

void Simulation::book_execution(uint64_t tuple_id, NodeId where) {
    auto& ift = tuples_.at(tuple_id);
    const std::string& module = ift.tuple.dst_module;
    if (where >= 0) {
        auto inst = instances_.find(where);
        if (inst == instances_.end() || inst->second.count(module) == 0) {
            // The instance may have migrated since routing; follow it.
            auto cur = plan_.path_instance.find({ift.tuple.origin_entity, module});
            if (cur != plan_.path_instance.end() && cur->second != where) {
                Tuple t = ift.tuple;
                tuples_.erase(tuple_id);
                start_tuple(std::move(t), where, cur->second);
                return;
            }
            metrics_.count_routing_fault();
            tuples_.erase(tuple_id);
            return;
        }
    }
    double mips = where >= 0 ? cfg_.topo.node(where).mips : cfg_.device_spec.mips;
    double& busy = cpu_busy_until_[where];
    double start = std::max(kernel_.now(), busy);
    double service_ms = ift.tuple.cpu_length_mi / mips * 1000.0;
    busy = start + service_ms;
    offered_mi_[where] += ift.tuple.cpu_length_mi;
    metrics_.accrue_busy(where, service_ms, false);
    kernel_.schedule(busy, where, EventKind::TupleExecuted,
                     static_cast<int64_t>(tuple_id));
}

void Simulation::on_tuple_executed(const Event& e) {
    auto it = tuples_.find(static_cast<uint64_t>(e.a));
    if (it == tuples_.end()) return;
    Tuple executed = std::move(it->second.tuple);
    NodeId at = e.target;
    tuples_.erase(it);
    metrics_.count_tuple_executed();

    // Loop completions.
    for (const auto& tag : executed.loop_tags) {
        const AppLoop& loop = cfg_.app.loops.at(static_cast<size_t>(tag.loop));
        if (tag.position == static_cast<int>(loop.modules.size()) - 1 &&
            executed.dst_module == loop.modules.back()) {
            metrics_.record_loop(loop_name(loop), tag.emitted, kernel_.now());
        }
    }
    emit_downstream(executed, at);
}

void Simulation::emit_downstream(const Tuple& executed, NodeId at) {
    const std::string& module = executed.dst_module;
    for (const auto* e : cfg_.app.edges_from(module)) {
        int count = 0;
        if (e->periodic_ms > 0.0) {
            count = executed.tuple_type == kSenseType ? 1 : 0;
        } else {
            if (executed.tuple_type == kSenseType) continue;
            double ratio = cfg_.app.selectivity_ratio(module, executed.tuple_type,
                                                      e->tuple_type);
            count = static_cast<int>(ratio);
            double frac = ratio - count;
            if (frac > 0.0 && selectivity_rng_.bernoulli(frac)) ++count;
        }
        for (int k = 0; k < count; ++k) {
            Tuple t;
            t.tuple_type = e->tuple_type;
            t.src_module = module;
            t.dst_module = e->dest;
            t.cpu_length_mi = e->cpu_length_mi;
            t.nw_length_mb = e->nw_length_mb;
            t.emit_time = kernel_.now();
            t.origin_entity = executed.origin_entity;

            // Forward loop tags along the loop's designated edges; create a
            // fresh tag when this module opens a measured loop.
            for (const auto& tag : executed.loop_tags) {
                const AppLoop& loop = cfg_.app.loops.at(static_cast<size_t>(tag.loop));
                int next = tag.position + 1;
                if (next < static_cast<int>(loop.modules.size()) &&
                    loop.modules[static_cast<size_t>(tag.position)] == module &&
                    loop.modules[static_cast<size_t>(next)] == e->dest) {
                    t.loop_tags.push_back({tag.loop, next, tag.emitted});
                }
            }
            for (size_t li = 0; li < cfg_.app.loops.size(); ++li) {
                const AppLoop& loop = cfg_.app.loops[li];
                if (loop.modules.size() >= 2 && loop.modules[0] == module &&
                    loop.modules[1] == e->dest) {
                    t.loop_tags.push_back({static_cast<int>(li), 1, kernel_.now()});
                }
            }

            auto dest = resolve_destination(at, executed.origin_entity, e->dest);
            if (!dest) {
                metrics_.count_service_unavailable();
                continue;
            }
            start_tuple(std::move(t), at, *dest);
        }
    }
}

void Simulation::on_emission(const Event& e) {
    int device = e.target;
    const AppEdge& edge = cfg_.app.edges.at(static_cast<size_t>(e.a));
    const AppModule& client = *cfg_.app.find_module(edge.source);

    Tuple t;
    t.tuple_type = kSenseType;
    t.src_module = "__sensor";
    t.dst_module = client.name;
    t.cpu_length_mi = client.exec_mi;
    t.nw_length_mb = 0.0;
    t.emit_time = kernel_.now();
    t.origin_entity = device;
    start_tuple(std::move(t), device_key(device), device_key(device));

    double next = kernel_.now() + edge.periodic_ms;
    if (next <= cfg_.duration_ms)
        kernel_.schedule(next, device, EventKind::LoopProbe, e.a);
}

void Simulation::check_parent_optimality(const MobileEntity& m) {
    if (!cfg_.strict_checks || m.current_parent == kNoNode) return;
    double dp = haversine_km(m.location, cfg_.topo.node(m.current_parent).location);
    for (NodeId c : cfg_.topo.nodes_at_tier(m.tier - 1)) {
        double d = haversine_km(m.location, cfg_.topo.node(c).location);
        if (d < dp - 1e-12)
            throw SimulationError("parent optimality violated for entity " +
                                  std::to_string(m.id));
    }
}

void Simulation::on_location_changed(const Event& e) {
    MobileEntity& m = cfg_.devices.at(static_cast<size_t>(e.target));
    m.location = m.trace.samples.at(static_cast<size_t>(e.a)).loc;
    metrics_.count_location_event();

    if (cfg_.clustering_enabled &&
        cfg_.cluster_trigger.when == ClusterTrigger::When::OnLocationChanged)
        run_clustering();

    if (!cfg_.migration) return;
    if (device_migration_.count(m.id)) return;  // defer while a transfer is in flight

    auto outcome = manage_mobility(m, kernel_.now(), cfg_.topo, *cfg_.migration,
                                   cfg_.max_distance_km);
    if (outcome.unreachable) {
        metrics_.count_routing_fault();
        return;
    }
    if (!outcome.decision) {
        check_parent_optimality(m);
        return;
    }
    double payload = 0.0;
    for (const auto& name : m.hosted_modules) {
        const AppModule* mod = cfg_.app.find_module(name);
        if (mod) payload += mod->state_mb;
    }
    int64_t id = next_migration_id_++;
    migrations_[id] = {*outcome.decision, payload, 0};
    device_migration_[m.id] = id;
    start_migration_hop(id);
}

void Simulation::start_migration_hop(int64_t mig_id) {
    auto& mig = migrations_.at(mig_id);
    NodeId from = mig.decision.route[mig.hop];
    NodeId to = mig.decision.route[mig.hop + 1];
    double arrive;
    if (mig.payload_mb > 0.0) {
        auto timing = book_link(from, to, mig.payload_mb, true);
        metrics_.record_transfer(from, to, mig.payload_mb,
                                 TransferCategory::MigrationPayload);
        arrive = timing.arrive_ms;
    } else {
        arrive = kernel_.now() + hop_latency(from, to);
    }
    kernel_.schedule(arrive, to, EventKind::MigrationStep, mig_id,
                     static_cast<int64_t>(mig.hop));
}

void Simulation::on_migration_step(const Event& e) {
    auto& mig = migrations_.at(e.a);
    ++mig.hop;
    if (mig.hop + 1 >= mig.decision.route.size()) {
        commit_migration(e.a);
    } else {
        start_migration_hop(e.a);
    }
}

void Simulation::commit_migration(int64_t mig_id) {
    InFlightMigration mig = migrations_.at(mig_id);
    migrations_.erase(mig_id);
    const MigrationDecision& d = mig.decision;
    MobileEntity& m = cfg_.devices.at(static_cast<size_t>(d.entity));
    device_migration_.erase(d.entity);

    std::vector<std::string> still_hosted;
    for (const auto& name : d.modules) {
        const AppModule& mod = *cfg_.app.find_module(name);
        // Land on the new parent, escalating up-tier when it is full.
        NodeId landing = d.new_parent;
        while (cfg_.topo.node(landing).ram_free < mod.ram_gb) {
            NodeId up = cfg_.topo.node(landing).parent;
            if (up == kNoNode)
                throw SimulationError("migration: no capacity anywhere for " + name);
            landing = up;
        }
        auto& old_set = instances_[d.old_parent];
        auto it = old_set.find(name);
        if (it != old_set.end()) old_set.erase(it);
        cfg_.topo.node(d.old_parent).ram_free += mod.ram_gb;
        instances_[landing].insert(name);
        cfg_.topo.node(landing).ram_free -= mod.ram_gb;
        plan_.path_instance[{d.entity, name}] = landing;
        if (landing == d.new_parent) still_hosted.push_back(name);

        // Service discovery follows the instance.
        plan_.sd.remove(device_key(d.entity), name, d.old_parent);
        plan_.sd.add(device_key(d.entity), name, landing);
        for (const auto& s : mod.consumes) {
            auto old_c = plan_.sd.candidates(d.old_parent, s);
            if (old_c)
                for (NodeId c : std::vector<NodeId>(*old_c)) plan_.sd.add(landing, s, c);
        }
    }
    m.current_parent = d.new_parent;
    m.hosted_modules = std::move(still_hosted);

    // A handover with no module state to move is control-plane only and does
    // not count as a module migration.
    if (mig.payload_mb > 0.0) {
        MigrationRecord rec;
        rec.entity = d.entity;
        rec.trigger_ms = d.trigger_time;
        rec.complete_ms = kernel_.now();
        rec.route = d.route;
        rec.policy = cfg_.migration ? migration_policy_name(*cfg_.migration) : "";
        metrics_.record_migration(std::move(rec));
    }

    if (cfg_.strict_checks) {
        for (const auto& n : cfg_.topo.nodes())
            if (n.ram_free < -1e-9 || n.ram_free > n.ram_total + 1e-9)
                throw SimulationError("ram bookkeeping out of range at " + n.name);
    }
}

void Simulation::run_clustering() {
    apply_clustering(cfg_.topo, cfg_.latency_flag);
    // Probe traffic: one control message per sibling pair per trigger.
    if (cfg_.clustering_probe_mb > 0.0) {
        for (const auto& n : cfg_.topo.nodes()) {
            if (n.children.size() < 2) continue;
            for (size_t i = 0; i < n.children.size(); ++i)
                for (size_t j = i + 1; j < n.children.size(); ++j)
                    metrics_.record_transfer(n.children[i], n.children[j],
                                             cfg_.clustering_probe_mb,
                                             TransferCategory::ClusteringControl);
        }
    }
    rebuild_routes();
}

void Simulation::on_clustering_trigger(const Event&) { run_clustering(); }

void Simulation::rebuild_routes() { routes_ = compute_routes(cfg_.topo, false); }

void Simulation::dispatch(const Event& e) {
    if (cfg_.strict_checks && e.fire_at < last_dispatch_time_ - 1e-9)
        throw SimulationError("event order violation");
    last_dispatch_time_ = e.fire_at;
    switch (e.kind) {
        case EventKind::LoopProbe: on_emission(e); break;
        case EventKind::TransferComplete: on_transfer_complete(e); break;
        case EventKind::TupleExecuted: on_tuple_executed(e); break;
        case EventKind::LocationChanged: on_location_changed(e); break;
        case EventKind::MigrationStep: on_migration_step(e); break;
        case EventKind::ClusteringTrigger: on_clustering_trigger(e); break;
        case EventKind::TupleArrival: break;  // arrivals are handled inline
    }
}

MetricsReport Simulation::run() {
    auto wall_start = std::chrono::steady_clock::now();

    // Initial parents: nearest gateway to the first trace sample.
    for (auto& m : cfg_.devices) {
        if (m.trace.samples.empty())
            throw ValidationError("device " + std::to_string(m.id) + ": empty trace");
        m.location = m.trace.samples.front().loc;
        NodeId best = kNoNode;
        double best_d = cfg_.max_distance_km;
        for (NodeId c : cfg_.topo.nodes_at_tier(m.tier - 1)) {
            double dd = haversine_km(m.location, cfg_.topo.node(c).location);
            if (dd < best_d) {
                best_d = dd;
                best = c;
            }
        }
        if (best == kNoNode)
            throw ValidationError("device " + std::to_string(m.id) +
                                  ": no reachable gateway at start");
        m.current_parent = best;
    }

    bool cluster_first = cfg_.clustering_enabled &&
                         cfg_.cluster_trigger.when == ClusterTrigger::When::AtStart;
    if (cluster_first) run_clustering();

    // Placement over per-device leaf-to-root paths.
    std::vector<PlacementPath> paths;
    for (const auto& m : cfg_.devices) {
        PlacementPath p;
        p.device = m.id;
        p.nodes = cfg_.topo.path_to_root(m.current_parent);
        paths.push_back(std::move(p));
    }
    switch (cfg_.placement) {
        case PlacementPolicy::Edgeward:
            plan_ = edgeward_place(cfg_.topo, cfg_.app, paths);
            break;
        case PlacementPolicy::SmpNoClustering: {
            PlacementOptions opts;
            opts.use_clusters = false;
            plan_ = smp_place(cfg_.topo, cfg_.app, paths, opts);
            break;
        }
        case PlacementPolicy::SmpClustering: {
            PlacementOptions opts;
            opts.use_clusters = true;
            plan_ = smp_place(cfg_.topo, cfg_.app, paths, opts);
            break;
        }
    }
    for (const auto& [node, list] : plan_.node_instances)
        for (const auto& inst : list) instances_[node].insert(inst.microservice);
    for (const auto& m : cfg_.devices)
        for (const auto& mod : cfg_.app.modules)
            if (mod.is_client) instances_[device_key(m.id)].insert(mod.name);

    // Modules riding along with each device: its path's instances that landed
    // on its own gateway and are free to move.
    for (auto& m : cfg_.devices) {
        m.hosted_modules.clear();
        for (const auto& mod : cfg_.app.modules) {
            if (mod.is_client || mod.pin_tier >= 0) continue;
            auto it = plan_.path_instance.find({m.id, mod.name});
            if (it != plan_.path_instance.end() && it->second == m.current_parent)
                m.hosted_modules.push_back(mod.name);
        }
    }

    rebuild_routes();

    // Event seeding.
    if (cfg_.clustering_enabled && cfg_.cluster_trigger.when == ClusterTrigger::When::AtTime)
        kernel_.schedule(cfg_.cluster_trigger.at_ms, -1, EventKind::ClusteringTrigger);
    for (const auto& m : cfg_.devices)
        for (size_t si = 1; si < m.trace.samples.size(); ++si) {
            if (m.trace.samples[si].time_ms > cfg_.duration_ms) break;
            kernel_.schedule(m.trace.samples[si].time_ms, m.id,
                             EventKind::LocationChanged, static_cast<int64_t>(si));
        }
    size_t device_count = cfg_.devices.size();
    for (size_t ei = 0; ei < cfg_.app.edges.size(); ++ei) {
        const AppEdge& e = cfg_.app.edges[ei];
        if (e.periodic_ms <= 0.0) continue;
        const AppModule* src = cfg_.app.find_module(e.source);
        if (!src || !src->is_client) continue;
        for (size_t di = 0; di < device_count; ++di) {
            double offset = e.periodic_ms * static_cast<double>(di) /
                            static_cast<double>(std::max<size_t>(device_count, 1));
            kernel_.schedule(offset, static_cast<int>(di), EventKind::LoopProbe,
                             static_cast<int64_t>(ei));
        }
    }

    kernel_.run_until(cfg_.duration_ms);

    // Saturation flags: offered work beyond a node's capacity.
    double run_s = cfg_.duration_ms / 1000.0;
    for (const auto& [node, mi] : offered_mi_) {
        double cap = node >= 0 ? cfg_.topo.node(node).mips : cfg_.device_spec.mips;
        if (run_s > 0.0 && mi / run_s > cap) metrics_.flag_saturation();
    }

    MetricsReport report = metrics_.finalize(cfg_.duration_ms);

    if (cfg_.strict_checks) {
        for (const auto& n : cfg_.topo.nodes()) {
            const auto& e = report.node_energy.at(n.id);
            double lo = n.idle_power * run_s;
            double hi = n.busy_power * run_s;
            if (e.energy < lo - 1e-6 || e.energy > hi + 1e-6)
                throw SimulationError("energy bounds violated at " + n.name);
            if (n.ram_free < -1e-9 || n.ram_free > n.ram_total + 1e-9)
                throw SimulationError("ram bounds violated at " + n.name);
        }
        // Module exclusivity: each mobile module instance lives on exactly
        // one node once transfers are settled.
        if (migrations_.empty()) {
            std::map<std::pair<int, std::string>, int> copies;
            for (const auto& m : cfg_.devices)
                for (const auto& name : m.hosted_modules)
                    ++copies[{m.id, name}];
            for (const auto& [key, n] : copies)
                if (n != 1)
                    throw SimulationError("module exclusivity violated for " +
                                          key.second);
        }
    }

    auto wall_end = std::chrono::steady_clock::now();
    report.footprint.wall_seconds =
        std::chrono::duration<double>(wall_end - wall_start).count();
    report.footprint.peak_rss_mb = peak_rss_mb();
    return report;
}

std::string Simulation::cluster_view_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& n : cfg_.topo.nodes()) {
        if (n.cluster_members.empty()) continue;
        nlohmann::ordered_json entry;
        nlohmann::ordered_json members = nlohmann::ordered_json::array();
        nlohmann::ordered_json lat = nlohmann::ordered_json::object();
        for (NodeId cm : n.cluster_members) {
            members.push_back(cfg_.topo.node(cm).name);
            auto it = n.cm_latency_ms.find(cm);
            if (it != n.cm_latency_ms.end())
                lat[cfg_.topo.node(cm).name] = it->second;
        }
        entry["members"] = members;
        entry["latency_ms"] = lat;
        j[n.name] = entry;
    }
    return j.dump(2);
}

} // namespace fogsim
