#include "fogsim/mobility.hpp"
#include "fogsim/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fogsim {

namespace {

void check_params(const MobilityModelParams& p) {
    if (p.interval_ms <= 0.0) throw ValidationError("mobility: interval must be > 0");
    if (p.speed_min_mps <= 0.0 || p.speed_max_mps < p.speed_min_mps)
        throw ValidationError("mobility: speed range invalid");
}

Location reflect_into(const BoundingBox& roi, Location l) {
    // Mirror across the violated boundary; a second pass handles the corner
    // case where the mirrored point overshoots the opposite edge.
    for (int pass = 0; pass < 4 && !roi.contains(l); ++pass) {
        if (l.latitude < roi.lat_min) l.latitude = 2 * roi.lat_min - l.latitude;
        if (l.latitude > roi.lat_max) l.latitude = 2 * roi.lat_max - l.latitude;
        if (l.longitude < roi.lon_min) l.longitude = 2 * roi.lon_min - l.longitude;
        if (l.longitude > roi.lon_max) l.longitude = 2 * roi.lon_max - l.longitude;
    }
    l.latitude = std::clamp(l.latitude, roi.lat_min, roi.lat_max);
    l.longitude = std::clamp(l.longitude, roi.lon_min, roi.lon_max);
    return l;
}

} // namespace

MobilityTrace generate_directional_trace(int entity, Location start,
                                         double heading_deg,
                                         const MobilityModelParams& params) {
    check_params(params);
    if (heading_deg < 0.0 || heading_deg >= 360.0)
        throw ValidationError("mobility: heading must be in [0, 360)");
    MobilityTrace trace;
    trace.entity = entity;
    double step_m = params.speed_min_mps * (params.interval_ms / 1000.0);
    Location cur = start;
    // Multiply instead of accumulating so the final sample is not lost to
    // floating-point drift when the duration is an exact multiple.
    for (long i = 0;; ++i) {
        double t = i * params.interval_ms;
        if (t > params.duration_ms + 1e-6) break;
        trace.samples.push_back({t, cur});
        cur = step_meters(cur, heading_deg, step_m);
    }
    return trace;
}

MobilityTrace generate_random_trace(int entity, const MobilityModelParams& params) {
    check_params(params);
    if (params.roi.degenerate()) throw ValidationError("mobility: RoI is degenerate");
    RngStream rng(params.seed, "mobility/" + std::to_string(entity));
    MobilityTrace trace;
    trace.entity = entity;

    const BoundingBox& roi = params.roi;
    Location cur;
    cur.latitude = rng.uniform(roi.lat_min, roi.lat_max);
    cur.longitude = rng.uniform(roi.lon_min, roi.lon_max);

    double dt_s = params.interval_ms / 1000.0;

    if (params.kind == MobilityKind::RandomWalk) {
        for (long i = 0;; ++i) {
            double t = i * params.interval_ms;
            if (t > params.duration_ms + 1e-6) break;
            trace.samples.push_back({t, cur});
            double heading = rng.uniform(0.0, 360.0);
            double speed = rng.uniform(params.speed_min_mps, params.speed_max_mps);
            cur = reflect_into(roi, step_meters(cur, heading, speed * dt_s));
        }
        return trace;
    }

    if (params.kind != MobilityKind::RandomWaypoint)
        throw ValidationError("generate_random_trace: kind must be a random model");

    // Waypoint: alternate travel legs and pause dwells on the sampling grid.
    Location target = cur;
    double leg_speed = 0.0;
    double pause_left_ms = 0.0;
    bool need_target = true;
    for (long i = 0;; ++i) {
        double t = i * params.interval_ms;
        if (t > params.duration_ms + 1e-6) break;
        trace.samples.push_back({t, cur});
        if (pause_left_ms > 0.0) {
            pause_left_ms -= params.interval_ms;
            continue;
        }
        if (need_target) {
            target.latitude = rng.uniform(roi.lat_min, roi.lat_max);
            target.longitude = rng.uniform(roi.lon_min, roi.lon_max);
            leg_speed = rng.uniform(params.speed_min_mps, params.speed_max_mps);
            need_target = false;
        }
        double remaining_km = haversine_km(cur, target);
        double step_km = leg_speed * dt_s / 1000.0;
        if (step_km >= remaining_km) {
            cur = target;
            pause_left_ms = params.pause_ms;
            need_target = true;
        } else {
            // Linear interpolation toward the target; at city scale this
            // matches the great-circle leg to well below the test tolerance.
            double frac = step_km / remaining_km;
            cur.latitude += (target.latitude - cur.latitude) * frac;
            cur.longitude += (target.longitude - cur.longitude) * frac;
        }
    }
    return trace;
}

std::string trace_to_csv(const std::vector<MobilityTrace>& traces) {
    std::ostringstream out;
    out << "entity,time_ms,latitude,longitude\n";
    out.precision(10);
    for (const auto& tr : traces)
        for (const auto& s : tr.samples)
            out << tr.entity << ',' << s.time_ms << ',' << s.loc.latitude << ','
                << s.loc.longitude << '\n';
    return out.str();
}

std::vector<MobilityTrace> traces_from_csv(const std::string& csv_text) {
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line))
        throw ValidationError("trace CSV: empty file");
    std::map<int, MobilityTrace> by_entity;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string f0, f1, f2, f3;
        if (!std::getline(ls, f0, ',') || !std::getline(ls, f1, ',') ||
            !std::getline(ls, f2, ',') || !std::getline(ls, f3))
            throw ValidationError("trace CSV line " + std::to_string(line_no) +
                                  ": expected 4 columns");
        int entity = std::stoi(f0);
        TraceSample s;
        s.time_ms = std::stod(f1);
        s.loc.latitude = std::stod(f2);
        s.loc.longitude = std::stod(f3);
        auto& tr = by_entity[entity];
        tr.entity = entity;
        if (!tr.samples.empty() && s.time_ms <= tr.samples.back().time_ms)
            throw ValidationError("trace CSV line " + std::to_string(line_no) +
                                  ": timestamps must be strictly increasing");
        tr.samples.push_back(s);
    }
    std::vector<MobilityTrace> out;
    for (auto& [_, tr] : by_entity) out.push_back(std::move(tr));
    return out;
}

MobilityOutcome manage_mobility(const MobileEntity& m, SimTime t,
                                const Topology& topo, MigrationPolicy policy,
                                double max_distance_km) {
    MobilityOutcome out;
    auto candidates = topo.nodes_at_tier(m.tier - 1);
    if (candidates.empty())
        throw ValidationError("manage_mobility: no upper-tier candidates");

    // The incumbent parent is the baseline; only strictly closer candidates
    // displace it, which also damps oscillation on exact ties.
    NodeId best = kNoNode;
    double best_d = max_distance_km;
    if (m.current_parent != kNoNode) {
        double d0 = haversine_km(m.location, topo.node(m.current_parent).location);
        if (d0 <= max_distance_km) {
            best = m.current_parent;
            best_d = d0;
        }
    }
    for (NodeId c : candidates) {
        ++out.candidates_visited;
        if (c == m.current_parent) continue;
        double d = haversine_km(m.location, topo.node(c).location);
        if (d < best_d) {
            best = c;
            best_d = d;
        }
    }
    if (best == kNoNode) {
        out.unreachable = true;
        return out;
    }
    if (best == m.current_parent) return out;

    MigrationDecision dec;
    dec.entity = m.id;
    dec.old_parent = m.current_parent;
    dec.new_parent = best;
    dec.modules = m.hosted_modules;
    dec.trigger_time = t;
    switch (policy) {
        case MigrationPolicy::NonHierarchical:
            dec.route = {dec.old_parent, dec.new_parent};
            break;
        case MigrationPolicy::CloudCentric: {
            // Forced through the Cloud even when a lower relay exists.
            auto up = topo.path_to_root(dec.old_parent);
            auto down = topo.path_to_root(dec.new_parent);
            dec.route = up;
            for (auto it = down.rbegin() + 1; it != down.rend(); ++it)
                dec.route.push_back(*it);
            break;
        }
        case MigrationPolicy::IntraInterCluster:
            if (in_same_cluster(dec.old_parent, dec.new_parent, topo)) {
                dec.route = {dec.old_parent, dec.new_parent};
                dec.intra_cluster = true;
            } else {
                dec.route = topo.tree_path(dec.old_parent, dec.new_parent);
            }
            break;
    }
    out.decision = std::move(dec);
    return out;
}

double migration_latency_ms(const MigrationDecision& d, const Topology& topo,
                            double payload_mb) {
    double total = 0.0;
    for (size_t i = 0; i + 1 < d.route.size(); ++i) {
        NodeId from = d.route[i];
        NodeId to = d.route[i + 1];
        double bw = d.intra_cluster || topo.has_mesh_edge(from, to)
                        ? (d.intra_cluster ? topo.node(from).uplink_mbps
                                           : topo.mesh_bandwidth_mbps)
                        : topo.hop_bandwidth_mbps(from, to);
        double latency = d.intra_cluster
                             ? estimate_latency_ms(from, to, topo)
                             : topo.link_latency_ms(from, to);
        if (payload_mb > 0.0) total += payload_mb * 8.0 / bw * 1000.0;
        total += latency;
    }
    return total;
}

} // namespace fogsim
