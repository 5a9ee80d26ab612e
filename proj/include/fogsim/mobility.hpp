#pragma once

#include "fogsim/geo.hpp"
#include "fogsim/infrastructure.hpp"
#include "fogsim/rng.hpp"

#include <optional>
#include <vector>

namespace fogsim {

enum class MobilityKind { Directional, RandomWaypoint, RandomWalk };

struct MobilityModelParams {
    MobilityKind kind = MobilityKind::Directional;
    double speed_min_mps = 1.0;   // equal min/max -> fixed speed
    double speed_max_mps = 1.0;
    double interval_ms = 1000.0;  // time between samples, > 0
    double pause_ms = 0.0;        // dwell at waypoints
    BoundingBox roi;
    double duration_ms = 0.0;
    uint64_t seed = 0;
};

// Fixed-speed acyclic movement: equally time-spaced samples with equal
// consecutive step lengths along one compass heading.
MobilityTrace generate_directional_trace(int entity, Location start,
                                         double heading_deg,
                                         const MobilityModelParams& params);

// random_waypoint: travel legs toward a uniform target in the RoI at a
// uniform speed from [min,max], with a pause dwell at each waypoint.
// random_walk: fresh uniform heading each interval, reflecting at the RoI
// boundary. Both deterministic under the seed.
MobilityTrace generate_random_trace(int entity, const MobilityModelParams& params);

std::string trace_to_csv(const std::vector<MobilityTrace>& traces);
std::vector<MobilityTrace> traces_from_csv(const std::string& csv_text);

enum class MigrationPolicy { CloudCentric, NonHierarchical, IntraInterCluster };

struct MigrationDecision {
    int entity = -1;
    NodeId old_parent = kNoNode;
    NodeId new_parent = kNoNode;
    std::vector<NodeId> route;  // starts at old_parent, ends at new_parent
    std::vector<std::string> modules;
    SimTime trigger_time = 0.0;
    bool intra_cluster = false;
};

// Distance beyond which no upper-tier node is considered reachable.
inline constexpr double kDefaultMaxDistanceKm = 500.0;

struct MobilityOutcome {
    std::optional<MigrationDecision> decision;
    bool unreachable = false;
    int candidates_visited = 0;  // exactly |F_(tier-1)| per call
};

// New parent = argmin over the upper-tier nodes of haversine distance, ties
// keeping the lower node id, incumbent preserved on exact ties with the
// current parent. No decision when the parent does not change. Route shape
// depends on the policy: direct cluster hop, via the common accessible node,
// forced through the Cloud, or a single mesh hop.
MobilityOutcome manage_mobility(const MobileEntity& m, SimTime t,
                                const Topology& topo, MigrationPolicy policy,
                                double max_distance_km = kDefaultMaxDistanceKm);

// Closed-form transfer time of a decision: per consecutive route hop,
// payload_mb * 8 / bandwidth_mbps * 1000 + hop latency (store-and-forward).
double migration_latency_ms(const MigrationDecision& d, const Topology& topo,
                            double payload_mb);

} // namespace fogsim
