#pragma once

#include "fogsim/simulation.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fogsim {

// Range-valued node attributes; lo == hi means a fixed value. Ranged values
// are sampled once per node from the topology RNG stream.
struct NodeSpecRange {
    double mips_lo = 0.0, mips_hi = 0.0;
    double ram = 0.0;
    double uplink = 0.0, downlink = 0.0;
    double busy_lo = 0.0, busy_hi = 0.0;
    double idle_lo = 0.0, idle_hi = 0.0;
    double range_km = 0.0;
    double latency_threshold_ms = 0.0;
};

struct GenTopologyParams {
    int blocks = 1;
    int gateways_per_block = 0;  // used when total_gateways < 0
    int total_gateways = -1;     // distributed as evenly as possible
    BoundingBox roi;
    uint64_t seed = 1;
    NodeSpecRange cloud, proxy, gateway;
};

struct GeneratedTopology {
    Topology topo;
    std::string json;       // accepted by build_topology
    std::string nodes_csv;  // id,latitude,longitude,block
    std::vector<std::string> warnings;
};

// Per block, nodes are scattered uniformly and the one nearest the block
// centroid becomes the tier-1 proxy; the rest are tier-2 gateways. One
// tier-0 cloud node sits at the RoI centre.
GeneratedTopology gen_topology(const GenTopologyParams& p);

struct MobilitySpec {
    MobilityKind kind = MobilityKind::Directional;
    double speed_min_mps = 1.5;
    double speed_max_mps = 1.5;
    double pause_ms = 0.0;
    // Per-device sample interval; 0 means derived from location_events.
    // When min < max the interval is sampled per device.
    double interval_min_ms = 0.0;
    double interval_max_ms = 0.0;
    std::string trace_file;  // when set, traces are loaded, not generated
};

struct ClusteringSpec {
    bool enabled = false;
    ClusterTrigger trigger;
    bool latency_flag = false;
    double sigma_ms = 0.0;  // > 0 overrides every node's latency threshold
};

struct ScenarioConfig {
    std::string name = "custom";  // ats/chm/cdc select built-in specs
    std::string scale = "full";   // "full" | "small"
    double duration_ms = 0.0;
    uint64_t seed = 1;
    PlacementPolicy placement = PlacementPolicy::SmpClustering;
    std::optional<MigrationPolicy> migration;
    MobilitySpec mobility;
    ClusteringSpec clustering;
    int devices = 1;
    int location_events = 0;        // aggregate target across all devices
    double emission_period_ms = 0;  // > 0 overrides periodic edge timers
    DeviceSpec device_spec;
    BoundingBox roi;
    int blocks = 0;           // > 0: generate a block topology
    int total_gateways = 0;
    int total_nodes = 0;      // percentage-split topology (cdc style)
    std::string topology_file;
    std::string application_file;
    std::string output_dir = "out";
    double clustering_probe_mb = 0.001;

    // Runtime-only payloads (not part of the serialized form).
    std::string topology_inline;
    std::string application_inline;

    void validate() const;
};

ScenarioConfig parse_scenario(const std::string& json_text);
// Normalized serialization; parse -> serialize is a fixed point.
std::string scenario_to_json(const ScenarioConfig& cfg);

// Enum <-> string helpers shared by config and CLI.
PlacementPolicy parse_placement(const std::string& s);
std::optional<MigrationPolicy> parse_migration(const std::string& s);
MobilityKind parse_mobility_kind(const std::string& s);
const char* mobility_kind_name(MobilityKind k);

// Built-in scenarios pre-filled with the case-study parameter tables.
std::map<std::string, ScenarioConfig> builtin_scenarios(uint64_t seed,
                                                        const std::string& scale);

Application ats_application();
Application chm_application();
Application cdc_application();

struct BuiltScenario {
    SimulationConfig sim;
    std::string topology_json;
    std::string nodes_csv;
    std::vector<MobilityTrace> traces;
};

// Materializes topology, application, devices, and traces. When
// `traces_override` is non-empty it replaces generated traces.
BuiltScenario build_scenario(const ScenarioConfig& cfg,
                             const std::vector<MobilityTrace>& traces_override = {});

} // namespace fogsim
