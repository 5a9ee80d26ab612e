#pragma once

#include "fogsim/infrastructure.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fogsim {

struct AppModule {
    std::string name;
    double ram_gb = 0.0;        // > 0
    bool is_client = false;     // pinned to the mobile entity, never migrated up
    double state_mb = 0.0;      // payload moved when the module migrates
    double exec_mi = 0.0;       // client-side work per sensor activation
    int pin_tier = -1;          // >= 0: always placed at this tier of the path
    std::vector<std::string> consumes;
};

enum class EdgeDirection { Up, Down };

struct AppEdge {
    std::string source;
    std::string dest;
    double cpu_length_mi = 0.0;   // work induced at dest
    double nw_length_mb = 0.0;    // payload size, > 0
    std::string tuple_type;
    EdgeDirection direction = EdgeDirection::Up;
    double periodic_ms = 0.0;     // > 0: emitted on a timer; 0: reactive
};

struct Selectivity {
    std::string module;
    std::string input_type;
    std::string output_type;
    double ratio = 1.0;  // > 0
};

struct AppLoop {
    std::vector<std::string> modules;  // adjacent pairs connected by an edge
};

struct Application {
    std::string name;
    std::vector<AppModule> modules;
    std::vector<AppEdge> edges;
    std::vector<Selectivity> selectivities;
    std::vector<AppLoop> loops;

    const AppModule* find_module(const std::string& name) const;
    int module_index(const std::string& name) const;  // -1 when absent
    std::vector<const AppEdge*> edges_from(const std::string& module) const;
    double selectivity_ratio(const std::string& module,
                             const std::string& input_type,
                             const std::string& output_type) const;

    // Accepts iff UP-direction edges form a DAG; DOWN edges (responses) are
    // exempt from acyclicity. Also checks name uniqueness, ram > 0,
    // source != dest, nw_length > 0, and loop connectivity.
    void validate() const;

    // First module (deterministic topological order, ties broken by
    // declaration order) not yet placed whose UP-predecessors are all placed.
    std::optional<std::string> next_eligible_microservice(
        const std::set<std::string>& placed) const;
};

struct Tuple {
    uint64_t id = 0;
    std::string tuple_type;
    std::string src_module;
    std::string dst_module;
    double cpu_length_mi = 0.0;
    double nw_length_mb = 0.0;
    SimTime emit_time = 0.0;
    NodeId dst_node = kNoNode;  // set by the load balancer
    int origin_entity = -1;
    // Loop tracking: (loop index, loop-instance emit time) pairs active on
    // this tuple; position is the next module index expected in the loop.
    struct LoopTag {
        int loop = -1;
        int position = 0;
        SimTime emitted = 0.0;
    };
    std::vector<LoopTag> loop_tags;
};

Application parse_application(const std::string& json_text);

} // namespace fogsim
