#include "fogsim/infrastructure.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include <json.hpp>

namespace fogsim {

namespace {
std::pair<NodeId, NodeId> norm(NodeId a, NodeId b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}
} // namespace

NodeId Topology::add_node(FogNode n) {
    if (n.id != static_cast<NodeId>(nodes_.size())) {
        throw ValidationError("node id " + std::to_string(n.id) +
                              " does not match insertion order");
    }
    if (n.parent != kNoNode) {
        node(n.parent).children.push_back(n.id);
    }
    nodes_.push_back(std::move(n));
    return nodes_.back().id;
}

std::vector<NodeId> Topology::nodes_at_tier(int tier) const {
    std::vector<NodeId> out;
    for (const auto& n : nodes_)
        if (n.tier == tier) out.push_back(n.id);
    return out;
}

void Topology::validate() const {
    for (const auto& n : nodes_) {
        if (n.mips <= 0.0)
            throw ValidationError("node " + n.name + ": mips must be > 0");
        if (n.ram_free < 0.0 || n.ram_free > n.ram_total)
            throw ValidationError("node " + n.name + ": ram_free outside [0, ram_total]");
        if (n.busy_power < n.idle_power || n.idle_power < 0.0)
            throw ValidationError("node " + n.name + ": power profile requires busy >= idle >= 0");
        if (n.tier == 0) {
            if (n.parent != kNoNode)
                throw ValidationError("tier-0 node " + n.name + " must not have a parent");
        } else {
            if (n.parent == kNoNode)
                throw ValidationError("node " + n.name + " at tier " +
                                      std::to_string(n.tier) + " has no parent");
            const FogNode& p = node(n.parent);
            if (p.tier != n.tier - 1)
                throw ValidationError("node " + n.name + " (tier " + std::to_string(n.tier) +
                                      ") has parent " + p.name + " at tier " +
                                      std::to_string(p.tier) + "; expected tier " +
                                      std::to_string(n.tier - 1));
        }
    }
    // Parent chains must terminate at a root without revisiting nodes.
    for (const auto& n : nodes_) {
        std::set<NodeId> seen;
        NodeId cur = n.id;
        while (cur != kNoNode) {
            if (!seen.insert(cur).second)
                throw ValidationError("cycle in parent links at node " + node(cur).name);
            cur = node(cur).parent;
        }
    }
}

std::vector<NodeId> Topology::path_to_root(NodeId n) const {
    std::vector<NodeId> path;
    NodeId cur = n;
    while (cur != kNoNode) {
        path.push_back(cur);
        if (path.size() > nodes_.size())
            throw ValidationError("broken parent chain starting at " + node(n).name);
        cur = node(cur).parent;
    }
    if (node(path.back()).tier != 0)
        throw ValidationError("parent chain of " + node(n).name +
                              " does not end at a tier-0 node");
    return path;
}

NodeId Topology::common_accessible_node(NodeId a, NodeId b) const {
    auto pa = path_to_root(a);
    auto pb = path_to_root(b);
    for (NodeId x : pa)
        for (NodeId y : pb)
            if (x == y) return x;
    throw ValidationError("nodes " + node(a).name + " and " + node(b).name +
                          " share no common accessible node");
}

std::vector<NodeId> Topology::tree_path(NodeId a, NodeId b) const {
    NodeId can = common_accessible_node(a, b);
    std::vector<NodeId> path;
    for (NodeId cur = a;; cur = node(cur).parent) {
        path.push_back(cur);
        if (cur == can) break;
    }
    std::vector<NodeId> down;
    for (NodeId cur = b; cur != can; cur = node(cur).parent) down.push_back(cur);
    path.insert(path.end(), down.rbegin(), down.rend());
    return path;
}

void Topology::set_link_latency(NodeId a, NodeId b, double ms) {
    link_latency_[norm(a, b)] = ms;
}

double Topology::default_tier_latency_ms(int tier_a, int tier_b) const {
    int lo = std::min(tier_a, tier_b);
    int hi = std::max(tier_a, tier_b);
    if (lo == 0 && hi == 1) return 100.0;  // proxy <-> cloud
    if (lo == 1 && hi == 2) return 2.0;    // gateway <-> proxy
    return 2.0;                            // device <-> gateway, peer links
}

double Topology::link_latency_ms(NodeId a, NodeId b) const {
    auto it = link_latency_.find(norm(a, b));
    if (it != link_latency_.end()) return it->second;
    if (has_mesh_edge(a, b)) return mesh_latency_ms;
    return default_tier_latency_ms(node(a).tier, node(b).tier);
}

double Topology::hop_bandwidth_mbps(NodeId from, NodeId to) const {
    return std::min(node(from).uplink_mbps, node(to).downlink_mbps);
}

void Topology::add_mesh_edge(NodeId a, NodeId b) { mesh_edges_.insert(norm(a, b)); }

bool Topology::has_mesh_edge(NodeId a, NodeId b) const {
    return mesh_edges_.count(norm(a, b)) > 0;
}

Topology build_topology(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    std::map<std::string, NodeId> by_name;

    if (!j.contains("nodes") || !j["nodes"].is_array())
        throw ValidationError("topology config: missing nodes[]");

    // Two passes so parents may be declared in any order.
    NodeId next_id = 0;
    for (const auto& nj : j["nodes"]) {
        std::string name = nj.at("name").get<std::string>();
        if (by_name.count(name))
            throw ValidationError("duplicate node name: " + name);
        by_name[name] = next_id++;
    }

    std::vector<FogNode> staged(static_cast<size_t>(next_id));
    NodeId id = 0;
    for (const auto& nj : j["nodes"]) {
        FogNode n;
        n.id = id++;
        n.name = nj.at("name").get<std::string>();
        n.tier = nj.at("tier").get<int>();
        n.mips = nj.value("mips", 1000.0);
        n.ram_total = nj.value("ram", 1.0);
        n.ram_free = n.ram_total;
        n.uplink_mbps = nj.value("uplink", 100.0);
        n.downlink_mbps = nj.value("downlink", 100.0);
        n.busy_power = nj.value("busy_power", 0.0);
        n.idle_power = nj.value("idle_power", 0.0);
        n.location.latitude = nj.value("lat", 0.0);
        n.location.longitude = nj.value("lon", 0.0);
        if (nj.contains("block")) n.location.block = nj["block"].get<int>();
        n.comm_range_km = nj.value("range_km", 0.0);
        n.latency_threshold_ms = nj.value("latency_threshold_ms", 0.0);
        if (nj.contains("parent") && !nj["parent"].is_null()) {
            std::string pname = nj["parent"].get<std::string>();
            auto it = by_name.find(pname);
            if (it == by_name.end())
                throw ValidationError("node " + n.name + ": unknown parent " + pname);
            n.parent = it->second;
        }
        staged[static_cast<size_t>(n.id)] = std::move(n);
    }
    // Parents may appear after children in the file, so insert all nodes
    // unwired and attach the parent/children links afterwards.
    Topology out;
    for (auto& n : staged) {
        NodeId p = n.parent;
        n.parent = kNoNode;
        NodeId nid = out.add_node(std::move(n));
        out.node(nid).parent = p;
    }
    for (const auto& n : out.nodes())
        if (n.parent != kNoNode) out.node(n.parent).children.push_back(n.id);

    if (j.contains("link_latency")) {
        for (const auto& lj : j["link_latency"]) {
            NodeId a = by_name.at(lj.at("a").get<std::string>());
            NodeId b = by_name.at(lj.at("b").get<std::string>());
            out.set_link_latency(a, b, lj.at("ms").get<double>());
        }
    }
    out.validate();
    return out;
}

std::map<int, Location> parse_locations(const std::string& csv_text,
                                        std::vector<std::string>* warnings) {
    std::istringstream in(csv_text);
    std::string line;
    std::map<int, Location> out;
    int line_no = 0;
    auto warn = [&](const std::string& msg) {
        if (warnings) warnings->push_back(msg);
    };
    if (!std::getline(in, line)) {
        warn("empty file");
        return out;
    }
    ++line_no;
    // Tolerate trailing \r from CRLF files.
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line != "id,latitude,longitude,block")
        throw ValidationError("location CSV: unexpected header '" + line +
                              "', want 'id,latitude,longitude,block'");
    bool any = false;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 4) {
            warn("line " + std::to_string(line_no) + ": expected 4 columns, got " +
                 std::to_string(fields.size()));
            continue;
        }
        try {
            int id = std::stoi(fields[0]);
            Location loc;
            loc.latitude = std::stod(fields[1]);
            loc.longitude = std::stod(fields[2]);
            loc.block = std::stoi(fields[3]);
            if (!loc.valid()) {
                warn("line " + std::to_string(line_no) + ": coordinate out of range");
                continue;
            }
            out[id] = loc;
            any = true;
        } catch (const std::exception&) {
            warn("line " + std::to_string(line_no) + ": non-numeric field");
        }
    }
    if (!any) warn("no valid rows");
    return out;
}

} // namespace fogsim
