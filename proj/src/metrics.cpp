#include "fogsim/metrics.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace fogsim {

void MetricsCollector::record_loop(const std::string& loop_name, SimTime emit,
                                   SimTime complete) {
    if (complete < emit)
        throw SimulationError("record_loop: completion before emission");
    double delay = complete - emit;
    auto& s = report_.loop_delays[loop_name];
    ++s.count;
    loop_sum_ms_[loop_name] += delay;
    s.max_ms = std::max(s.max_ms, delay);
    s.mean_ms = loop_sum_ms_[loop_name] / static_cast<double>(s.count);
}

void MetricsCollector::accrue_busy(NodeId node, double busy_ms, bool migration_related) {
    if (busy_ms <= 0.0) return;
    auto& e = report_.node_energy[node];
    e.busy_ms += busy_ms;
    if (migration_related) e.migration_busy_ms += busy_ms;
}

void MetricsCollector::record_transfer(NodeId /*from*/, NodeId /*to*/, double mb,
                                       TransferCategory cat) {
    if (mb <= 0.0) return;
    report_.network_total_mb += mb;
    switch (cat) {
        case TransferCategory::AppTuple: report_.network_app_mb += mb; break;
        case TransferCategory::MigrationPayload: report_.network_migration_mb += mb; break;
        case TransferCategory::ClusteringControl: report_.network_clustering_mb += mb; break;
    }
}

MetricsReport MetricsCollector::finalize(SimTime t_end) {
    double run_s = t_end / 1000.0;
    report_.tier_energy.clear();
    report_.total_energy = 0.0;
    report_.migration_energy = 0.0;
    for (const auto& n : topo_->nodes()) {
        auto& e = report_.node_energy[n.id];
        // Busy time may double-count overlapping CPU and transfer handling;
        // clamp so a node never exceeds full utilization.
        double busy_s = std::min(e.busy_ms, t_end) / 1000.0;
        double util = run_s > 0.0 ? busy_s / run_s : 0.0;
        e.energy = run_s * (n.idle_power + (n.busy_power - n.idle_power) * util);
        report_.tier_energy[n.tier] += e.energy;
        report_.total_energy += e.energy;
        double mig_s = std::min(e.migration_busy_ms, t_end) / 1000.0;
        report_.migration_energy += (n.busy_power - n.idle_power) * mig_s;
    }
    return report_;
}

std::string report_to_json(const MetricsReport& r, const Topology& topo,
                           bool include_footprint) {
    nlohmann::ordered_json j;
    auto& loops = j["loop_delays"];
    loops = nlohmann::ordered_json::object();
    for (const auto& [name, s] : r.loop_delays)
        loops[name] = {{"count", s.count}, {"mean_ms", s.mean_ms}, {"max_ms", s.max_ms}};

    auto& energy = j["energy"];
    energy["total"] = r.total_energy;
    energy["migration_overhead"] = r.migration_energy;
    auto& tiers = energy["per_tier"];
    tiers = nlohmann::ordered_json::object();
    for (const auto& [tier, e] : r.tier_energy)
        tiers["tier" + std::to_string(tier)] = e;
    auto& per_node = energy["per_node"];
    per_node = nlohmann::ordered_json::object();
    for (const auto& [id, e] : r.node_energy) {
        if (id < 0) continue;
        per_node[topo.node(id).name] = {{"energy", e.energy}, {"busy_ms", e.busy_ms}};
    }

    j["network_usage_mb"] = {{"total", r.network_total_mb},
                             {"app", r.network_app_mb},
                             {"migration", r.network_migration_mb},
                             {"clustering", r.network_clustering_mb}};

    auto& migs = j["migrations"];
    migs = nlohmann::ordered_json::array();
    for (const auto& m : r.migrations) {
        nlohmann::ordered_json route = nlohmann::ordered_json::array();
        for (NodeId n : m.route) route.push_back(topo.node(n).name);
        migs.push_back({{"entity", m.entity},
                        {"trigger_ms", m.trigger_ms},
                        {"complete_ms", m.complete_ms},
                        {"route", route},
                        {"policy", m.policy}});
    }

    j["faults"] = {{"routing", r.routing_faults},
                   {"service_unavailable", r.service_unavailable},
                   {"saturated_nodes", r.saturated_nodes}};
    j["counters"] = {{"location_events", r.location_events},
                     {"tuples_executed", r.tuples_executed},
                     {"migrations", r.migrations.size()}};
    if (include_footprint)
        j["run_footprint"] = {{"wall_seconds", r.footprint.wall_seconds},
                              {"peak_rss_mb", r.footprint.peak_rss_mb}};
    return j.dump(2);
}

std::string report_to_csv(const MetricsReport& r, const Topology& topo) {
    std::ostringstream out;
    out << "metric,key,value\n";
    out.precision(10);
    for (const auto& [name, s] : r.loop_delays) {
        out << "loop_count," << name << ',' << s.count << '\n';
        out << "loop_mean_ms," << name << ',' << s.mean_ms << '\n';
        out << "loop_max_ms," << name << ',' << s.max_ms << '\n';
    }
    out << "energy_total,," << r.total_energy << '\n';
    out << "energy_migration_overhead,," << r.migration_energy << '\n';
    for (const auto& [tier, e] : r.tier_energy)
        out << "energy_tier,tier" << tier << ',' << e << '\n';
    for (const auto& [id, e] : r.node_energy)
        if (id >= 0) out << "energy_node," << topo.node(id).name << ',' << e.energy << '\n';
    out << "network_total_mb,," << r.network_total_mb << '\n';
    out << "network_app_mb,," << r.network_app_mb << '\n';
    out << "network_migration_mb,," << r.network_migration_mb << '\n';
    out << "network_clustering_mb,," << r.network_clustering_mb << '\n';
    out << "migration_count,," << r.migrations.size() << '\n';
    double total_mig_ms = 0.0;
    for (const auto& m : r.migrations) total_mig_ms += m.complete_ms - m.trigger_ms;
    out << "migration_total_ms,," << total_mig_ms << '\n';
    out << "migration_mean_ms,,"
        << (r.migrations.empty() ? 0.0
                                 : total_mig_ms / static_cast<double>(r.migrations.size()))
        << '\n';
    out << "faults_routing,," << r.routing_faults << '\n';
    out << "faults_service_unavailable,," << r.service_unavailable << '\n';
    out << "location_events,," << r.location_events << '\n';
    out << "tuples_executed,," << r.tuples_executed << '\n';
    return out.str();
}

} // namespace fogsim
