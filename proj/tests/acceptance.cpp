// Acceptance gate: one pass/fail line per criterion, exit code 0 only when
// every criterion holds. Each criterion is verified against freshly executed
// simulations or independent reference implementations, never against cached
// numbers.

#include "fogsim/clustering.hpp"
#include "fogsim/geo.hpp"
#include "fogsim/kernel.hpp"
#include "fogsim/microservices.hpp"
#include "fogsim/mobility.hpp"
#include "fogsim/rng.hpp"
#include "fogsim/scenario.hpp"
#include "fogsim/simulation.hpp"

#include "helpers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace fogsim;
using namespace testutil;

namespace {

int g_failures = 0;
std::vector<std::string> g_invariant_errors;

void report(int index, bool ok, const std::string& name,
            const std::string& detail = "") {
    std::cout << (ok ? "PASS" : "FAIL") << " [" << index << "] " << name;
    if (!detail.empty()) std::cout << " -- " << detail;
    std::cout << "\n";
    if (!ok) ++g_failures;
}

struct RunResult {
    MetricsReport rep;
    std::unique_ptr<Simulation> sim;
};

// Mirrors the CLI coupling: clustering is on exactly when the migration or
// placement policy consumes cluster views.
void couple_clustering(ScenarioConfig& cfg) {
    if (cfg.migration && *cfg.migration != MigrationPolicy::IntraInterCluster &&
        cfg.placement != PlacementPolicy::SmpClustering)
        cfg.clustering.enabled = false;
    if ((cfg.migration && *cfg.migration == MigrationPolicy::IntraInterCluster) ||
        cfg.placement == PlacementPolicy::SmpClustering)
        cfg.clustering.enabled = true;
}

// Cross-run sanity checks accumulated for the invariant criterion.
void check_run_invariants(const std::string& label, const Simulation& sim,
                          const MetricsReport& r, double duration_ms) {
    auto fail = [&](const std::string& what) {
        g_invariant_errors.push_back(label + ": " + what);
    };
    double secs = duration_ms / 1000.0;
    for (const auto& n : sim.topology().nodes()) {
        auto it = r.node_energy.find(n.id);
        if (it == r.node_energy.end()) {
            fail("node " + n.name + " missing from the energy map");
            continue;
        }
        if (it->second.energy < n.idle_power * secs - 1e-6 ||
            it->second.energy > n.busy_power * secs + 1e-6)
            fail("node " + n.name + " energy outside the idle/busy envelope");
        if (it->second.migration_busy_ms > it->second.busy_ms + 1e-9)
            fail("node " + n.name + " migration busy time exceeds total busy time");
    }
    double tier_sum = 0.0;
    for (const auto& [tier, e] : r.tier_energy) tier_sum += e;
    if (std::abs(tier_sum - r.total_energy) > 1e-6 * std::max(1.0, r.total_energy))
        fail("tier energies do not sum to the total");
    double bucket_sum = r.network_app_mb + r.network_migration_mb +
                        r.network_clustering_mb;
    if (std::abs(bucket_sum - r.network_total_mb) >
        1e-6 * std::max(1.0, r.network_total_mb))
        fail("network buckets do not sum to the total");
    for (const auto& [name, s] : r.loop_delays) {
        if (s.mean_ms > s.max_ms + 1e-9)
            fail("loop " + name + " mean exceeds max");
        if (s.count == 0) fail("loop " + name + " recorded with zero samples");
    }
    for (const auto& m : r.migrations) {
        if (m.complete_ms < m.trigger_ms)
            fail("migration completed before it was triggered");
        if (m.route.size() < 2) fail("migration route shorter than one hop");
    }
    // Placement RAM feasibility on fog nodes.
    for (const auto& [node, list] : sim.plan().node_instances) {
        if (node < 0) continue;
        double used = 0.0;
        for (const auto& inst : list) used += inst.ram_gb;
        if (used > sim.topology().node(node).ram_total + 1e-9)
            fail("placement overcommits RAM on " + sim.topology().node(node).name);
    }
}

RunResult run_config(ScenarioConfig cfg, const std::string& label) {
    couple_clustering(cfg);
    BuiltScenario built = build_scenario(cfg);
    RunResult out;
    out.sim = std::make_unique<Simulation>(std::move(built.sim));
    out.rep = out.sim->run();
    check_run_invariants(label, *out.sim, out.rep, cfg.duration_ms);
    return out;
}

ScenarioConfig ats_config(uint64_t seed, MigrationPolicy pol, MobilityKind kind) {
    auto cfg = builtin_scenarios(seed, "small").at("ats");
    cfg.migration = pol;
    cfg.mobility.kind = kind;
    return cfg;
}

struct AtsPoint {
    double mean_migration_ms = 0.0;
    double migration_mb = 0.0;
    double migration_energy = 0.0;
};

AtsPoint ats_point(uint64_t seed, MigrationPolicy pol, MobilityKind kind) {
    std::ostringstream label;
    label << "surveillance seed " << seed << " policy " << migration_policy_name(pol)
          << " mobility " << mobility_kind_name(kind);
    RunResult r = run_config(ats_config(seed, pol, kind), label.str());
    AtsPoint p;
    double sum = 0.0;
    for (const auto& m : r.rep.migrations) sum += m.complete_ms - m.trigger_ms;
    p.mean_migration_ms =
        r.rep.migrations.empty() ? 0.0 : sum / static_cast<double>(r.rep.migrations.size());
    p.migration_mb = r.rep.network_migration_mb;
    p.migration_energy = r.rep.migration_energy;
    return p;
}

double peak_rss_mb() {
    std::ifstream status("/proc/self/status");
    std::string line;
    while (std::getline(status, line)) {
        if (line.rfind("VmHWM:", 0) == 0) {
            std::istringstream ls(line.substr(6));
            double kb = 0.0;
            ls >> kb;
            return kb / 1024.0;
        }
    }
    return -1.0;
}

std::string report_json(const RunResult& r) {
    return report_to_json(r.rep, r.sim->topology(), false);
}

} // namespace

int main() {
    using Clock = std::chrono::steady_clock;
    const std::vector<uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const MobilityKind kinds[] = {MobilityKind::Directional,
                                  MobilityKind::RandomWaypoint};

    // ----- Criteria 1-3: handover policy study on the surveillance scenario.
    auto sweep_start = Clock::now();
    // points[kind][policy][seed-index]
    std::map<MobilityKind, std::map<MigrationPolicy, std::vector<AtsPoint>>> pts;
    for (MobilityKind kind : kinds)
        for (MigrationPolicy pol : {MigrationPolicy::CloudCentric,
                                    MigrationPolicy::IntraInterCluster,
                                    MigrationPolicy::NonHierarchical})
            for (uint64_t s : seeds) pts[kind][pol].push_back(ats_point(s, pol, kind));
    double sweep_s =
        std::chrono::duration<double>(Clock::now() - sweep_start).count();

    int time_ok = 0, mb_ok = 0, energy_ok = 0;
    for (size_t i = 0; i < seeds.size(); ++i) {
        bool t_ok = true, m_ok = true, e_ok = true;
        for (MobilityKind kind : kinds) {
            const AtsPoint& cc = pts[kind][MigrationPolicy::CloudCentric][i];
            const AtsPoint& ii = pts[kind][MigrationPolicy::IntraInterCluster][i];
            const AtsPoint& nh = pts[kind][MigrationPolicy::NonHierarchical][i];
            t_ok = t_ok && cc.mean_migration_ms > ii.mean_migration_ms &&
                   ii.mean_migration_ms > nh.mean_migration_ms;
            m_ok = m_ok && cc.migration_mb > ii.migration_mb &&
                   ii.migration_mb > nh.migration_mb;
            // Sideways and single-hop transfers must each save at least 10%
            // of the cloud-relay migration energy.
            e_ok = e_ok && ii.migration_energy <= 0.9 * cc.migration_energy &&
                   nh.migration_energy <= 0.9 * cc.migration_energy;
        }
        for (MigrationPolicy pol : {MigrationPolicy::CloudCentric,
                                    MigrationPolicy::IntraInterCluster,
                                    MigrationPolicy::NonHierarchical}) {
            // Erratic movement forces at least as much handover work as
            // straight-line movement under every policy.
            const AtsPoint& dir = pts[MobilityKind::Directional][pol][i];
            const AtsPoint& rnd = pts[MobilityKind::RandomWaypoint][pol][i];
            t_ok = t_ok && rnd.mean_migration_ms >= dir.mean_migration_ms;
            m_ok = m_ok && rnd.migration_mb >= dir.migration_mb;
        }
        time_ok += t_ok ? 1 : 0;
        mb_ok += m_ok ? 1 : 0;
        energy_ok += e_ok ? 1 : 0;
    }

    {
        std::ostringstream d;
        d << time_ok << "/10 seeds, sweep " << sweep_s << " s";
        report(1, time_ok >= 9 && sweep_s < 30.0,
               "handover duration: cloud-relay > cluster-aware > direct hop, and "
               "erratic >= straight-line movement",
               d.str());
    }
    report(2, mb_ok >= 9,
           "handover network volume follows the same policy ordering",
           std::to_string(mb_ok) + "/10 seeds");
    report(3, energy_ok >= 9,
           "cluster-aware and direct-hop handovers each save >= 10% of "
           "cloud-relay migration energy",
           std::to_string(energy_ok) + "/10 seeds");

    // ----- Criteria 4-6: placement policy study on the health-monitoring app.
    auto chm_cfg = [&](PlacementPolicy p) {
        auto cfg = builtin_scenarios(1, "small").at("chm");
        cfg.placement = p;
        return cfg;
    };
    RunResult chm_e = run_config(chm_cfg(PlacementPolicy::Edgeward),
                                 "health-monitoring baseline placement");
    RunResult chm_nc = run_config(chm_cfg(PlacementPolicy::SmpNoClustering),
                                  "health-monitoring scalable placement");
    RunResult chm_c = run_config(chm_cfg(PlacementPolicy::SmpClustering),
                                 "health-monitoring clustered placement");

    auto mean_delay = [](const RunResult& r) {
        double total = 0.0;
        uint64_t n = 0;
        for (const auto& [name, s] : r.rep.loop_delays) {
            total += s.mean_ms * static_cast<double>(s.count);
            n += s.count;
        }
        return n ? total / static_cast<double>(n) : 0.0;
    };
    double de = mean_delay(chm_e), dnc = mean_delay(chm_nc), dc = mean_delay(chm_c);
    {
        std::ostringstream d;
        d << "baseline " << de << " ms, scalable " << dnc << " ms, clustered "
          << dc << " ms";
        report(4, de > dnc && dnc > dc,
               "control-loop delay drops from baseline to scalable to clustered "
               "placement",
               d.str());
    }

    auto tier_e = [](const RunResult& r, int tier) {
        auto it = r.rep.tier_energy.find(tier);
        return it == r.rep.tier_energy.end() ? 0.0 : it->second;
    };
    double cloud_e = tier_e(chm_e, 0), cloud_nc = tier_e(chm_nc, 0),
           cloud_c = tier_e(chm_c, 0);
    double fog_e = tier_e(chm_e, 1) + tier_e(chm_e, 2);
    double fog_nc = tier_e(chm_nc, 1) + tier_e(chm_nc, 2);
    double fog_c = tier_e(chm_c, 1) + tier_e(chm_c, 2);
    bool c5 = cloud_e > cloud_nc && cloud_e > cloud_c &&   // datacentre works hardest
              fog_c > fog_nc && fog_nc > fog_e &&          // fog takes the load instead
              chm_e.rep.total_energy > chm_nc.rep.total_energy &&
              chm_e.rep.total_energy > chm_c.rep.total_energy;
    {
        std::ostringstream d;
        d << "cloud " << cloud_e << "/" << cloud_nc << "/" << cloud_c << ", fog "
          << fog_e << "/" << fog_nc << "/" << fog_c;
        report(5, c5,
               "baseline placement spends the most cloud and total energy; fog "
               "energy ranks the other way",
               d.str());
    }
    report(6,
           chm_e.rep.network_total_mb > chm_nc.rep.network_total_mb &&
               chm_nc.rep.network_total_mb > chm_c.rep.network_total_mb,
           "network usage drops from baseline to scalable to clustered placement",
           std::to_string(chm_e.rep.network_total_mb) + " > " +
               std::to_string(chm_nc.rep.network_total_mb) + " > " +
               std::to_string(chm_c.rep.network_total_mb) + " MB");

    // ----- Criterion 7: agreement with independent reference algorithms.
    bool oracles = true;
    {
        // Geodesic distance vs the spherical law of cosines.
        const Location cities[] = {{-37.8136, 144.9631, std::nullopt},
                                   {-33.8688, 151.2093, std::nullopt},
                                   {51.5074, -0.1278, std::nullopt},
                                   {40.7128, -74.0060, std::nullopt},
                                   {35.6762, 139.6503, std::nullopt}};
        for (const auto& a : cities)
            for (const auto& b : cities) {
                if (&a == &b) continue;
                double got = haversine_km(a, b), want = law_of_cosines_km(a, b);
                if (std::abs(got - want) > 1e-6 * want) oracles = false;
            }

        for (uint64_t seed = 1; seed <= 40 && oracles; ++seed) {
            RngStream rng(seed, "acceptance/oracles");
            // Meeting-point computation vs brute-force path intersection.
            Topology t = random_tree(rng, static_cast<int>(rng.uniform_int(1, 4)),
                                     static_cast<int>(rng.uniform_int(2, 15)));
            int n = static_cast<int>(t.size());
            for (int trial = 0; trial < 10; ++trial) {
                NodeId a = static_cast<NodeId>(rng.uniform_int(0, n - 1));
                NodeId b = static_cast<NodeId>(rng.uniform_int(0, n - 1));
                if (t.common_accessible_node(a, b) != common_node_oracle(t, a, b))
                    oracles = false;
            }
            // Cluster membership vs the brute-force pairwise filter.
            for (NodeId id = 0; id < n; ++id) {
                FogNode& g = t.node(id);
                if (g.tier != 2) continue;
                g.location = {rng.uniform(-0.02, 0.02), rng.uniform(-0.02, 0.02),
                              std::nullopt};
                g.comm_range_km = rng.uniform(0.0, 3.0);
            }
            bool lf = rng.bernoulli(0.5);
            for (NodeId id = 0; id < n; ++id) {
                if (t.node(id).parent == kNoNode) continue;
                if (form_cluster(id, t, lf).members != cluster_oracle(t, id, lf))
                    oracles = false;
            }
            // Shortest-path costs vs Floyd-Warshall over the same edge set.
            apply_clustering(t, false);
            RoutingTable rt = compute_routes(t, false);
            auto fw = floyd_warshall_oracle(t, false);
            for (NodeId a = 0; a < n; ++a)
                for (NodeId b = 0; b < n; ++b) {
                    if (a == b) continue;
                    double got = rt.cost_ms.at(a).at(b);
                    double want = fw[static_cast<size_t>(a)][static_cast<size_t>(b)];
                    if (std::abs(got - want) > 1e-9 * std::max(1.0, want))
                        oracles = false;
                }
        }

        // Round-robin equidistribution.
        for (int n : {1, 2, 3, 5}) {
            LoadBalancerState lb;
            std::vector<NodeId> cands;
            for (int i = 0; i < n; ++i) cands.push_back(i);
            std::map<NodeId, int> hits;
            for (int i = 0; i < n * 300; ++i) ++hits[lb.select(0, "svc", cands)];
            for (NodeId c : cands)
                if (hits[c] != 300) oracles = false;
        }
    }
    report(7, oracles,
           "library results match independent reference implementations "
           "(distance, meeting node, clusters, routes, load balancing)");

    // ----- Criterion 8: hand-traced two-gateway placement.
    bool hand_trace = true;
    {
        auto build = [] {
            Topology t;
            t.add_node(make_node(0, "cloud", 0, kNoNode));
            t.add_node(make_node(1, "proxy", 1, 0, 0.0, 0.0));
            t.add_node(make_node(2, "gw1", 2, 1, 0.0, 0.0, 5.0));
            t.add_node(make_node(3, "gw2", 2, 1, 0.0, 0.01, 5.0));
            t.node(2).ram_total = t.node(2).ram_free = 1.5;
            return t;
        };
        Application app;
        AppModule client;
        client.name = "Client";
        client.ram_gb = 0.1;
        client.is_client = true;
        client.consumes = {"S1"};
        AppModule s1, s2;
        s1.name = "S1";
        s1.ram_gb = 1.0;
        s1.consumes = {"S2"};
        s2.name = "S2";
        s2.ram_gb = 1.0;
        app.modules = {client, s1, s2};
        app.edges = {{"Client", "S1", 1000.0, 1.0, "t1", EdgeDirection::Up, 0.0},
                     {"S1", "S2", 1000.0, 1.0, "t2", EdgeDirection::Up, 0.0}};
        std::vector<PlacementPath> paths{{0, {2, 1, 0}}};

        Topology with = build();
        apply_clustering(with, false);
        PlacementOptions opts;
        opts.use_clusters = true;
        PlacementPlan pc = smp_place(with, app, paths, opts);
        // S1 fills gw1; S2 overflows sideways onto the clustered gw2.
        hand_trace = hand_trace && pc.path_instance.at({0, "S1"}) == 2 &&
                     pc.path_instance.at({0, "S2"}) == 3;

        Topology without = build();
        PlacementPlan pn = smp_place(without, app, paths, {});
        // Without a cluster view the overflow escalates to the proxy.
        hand_trace = hand_trace && pn.path_instance.at({0, "S1"}) == 2 &&
                     pn.path_instance.at({0, "S2"}) == 1;
    }
    report(8, hand_trace,
           "two-gateway overflow lands on the cluster sibling with clustering "
           "and on the proxy without it");

    // ----- Criterion 9: bit-identical repeat runs for every built-in scenario.
    bool deterministic = true;
    for (const std::string name : {"ats", "chm", "cdc"}) {
        auto cfg = builtin_scenarios(5, "small").at(name);
        std::string a = report_json(run_config(cfg, name + " determinism run A"));
        std::string b = report_json(run_config(cfg, name + " determinism run B"));
        if (a != b) deterministic = false;
    }
    report(9, deterministic,
           "repeat runs of all three built-in scenarios serialize byte-identically");

    // ----- Criterion 10: full-scale surveillance run fits the budget.
    {
        auto cfg = builtin_scenarios(7, "full").at("ats");
        cfg.migration = MigrationPolicy::IntraInterCluster;
        cfg.mobility.kind = MobilityKind::Directional;
        auto t0 = Clock::now();
        RunResult full = run_config(cfg, "surveillance full scale");
        double wall = std::chrono::duration<double>(Clock::now() - t0).count();
        double rss = peak_rss_mb();
        std::ostringstream d;
        d << wall << " s, peak RSS " << rss << " MB, "
          << full.rep.location_events << " location events";
        report(10,
               wall < 10.0 && rss > 0.0 && rss < 500.0 &&
                   full.rep.location_events == 140,
               "full-scale surveillance run stays under 10 s and 500 MB",
               d.str());
    }

    // ----- Criterion 11: cross-run invariants plus kernel ordering.
    {
        Kernel k;
        k.enable_trace(true);
        RngStream rng(99, "acceptance/kernel");
        for (int i = 0; i < 5000; ++i)
            k.schedule(static_cast<double>(rng.uniform_int(0, 499)), i,
                       EventKind::LoopProbe);
        k.set_dispatcher([](const Event&) {});
        k.run_until(1'000.0);
        const auto& tr = k.trace();
        for (size_t i = 1; i < tr.size(); ++i)
            if (tr[i - 1].first > tr[i].first ||
                (tr[i - 1].first == tr[i].first && tr[i - 1].second > tr[i].second))
                g_invariant_errors.push_back("kernel dispatched events out of order");
        if (k.scheduled_count() != k.dispatched_count() + k.pending())
            g_invariant_errors.push_back("kernel lost or duplicated events");

        std::string detail;
        for (size_t i = 0; i < g_invariant_errors.size() && i < 3; ++i)
            detail += (i ? "; " : "") + g_invariant_errors[i];
        report(11, g_invariant_errors.empty(),
               "energy envelopes, metric additivity, placement RAM limits, and "
               "event ordering hold across all runs",
               detail);
    }

    if (g_failures) {
        std::cout << g_failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
