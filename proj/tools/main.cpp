#include "fogsim/scenario.hpp"
#include "fogsim/metrics.hpp"
#include "fogsim/microservices.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

namespace fs = std::filesystem;
using namespace fogsim;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

// Env seed wins over CLI/config so whole suites can be re-seeded at once.
void apply_env_seed(uint64_t& seed) {
    if (const char* s = std::getenv("FOGSIM_SEED")) {
        try {
            seed = std::stoull(s);
        } catch (const std::exception&) {
            throw std::runtime_error("FOGSIM_SEED is not a valid integer");
        }
    }
}

struct RunArgs {
    std::string scenario;
    std::string config_path;
    std::string placement;
    std::string migration;
    std::string mobility;
    std::string scale = "full";
    std::string out_dir;
    uint64_t seed = 1;
    bool seed_set = false;
    int users = 0;
    double duration_s = 0.0;
    std::string trace_file;
};

ScenarioConfig resolve_config(const RunArgs& a) {
    ScenarioConfig cfg;
    if (!a.config_path.empty()) {
        cfg = parse_scenario(read_file(a.config_path));
    } else if (!a.scenario.empty()) {
        auto all = builtin_scenarios(a.seed_set ? a.seed : 7, a.scale);
        auto it = all.find(a.scenario);
        if (it == all.end())
            throw std::runtime_error("unknown scenario: " + a.scenario +
                                     " (expected ats, chm, or cdc)");
        cfg = it->second;
    } else {
        throw std::runtime_error("run: need --scenario or --config");
    }
    if (a.seed_set) cfg.seed = a.seed;
    apply_env_seed(cfg.seed);
    if (!a.placement.empty()) cfg.placement = parse_placement(a.placement);
    if (!a.migration.empty()) cfg.migration = parse_migration(a.migration);
    if (!a.mobility.empty()) cfg.mobility.kind = parse_mobility_kind(a.mobility);
    if (a.users > 0) cfg.devices = a.users;
    if (a.duration_s > 0.0) cfg.duration_ms = a.duration_s * 1000.0;
    if (!a.out_dir.empty()) cfg.output_dir = a.out_dir;
    if (!a.trace_file.empty()) cfg.mobility.trace_file = a.trace_file;

    // Feature coupling: clustering follows the selected policies.
    if (cfg.migration && *cfg.migration != MigrationPolicy::IntraInterCluster &&
        cfg.placement != PlacementPolicy::SmpClustering)
        cfg.clustering.enabled = false;
    if ((cfg.migration && *cfg.migration == MigrationPolicy::IntraInterCluster) ||
        cfg.placement == PlacementPolicy::SmpClustering)
        cfg.clustering.enabled = true;

    if (!cfg.topology_file.empty())
        cfg.topology_inline = read_file(cfg.topology_file);
    if (!cfg.application_file.empty())
        cfg.application_inline = read_file(cfg.application_file);
    return cfg;
}

int do_run(const RunArgs& a) {
    ScenarioConfig cfg = resolve_config(a);
    std::vector<MobilityTrace> traces;
    if (!cfg.mobility.trace_file.empty())
        traces = traces_from_csv(read_file(cfg.mobility.trace_file));
    BuiltScenario built = build_scenario(cfg, traces);

    Simulation sim(std::move(built.sim));
    MetricsReport report = sim.run();

    fs::create_directories(cfg.output_dir);
    auto p = [&](const std::string& f) { return (fs::path(cfg.output_dir) / f).string(); };
    write_file(p("report.json"), report_to_json(report, sim.topology(), false));
    write_file(p("report.csv"), report_to_csv(report, sim.topology()));
    write_file(p("placement.json"), placement_to_json(sim.plan(), sim.topology()));
    write_file(p("clusters.json"), sim.cluster_view_json());
    {
        std::ostringstream fp;
        fp << "{\n  \"wall_seconds\": " << report.footprint.wall_seconds
           << ",\n  \"peak_rss_mb\": " << report.footprint.peak_rss_mb << "\n}\n";
        write_file(p("footprint.json"), fp.str());
    }
    write_file(p("config.json"), scenario_to_json(cfg));
    if (!built.topology_json.empty())
        write_file(p("topology.json"), built.topology_json);
    if (!built.nodes_csv.empty()) write_file(p("nodes.csv"), built.nodes_csv);

    std::cout << "wrote " << cfg.output_dir << "/report.json ("
              << report.location_events << " location events, "
              << report.migrations.size() << " migrations, "
              << report.tuples_executed << " tuples)\n";
    return 0;
}

int do_gen_trace(MobilityModelParams params, const std::string& model, int devices,
                 const std::string& out_path) {
    params.kind = parse_mobility_kind(model);
    apply_env_seed(params.seed);
    RngStream dev_rng(params.seed, "devices");
    std::vector<MobilityTrace> traces;
    for (int d = 0; d < devices; ++d) {
        if (params.kind == MobilityKind::Directional) {
            Location start;
            start.latitude = dev_rng.uniform(params.roi.lat_min, params.roi.lat_max);
            start.longitude = dev_rng.uniform(params.roi.lon_min, params.roi.lon_max);
            double heading = dev_rng.uniform(0.0, 360.0);
            MobilityModelParams mp = params;
            mp.speed_max_mps = mp.speed_min_mps;
            traces.push_back(generate_directional_trace(d, start, heading, mp));
        } else {
            traces.push_back(generate_random_trace(d, params));
        }
    }
    std::string csv = trace_to_csv(traces);
    if (out_path.empty() || out_path == "-")
        std::cout << csv;
    else
        write_file(out_path, csv);
    return 0;
}

int do_gen_topology(int blocks, int per_block, int total, std::vector<double> roi,
                    uint64_t seed, const std::string& out_prefix) {
    GenTopologyParams p;
    p.blocks = blocks;
    p.gateways_per_block = per_block;
    p.total_gateways = total;
    if (roi.size() == 4) {
        p.roi = {roi[0], roi[2], roi[1], roi[3]};
    } else {
        p.roi = {-37.8226, -37.8066, 144.9480, 144.9750};
    }
    p.seed = seed;
    apply_env_seed(p.seed);
    // ATS-profile hardware for generated layouts.
    p.cloud = {44800.0, 44800.0, 160.0, 100.0, 100.0, 1468.0, 1468.0, 1332.0,
               1332.0, 0.0, 0.0};
    p.proxy = {3600.0, 4000.0, 16.0, 10.0, 20.0, 428.0, 428.0, 333.0, 333.0, 0.0, 0.0};
    p.gateway = {2800.0, 3000.0, 8.0, 50.0, 100.0, 206.0, 206.0, 170.0, 170.0,
                 1.5, 2.0};
    GeneratedTopology g = gen_topology(p);
    for (const auto& w : g.warnings) std::cerr << "warning: " << w << "\n";
    write_file(out_prefix + ".json", g.json);
    write_file(out_prefix + ".csv", g.nodes_csv);
    std::cout << "wrote " << out_prefix << ".json and " << out_prefix << ".csv ("
              << g.topo.size() << " nodes)\n";
    return 0;
}

int do_sweep(const RunArgs& base, const std::string& param,
             std::vector<std::string> values, int seeds) {
    if (values.empty()) throw std::runtime_error("sweep: --values is empty");
    std::cout << "scenario,param,value,seed,migrations,mean_migration_ms,"
                 "network_migration_mb,network_total_mb,total_energy,"
                 "migration_energy,mean_loop_ms\n";
    for (const auto& v : values) {
        for (int s = 1; s <= seeds; ++s) {
            RunArgs a = base;
            a.seed = base.seed_set ? base.seed + static_cast<uint64_t>(s - 1)
                                   : static_cast<uint64_t>(s);
            a.seed_set = true;
            if (param == "migration")
                a.migration = v;
            else if (param == "placement")
                a.placement = v;
            else if (param == "mobility")
                a.mobility = v;
            else
                throw std::runtime_error("sweep: unknown param " + param);

            ScenarioConfig cfg = resolve_config(a);
            BuiltScenario built = build_scenario(cfg);
            Simulation sim(std::move(built.sim));
            MetricsReport r = sim.run();

            double mig_sum = 0.0;
            for (const auto& m : r.migrations) mig_sum += m.complete_ms - m.trigger_ms;
            double mig_mean = r.migrations.empty() ? 0.0 : mig_sum / r.migrations.size();
            double loop_sum = 0.0;
            size_t loops = 0;
            for (const auto& [_, st] : r.loop_delays) {
                loop_sum += st.mean_ms;
                ++loops;
            }
            std::cout << a.scenario << ',' << param << ',' << v << ',' << a.seed
                      << ',' << r.migrations.size() << ',' << mig_mean << ','
                      << r.network_migration_mb << ',' << r.network_total_mb << ','
                      << r.total_energy << ',' << r.migration_energy << ','
                      << (loops ? loop_sum / loops : 0.0) << '\n';
        }
    }
    return 0;
}

int do_report(const std::vector<std::string>& csv_paths) {
    for (const auto& path : csv_paths) {
        std::istringstream in(read_file(path));
        std::string line;
        std::getline(in, line);  // header
        std::cout << "== " << path << " ==\n";
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            std::string metric, key, value;
            std::getline(ls, metric, ',');
            std::getline(ls, key, ',');
            std::getline(ls, value);
            std::cout << "  " << std::left << std::setw(24) << metric
                      << std::setw(32) << key << value << "\n";
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Edge/Fog discrete-event simulator"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run a scenario and write reports");
    run->add_option("--scenario", run_args.scenario, "Built-in scenario: ats|chm|cdc");
    run->add_option("--config", run_args.config_path, "Scenario config JSON");
    run->add_option("--placement", run_args.placement,
                    "edgeward|smp-no-clustering|smp-clustering");
    run->add_option("--policy,--migration", run_args.migration,
                    "none|cloud-centric|non-hierarchical|intra-inter");
    run->add_option("--mobility", run_args.mobility,
                    "directional|random_waypoint|random_walk");
    run->add_option("--scale", run_args.scale, "full|small");
    auto* seed_opt = run->add_option("--seed", run_args.seed, "RNG seed");
    run->add_option("--users,--devices", run_args.users, "Mobile device count");
    run->add_option("--duration", run_args.duration_s, "Duration in seconds");
    run->add_option("--out", run_args.out_dir, "Output directory");
    run->add_option("--trace", run_args.trace_file, "Mobility trace CSV");

    MobilityModelParams gt_params;
    std::string gt_model = "directional";
    int gt_devices = 1;
    std::string gt_out;
    std::vector<double> gt_roi;
    gt_params.roi = {-37.8226, -37.8066, 144.9480, 144.9750};
    auto* gt = app.add_subcommand("gen-trace", "Generate a mobility trace CSV");
    gt->add_option("--model", gt_model, "directional|random_waypoint|random_walk");
    gt->add_option("--devices", gt_devices, "Entity count");
    gt->add_option("--seed", gt_params.seed, "RNG seed");
    gt->add_option("--duration", gt_params.duration_ms, "Duration in ms");
    gt->add_option("--interval", gt_params.interval_ms, "Sample interval in ms");
    gt->add_option("--speed-min", gt_params.speed_min_mps, "Speed lower bound (m/s)");
    gt->add_option("--speed-max", gt_params.speed_max_mps, "Speed upper bound (m/s)");
    gt->add_option("--pause", gt_params.pause_ms, "Waypoint pause in ms");
    gt->add_option("--roi", gt_roi, "lat_min lon_min lat_max lon_max")->expected(4);
    gt->add_option("-o,--out", gt_out, "Output file (default stdout)");

    int tp_blocks = 1, tp_per_block = 0, tp_total = -1;
    uint64_t tp_seed = 1;
    std::vector<double> tp_roi;
    std::string tp_out = "topology";
    auto* tp = app.add_subcommand("gen-topology", "Generate a block topology");
    tp->add_option("--blocks", tp_blocks, "Block count")->required();
    tp->add_option("--gateways-per-block", tp_per_block, "Gateways per block");
    tp->add_option("--total-gateways", tp_total, "Total gateway count");
    tp->add_option("--roi", tp_roi, "lat_min lon_min lat_max lon_max")->expected(4);
    tp->add_option("--seed", tp_seed, "RNG seed");
    tp->add_option("-o,--out", tp_out, "Output prefix");

    RunArgs sweep_args;
    std::string sweep_param = "migration";
    std::vector<std::string> sweep_values;
    int sweep_seeds = 1;
    auto* sw = app.add_subcommand("sweep", "Run a scenario across parameter values");
    sw->add_option("--scenario", sweep_args.scenario, "Built-in scenario")->required();
    sw->add_option("--scale", sweep_args.scale, "full|small");
    sw->add_option("--param", sweep_param, "migration|placement|mobility");
    sw->add_option("--values", sweep_values, "Values to sweep")->required();
    sw->add_option("--seeds", sweep_seeds, "Seeds per value (1..N)");
    sw->add_option("--mobility", sweep_args.mobility, "Fixed mobility model");
    sw->add_option("--placement", sweep_args.placement, "Fixed placement policy");
    auto* sw_seed = sw->add_option("--seed", sweep_args.seed, "Base seed");
    sw->add_option("--out", sweep_args.out_dir, "Output directory");

    std::vector<std::string> report_paths;
    auto* rp = app.add_subcommand("report", "Print a report.csv as a summary table");
    rp->add_option("files", report_paths, "report.csv files")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            run_args.seed_set = seed_opt->count() > 0;
            if (run_args.out_dir.empty()) run_args.out_dir = "out";
            return do_run(run_args);
        }
        if (gt->parsed()) {
            if (gt_roi.size() == 4)
                gt_params.roi = {gt_roi[0], gt_roi[2], gt_roi[1], gt_roi[3]};
            return do_gen_trace(gt_params, gt_model, gt_devices, gt_out);
        }
        if (tp->parsed())
            return do_gen_topology(tp_blocks, tp_per_block, tp_total, tp_roi, tp_seed,
                                   tp_out);
        if (sw->parsed()) {
            sweep_args.seed_set = sw_seed->count() > 0;
            if (sweep_args.out_dir.empty()) sweep_args.out_dir = "out-sweep";
            return do_sweep(sweep_args, sweep_param, sweep_values, sweep_seeds);
        }
        if (rp->parsed()) return do_report(report_paths);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
