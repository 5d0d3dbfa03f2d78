#include "moeim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "moeim/util.hpp"

namespace moeim {

namespace {

using nlohmann::ordered_json;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::filesystem::path ensure_dir(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    return dir;
}

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double stddev_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    double m = mean_of(xs), s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}  // namespace

const std::vector<std::string>& summary_masks() {
    static const std::vector<std::string> masks = {"IS", "ISC", "ISF", "ISB", "IST", "all"};
    return masks;
}

LoadedExperiment prepare_experiment(const ExperimentConfig& cfg) {
    LoadedExperiment exp;
    exp.graph = load_edge_list(cfg.graph_path, cfg.directed);
    switch (cfg.community_source.kind) {
        case CommunitySource::Kind::detect:
            exp.assignment = detect_communities(exp.graph, cfg.community_source.detect_seed);
            break;
        case CommunitySource::Kind::file:
            exp.assignment = load_assignment(cfg.community_source.path, exp.graph);
            break;
    }
    exp.k = cfg.resolve_k(exp.graph.node_count());
    exp.moea = cfg.moea;
    exp.moea.k = exp.k;
    if (cfg.moea_theta_auto) exp.moea.theta = exp.graph.avg_out_degree();
    exp.ctx = NormalizationContext{exp.graph.node_count(), exp.k,
                                   budget_cap(exp.graph, exp.k), cfg.tau, cfg.objectives};
    return exp;
}

void write_front_csv(const ParetoFront& front, const Graph& g, int run_id,
                     const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write front: " + path.string());
    const auto& ctx = front.ctx;
    out << "# moeim-front 1\n";
    out << "# mask " << ctx.active.to_string() << "\n";
    out << "# node_count " << ctx.node_count << "\n";
    out << "# k " << ctx.max_seed_size << "\n";
    out << "# budget_cap " << ctx.budget_cap << "\n";
    out << "# tau " << (ctx.tau == kUnboundedTau ? std::string("unbounded")
                                                 : std::to_string(ctx.tau))
        << "\n";
    out << "run_id,seed_nodes,influence,seed_size,communities,fairness,budget,time,"
           "norm_influence,norm_seed_size,norm_communities,norm_fairness,norm_budget,"
           "norm_time\n";

    auto sorted = front.entries;
    std::sort(sorted.begin(), sorted.end(), [](const ParetoEntry& a, const ParetoEntry& b) {
        if (a.objectives.seed_size != b.objectives.seed_size)
            return a.objectives.seed_size < b.objectives.seed_size;
        if (a.objectives.influence != b.objectives.influence)
            return a.objectives.influence > b.objectives.influence;
        return a.seed_nodes < b.seed_nodes;
    });
    for (const auto& e : sorted) {
        out << run_id << ',';
        for (std::size_t i = 0; i < e.seed_nodes.size(); ++i) {
            if (i) out << ';';
            out << g.label(e.seed_nodes[i]);
        }
        const auto& v = e.objectives;
        out << ',' << fmt(v.influence) << ',' << v.seed_size << ','
            << fmt(v.communities_score) << ',' << fmt(v.fairness_score) << ',' << v.budget
            << ',' << fmt(v.time);
        auto full = to_maximize_all(v, ctx);
        for (int i = 0; i < kObjectiveCount; ++i) {
            out << ',';
            if (i == static_cast<int>(Objective::time) && ctx.tau == kUnboundedTau)
                out << "NA";
            else
                out << fmt(full[i]);
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

FrontFile read_front_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open front: " + path.string());
    FrontFile ff;
    NormalizationContext& ctx = ff.front.ctx;
    std::string line;
    bool saw_magic = false, saw_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ss(line.substr(1));
            std::string key;
            ss >> key;
            if (key == "moeim-front") saw_magic = true;
            else if (key == "mask") {
                std::string mask;
                ss >> mask;
                ctx.active = ObjectiveMask::parse(mask);
            } else if (key == "node_count") ss >> ctx.node_count;
            else if (key == "k") ss >> ctx.max_seed_size;
            else if (key == "budget_cap") ss >> ctx.budget_cap;
            else if (key == "tau") {
                std::string t;
                ss >> t;
                ctx.tau = (t == "unbounded") ? kUnboundedTau : std::stoi(t);
            }
            continue;
        }
        if (!saw_header) {  // column header row
            saw_header = true;
            continue;
        }
        std::vector<std::string> cols;
        std::istringstream ss(line);
        std::string col;
        while (std::getline(ss, col, ',')) cols.push_back(col);
        if (cols.size() != 14)
            throw std::runtime_error(path.string() + ": malformed front row");
        ff.run_id = std::stoi(cols[0]);
        ParetoEntry e;
        std::istringstream seeds(cols[1]);
        std::string tok;
        while (std::getline(seeds, tok, ';')) e.seed_nodes.push_back(std::stoi(tok));
        e.objectives.influence = std::stod(cols[2]);
        e.objectives.seed_size = std::stoi(cols[3]);
        e.objectives.communities_score = std::stod(cols[4]);
        e.objectives.fairness_score = std::stod(cols[5]);
        e.objectives.budget = std::stoi(cols[6]);
        e.objectives.time = std::stod(cols[7]);
        e.point = to_maximize_space(e.objectives, ctx);
        ff.front.entries.push_back(std::move(e));
    }
    if (!saw_magic) throw std::runtime_error(path.string() + ": not a front CSV");
    return ff;
}

namespace {

// Per-mask hypervolumes for one front; masks needing a finite tau yield
// nothing under unbounded tau.
ordered_json mask_hypervolumes(const std::vector<ParetoFront>& fronts) {
    ordered_json out;
    for (const auto& name : summary_masks()) {
        ObjectiveMask mask = name == "all" ? ObjectiveMask::all() : ObjectiveMask::parse(name);
        bool needs_tau = mask.has(Objective::time);
        ordered_json entry;
        std::vector<double> values;
        for (const auto& f : fronts) {
            if (needs_tau && f.ctx.tau == kUnboundedTau) break;
            values.push_back(subset_hypervolume(f, mask));
        }
        if (values.size() != fronts.size()) {
            entry = nullptr;
        } else {
            entry["per_run"] = values;
            entry["mean"] = mean_of(values);
            entry["std"] = stddev_of(values);
        }
        out[name] = std::move(entry);
    }
    return out;
}

void write_summary(const ExperimentConfig& cfg, const std::string& algorithm,
                   const std::vector<ParetoFront>& fronts,
                   const std::vector<std::string>& front_files,
                   const std::filesystem::path& dir) {
    ordered_json j;
    j["schema_version"] = 1;
    j["algorithm"] = algorithm;
    j["objectives"] = cfg.objectives.to_string();
    j["runs"] = cfg.runs;
    j["rng_seed_base"] = cfg.rng_seed_base;
    j["front_files"] = front_files;
    j["hypervolumes"] = mask_hypervolumes(fronts);
    std::ofstream out(dir / "summary.json");
    if (!out) throw std::runtime_error("cannot write summary.json");
    out << j.dump(2) << '\n';
}

}  // namespace

PreprocessReport cmd_preprocess(const ExperimentConfig& cfg) {
    LoadDiagnostics diag;
    Graph g0 = load_edge_list(cfg.graph_path, cfg.directed, &diag);
    Graph g1 = largest_weakly_connected_component(g0);

    CommunityAssignment a1;
    switch (cfg.community_source.kind) {
        case CommunitySource::Kind::detect:
            a1 = detect_communities(g1, cfg.community_source.detect_seed);
            break;
        case CommunitySource::Kind::file:
            a1 = load_assignment(cfg.community_source.path, g1);
            break;
    }

    auto small = nodes_in_small_communities(a1, 10);
    Graph g2 = small.empty() ? g1 : remove_nodes(g1, small);
    Graph g3 = largest_weakly_connected_component(g2);

    // Restrict the partition to the surviving nodes via original labels.
    std::map<std::int64_t, int> comm_of_label;
    for (int v = 0; v < g1.node_count(); ++v) comm_of_label[g1.label(v)] = a1.labels[v];
    std::vector<int> raw(g3.node_count());
    for (int v = 0; v < g3.node_count(); ++v) raw[v] = comm_of_label.at(g3.label(v));
    CommunityAssignment a3 = CommunityAssignment::from_labels(std::move(raw));

    auto dir = ensure_dir(cfg.output_dir);
    write_edge_list(g3, dir / "graph.txt");
    save_assignment(a3, g3, dir / "communities.txt");

    PreprocessReport r;
    r.nodes = g3.node_count();
    r.edges = g3.edge_count();
    r.communities = a3.community_count;
    r.community_min = *std::min_element(a3.sizes.begin(), a3.sizes.end());
    r.community_max = *std::max_element(a3.sizes.begin(), a3.sizes.end());
    r.degrees = degree_summary(g3);
    r.self_loops_dropped = diag.self_loops_dropped;
    r.duplicate_edges_dropped = diag.duplicate_edges_dropped;
    r.lwcc_removed_first = g0.node_count() - g1.node_count();
    r.small_community_nodes_removed = static_cast<int>(small.size());
    r.lwcc_removed_second = g2.node_count() - g3.node_count();

    ordered_json j;
    j["schema_version"] = 1;
    j["nodes"] = r.nodes;
    j["edges"] = r.edges;
    j["communities"] = {{"num", r.communities},
                        {"min", r.community_min},
                        {"max", r.community_max}};
    j["degree"] = {{"avg", r.degrees.avg_out},
                   {"std", r.degrees.std_out},
                   {"max", r.degrees.max_out},
                   {"min", r.degrees.min_out}};
    j["removed"] = {{"self_loops", r.self_loops_dropped},
                    {"duplicate_edges", r.duplicate_edges_dropped},
                    {"outside_lwcc", r.lwcc_removed_first},
                    {"small_community_nodes", r.small_community_nodes_removed},
                    {"outside_lwcc_after_removal", r.lwcc_removed_second}};
    std::ofstream out(dir / "report.json");
    if (!out) throw std::runtime_error("cannot write report.json");
    out << j.dump(2) << '\n';
    return r;
}

void cmd_run(const ExperimentConfig& cfg, int workers) {
    auto exp = prepare_experiment(cfg);
    auto dir = ensure_dir(cfg.output_dir);

    int outer = std::max(1, std::min(workers, cfg.runs));
    int inner = std::max(1, workers / outer);
    std::vector<ParetoFront> fronts(cfg.runs);
    parallel_for(static_cast<std::size_t>(cfg.runs), outer, [&](std::size_t i) {
        EvalSettings eval{cfg.tau, cfg.n_sims, inner};
        auto history = run_nsga2(exp.graph, &exp.assignment, cfg.model, exp.moea, eval,
                                 cfg.rng_seed_base + i);
        fronts[i] = std::move(history.archive);
    });

    std::vector<std::string> files;
    for (int i = 0; i < cfg.runs; ++i) {
        std::string name = "front_run" + std::to_string(i) + ".csv";
        write_front_csv(fronts[i], exp.graph, i, dir / name);
        files.push_back(name);
    }
    write_summary(cfg, "moeim", fronts, files, dir);
}

void cmd_baseline(const ExperimentConfig& cfg, const std::string& which, int workers) {
    if (which != "gdd" && which != "celf")
        throw ConfigError("baseline: which must be 'gdd' or 'celf'");
    auto exp = prepare_experiment(cfg);
    auto dir = ensure_dir(cfg.output_dir);

    std::vector<ParetoFront> fronts(cfg.runs);
    std::vector<std::string> files;
    for (int i = 0; i < cfg.runs; ++i) {
        std::uint64_t seed = cfg.rng_seed_base + static_cast<std::uint64_t>(i);
        GreedyTrace trace =
            which == "gdd" ? gdd(exp.graph, exp.k)
                           : celf(exp.graph, cfg.model, exp.k, cfg.tau, cfg.n_sims, seed,
                                  workers);
        fronts[i] = prefix_sweep(exp.graph, &exp.assignment, cfg.model, trace, exp.ctx,
                                 cfg.n_sims, seed, workers);
        std::string name = "front_run" + std::to_string(i) + ".csv";
        write_front_csv(fronts[i], exp.graph, i, dir / name);
        files.push_back(name);
    }
    write_summary(cfg, which, fronts, files, dir);
}

void cmd_analyze(const std::vector<std::filesystem::path>& front_files,
                 const std::filesystem::path& output_dir) {
    if (front_files.empty()) throw ConfigError("analyze: no front files given");
    std::vector<FrontFile> loaded;
    for (const auto& p : front_files) loaded.push_back(read_front_csv(p));
    for (const auto& f : loaded)
        if (f.front.ctx.node_count != loaded[0].front.ctx.node_count ||
            f.front.ctx.max_seed_size != loaded[0].front.ctx.max_seed_size)
            throw std::runtime_error("analyze: fronts come from incompatible contexts");

    auto dir = ensure_dir(output_dir);

    // Per-run hypervolume table, suitable for external rank testing.
    {
        std::ofstream out(dir / "hypervolume_table.csv");
        if (!out) throw std::runtime_error("cannot write hypervolume_table.csv");
        out << "file";
        for (const auto& name : summary_masks()) out << ",HV_" << name;
        out << '\n';
        for (std::size_t i = 0; i < loaded.size(); ++i) {
            out << front_files[i].filename().string();
            for (const auto& name : summary_masks()) {
                ObjectiveMask mask =
                    name == "all" ? ObjectiveMask::all() : ObjectiveMask::parse(name);
                out << ',';
                if (mask.has(Objective::time) && loaded[i].front.ctx.tau == kUnboundedTau)
                    out << "NA";
                else
                    out << fmt(subset_hypervolume(loaded[i].front, mask));
            }
            out << '\n';
        }
    }

    bool all_full = std::all_of(loaded.begin(), loaded.end(), [](const FrontFile& f) {
        return f.front.ctx.active == ObjectiveMask::all();
    });
    if (all_full) {
        std::vector<ParetoFront> fronts;
        for (auto& f : loaded) fronts.push_back(std::move(f.front));
        auto matrix = correlation_matrix(fronts);
        std::ofstream out(dir / "correlation.csv");
        if (!out) throw std::runtime_error("cannot write correlation.csv");
        out << "objective";
        for (char c : kObjectiveLetters) out << ',' << c;
        out << '\n';
        for (int a = 0; a < kObjectiveCount; ++a) {
            out << kObjectiveLetters[a];
            for (int b = 0; b < kObjectiveCount; ++b) {
                out << ',';
                if (std::isnan(matrix[a][b]))
                    out << "NA";
                else
                    out << fmt(matrix[a][b]);
            }
            out << '\n';
        }
    } else {
        std::fprintf(stderr,
                     "analyze: correlation matrix skipped (needs fronts optimized on all "
                     "six objectives)\n");
    }
}

void cmd_detect_communities(const ExperimentConfig& cfg) {
    Graph g = load_edge_list(cfg.graph_path, cfg.directed);
    std::uint64_t seed = cfg.community_source.kind == CommunitySource::Kind::detect
                             ? cfg.community_source.detect_seed
                             : cfg.rng_seed_base;
    auto a = detect_communities(g, seed);
    auto dir = ensure_dir(cfg.output_dir);
    save_assignment(a, g, dir / "communities.txt");
    std::printf("communities=%d modularity=%.6f\n", a.community_count, modularity(g, a));
}

}  // namespace moeim
