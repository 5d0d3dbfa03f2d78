#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "karate.hpp"
#include "moeim/experiment.hpp"

using namespace moeim;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const char* name) {
    auto dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const fs::path& path, const std::string& content) {
    std::ofstream(path) << content;
    return path;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path karate_edge_file(const fs::path& dir) {
    auto path = dir / "karate.txt";
    write_edge_list(karate_club(), path);
    return path;
}

std::string base_config(const fs::path& graph, const std::string& extra = "") {
    return "{\n"
           "  \"schema_version\": 1,\n"
           "  \"graph_path\": \"" + graph.string() + "\",\n"
           "  \"directed\": false,\n"
           "  \"community_source\": \"detect:3\",\n"
           "  \"model\": \"wc\",\n"
           "  \"objectives\": \"IS\",\n"
           "  \"k\": 4,\n"
           "  \"tau\": 5,\n"
           "  \"n_sims\": 20,\n"
           "  \"runs\": 2,\n"
           "  \"rng_seed_base\": 7" + extra + "\n}\n";
}

}  // namespace

TEST_CASE("config parsing") {
    auto dir = fresh_dir("moeim_cfg");
    auto graph = karate_edge_file(dir);

    SUBCASE("well-formed config loads with defaults applied") {
        auto path = write_file(dir / "ok.json", base_config(graph));
        auto cfg = ExperimentConfig::load(path);
        CHECK(cfg.model.kind == ModelKind::WC);
        CHECK(cfg.k_raw == doctest::Approx(4.0));
        CHECK(cfg.tau == 5);
        CHECK(cfg.runs == 2);
        CHECK(cfg.moea.population_size == 100);
        CHECK(cfg.moea_theta_auto);
        CHECK(cfg.objectives == ObjectiveMask::influence_seed());
    }
    SUBCASE("unknown top-level key is rejected") {
        auto path = write_file(dir / "bad1.json",
                               base_config(graph, ",\n  \"extra_knob\": 1"));
        CHECK_THROWS_WITH_AS(ExperimentConfig::load(path),
                             doctest::Contains("extra_knob"), ConfigError);
    }
    SUBCASE("unknown moea key is rejected") {
        auto path = write_file(dir / "bad2.json",
                               base_config(graph, ",\n  \"moea\": {\"popsize\": 10}"));
        CHECK_THROWS_AS(ExperimentConfig::load(path), ConfigError);
    }
    SUBCASE("invalid JSON and missing file are config errors") {
        auto path = write_file(dir / "bad3.json", "{nope");
        CHECK_THROWS_AS(ExperimentConfig::load(path), ConfigError);
        CHECK_THROWS_AS(ExperimentConfig::load(dir / "absent.json"), ConfigError);
    }
    SUBCASE("schema_version must be 1") {
        auto path = write_file(dir / "bad4.json", [&] {
            auto s = base_config(graph);
            auto pos = s.find("\"schema_version\": 1");
            s.replace(pos, 19, "\"schema_version\": 2");
            return s;
        }());
        CHECK_THROWS_AS(ExperimentConfig::load(path), ConfigError);
    }
    SUBCASE("time objective requires finite tau") {
        auto s = base_config(graph);
        auto p1 = s.find("\"objectives\": \"IS\"");
        s.replace(p1, 18, "\"objectives\": \"IST\"");
        auto p2 = s.find("\"tau\": 5");
        s.replace(p2, 8, "\"tau\": \"unbounded\"");
        auto path = write_file(dir / "bad5.json", s);
        CHECK_THROWS_AS(ExperimentConfig::load(path), ConfigError);
    }
    SUBCASE("model strings") {
        auto ic = base_config(graph);
        ic.replace(ic.find("\"model\": \"wc\""), 13, "\"model\": \"ic:0.05\"");
        auto cfg = ExperimentConfig::load(write_file(dir / "ic.json", ic));
        CHECK(cfg.model.kind == ModelKind::IC);
        CHECK(cfg.model.ic_probability == doctest::Approx(0.05));

        auto lt = base_config(graph);
        lt.replace(lt.find("\"model\": \"wc\""), 13, "\"model\": \"lt:0.3,0.6\"");
        auto cfg2 = ExperimentConfig::load(write_file(dir / "lt.json", lt));
        CHECK(cfg2.model.kind == ModelKind::LT);
        CHECK(cfg2.model.lt_threshold_low == doctest::Approx(0.3));
        CHECK(cfg2.model.lt_threshold_high == doctest::Approx(0.6));

        auto bad = base_config(graph);
        bad.replace(bad.find("\"model\": \"wc\""), 13, "\"model\": \"sir\"");
        CHECK_THROWS_AS(ExperimentConfig::load(write_file(dir / "badmodel.json", bad)),
                        ConfigError);
    }
    SUBCASE("community source forms") {
        auto src = CommunitySource::parse("detect:42");
        CHECK(src.kind == CommunitySource::Kind::detect);
        CHECK(src.detect_seed == 42);
        auto file = CommunitySource::parse("file:/tmp/c.txt");
        CHECK(file.kind == CommunitySource::Kind::file);
        CHECK(file.path == fs::path("/tmp/c.txt"));
        CHECK_THROWS_AS(CommunitySource::parse("louvain"), ConfigError);
    }
    SUBCASE("fractional k resolves against the node count") {
        ExperimentConfig cfg;
        cfg.k_raw = 0.2;
        CHECK(cfg.resolve_k(34) == 7);
        cfg.k_raw = 10;
        CHECK(cfg.resolve_k(34) == 10);
        cfg.k_raw = 50;
        CHECK_THROWS_AS(cfg.resolve_k(34), ConfigError);
    }
}

TEST_CASE("front CSV round-trip") {
    auto dir = fresh_dir("moeim_front");
    Graph g = karate_club();

    ParetoFront front;
    front.ctx = NormalizationContext{g.node_count(), 4, budget_cap(g, 4), 5,
                                     ObjectiveMask::influence_seed()};
    auto add = [&](std::vector<int> seeds, double infl) {
        ParetoEntry e;
        e.seed_nodes = std::move(seeds);
        e.objectives.influence = infl;
        e.objectives.seed_size = static_cast<int>(e.seed_nodes.size());
        e.objectives.budget = budget(g, e.seed_nodes);
        e.objectives.time = 2.0;
        e.objectives.communities_score = 0.25;
        e.objectives.fairness_score = 0.125;
        e.point = to_maximize_space(e.objectives, front.ctx);
        front.insert(std::move(e));
    };
    add({0}, 10.123456789012345);
    add({0, 33}, 17.5);
    add({0, 2, 33}, 21.25);

    auto path = dir / "front.csv";
    write_front_csv(front, g, 3, path);
    auto back = read_front_csv(path);
    CHECK(back.run_id == 3);
    CHECK(back.front.ctx.node_count == front.ctx.node_count);
    CHECK(back.front.ctx.max_seed_size == 4);
    CHECK(back.front.ctx.tau == 5);
    CHECK(back.front.ctx.active == front.ctx.active);
    REQUIRE(back.front.entries.size() == front.entries.size());
    // Rows are sorted by seed size; doubles survive %.17g exactly.
    CHECK(back.front.entries[0].objectives.influence == 10.123456789012345);
    CHECK(back.front.entries[0].seed_nodes == std::vector<int>{0});  // label of node 0
    CHECK(back.front.entries[1].point == front.entries[1].point);

    SUBCASE("unbounded tau writes NA for the time coordinate") {
        ParetoFront unb = front;
        unb.ctx.tau = kUnboundedTau;
        for (auto& e : unb.entries) e.point = to_maximize_space(e.objectives, unb.ctx);
        auto p2 = dir / "front_unb.csv";
        write_front_csv(unb, g, 0, p2);
        CHECK(slurp(p2).find(",NA") != std::string::npos);
        auto rt = read_front_csv(p2);
        CHECK(rt.front.ctx.tau == kUnboundedTau);
    }
    SUBCASE("junk files are rejected") {
        auto junk = write_file(dir / "junk.csv", "hello,world\n1,2\n");
        CHECK_THROWS_AS(read_front_csv(junk), std::runtime_error);
    }
}

TEST_CASE("cmd_preprocess pipeline") {
    auto dir = fresh_dir("moeim_prep");
    // Karate club plus a detached triangle and a self-loop/duplicate.
    Graph karate = karate_club();
    auto graph_path = dir / "raw.txt";
    {
        std::ofstream out(graph_path);
        for (int u = 0; u < karate.node_count(); ++u)
            for (int v : karate.out_neighbors(u))
                if (u < v) out << karate.label(u) << ' ' << karate.label(v) << '\n';
        out << "100 101\n101 102\n102 100\n";  // separate component
        out << "1 1\n";                        // self-loop
        out << "1 2\n";                        // duplicate
    }

    ExperimentConfig cfg;
    cfg.graph_path = graph_path;
    cfg.directed = false;
    cfg.community_source = CommunitySource::parse("detect:3");
    cfg.output_dir = dir / "out";
    auto report = cmd_preprocess(cfg);

    CHECK(report.self_loops_dropped == 1);
    CHECK(report.duplicate_edges_dropped == 1);
    CHECK(report.lwcc_removed_first == 3);  // the triangle
    CHECK(report.nodes <= 34);
    CHECK(report.communities >= 1);
    CHECK(fs::exists(dir / "out" / "graph.txt"));
    CHECK(fs::exists(dir / "out" / "communities.txt"));
    CHECK(fs::exists(dir / "out" / "report.json"));

    // The preprocessed pair loads back consistently.
    Graph g = load_edge_list(dir / "out" / "graph.txt", false);
    auto a = load_assignment(dir / "out" / "communities.txt", g);
    CHECK(g.node_count() == report.nodes);
    CHECK(a.community_count == report.communities);
    // All remaining communities have at least 10 members or survived the
    // second LWCC pass; either way none may be empty.
    for (int s : a.sizes) CHECK(s > 0);
}

TEST_CASE("cmd_run produces fronts and a consistent summary") {
    auto dir = fresh_dir("moeim_run");
    auto graph = karate_edge_file(dir);
    ExperimentConfig cfg;
    cfg.graph_path = graph;
    cfg.directed = false;
    cfg.community_source = CommunitySource::parse("detect:3");
    cfg.model = PropagationModel::wc();
    cfg.objectives = ObjectiveMask::influence_seed();
    cfg.moea.active = cfg.objectives;
    cfg.k_raw = 4;
    cfg.tau = 5;
    cfg.n_sims = 20;
    cfg.moea.population_size = 10;
    cfg.moea.offspring_size = 10;
    cfg.moea.generations = 3;
    cfg.moea.tournament_size = 3;
    cfg.runs = 2;
    cfg.rng_seed_base = 11;
    cfg.output_dir = dir / "out";

    cmd_run(cfg, 2);
    REQUIRE(fs::exists(dir / "out" / "front_run0.csv"));
    REQUIRE(fs::exists(dir / "out" / "front_run1.csv"));
    REQUIRE(fs::exists(dir / "out" / "summary.json"));

    auto f0 = read_front_csv(dir / "out" / "front_run0.csv");
    auto f1 = read_front_csv(dir / "out" / "front_run1.csv");
    CHECK(f0.run_id == 0);
    CHECK(f1.run_id == 1);
    CHECK_FALSE(f0.front.entries.empty());

    // summary.json carries the per-run hypervolumes consistent with a
    // recomputation from the front files.
    auto summary = nlohmann::json::parse(slurp(dir / "out" / "summary.json"));
    CHECK(summary["algorithm"] == "moeim");
    REQUIRE(summary["hypervolumes"]["IS"]["per_run"].size() == 2);
    double recomputed = subset_hypervolume(f0.front, ObjectiveMask::influence_seed());
    CHECK(summary["hypervolumes"]["IS"]["per_run"][0].get<double>() ==
          doctest::Approx(recomputed).epsilon(1e-12));
    // Time-mask hypervolume present because tau is finite.
    CHECK_FALSE(summary["hypervolumes"]["IST"].is_null());

    SUBCASE("re-running with the same seed is byte-identical") {
        auto first = slurp(dir / "out" / "front_run0.csv");
        cfg.output_dir = dir / "out2";
        cmd_run(cfg, 4);  // different worker count on purpose
        CHECK(slurp(dir / "out2" / "front_run0.csv") == first);
    }
    SUBCASE("analyze consumes the fronts") {
        cmd_analyze({dir / "out" / "front_run0.csv", dir / "out" / "front_run1.csv"},
                    dir / "analysis");
        REQUIRE(fs::exists(dir / "analysis" / "hypervolume_table.csv"));
        auto table = slurp(dir / "analysis" / "hypervolume_table.csv");
        CHECK(table.find("HV_IS") != std::string::npos);
        CHECK(table.find("front_run0.csv") != std::string::npos);
        // IS-only fronts cannot feed the correlation matrix.
        CHECK_FALSE(fs::exists(dir / "analysis" / "correlation.csv"));
    }
}

TEST_CASE("cmd_baseline writes gdd and celf fronts") {
    auto dir = fresh_dir("moeim_base");
    auto graph = karate_edge_file(dir);
    ExperimentConfig cfg;
    cfg.graph_path = graph;
    cfg.directed = false;
    cfg.community_source = CommunitySource::parse("detect:3");
    cfg.model = PropagationModel::wc();
    cfg.objectives = ObjectiveMask::influence_seed();
    cfg.k_raw = 4;
    cfg.tau = 5;
    cfg.n_sims = 20;
    cfg.runs = 1;
    cfg.rng_seed_base = 5;

    cfg.output_dir = dir / "gdd";
    cmd_baseline(cfg, "gdd", 2);
    cfg.output_dir = dir / "celf";
    cmd_baseline(cfg, "celf", 2);
    CHECK_THROWS_AS(cmd_baseline(cfg, "pagerank", 1), ConfigError);

    auto gddf = read_front_csv(dir / "gdd" / "front_run0.csv");
    auto celff = read_front_csv(dir / "celf" / "front_run0.csv");
    CHECK_FALSE(gddf.front.entries.empty());
    CHECK_FALSE(celff.front.entries.empty());
    CHECK(slurp(dir / "gdd" / "summary.json").find("\"gdd\"") != std::string::npos);
    CHECK(slurp(dir / "celf" / "summary.json").find("\"celf\"") != std::string::npos);
}

TEST_CASE("cmd_analyze emits the correlation matrix for full-mask fronts") {
    auto dir = fresh_dir("moeim_corr");
    auto graph = karate_edge_file(dir);
    ExperimentConfig cfg;
    cfg.graph_path = graph;
    cfg.directed = false;
    cfg.community_source = CommunitySource::parse("detect:3");
    cfg.model = PropagationModel::wc();
    cfg.objectives = ObjectiveMask::all();
    cfg.moea.active = cfg.objectives;
    cfg.k_raw = 4;
    cfg.tau = 5;
    cfg.n_sims = 15;
    cfg.moea.population_size = 10;
    cfg.moea.offspring_size = 10;
    cfg.moea.generations = 2;
    cfg.moea.tournament_size = 3;
    cfg.runs = 1;
    cfg.rng_seed_base = 2;
    cfg.output_dir = dir / "out";
    cmd_run(cfg, 2);

    cmd_analyze({dir / "out" / "front_run0.csv"}, dir / "analysis");
    REQUIRE(fs::exists(dir / "analysis" / "correlation.csv"));
    auto corr = slurp(dir / "analysis" / "correlation.csv");
    CHECK(corr.find("objective,I,S,C,F,B,T") != std::string::npos);
}

TEST_CASE("cmd_detect_communities writes the assignment") {
    auto dir = fresh_dir("moeim_detect");
    auto graph = karate_edge_file(dir);
    ExperimentConfig cfg;
    cfg.graph_path = graph;
    cfg.directed = false;
    cfg.community_source = CommunitySource::parse("detect:42");
    cfg.output_dir = dir / "out";
    cmd_detect_communities(cfg);
    Graph g = load_edge_list(graph, false);
    auto a = load_assignment(dir / "out" / "communities.txt", g);
    CHECK(a.community_count >= 2);
}
