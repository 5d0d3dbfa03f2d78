#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "moeim/experiment.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string output_dir;
    int workers = 1;
    long long seed = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
    auto* c = cmd->add_option("--config", opts.config_path, "experiment config JSON");
    if (config_required) c->required();
    cmd->add_option("--output", opts.output_dir, "override output directory");
    cmd->add_option("--workers", opts.workers, "worker thread budget")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opts.seed, "override rng_seed_base");
}

moeim::ExperimentConfig load_config(const CommonOpts& opts) {
    auto cfg = moeim::ExperimentConfig::load(opts.config_path);
    if (!opts.output_dir.empty()) cfg.output_dir = opts.output_dir;
    if (opts.seed >= 0) cfg.rng_seed_base = static_cast<std::uint64_t>(opts.seed);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"many-objective evolutionary influence maximization"};
    app.require_subcommand(1);

    CommonOpts preprocess_opts, run_opts, baseline_opts, detect_opts, analyze_opts;
    std::string baseline_which;
    std::vector<std::string> analyze_fronts;

    auto* preprocess = app.add_subcommand(
        "preprocess", "extract the LWCC and drop communities below 10 nodes");
    add_common(preprocess, preprocess_opts);

    auto* run = app.add_subcommand("run", "independent NSGA-II runs plus summary");
    add_common(run, run_opts);

    auto* baseline = app.add_subcommand("baseline", "greedy baseline with prefix sweep");
    add_common(baseline, baseline_opts);
    baseline->add_option("which", baseline_which, "gdd or celf")
        ->required()
        ->check(CLI::IsMember({"gdd", "celf"}));

    auto* analyze = app.add_subcommand(
        "analyze", "correlation matrix and hypervolume table from front CSVs");
    analyze->add_option("fronts", analyze_fronts, "front CSV files")->required();
    analyze->add_option("--output", analyze_opts.output_dir, "output directory")->required();

    auto* detect = app.add_subcommand("detect-communities",
                                      "modularity-based community detection");
    add_common(detect, detect_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (preprocess->parsed()) {
            auto r = moeim::cmd_preprocess(load_config(preprocess_opts));
            std::printf("nodes=%d edges=%zu communities=%d avg_out_degree=%.2f\n", r.nodes,
                        r.edges, r.communities, r.degrees.avg_out);
        } else if (run->parsed()) {
            moeim::cmd_run(load_config(run_opts), run_opts.workers);
        } else if (baseline->parsed()) {
            moeim::cmd_baseline(load_config(baseline_opts), baseline_which,
                                baseline_opts.workers);
        } else if (analyze->parsed()) {
            std::vector<std::filesystem::path> files(analyze_fronts.begin(),
                                                     analyze_fronts.end());
            moeim::cmd_analyze(files, analyze_opts.output_dir);
        } else if (detect->parsed()) {
            moeim::cmd_detect_communities(load_config(detect_opts));
        }
    } catch (const moeim::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
