#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "moeim/analysis.hpp"
#include "moeim/baselines.hpp"
#include "moeim/config.hpp"
#include "moeim/moea.hpp"

namespace moeim {

// The six hypervolume evaluation masks reported in every summary.
const std::vector<std::string>& summary_masks();

// Graph + assignment + resolved per-graph parameters for one experiment.
struct LoadedExperiment {
    Graph graph;
    CommunityAssignment assignment;
    int k = 0;
    NormalizationContext ctx;
    MoeaConfig moea;
};

LoadedExperiment prepare_experiment(const ExperimentConfig& cfg);

// Front CSV: ctx header comments, then one row per entry with raw and
// normalized objective values. Seed nodes are original labels joined by ';'.
void write_front_csv(const ParetoFront& front, const Graph& g, int run_id,
                     const std::filesystem::path& path);

struct FrontFile {
    ParetoFront front;  // entries' seed_nodes hold original labels
    int run_id = 0;
};

FrontFile read_front_csv(const std::filesystem::path& path);

struct PreprocessReport {
    int nodes = 0;
    std::size_t edges = 0;
    int communities = 0;
    int community_min = 0, community_max = 0;
    DegreeStats degrees;
    std::size_t self_loops_dropped = 0, duplicate_edges_dropped = 0;
    int lwcc_removed_first = 0, small_community_nodes_removed = 0, lwcc_removed_second = 0;
};

PreprocessReport cmd_preprocess(const ExperimentConfig& cfg);

void cmd_run(const ExperimentConfig& cfg, int workers);

void cmd_baseline(const ExperimentConfig& cfg, const std::string& which, int workers);

void cmd_analyze(const std::vector<std::filesystem::path>& front_files,
                 const std::filesystem::path& output_dir);

void cmd_detect_communities(const ExperimentConfig& cfg);

}  // namespace moeim
