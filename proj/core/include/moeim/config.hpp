#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "moeim/moea.hpp"
#include "moeim/propagation.hpp"

namespace moeim {

// Configuration errors map to exit code 1; runtime failures to 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommunitySource {
    enum class Kind { detect, file } kind = Kind::detect;
    std::uint64_t detect_seed = 0;
    std::filesystem::path path;

    // "detect:<seed>" or "file:<path>".
    static CommunitySource parse(const std::string& text);
};

struct ExperimentConfig {
    std::filesystem::path graph_path;
    bool directed = false;
    CommunitySource community_source;
    PropagationModel model;
    ObjectiveMask objectives = ObjectiveMask::influence_seed();
    double k_raw = 0.0;  // >= 1: absolute; in (0,1): fraction of node_count
    int tau = kUnboundedTau;
    int n_sims = 100;
    MoeaConfig moea;
    bool moea_theta_auto = true;  // theta = average out-degree when true
    int runs = 1;
    std::uint64_t rng_seed_base = 0;
    std::filesystem::path output_dir;

    // Strict parse: unknown keys are errors.
    static ExperimentConfig load(const std::filesystem::path& path);

    int resolve_k(int node_count) const;
};

}  // namespace moeim
