#include "moeim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

namespace moeim {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const char* where) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            throw ConfigError(std::string("config: unknown key '") + key + "' in " + where);
}

PropagationModel parse_model(const std::string& text) {
    if (text == "wc") return PropagationModel::wc();
    if (text.rfind("ic:", 0) == 0) return PropagationModel::ic(std::stod(text.substr(3)));
    if (text.rfind("lt:", 0) == 0) {
        auto rest = text.substr(3);
        auto comma = rest.find(',');
        if (comma == std::string::npos)
            throw ConfigError("config: lt model needs 'lt:low,high'");
        return PropagationModel::lt(std::stod(rest.substr(0, comma)),
                                    std::stod(rest.substr(comma + 1)));
    }
    throw ConfigError("config: unknown model '" + text + "' (wc | ic:p | lt:low,high)");
}

}  // namespace

CommunitySource CommunitySource::parse(const std::string& text) {
    CommunitySource src;
    if (text.rfind("detect:", 0) == 0) {
        src.kind = Kind::detect;
        src.detect_seed = std::stoull(text.substr(7));
        return src;
    }
    if (text.rfind("file:", 0) == 0) {
        src.kind = Kind::file;
        src.path = text.substr(5);
        return src;
    }
    throw ConfigError("config: community_source must be 'detect:<seed>' or 'file:<path>'");
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    try {
        check_keys(j, {"schema_version", "graph_path", "directed", "community_source",
                       "model", "objectives", "k", "tau", "n_sims", "moea", "runs",
                       "rng_seed_base", "output_dir"},
                   "top level");
        if (!j.contains("schema_version") || j["schema_version"].get<int>() != 1)
            throw ConfigError("config: schema_version must be 1");

        ExperimentConfig cfg;
        cfg.graph_path = j.at("graph_path").get<std::string>();
        cfg.directed = j.at("directed").get<bool>();
        cfg.community_source = CommunitySource::parse(j.at("community_source").get<std::string>());
        cfg.model = parse_model(j.at("model").get<std::string>());
        cfg.objectives = ObjectiveMask::parse(j.at("objectives").get<std::string>());
        cfg.k_raw = j.at("k").get<double>();
        if (cfg.k_raw <= 0.0) throw ConfigError("config: k must be positive");
        if (j.contains("tau")) {
            if (j["tau"].is_string()) {
                if (j["tau"].get<std::string>() != "unbounded")
                    throw ConfigError("config: tau must be an integer or \"unbounded\"");
                cfg.tau = kUnboundedTau;
            } else {
                cfg.tau = j["tau"].get<int>();
                if (cfg.tau < 0) throw ConfigError("config: tau must be >= 0");
            }
        }
        cfg.n_sims = j.value("n_sims", 100);
        if (cfg.n_sims < 1) throw ConfigError("config: n_sims must be >= 1");
        cfg.runs = j.value("runs", 1);
        if (cfg.runs < 1) throw ConfigError("config: runs must be >= 1");
        cfg.rng_seed_base = j.value("rng_seed_base", std::uint64_t{0});
        cfg.output_dir = j.value("output_dir", std::string("out"));
        if (cfg.objectives.has(Objective::time) && cfg.tau == kUnboundedTau)
            throw ConfigError("config: time objective requires a finite tau");

        if (j.contains("moea")) {
            const json& m = j["moea"];
            check_keys(m, {"population_size", "offspring_size", "elites", "tournament_size",
                           "generations", "lambda", "theta", "crossover_rate",
                           "mutation_rate"},
                       "moea");
            cfg.moea.population_size = m.value("population_size", 100);
            cfg.moea.offspring_size = m.value("offspring_size", 100);
            cfg.moea.elites = m.value("elites", 2);
            cfg.moea.tournament_size = m.value("tournament_size", 5);
            cfg.moea.generations = m.value("generations", 100);
            cfg.moea.lambda = m.value("lambda", 0.33);
            cfg.moea.crossover_rate = m.value("crossover_rate", 1.0);
            cfg.moea.mutation_rate = m.value("mutation_rate", 1.0);
            if (m.contains("theta")) {
                if (m["theta"].is_string()) {
                    if (m["theta"].get<std::string>() != "auto")
                        throw ConfigError("config: moea.theta must be a number or \"auto\"");
                } else {
                    cfg.moea.theta = m["theta"].get<double>();
                    cfg.moea_theta_auto = false;
                }
            }
        }
        cfg.moea.active = cfg.objectives;
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

int ExperimentConfig::resolve_k(int node_count) const {
    double k = k_raw < 1.0 ? std::round(k_raw * node_count) : k_raw;
    int ki = std::max(1, static_cast<int>(k));
    if (ki > node_count) throw ConfigError("config: k exceeds node count");
    return ki;
}

}  // namespace moeim
