#include "gwasym/run_config.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace gwasym {

void RunConfig::validate() const {
    if (precision_bits < 64) {
        throw std::invalid_argument("precision_bits must be >= 64");
    }
    if (d_exact < 1 || d_float < 1 || d_exact > d_float) {
        throw std::invalid_argument("need 1 <= d_exact <= d_float");
    }
    if (n_terms < 4) {
        throw std::invalid_argument("n_terms must be >= 4");
    }
    if (z_init > -5) {
        throw std::invalid_argument("z_init must be <= -5");
    }
    if (taylor_order < 4) {
        throw std::invalid_argument("taylor_order must be >= 4");
    }
    if (d_list.size() < 3) {
        throw std::invalid_argument("d_list needs at least three truncations");
    }
    for (size_t i = 0; i < d_list.size(); ++i) {
        if (d_list[i] < 1 || d_list[i] > d_float || (i > 0 && d_list[i] <= d_list[i - 1])) {
            throw std::invalid_argument("d_list must be increasing and within d_float");
        }
    }
}

SingularityOptions RunConfig::singularity_options() const {
    SingularityOptions o = SingularityOptions::defaults(precision_bits);
    o.z_init = z_init;
    o.integration = IntegrationOptions::defaults(precision_bits);
    o.integration.taylor_order = taylor_order;
    o.local_order = local_order;
    o.n_terms = n_terms;
    o.d_list = d_list;
    o.cross_tol = Real(x0_cross_tol);
    o.gprime_tol = Real(gprime_tol);
    return o;
}

RunConfig load_run_config(const std::string& config_path) {
    RunConfig c;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            throw std::runtime_error("cannot read config file " + config_path);
        }
        nlohmann::json j = nlohmann::json::parse(in);
        if (j.contains("precision_bits")) c.precision_bits = j["precision_bits"].get<unsigned>();
        if (j.contains("d_exact")) c.d_exact = j["d_exact"].get<int>();
        if (j.contains("d_float")) c.d_float = j["d_float"].get<int>();
        if (j.contains("z_init")) c.z_init = j["z_init"].get<double>();
        if (j.contains("taylor_order")) c.taylor_order = j["taylor_order"].get<int>();
        if (j.contains("n_terms")) c.n_terms = j["n_terms"].get<int>();
        if (j.contains("local_order")) c.local_order = j["local_order"].get<int>();
        if (j.contains("d_list")) c.d_list = j["d_list"].get<std::vector<int>>();
        if (j.contains("cache_dir")) c.cache_dir = j["cache_dir"].get<std::string>();
        if (j.contains("x0_cross_tol")) c.x0_cross_tol = j["x0_cross_tol"].get<double>();
        if (j.contains("gprime_tol")) c.gprime_tol = j["gprime_tol"].get<double>();
        if (j.contains("x0_margin")) c.x0_margin = j["x0_margin"].get<double>();
    }
    if (const char* env = std::getenv("GWASYM_PRECISION_BITS")) {
        c.precision_bits = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    }
    if (const char* env = std::getenv("GWASYM_CACHE_DIR")) {
        c.cache_dir = env;
    }
    return c;
}

std::string run_config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["precision_bits"] = c.precision_bits;
    j["d_exact"] = c.d_exact;
    j["d_float"] = c.d_float;
    j["z_init"] = c.z_init;
    j["taylor_order"] = c.taylor_order;
    j["n_terms"] = c.n_terms;
    j["local_order"] = c.local_order;
    j["d_list"] = c.d_list;
    j["cache_dir"] = c.cache_dir;
    j["x0_cross_tol"] = c.x0_cross_tol;
    j["gprime_tol"] = c.gprime_tol;
    j["x0_margin"] = c.x0_margin;
    return j.dump(2);
}

} // namespace gwasym
