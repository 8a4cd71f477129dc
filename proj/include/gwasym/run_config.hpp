#ifndef GWASYM_RUN_CONFIG_HPP
#define GWASYM_RUN_CONFIG_HPP

#include "gwasym/singularity.hpp"

#include <string>
#include <vector>

namespace gwasym {

// Batch-run parameters. Layering on load: built-in defaults, then the
// optional JSON config file, then environment overrides (GWASYM_PRECISION_BITS,
// GWASYM_CACHE_DIR); command-line flags win over all of these.
struct RunConfig {
    unsigned precision_bits = 256;
    int d_exact = 200;
    int d_float = 5000;
    double z_init = -30.0;
    int taylor_order = 30;
    int n_terms = 8;       // expansion terms per genus
    int local_order = 24;  // local expansion order at the event
    std::vector<int> d_list = {625, 1250, 2500, 5000};
    std::string cache_dir = "cache";
    double x0_cross_tol = 1e-8;
    double gprime_tol = 1e-10;
    double x0_margin = 0.05;

    void validate() const;  // throws std::invalid_argument on bad settings

    SingularityOptions singularity_options() const;
};

/// Defaults + optional config file + environment.
RunConfig load_run_config(const std::string& config_path);

std::string run_config_to_json(const RunConfig& c);

} // namespace gwasym

#endif
