#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "nsk/types.hpp"

namespace nsk {

/// Flat key = value run configuration shared by all subcommands.
/// Unknown keys and duplicate keys are rejected at parse time; constitutive
/// constraints are re-validated here so bad runs fail before any work.
struct RunConfig {
    // fluid / shock
    double gamma = 0.0;  // required where used
    double alpha = 0.0;
    double c = 0.09;
    double eps = 0.0;  // required where used
    double v_minus = 1.0;
    double u_minus = 0.0;
    int family = 2;

    // contraction
    double lambda = 0.0;  // 0 means "default sqrt(eps), clamped"
    double delta0 = 0.4;
    double delta3 = 0.1;

    // discretization / time stepping
    double L = 0.0;  // 0 means "default 12/eps"
    int n = 2001;
    double t_end = 10.0;
    double cfl = 0.2;
    double v_floor = 1e-6;
    double out_stride = 0.1;
    double nu = 1.0;

    // perturbation
    std::string pert_kind = "none";  // none | gaussian
    double pert_amp_v = 0.0;
    double pert_amp_h = 0.0;
    double pert_width = 1.0;
    double pert_center = 0.0;

    // npi campaign
    double npi_c1 = 1.0;
    std::string npi_deltas = "0.01,0.001";
    int npi_samples = 1000;
    int npi_nodes = 1024;

    // limit experiment
    std::string nu_ladder = "0.4,0.2,0.1,0.05";
    double window = 2.0;
    double horizon = 1.0;
    int macro_n = 2001;
    std::string wp_kind = "profile";  // profile | mollified
    double omega = 0.1;

    // sweep
    std::string sweep_target;
    std::string sweep_key;
    std::string sweep_values;

    std::uint64_t seed = 0;
    int threads = 1;

    std::set<std::string> provided;  // keys explicitly present in the file
    std::vector<std::string> warnings;
    std::string raw_text;  // original file content, kept for sweeps

    bool has(const std::string& key) const { return provided.count(key) > 0; }

    /// Fills eps-dependent defaults; call once eps is known to be required.
    void resolve_defaults();

    /// Throws ConfigError naming the missing key.
    void require(const std::string& key) const;
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

std::vector<double> parse_double_list(const std::string& csv);

}  // namespace nsk
