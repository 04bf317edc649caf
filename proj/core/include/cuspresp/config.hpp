#pragma once

#include <string>
#include <vector>

namespace cuspresp {

/** Experiment configuration, read from a flat key=value text file with
    '#' comments. serialize/parse round-trips exactly. */
struct ExperimentConfig {
    int k = 4;
    double p = 1.5;
    std::vector<double> eps_list{0.04, 0.02, 0.01, 0.005};
    int mesh_panels = 4096;
    double grading_exponent = 2.0;
    int quad_order = 8;
    int subdivision_depth = 12;
    double tol_density = 1e-9;
    double tol_neumann = 1e-10;
    int max_iter = 500;
    long seed = 987654321;
    std::string output_dir = ".";

    bool operator==(const ExperimentConfig&) const = default;

    /// Throws std::invalid_argument on any violated constraint
    /// (k > 2p, eps sorted descending inside [0, 1/10), positive tolerances).
    void validate() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace cuspresp
