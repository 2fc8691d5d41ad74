#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "confdfs/degree_model.hpp"
#include "confdfs/io.hpp"

namespace confdfs {

/// Pass/fail thresholds. The limit theorems carry no convergence rates, so
/// these are calibrated engineering defaults; every one can be overridden
/// from the config file.
struct Tolerances {
    double contour_sup = 0.03;     ///< median sup |X/N - h|
    double giant_fraction = 0.01;  ///< median |giant/N - xi|
    double tv = 0.02;              ///< remaining-degree TV per snapshot
    double path_fraction = 0.9;    ///< (peak-1)/N >= fraction * h_max
    double ladder_sup = 0.05;      ///< sup |T_k/N - z(k/N)|
    double density_sup = 0.03;     ///< sup |N_i(k)/N - z_i(k/N)|, i <= cap
    double alpha_margin = 0.02;    ///< snapshots rejected above alpha_c - margin
};

struct ExperimentConfig {
    DegreeDistribution dist = DegreeDistribution::poisson(3.0);
    int n_vertices = 100000;
    int replicates = 10;
    std::uint64_t master_seed = 1;
    double delta = 0.3;
    std::vector<double> snapshot_alphas;
    int grid_size = 256;
    double gamma = 2.5;       ///< max-degree validator exponent
    double ode_epsilon = 1e-4;
    double ode_dt = 1e-3;
    int max_density_degree = 6;
    double ladder_fraction = 0.8;  ///< compare ladder indices k <= fraction*K
    bool ladder_check = true;      ///< fluid-limit comparisons (second pass)
    Tolerances tol;
    std::string out_dir;
    std::string format = "json";
};

ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& cfg);

struct ReplicateReport {
    std::uint64_t seed = 0;
    bool parity_fixed = false;
    bool assumptions_pass = false;
    double contour_sup = std::nan("");
    double giant_fraction = std::nan("");
    double giant_abs_err = std::nan("");
    double second_excursion_fraction = std::nan("");
    std::vector<double> tv;  ///< per snapshot alpha; nan where excluded
    double path_bound_fraction = std::nan("");  ///< (peak - 1)/N
    double path_ratio = std::nan("");           ///< vs h_max
    double ladder_sup = std::nan("");
    double density_sup = std::nan("");
};

struct ComparisonReport {
    bool analytic_available = false;
    bool supercritical = false;
    double rho_pi = std::nan(""), xi_pi = std::nan(""), alpha_c = std::nan(""),
           h_max = std::nan("");
    std::vector<double> alphas;
    std::vector<ReplicateReport> replicates;
    double median_contour_sup = std::nan("");
    double median_giant_abs_err = std::nan("");
    std::vector<double> median_tv;
    double median_path_ratio = std::nan("");
    double median_ladder_sup = std::nan("");
    double median_density_sup = std::nan("");
    /// name -> pass; insertion-ordered for stable serialization
    std::vector<std::pair<std::string, bool>> criteria;
    bool all_pass = false;
};

/// Runs `replicates` independent simulations (parallel worker pool,
/// deterministic per-slot seeds), compares each against the cached analytic
/// curves, and aggregates medians and per-criterion verdicts. Writes report
/// and artifacts under cfg.out_dir when set.
ComparisonReport run_experiment(const ExperimentConfig& cfg);

/// Median TV distance between the sleeping-degree histogram at tau(alpha)
/// and the analytic remaining law. Errors when alpha is above
/// alpha_c - alpha_margin.
double degree_snapshot_check(const ExperimentConfig& cfg, double alpha);

Json report_to_json(const ComparisonReport& rep, const ExperimentConfig& cfg);

double median(std::vector<double> values);

}  // namespace confdfs
