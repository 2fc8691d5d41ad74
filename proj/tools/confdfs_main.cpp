#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "confdfs/errors.hpp"
#include "confdfs/genfun.hpp"
#include "confdfs/graph_dfs.hpp"
#include "confdfs/harness.hpp"
#include "confdfs/io.hpp"
#include "confdfs/ode_fluid.hpp"

namespace {

using namespace confdfs;

struct CommonArgs {
    std::string dist_spec;
    std::string config_path;
    std::string out_dir;
    std::string format = "json";
    int n = 100000;
    int reps = 10;
    std::uint64_t seed = 1;
    double delta = 0.3;
    std::vector<double> alphas;
    int grid = 256;
};

ExperimentConfig build_config(const CommonArgs& a) {
    ExperimentConfig cfg;
    if (!a.config_path.empty()) {
        std::ifstream in(a.config_path);
        if (!in) throw DomainError("cannot open config " + a.config_path);
        Json j;
        in >> j;
        cfg = config_from_json(j);
    }
    if (!a.dist_spec.empty()) cfg.dist = parse_dist_spec(a.dist_spec);
    if (a.n > 0) cfg.n_vertices = a.n;
    if (a.reps > 0) cfg.replicates = a.reps;
    cfg.master_seed = a.seed;
    cfg.delta = a.delta;
    if (!a.alphas.empty()) cfg.snapshot_alphas = a.alphas;
    cfg.grid_size = a.grid;
    if (!a.out_dir.empty()) cfg.out_dir = a.out_dir;
    cfg.format = a.format;
    return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& a, bool with_config = true) {
    cmd->add_option("--dist", a.dist_spec,
                    "distribution spec, e.g. poisson:3 dirac:5 binomial:5,0.6 "
                    "geometric:0.4 power_law:2.5");
    if (with_config) cmd->add_option("--config", a.config_path, "JSON config file");
    cmd->add_option("--N", a.n, "number of vertices");
    cmd->add_option("--reps", a.reps, "replicate count");
    cmd->add_option("--seed", a.seed, "master seed");
    cmd->add_option("--delta", a.delta, "ladder window exponent, in (0, 0.5)");
    cmd->add_option("--alpha", a.alphas, "snapshot explored fractions (repeatable)");
    cmd->add_option("--out", a.out_dir, "output directory");
    cmd->add_option("--grid", a.grid, "profile grid size");
    cmd->add_option("--format", a.format, "report format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

int cmd_simulate(const CommonArgs& a, const std::string& degrees_file) {
    ExperimentConfig cfg = build_config(a);
    if (cfg.out_dir.empty()) throw DomainError("simulate needs --out");
    ensure_directory(cfg.out_dir);

    DegreeSequence seq = degrees_file.empty()
                             ? sample_degree_sequence(cfg.dist, cfg.n_vertices,
                                                      cfg.master_seed)
                             : read_degree_sequence(degrees_file);
    ExploreOptions opt;
    opt.snapshot_alphas = cfg.snapshot_alphas;
    ExploreResult res = explore_and_build(seq, cfg.master_seed, opt);

    write_degree_sequence(cfg.out_dir + "/degrees.txt", seq);
    write_trace_csv(cfg.out_dir + "/trace.csv", res.trace);
    write_edges_csv(cfg.out_dir + "/edges.csv", res.trace);
    write_ladders_csv(cfg.out_dir + "/ladders.csv",
                      ladder_times(res.trace, cfg.delta));
    write_text(cfg.out_dir + "/snapshots.json",
               snapshots_to_json(res.alpha_snapshots).dump(2) + "\n");
    std::printf("simulate: N=%d steps=%zu edges=%zu -> %s\n", seq.size(),
                res.trace.contour.size() - 1, res.trace.edges.size(),
                cfg.out_dir.c_str());
    return 0;
}

int cmd_profile(const CommonArgs& a) {
    ExperimentConfig cfg = build_config(a);
    if (cfg.out_dir.empty()) throw DomainError("profile needs --out");
    ensure_directory(cfg.out_dir);
    ProfileCurve pc = limit_profile(GenFun::of(cfg.dist), cfg.grid_size);
    write_profile_csv(cfg.out_dir + "/profile.csv", pc);
    write_height_csv(cfg.out_dir + "/height.csv", pc);
    write_text(cfg.out_dir + "/summary.json", profile_summary_json(pc).dump(2) + "\n");
    std::printf("profile: rho_pi=%.6f xi_pi=%.6f alpha_c=%.6f h_max=%.6f -> %s\n",
                pc.rho_pi, pc.xi_pi, pc.alpha_c, pc.h_max, cfg.out_dir.c_str());
    return 0;
}

int cmd_ode(const CommonArgs& a, double eps, double dt, const std::string& system,
            double t_end, double identity_t) {
    ExperimentConfig cfg = build_config(a);
    if (cfg.out_dir.empty()) throw DomainError("ode needs --out");
    ensure_directory(cfg.out_dir);

    TruncationSpec trunc = TruncationSpec::from_epsilon(cfg.dist, eps);
    double horizon = t_end > 0.0 ? t_end : 10.0;
    FluidTrajectory traj = system == "s"
                               ? solve_system(cfg.dist, trunc, horizon, dt)
                               : solve_system_prime(cfg.dist, trunc, horizon, dt);
    write_trajectory_csv(cfg.out_dir + "/trajectory.csv", traj);

    double tcheck = identity_t;
    if (tcheck < 0.0) tcheck = 0.6 * t_prime_max(GenFun::of(cfg.dist));
    TruncatedIdentityReport rep = verify_truncated_identity(cfg.dist, trunc, tcheck, dt);
    write_text(cfg.out_dir + "/identity.json", identity_report_json(rep).dump(2) + "\n");
    std::printf("ode(%s): steps=%zu t_end=%.4f cap=%d identity residual=%.3e -> %s\n",
                system.c_str(), traj.t.size() - 1, traj.t_end(), trunc.delta_cap,
                rep.sup_residual, cfg.out_dir.c_str());
    return 0;
}

int cmd_compare(const CommonArgs& a) {
    ExperimentConfig cfg = build_config(a);
    ComparisonReport rep = run_experiment(cfg);
    Json j = report_to_json(rep, cfg);
    if (cfg.out_dir.empty()) std::cout << j.dump(2) << "\n";
    if (cfg.format == "csv") {
        std::printf("criterion,pass\n");
        for (const auto& [name, ok] : rep.criteria)
            std::printf("%s,%d\n", name.c_str(), ok ? 1 : 0);
    }
    if (!rep.supercritical)
        std::fprintf(stderr,
                     "note: subcritical degree law, analytic comparisons skipped\n");
    for (const auto& [name, ok] : rep.criteria)
        std::fprintf(stderr, "%-40s %s\n", name.c_str(), ok ? "pass" : "FAIL");
    return rep.all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"configuration-model DFS simulator and limit-curve toolkit"};
    app.require_subcommand(1);

    CommonArgs sim_args, prof_args, ode_args, cmp_args;
    std::string degrees_file, ode_system = "sprime";
    double ode_eps = 1e-4, ode_dt = 1e-3, ode_t_end = -1.0, identity_t = -1.0;

    CLI::App* sim = app.add_subcommand("simulate", "sample a graph and run its DFS");
    add_common(sim, sim_args);
    sim->add_option("--degrees-file", degrees_file,
                    "newline-delimited degrees (overrides --dist)");

    CLI::App* prof = app.add_subcommand("profile", "analytic contour profile");
    add_common(prof, prof_args);

    CLI::App* ode = app.add_subcommand("ode", "fluid-limit density system");
    add_common(ode, ode_args);
    ode->add_option("--eps", ode_eps, "truncation epsilon");
    ode->add_option("--dt", ode_dt, "RK4 step");
    ode->add_option("--system", ode_system, "s (ladder time) or sprime")
        ->check(CLI::IsMember({"s", "sprime"}));
    ode->add_option("--t-end", ode_t_end, "stop time (default: run to t_max)");
    ode->add_option("--identity-t", identity_t, "time for the truncated identity check");

    CLI::App* cmp = app.add_subcommand("compare",
                                       "replicated simulations vs analytic curves");
    add_common(cmp, cmp_args);

    CLI11_PARSE(app, argc, argv);
    try {
        if (sim->parsed()) return cmd_simulate(sim_args, degrees_file);
        if (prof->parsed()) return cmd_profile(prof_args);
        if (ode->parsed())
            return cmd_ode(ode_args, ode_eps, ode_dt, ode_system, ode_t_end, identity_t);
        if (cmp->parsed()) return cmd_compare(cmp_args);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
