#include "confdfs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <thread>

#include "confdfs/errors.hpp"
#include "confdfs/genfun.hpp"
#include "confdfs/graph_dfs.hpp"
#include "confdfs/ode_fluid.hpp"
#include "confdfs/rng.hpp"

namespace confdfs {

double median(std::vector<double> values) {
    values.erase(std::remove_if(values.begin(), values.end(),
                                [](double v) { return std::isnan(v); }),
                 values.end());
    if (values.empty()) return std::nan("");
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

/// Analytic curves computed once and shared read-only across replicates.
struct Analytics {
    bool supercritical = false;
    bool available = false;
    std::optional<GenFun> gf;
    std::optional<ProfileCurve> profile;
    std::vector<Eigen::ArrayXd> pi_alpha;  // per requested alpha
    std::vector<bool> alpha_ok;            // below alpha_c - margin
    std::optional<FluidTrajectory> ode;
};

Analytics precompute(const ExperimentConfig& cfg) {
    Analytics an;
    GenFun gf = GenFun::of(cfg.dist);
    an.supercritical = gf.supercritical();
    if (!an.supercritical) return an;
    an.gf = gf;
    an.profile = limit_profile(gf, cfg.grid_size);
    int coeff_max = cfg.dist.max_degree();
    for (double a : cfg.snapshot_alphas) {
        bool ok = a <= an.profile->alpha_c - cfg.tol.alpha_margin + 1e-12;
        an.alpha_ok.push_back(ok);
        an.pi_alpha.push_back(ok ? pi_alpha_coefficients(gf, a, coeff_max)
                                 : Eigen::ArrayXd());
    }
    if (cfg.ladder_check) {
        TruncationSpec trunc = TruncationSpec::from_epsilon(cfg.dist, cfg.ode_epsilon);
        an.ode = solve_system(cfg.dist, trunc, 10.0, cfg.ode_dt);
    }
    an.available = true;
    return an;
}

double tv_against(const std::vector<std::int64_t>& counts, std::int64_t total,
                  const Eigen::ArrayXd& reference) {
    long n = std::max(long(counts.size()), reference.size());
    double s = 0.0;
    for (long k = 0; k < n; ++k) {
        double emp = (k < long(counts.size()) && total > 0)
                         ? double(counts[std::size_t(k)]) / double(total)
                         : 0.0;
        double ref = k < reference.size() ? reference[k] : 0.0;
        s += std::abs(emp - ref);
    }
    return 0.5 * s;
}

ReplicateReport run_replicate(const ExperimentConfig& cfg, const Analytics& an,
                              int index) {
    ReplicateReport rr;
    rr.seed = derive_seed(cfg.master_seed, std::uint64_t(index));
    const int n = cfg.n_vertices;

    DegreeSequence seq = sample_degree_sequence(cfg.dist, n, rr.seed);
    rr.parity_fixed = seq.parity_fixed;
    rr.assumptions_pass = validate_assumptions(seq, cfg.gamma).pass;

    ExploreOptions opt;
    opt.snapshot_alphas = cfg.snapshot_alphas;
    ExploreResult res = explore_and_build(seq, rr.seed, opt);
    const ContourTrace& tr = res.trace;

    // component sizes from excursions
    std::vector<std::int64_t> comps = excursion_vertex_counts(tr);
    std::sort(comps.begin(), comps.end(), std::greater<>());
    rr.giant_fraction = comps.empty() ? 0.0 : double(comps[0]) / double(n);
    rr.second_excursion_fraction =
        comps.size() > 1 ? double(comps[1]) / double(n) : 0.0;

    rr.path_bound_fraction = double(longest_path_lower_bound(tr)) / double(n);

    if (an.available) {
        const ProfileCurve& pc = *an.profile;
        double sup = 0.0;
        for (std::size_t m = 0; m < tr.contour.size(); ++m) {
            double t = double(m) / double(n);
            sup = std::max(sup, std::abs(double(tr.contour[m]) / double(n) -
                                         pc.height(t)));
        }
        rr.contour_sup = sup;
        rr.giant_abs_err = std::abs(rr.giant_fraction - pc.xi_pi);
        rr.path_ratio = rr.path_bound_fraction / pc.h_max;

        rr.tv.assign(cfg.snapshot_alphas.size(), std::nan(""));
        for (std::size_t a = 0; a < cfg.snapshot_alphas.size(); ++a) {
            if (!an.alpha_ok[a]) continue;
            const InducedHistogram& snap = res.alpha_snapshots[a];
            rr.tv[a] = tv_against(snap.counts, snap.sleeping, an.pi_alpha[a]);
        }

        if (cfg.ladder_check && an.ode.has_value()) {
            std::vector<std::int64_t> T = ladder_times(tr, cfg.delta);
            std::int64_t K = std::int64_t(T.size()) - 1;
            std::int64_t kmax = std::int64_t(cfg.ladder_fraction * double(K));
            if (kmax >= 1) {
                const FluidTrajectory& ode = *an.ode;
                double sup_t = 0.0;
                for (std::int64_t k = 0; k <= kmax; ++k) {
                    double zk = ode.clock_at(double(k) / double(n));
                    sup_t = std::max(sup_t,
                                     std::abs(double(T[std::size_t(k)]) / double(n) - zk));
                }
                rr.ladder_sup = sup_t;

                // second pass captures the remaining-degree histograms at
                // the states just before each ladder step
                ExploreOptions opt2;
                opt2.snapshot_steps.reserve(std::size_t(kmax) + 1);
                for (std::int64_t k = 0; k <= kmax; ++k)
                    opt2.snapshot_steps.push_back(std::max<std::int64_t>(T[std::size_t(k)] - 1, 0));
                ExploreResult res2 = explore_and_build(seq, rr.seed, opt2);
                int icap = std::min(cfg.max_density_degree,
                                    int(an.ode->z.front().size()) - 1);
                double sup_d = 0.0;
                for (std::int64_t k = 0; k <= kmax; ++k) {
                    const auto& counts = res2.step_snapshots[std::size_t(k)].counts;
                    for (int i = 0; i <= icap; ++i) {
                        double emp = i < int(counts.size())
                                         ? double(counts[std::size_t(i)]) / double(n)
                                         : 0.0;
                        sup_d = std::max(sup_d,
                                         std::abs(emp - ode.density_at(double(k) / double(n), i)));
                    }
                }
                rr.density_sup = sup_d;
            }
        }
    }
    return rr;
}

int count_below(const std::vector<double>& v, double bound) {
    int c = 0;
    for (double x : v)
        if (!std::isnan(x) && x < bound) ++c;
    return c;
}

int count_at_least(const std::vector<double>& v, double bound) {
    int c = 0;
    for (double x : v)
        if (!std::isnan(x) && x >= bound) ++c;
    return c;
}

}  // namespace

ComparisonReport run_experiment(const ExperimentConfig& config) {
    ExperimentConfig cfg = config;  // snapshot order must match request order
    std::sort(cfg.snapshot_alphas.begin(), cfg.snapshot_alphas.end());
    if (cfg.n_vertices < 100) throw DomainError("n_vertices must be >= 100");
    if (cfg.replicates < 1) throw DomainError("need at least one replicate");
    if (cfg.delta <= 0.0 || cfg.delta >= 0.5) throw DomainError("delta outside (0, 0.5)");

    Analytics an = precompute(cfg);

    ComparisonReport rep;
    rep.supercritical = an.supercritical;
    rep.analytic_available = an.available;
    rep.alphas = cfg.snapshot_alphas;
    if (an.available) {
        rep.rho_pi = an.profile->rho_pi;
        rep.xi_pi = an.profile->xi_pi;
        rep.alpha_c = an.profile->alpha_c;
        rep.h_max = an.profile->h_max;
    }

    rep.replicates.resize(std::size_t(cfg.replicates));
    std::vector<std::string> errors(std::size_t(cfg.replicates));
    std::atomic<int> next{0};
    unsigned hw = std::thread::hardware_concurrency();
    int workers = std::min<int>(cfg.replicates, int(hw ? hw : 1));
    auto work = [&]() {
        for (;;) {
            int r = next.fetch_add(1);
            if (r >= cfg.replicates) break;
            try {
                rep.replicates[std::size_t(r)] = run_replicate(cfg, an, r);
            } catch (const std::exception& e) {
                errors[std::size_t(r)] = e.what();
            }
        }
    };
    std::vector<std::thread> threads;
    for (int w = 1; w < workers; ++w) threads.emplace_back(work);
    work();
    for (auto& th : threads) th.join();
    for (const std::string& e : errors)
        if (!e.empty()) throw std::runtime_error("replicate failed: " + e);

    auto collect = [&](auto getter) {
        std::vector<double> v;
        for (const auto& r : rep.replicates) v.push_back(getter(r));
        return v;
    };
    rep.median_contour_sup = median(collect([](const ReplicateReport& r) { return r.contour_sup; }));
    rep.median_giant_abs_err = median(collect([](const ReplicateReport& r) { return r.giant_abs_err; }));
    rep.median_path_ratio = median(collect([](const ReplicateReport& r) { return r.path_ratio; }));
    rep.median_ladder_sup = median(collect([](const ReplicateReport& r) { return r.ladder_sup; }));
    rep.median_density_sup = median(collect([](const ReplicateReport& r) { return r.density_sup; }));
    for (std::size_t a = 0; a < cfg.snapshot_alphas.size(); ++a) {
        std::vector<double> v;
        for (const auto& r : rep.replicates)
            v.push_back(a < r.tv.size() ? r.tv[a] : std::nan(""));
        rep.median_tv.push_back(median(v));
    }

    if (an.available) {
        const int reps = cfg.replicates;
        const int most = reps / 2 + 1;                       // strict majority
        const int bulk = (reps * 8 + 9) / 10;                // >= 80%
        rep.criteria.emplace_back("contour_profile",
                                  rep.median_contour_sup < cfg.tol.contour_sup);
        rep.criteria.emplace_back("giant_component",
                                  rep.median_giant_abs_err < cfg.tol.giant_fraction);
        for (std::size_t a = 0; a < cfg.snapshot_alphas.size(); ++a) {
            if (!an.alpha_ok[a]) continue;
            std::vector<double> v;
            for (const auto& r : rep.replicates)
                v.push_back(a < r.tv.size() ? r.tv[a] : std::nan(""));
            rep.criteria.emplace_back(
                "degree_snapshot_alpha_" + std::to_string(cfg.snapshot_alphas[a]),
                count_below(v, cfg.tol.tv) >= bulk);
        }
        rep.criteria.emplace_back(
            "longest_path",
            count_at_least(collect([](const ReplicateReport& r) { return r.path_ratio; }),
                           cfg.tol.path_fraction) >= bulk);
        if (cfg.ladder_check) {
            rep.criteria.emplace_back(
                "ladder_times",
                count_below(collect([](const ReplicateReport& r) { return r.ladder_sup; }),
                            cfg.tol.ladder_sup) >= most);
            rep.criteria.emplace_back(
                "degree_densities",
                count_below(collect([](const ReplicateReport& r) { return r.density_sup; }),
                            cfg.tol.density_sup) >= most);
        }
    }
    rep.all_pass = true;
    for (const auto& [name, ok] : rep.criteria) rep.all_pass = rep.all_pass && ok;

    if (!cfg.out_dir.empty()) {
        ensure_directory(cfg.out_dir);
        write_text(cfg.out_dir + "/report.json", report_to_json(rep, cfg).dump(2) + "\n");
        if (an.available) {
            write_profile_csv(cfg.out_dir + "/profile.csv", *an.profile);
            write_height_csv(cfg.out_dir + "/height.csv", *an.profile);
            write_text(cfg.out_dir + "/summary.json",
                       profile_summary_json(*an.profile).dump(2) + "\n");
        }
    }
    return rep;
}

double degree_snapshot_check(const ExperimentConfig& cfg, double alpha) {
    GenFun gf = GenFun::of(cfg.dist);
    double ac = alpha_critical(gf);
    if (alpha > ac - cfg.tol.alpha_margin)
        throw DomainError("snapshot alpha too close to alpha_c");
    Eigen::ArrayXd ref = pi_alpha_coefficients(gf, alpha, cfg.dist.max_degree());
    std::vector<double> tvs;
    for (int r = 0; r < cfg.replicates; ++r) {
        std::uint64_t seed = derive_seed(cfg.master_seed, std::uint64_t(r));
        DegreeSequence seq = sample_degree_sequence(cfg.dist, cfg.n_vertices, seed);
        ExploreOptions opt;
        opt.snapshot_alphas = {alpha};
        ExploreResult res = explore_and_build(seq, seed, opt);
        const InducedHistogram& snap = res.alpha_snapshots.front();
        tvs.push_back(tv_against(snap.counts, snap.sleeping, ref));
    }
    return median(tvs);
}

ExperimentConfig config_from_json(const Json& j) {
    ExperimentConfig cfg;
    if (j.contains("dist")) {
        if (j["dist"].is_string())
            cfg.dist = parse_dist_spec(j["dist"].get<std::string>());
        else
            cfg.dist = dist_from_json(j["dist"]);
    }
    cfg.n_vertices = j.value("n", cfg.n_vertices);
    cfg.replicates = j.value("replicates", cfg.replicates);
    cfg.master_seed = j.value("seed", cfg.master_seed);
    cfg.delta = j.value("delta", cfg.delta);
    cfg.snapshot_alphas = j.value("alphas", cfg.snapshot_alphas);
    cfg.grid_size = j.value("grid", cfg.grid_size);
    cfg.gamma = j.value("gamma", cfg.gamma);
    cfg.ode_epsilon = j.value("ode_epsilon", cfg.ode_epsilon);
    cfg.ode_dt = j.value("ode_dt", cfg.ode_dt);
    cfg.max_density_degree = j.value("max_density_degree", cfg.max_density_degree);
    cfg.ladder_fraction = j.value("ladder_fraction", cfg.ladder_fraction);
    cfg.ladder_check = j.value("ladder_check", cfg.ladder_check);
    cfg.out_dir = j.value("out", cfg.out_dir);
    cfg.format = j.value("format", cfg.format);
    if (j.contains("tolerances")) {
        const Json& t = j["tolerances"];
        cfg.tol.contour_sup = t.value("contour_sup", cfg.tol.contour_sup);
        cfg.tol.giant_fraction = t.value("giant_fraction", cfg.tol.giant_fraction);
        cfg.tol.tv = t.value("tv", cfg.tol.tv);
        cfg.tol.path_fraction = t.value("path_fraction", cfg.tol.path_fraction);
        cfg.tol.ladder_sup = t.value("ladder_sup", cfg.tol.ladder_sup);
        cfg.tol.density_sup = t.value("density_sup", cfg.tol.density_sup);
        cfg.tol.alpha_margin = t.value("alpha_margin", cfg.tol.alpha_margin);
    }
    return cfg;
}

Json config_to_json(const ExperimentConfig& cfg) {
    Json t{{"contour_sup", cfg.tol.contour_sup},
           {"giant_fraction", cfg.tol.giant_fraction},
           {"tv", cfg.tol.tv},
           {"path_fraction", cfg.tol.path_fraction},
           {"ladder_sup", cfg.tol.ladder_sup},
           {"density_sup", cfg.tol.density_sup},
           {"alpha_margin", cfg.tol.alpha_margin}};
    return Json{{"dist", dist_to_json(cfg.dist)},
                {"n", cfg.n_vertices},
                {"replicates", cfg.replicates},
                {"seed", cfg.master_seed},
                {"delta", cfg.delta},
                {"alphas", cfg.snapshot_alphas},
                {"grid", cfg.grid_size},
                {"gamma", cfg.gamma},
                {"ode_epsilon", cfg.ode_epsilon},
                {"ode_dt", cfg.ode_dt},
                {"max_density_degree", cfg.max_density_degree},
                {"ladder_fraction", cfg.ladder_fraction},
                {"ladder_check", cfg.ladder_check},
                {"format", cfg.format},
                {"tolerances", t}};
}

namespace {

Json nan_safe(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

}  // namespace

Json report_to_json(const ComparisonReport& rep, const ExperimentConfig& cfg) {
    Json j;
    j["config"] = config_to_json(cfg);
    j["supercritical"] = rep.supercritical;
    j["analytic_available"] = rep.analytic_available;
    if (rep.analytic_available) {
        j["analytic"] = {{"rho_pi", rep.rho_pi},
                         {"xi_pi", rep.xi_pi},
                         {"alpha_c", rep.alpha_c},
                         {"h_max", rep.h_max}};
        double margin = GenFun::of(cfg.dist).size_biased_mean() - 1.0;
        j["slow_convergence_warning"] = margin < 0.15;
    }
    Json reps = Json::array();
    for (const auto& r : rep.replicates) {
        Json jr{{"seed", r.seed},
                {"parity_fixed", r.parity_fixed},
                {"assumptions_pass", r.assumptions_pass},
                {"contour_sup", nan_safe(r.contour_sup)},
                {"giant_fraction", nan_safe(r.giant_fraction)},
                {"giant_abs_err", nan_safe(r.giant_abs_err)},
                {"second_excursion_fraction", nan_safe(r.second_excursion_fraction)},
                {"path_bound_fraction", nan_safe(r.path_bound_fraction)},
                {"path_ratio", nan_safe(r.path_ratio)},
                {"ladder_sup", nan_safe(r.ladder_sup)},
                {"density_sup", nan_safe(r.density_sup)}};
        Json tv = Json::array();
        for (double v : r.tv) tv.push_back(nan_safe(v));
        jr["tv"] = tv;
        reps.push_back(jr);
    }
    j["replicates"] = reps;
    j["medians"] = {{"contour_sup", nan_safe(rep.median_contour_sup)},
                    {"giant_abs_err", nan_safe(rep.median_giant_abs_err)},
                    {"path_ratio", nan_safe(rep.median_path_ratio)},
                    {"ladder_sup", nan_safe(rep.median_ladder_sup)},
                    {"density_sup", nan_safe(rep.median_density_sup)}};
    Json mtv = Json::array();
    for (double v : rep.median_tv) mtv.push_back(nan_safe(v));
    j["medians"]["tv"] = mtv;
    Json crit = Json::object();
    for (const auto& [name, ok] : rep.criteria) crit[name] = ok;
    j["criteria"] = crit;
    j["all_pass"] = rep.all_pass;
    return j;
}

}  // namespace confdfs
