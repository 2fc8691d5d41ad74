#include "confdfs/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "confdfs/errors.hpp"

namespace confdfs {

Json dist_to_json(const DegreeDistribution& dist) {
    Json j;
    switch (dist.family()) {
        case Family::Poisson:
            j["family"] = "poisson";
            j["params"] = {{"c", dist.param_a()}};
            break;
        case Family::Dirac:
            j["family"] = "dirac";
            j["params"] = {{"d", int(dist.param_a())}};
            break;
        case Family::Binomial:
            j["family"] = "binomial";
            j["params"] = {{"d", int(dist.param_a())}, {"p", dist.param_b()}};
            break;
        case Family::Geometric:
            j["family"] = "geometric";
            j["params"] = {{"p", dist.param_a()}};
            break;
        case Family::PowerLaw:
            j["family"] = "power_law";
            j["params"] = {{"gamma", dist.param_a()}, {"tail_const", dist.param_b()}};
            break;
        case Family::Explicit: {
            std::vector<double> m(dist.masses().data(),
                                  dist.masses().data() + dist.masses().size());
            j["explicit"] = m;
            break;
        }
    }
    return j;
}

DegreeDistribution dist_from_json(const Json& j) {
    if (j.contains("explicit")) {
        std::vector<double> m = j.at("explicit").get<std::vector<double>>();
        return DegreeDistribution::from_masses(
            Eigen::Map<Eigen::ArrayXd>(m.data(), long(m.size())));
    }
    std::string fam = j.at("family").get<std::string>();
    const Json& p = j.value("params", Json::object());
    if (fam == "poisson") return DegreeDistribution::poisson(p.at("c").get<double>());
    if (fam == "dirac") return DegreeDistribution::dirac(p.at("d").get<int>());
    if (fam == "binomial")
        return DegreeDistribution::binomial(p.at("d").get<int>(), p.at("p").get<double>());
    if (fam == "geometric") return DegreeDistribution::geometric(p.at("p").get<double>());
    if (fam == "power_law")
        return DegreeDistribution::power_law(p.at("gamma").get<double>(),
                                             p.value("tail_const", 1.0));
    throw DomainError("unknown distribution family: " + fam);
}

DegreeDistribution parse_dist_spec(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw DomainError("distribution spec must look like family:params");
    std::string fam = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);
    std::vector<double> args;
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) args.push_back(std::stod(tok));
    auto need = [&](std::size_t n) {
        if (args.size() < n) throw DomainError("too few parameters in " + spec);
    };
    if (fam == "poisson") { need(1); return DegreeDistribution::poisson(args[0]); }
    if (fam == "dirac") { need(1); return DegreeDistribution::dirac(int(args[0])); }
    if (fam == "binomial") { need(2); return DegreeDistribution::binomial(int(args[0]), args[1]); }
    if (fam == "geometric") { need(1); return DegreeDistribution::geometric(args[0]); }
    if (fam == "power_law" || fam == "powerlaw") {
        need(1);
        return DegreeDistribution::power_law(args[0], args.size() > 1 ? args[1] : 1.0);
    }
    throw DomainError("unknown distribution family: " + fam);
}

void write_degree_sequence(const std::string& path, const DegreeSequence& seq) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open " + path);
    for (int d : seq.degrees) out << d << '\n';
}

DegreeSequence read_degree_sequence(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path);
    DegreeSequence seq;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        seq.degrees.push_back(std::stoi(line));
    }
    if (seq.degrees.empty()) throw DomainError("no degrees in " + path);
    return seq;
}

void write_trace_csv(const std::string& path, const ContourTrace& trace) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open " + path);
    out << "step,X\n";
    for (std::size_t n = 0; n < trace.contour.size(); ++n)
        out << n << ',' << trace.contour[n] << '\n';
}

void write_edges_csv(const std::string& path, const ContourTrace& trace) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open " + path);
    out << "u,v\n";
    for (auto [u, v] : trace.edges) out << u << ',' << v << '\n';
}

void write_ladders_csv(const std::string& path,
                       const std::vector<std::int64_t>& ladders) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open " + path);
    out << "k,T_k\n";
    for (std::size_t k = 0; k < ladders.size(); ++k)
        out << k << ',' << ladders[k] << '\n';
}

Json snapshots_to_json(const std::vector<InducedHistogram>& snaps) {
    Json arr = Json::array();
    for (const auto& s : snaps) {
        Json j;
        if (s.alpha >= 0.0) j["alpha"] = s.alpha;
        j["step"] = s.step;
        j["sleeping"] = s.sleeping;
        Json counts = Json::object();
        for (std::size_t i = 0; i < s.counts.size(); ++i)
            if (s.counts[i] != 0) counts[std::to_string(i)] = s.counts[i];
        j["counts"] = counts;
        arr.push_back(j);
    }
    return arr;
}

void write_profile_csv(const std::string& path, const ProfileCurve& pc) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open " + path);
    out.precision(12);
    out << "rho,x_up,y_up,x_down,y_down\n";
    for (long m = 0; m < pc.rho.size(); ++m)
        out << pc.rho[m] << ',' << pc.x_up[m] << ',' << pc.y_up[m] << ','
            << pc.x_down[m] << ',' << pc.y_down[m] << '\n';
}

void write_height_csv(const std::string& path, const ProfileCurve& pc, int samples) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open " + path);
    out.precision(12);
    out << "t,h\n";
    for (int j = 0; j < samples; ++j) {
        double t = 2.0 * double(j) / double(samples - 1);
        out << t << ',' << pc.height(t) << '\n';
    }
}

Json profile_summary_json(const ProfileCurve& pc) {
    return Json{{"rho_pi", pc.rho_pi},
                {"xi_pi", pc.xi_pi},
                {"alpha_c", pc.alpha_c},
                {"h_max", pc.h_max}};
}

void write_trajectory_csv(const std::string& path, const FluidTrajectory& traj) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open " + path);
    out.precision(12);
    const bool has_clock = !traj.clock.empty();
    long cap = traj.z.empty() ? 0 : traj.z.front().size();
    out << "t";
    if (has_clock) out << ",z";
    for (long i = 0; i < cap; ++i) out << ",z_" << i;
    out << ",rho\n";
    for (std::size_t j = 0; j < traj.t.size(); ++j) {
        out << traj.t[j];
        if (has_clock) out << ',' << traj.clock[j];
        for (long i = 0; i < cap; ++i) out << ',' << traj.z[j][i];
        out << ',' << traj.rho[j] << '\n';
    }
}

Json identity_report_json(const TruncatedIdentityReport& rep) {
    return Json{{"t", rep.t},
                {"dt", rep.dt},
                {"epsilon", rep.epsilon},
                {"delta_cap", rep.delta_cap},
                {"sup_residual", rep.sup_residual}};
}

void ensure_directory(const std::string& dir) {
    if (!dir.empty()) std::filesystem::create_directories(dir);
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open " + path);
    out << content;
}

}  // namespace confdfs
