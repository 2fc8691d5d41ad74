#pragma once

#include <json.hpp>
#include <string>

#include "confdfs/degree_model.hpp"
#include "confdfs/genfun.hpp"
#include "confdfs/graph_dfs.hpp"
#include "confdfs/ode_fluid.hpp"

namespace confdfs {

using Json = nlohmann::ordered_json;

/// {"family": ..., "params": {...}} or {"explicit": [mass, ...]}.
Json dist_to_json(const DegreeDistribution& dist);
DegreeDistribution dist_from_json(const Json& j);

/// Compact CLI spec: "poisson:3", "dirac:5", "binomial:5,0.6",
/// "geometric:0.4", "power_law:2.5[,C]".
DegreeDistribution parse_dist_spec(const std::string& spec);

/// Newline-delimited integers.
void write_degree_sequence(const std::string& path, const DegreeSequence& seq);
DegreeSequence read_degree_sequence(const std::string& path);

void write_trace_csv(const std::string& path, const ContourTrace& trace);
void write_edges_csv(const std::string& path, const ContourTrace& trace);
void write_ladders_csv(const std::string& path,
                       const std::vector<std::int64_t>& ladders);

/// [{"alpha":..., "step":..., "sleeping":..., "counts": {"deg": count}}]
Json snapshots_to_json(const std::vector<InducedHistogram>& snaps);

void write_profile_csv(const std::string& path, const ProfileCurve& pc);
/// h sampled on a uniform t-grid over [0,2].
void write_height_csv(const std::string& path, const ProfileCurve& pc,
                      int samples = 2001);
Json profile_summary_json(const ProfileCurve& pc);

void write_trajectory_csv(const std::string& path, const FluidTrajectory& traj);
Json identity_report_json(const TruncatedIdentityReport& rep);

void ensure_directory(const std::string& dir);
void write_text(const std::string& path, const std::string& content);

}  // namespace confdfs
