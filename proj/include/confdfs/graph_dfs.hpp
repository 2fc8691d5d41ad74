#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "confdfs/degree_model.hpp"

namespace confdfs {

/// Degree histogram of the graph induced by the sleeping vertices,
/// captured at one point of the exploration. counts[i] = number of sleeping
/// vertices whose degree inside the remaining graph is i.
struct InducedHistogram {
    double alpha = -1.0;       ///< requested explored fraction (if alpha-triggered)
    std::int64_t step = 0;     ///< step index of the captured state
    std::int64_t sleeping = 0;
    std::vector<std::int64_t> counts;
};

struct ContourTrace {
    int num_vertices = 0;
    /// X_0..X_{2N}; X_0 = 0, steps are +-1, X_{2N} = 0. Each wake (case-1
    /// restart or advance) is an up step, each retire a down step.
    std::vector<std::int32_t> contour;
    /// Steps n > 0 with X_n = 0: one entry per finished component.
    std::vector<std::int64_t> component_boundaries;
    /// Realized multigraph, one entry per edge; loops appear as (v,v).
    std::vector<std::pair<std::int32_t, std::int32_t>> edges;
    /// DFS forest: tree_parent[v] = vertex whose pending list woke v, or -1
    /// for excursion roots. The active list is always the ancestor chain of
    /// its last vertex.
    std::vector<std::int32_t> tree_parent;
};

struct ExploreOptions {
    std::vector<double> snapshot_alphas;        ///< sorted, in [0,1]
    std::vector<std::int64_t> snapshot_steps;   ///< sorted step indices
};

struct ExploreResult {
    ContourTrace trace;
    std::vector<InducedHistogram> alpha_snapshots;
    std::vector<InducedHistogram> step_snapshots;
};

/// Builds a uniform configuration-model multigraph by lazy half-edge
/// matching while running its depth-first exploration. Every individual
/// pairing is drawn uniformly among the currently unmatched half-edges;
/// loops stay in the edge list but never enter the pending lists.
ExploreResult explore_and_build(const DegreeSequence& seq, std::uint64_t seed,
                                const ExploreOptions& options = {});

/// Ladder times: T_0 = 0 and T_{k+1} = first step i > T_k with X_i = k+1 and
/// X_j >= k+1 for all j in [i, i + N^delta] (window truncated at the trace
/// end). Returns T_0..T_K where K is the last achievable level.
std::vector<std::int64_t> ladder_times(const ContourTrace& trace, double delta);

struct HalfEdgeClassCounts {
    /// Half-edges whose removal strands their endpoint in a component of
    /// fewer than N^delta vertices (ext) or at least N^delta (surv),
    /// bucketed by endpoint degree.
    std::vector<std::int64_t> ext_by_degree, surv_by_degree;
    std::int64_t ext_total = 0, surv_total = 0;
    std::int64_t half_edges = 0;
};

/// Exact classification via bridge detection: a non-bridge half-edge keeps
/// its whole component, a bridge half-edge keeps one side of the split.
HalfEdgeClassCounts classify_half_edges(const ContourTrace& trace, double delta);

/// DFS tree height: the active list is a simple path in the graph, so
/// max_n X_n - 1 bounds the longest simple path from below.
std::int64_t longest_path_lower_bound(const ContourTrace& trace);

/// Vertex counts of the explored components, in exploration order.
std::vector<std::int64_t> excursion_vertex_counts(const ContourTrace& trace);

}  // namespace confdfs
