#include "confdfs/graph_dfs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "confdfs/errors.hpp"
#include "confdfs/rng.hpp"

namespace confdfs {

namespace {

/// Flat pool of unmatched half-edges with O(1) uniform draw and O(1)
/// removal of a specific half-edge, plus per-vertex ownership lists.
class HalfEdgePool {
public:
    explicit HalfEdgePool(const std::vector<int>& degrees) {
        std::int64_t total = 0;
        for (int d : degrees) total += d;
        owner_.reserve(std::size_t(total));
        pool_.reserve(std::size_t(total));
        pos_.reserve(std::size_t(total));
        slot_.reserve(std::size_t(total));
        mine_.resize(degrees.size());
        for (std::size_t v = 0; v < degrees.size(); ++v) {
            for (int j = 0; j < degrees[v]; ++j) {
                std::int32_t h = std::int32_t(owner_.size());
                owner_.push_back(std::int32_t(v));
                pos_.push_back(h);
                pool_.push_back(h);
                slot_.push_back(std::int32_t(mine_[v].size()));
                mine_[v].push_back(h);
            }
        }
    }

    std::int64_t size() const { return std::int64_t(pool_.size()); }
    std::int32_t owner(std::int32_t h) const { return owner_[std::size_t(h)]; }
    bool has_unmatched(std::int32_t v) const { return !mine_[std::size_t(v)].empty(); }

    /// Any unmatched half-edge of v (they are exchangeable).
    std::int32_t take_from(std::int32_t v) {
        std::int32_t h = mine_[std::size_t(v)].back();
        remove(h);
        return h;
    }

    std::int32_t draw_uniform(Rng& rng) {
        std::int32_t h = pool_[std::size_t(rng.below(pool_.size()))];
        remove(h);
        return h;
    }

private:
    void remove(std::int32_t h) {
        // swap-remove from the flat pool
        std::int32_t p = pos_[std::size_t(h)];
        std::int32_t last = pool_.back();
        pool_[std::size_t(p)] = last;
        pos_[std::size_t(last)] = p;
        pool_.pop_back();
        // and from the owner's list
        auto& own = mine_[std::size_t(owner_[std::size_t(h)])];
        std::int32_t s = slot_[std::size_t(h)];
        std::int32_t moved = own.back();
        own[std::size_t(s)] = moved;
        slot_[std::size_t(moved)] = s;
        own.pop_back();
    }

    std::vector<std::int32_t> owner_;               // half-edge -> vertex
    std::vector<std::int32_t> pool_;                // unmatched half-edge ids
    std::vector<std::int32_t> pos_;                 // half-edge -> pool index
    std::vector<std::vector<std::int32_t>> mine_;   // vertex -> its unmatched
    std::vector<std::int32_t> slot_;                // half-edge -> index in mine_
};

struct ActiveEntry {
    std::int32_t vertex;
    std::vector<std::int32_t> pending;  // matched partners, uniform order
    std::size_t head = 0;               // withdrawn entries are skipped lazily
};

}  // namespace

ExploreResult explore_and_build(const DegreeSequence& seq, std::uint64_t seed,
                                const ExploreOptions& options) {
    const int n = seq.size();
    if (n < 1) throw DomainError("empty degree sequence");
    if (seq.degree_sum() % 2 != 0)
        throw DomainError("odd half-edge total; run the parity fix first");
    for (int d : seq.degrees)
        if (d < 0) throw DomainError("negative degree");

    Rng rng(seed);
    HalfEdgePool pool(seq.degrees);

    std::vector<std::uint8_t> sleeping(std::size_t(n), 1);
    // hist[i] = sleeping vertices with i unmatched half-edges; this equals
    // the degree histogram of the graph they induce in the final graph.
    std::vector<std::int64_t> hist(std::size_t(seq.max_degree()) + 1, 0);
    std::vector<std::int32_t> unmatched(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        unmatched[std::size_t(v)] = seq.degrees[std::size_t(v)];
        ++hist[std::size_t(seq.degrees[std::size_t(v)])];
    }

    ExploreResult res;
    ContourTrace& tr = res.trace;
    tr.num_vertices = n;
    tr.contour.reserve(std::size_t(2 * n + 1));
    tr.contour.push_back(0);
    tr.edges.reserve(std::size_t(seq.degree_sum() / 2));
    tr.tree_parent.assign(std::size_t(n), -1);

    std::vector<ActiveEntry> stack;
    std::int64_t woken = 0;
    std::int64_t step = 0;

    std::vector<double> alphas = options.snapshot_alphas;
    std::sort(alphas.begin(), alphas.end());
    std::size_t next_alpha = 0;
    std::vector<std::int64_t> steps = options.snapshot_steps;
    std::sort(steps.begin(), steps.end());
    std::size_t next_step = 0;

    auto capture = [&](double alpha) {
        InducedHistogram snap;
        snap.alpha = alpha;
        snap.step = step;
        snap.sleeping = std::int64_t(n) - woken;
        snap.counts = hist;
        return snap;
    };
    auto maybe_snapshot = [&]() {
        while (next_alpha < alphas.size() &&
               double(woken) >= alphas[next_alpha] * double(n) - 1e-9) {
            res.alpha_snapshots.push_back(capture(alphas[next_alpha]));
            ++next_alpha;
        }
        while (next_step < steps.size() && steps[next_step] <= step) {
            res.step_snapshots.push_back(capture(-1.0));
            res.step_snapshots.back().step = steps[next_step];
            ++next_step;
        }
    };
    maybe_snapshot();  // step-0 state

    auto wake = [&](std::int32_t v) {
        tr.tree_parent[std::size_t(v)] = stack.empty() ? -1 : stack.back().vertex;
        --hist[std::size_t(unmatched[std::size_t(v)])];
        sleeping[std::size_t(v)] = 0;
        ++woken;
        ActiveEntry entry;
        entry.vertex = v;
        // Match every remaining half-edge of v to a uniform unmatched
        // half-edge; self-pairings become loops and consume two of v's.
        while (pool.has_unmatched(v)) {
            pool.take_from(v);
            --unmatched[std::size_t(v)];
            std::int32_t h = pool.draw_uniform(rng);
            std::int32_t w = pool.owner(h);
            tr.edges.emplace_back(v, w);
            if (w == v) {
                --unmatched[std::size_t(v)];
            } else {
                --hist[std::size_t(unmatched[std::size_t(w)])];
                --unmatched[std::size_t(w)];
                ++hist[std::size_t(unmatched[std::size_t(w)])];
                entry.pending.push_back(w);
            }
        }
        rng.shuffle(entry.pending);
        stack.push_back(std::move(entry));
    };

    while (woken < n || !stack.empty()) {
        if (stack.empty()) {
            // finished a component: wake a uniform sleeping vertex
            std::int32_t v;
            do {
                v = std::int32_t(rng.below(std::uint64_t(n)));
            } while (!sleeping[std::size_t(v)]);
            wake(v);
        } else {
            ActiveEntry& top = stack.back();
            while (top.head < top.pending.size() &&
                   !sleeping[std::size_t(top.pending[top.head])])
                ++top.head;  // withdrawn occurrences
            if (top.head < top.pending.size()) {
                std::int32_t v = top.pending[top.head];
                ++top.head;
                wake(v);
            } else {
                stack.pop_back();
            }
        }
        ++step;
        tr.contour.push_back(std::int32_t(stack.size()));
        if (stack.empty()) tr.component_boundaries.push_back(step);
        maybe_snapshot();
    }
    return res;
}

std::vector<std::int64_t> ladder_times(const ContourTrace& trace, double delta) {
    if (delta <= 0.0 || delta >= 0.5) throw DomainError("delta must be in (0, 1/2)");
    const auto& x = trace.contour;
    const std::int64_t len = std::int64_t(x.size());
    const std::int64_t w =
        std::int64_t(std::floor(std::pow(double(trace.num_vertices), delta)));

    // min over [i, min(i + w, end)] by a right-to-left sliding window
    std::vector<std::int32_t> winmin(static_cast<std::size_t>(len));
    std::deque<std::int64_t> dq;
    for (std::int64_t i = len - 1; i >= 0; --i) {
        while (!dq.empty() && dq.front() > i + w) dq.pop_front();
        while (!dq.empty() && x[std::size_t(dq.back())] >= x[std::size_t(i)])
            dq.pop_back();
        dq.push_back(i);
        winmin[std::size_t(i)] = x[std::size_t(dq.front())];
    }

    std::vector<std::int64_t> t;
    t.push_back(0);
    std::int32_t level = 1;
    for (std::int64_t i = 1; i < len; ++i) {
        if (x[std::size_t(i)] == level && winmin[std::size_t(i)] >= level) {
            t.push_back(i);
            ++level;
        }
    }
    return t;
}

namespace {

struct BridgeAnalysis {
    std::vector<std::uint8_t> is_bridge;        // per edge id
    std::vector<std::int64_t> comp_size;        // per vertex
    std::vector<std::int64_t> subtree;          // per vertex (DFS tree)
    std::vector<std::int32_t> parent;           // per vertex
    std::vector<std::int32_t> parent_edge;      // per vertex
};

/// Iterative Tarjan bridge finding on a multigraph; parallel edges are
/// distinguished by edge id so only genuine bridges are flagged.
BridgeAnalysis find_bridges(int n,
                            const std::vector<std::pair<std::int32_t, std::int32_t>>& edges) {
    struct Arc {
        std::int32_t to;
        std::int32_t edge;
    };
    std::vector<std::vector<Arc>> adj(static_cast<std::size_t>(n));
    for (std::size_t e = 0; e < edges.size(); ++e) {
        auto [u, v] = edges[e];
        if (u == v) continue;  // loops are never bridges
        adj[std::size_t(u)].push_back({v, std::int32_t(e)});
        adj[std::size_t(v)].push_back({u, std::int32_t(e)});
    }

    BridgeAnalysis ba;
    ba.is_bridge.assign(edges.size(), 0);
    ba.comp_size.assign(std::size_t(n), 0);
    ba.subtree.assign(std::size_t(n), 1);
    ba.parent.assign(std::size_t(n), -1);
    ba.parent_edge.assign(std::size_t(n), -1);

    std::vector<std::int32_t> disc(std::size_t(n), -1), low(std::size_t(n), 0);
    std::vector<std::uint32_t> iter(std::size_t(n), 0);
    std::vector<std::int32_t> order;
    order.reserve(std::size_t(n));
    std::int32_t clock = 0;

    for (int root = 0; root < n; ++root) {
        if (disc[std::size_t(root)] >= 0) continue;
        std::vector<std::int32_t> comp_vertices;
        std::vector<std::int32_t> st{std::int32_t(root)};
        disc[std::size_t(root)] = low[std::size_t(root)] = clock++;
        comp_vertices.push_back(root);
        while (!st.empty()) {
            std::int32_t u = st.back();
            if (iter[std::size_t(u)] < adj[std::size_t(u)].size()) {
                Arc a = adj[std::size_t(u)][iter[std::size_t(u)]++];
                if (a.edge == ba.parent_edge[std::size_t(u)]) continue;
                if (disc[std::size_t(a.to)] < 0) {
                    ba.parent[std::size_t(a.to)] = u;
                    ba.parent_edge[std::size_t(a.to)] = a.edge;
                    disc[std::size_t(a.to)] = low[std::size_t(a.to)] = clock++;
                    comp_vertices.push_back(a.to);
                    st.push_back(a.to);
                } else {
                    low[std::size_t(u)] = std::min(low[std::size_t(u)], disc[std::size_t(a.to)]);
                }
            } else {
                st.pop_back();
                std::int32_t p = ba.parent[std::size_t(u)];
                if (p >= 0) {
                    low[std::size_t(p)] = std::min(low[std::size_t(p)], low[std::size_t(u)]);
                    ba.subtree[std::size_t(p)] += ba.subtree[std::size_t(u)];
                    if (low[std::size_t(u)] > disc[std::size_t(p)])
                        ba.is_bridge[std::size_t(ba.parent_edge[std::size_t(u)])] = 1;
                }
            }
        }
        std::int64_t size = std::int64_t(comp_vertices.size());
        for (std::int32_t v : comp_vertices) ba.comp_size[std::size_t(v)] = size;
    }
    return ba;
}

}  // namespace

HalfEdgeClassCounts classify_half_edges(const ContourTrace& trace, double delta) {
    const int n = trace.num_vertices;
    const double threshold = std::pow(double(n), delta);

    std::vector<std::int32_t> degree(std::size_t(n), 0);
    for (auto [u, v] : trace.edges) {
        ++degree[std::size_t(u)];
        ++degree[std::size_t(v)];
    }
    int maxdeg = 0;
    for (int v = 0; v < n; ++v) maxdeg = std::max(maxdeg, int(degree[std::size_t(v)]));

    BridgeAnalysis ba = find_bridges(n, trace.edges);

    HalfEdgeClassCounts out;
    out.ext_by_degree.assign(std::size_t(maxdeg) + 1, 0);
    out.surv_by_degree.assign(std::size_t(maxdeg) + 1, 0);

    auto classify = [&](std::int32_t w, std::int64_t size) {
        if (double(size) < threshold) {
            ++out.ext_by_degree[std::size_t(degree[std::size_t(w)])];
            ++out.ext_total;
        } else {
            ++out.surv_by_degree[std::size_t(degree[std::size_t(w)])];
            ++out.surv_total;
        }
        ++out.half_edges;
    };

    for (std::size_t e = 0; e < trace.edges.size(); ++e) {
        auto [u, v] = trace.edges[e];
        if (u == v) {  // a loop removal never splits the component
            classify(u, ba.comp_size[std::size_t(u)]);
            classify(u, ba.comp_size[std::size_t(u)]);
            continue;
        }
        if (ba.is_bridge[e]) {
            // orient: the DFS child side carries the subtree count
            std::int32_t child =
                (ba.parent_edge[std::size_t(v)] == std::int32_t(e)) ? v : u;
            std::int32_t par = (child == v) ? u : v;
            std::int64_t child_side = ba.subtree[std::size_t(child)];
            std::int64_t par_side = ba.comp_size[std::size_t(child)] - child_side;
            classify(child, child_side);
            classify(par, par_side);
        } else {
            classify(u, ba.comp_size[std::size_t(u)]);
            classify(v, ba.comp_size[std::size_t(v)]);
        }
    }
    return out;
}

std::int64_t longest_path_lower_bound(const ContourTrace& trace) {
    std::int32_t peak = 0;
    for (std::int32_t x : trace.contour) peak = std::max(peak, x);
    return std::int64_t(peak) - 1 > 0 ? std::int64_t(peak) - 1 : 0;
}

std::vector<std::int64_t> excursion_vertex_counts(const ContourTrace& trace) {
    std::vector<std::int64_t> out;
    std::int64_t start = 0;
    for (std::int64_t b : trace.component_boundaries) {
        out.push_back((b - start) / 2);
        start = b;
    }
    return out;
}

}  // namespace confdfs
