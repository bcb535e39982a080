#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "xord/game.hpp"
#include "xord/plain_graph.hpp"

namespace xord {

struct ClassicalReport {
    int beta_c = 0;        // minimum contradictions over all assignments
    int gamma_c = 0;       // colored edges - beta_c
    double omega_c = 0;    // gamma_c / colored edges
    Assignment witness;    // attains beta_c
};

namespace classical_detail {

struct SearchContext {
    int n = 0, d = 0;
    // edges incident to vertex order[i] whose other endpoint appears earlier
    std::vector<std::vector<std::pair<int, const Permutation*>>> back_edges;  // (earlier slot, perm from earlier)
    std::vector<std::vector<std::pair<int, const Permutation*>>> back_edges_rev;
    std::vector<int> order;
    int best = 0;
    std::vector<int> best_values;  // indexed by slot
    std::vector<int> current;

    void search(int slot, int contradictions) {
        if (contradictions >= best) return;
        if (slot == n) {
            best = contradictions;
            best_values = current;
            return;
        }
        for (int a = 0; a < d; ++a) {
            current[slot] = a;
            int add = 0;
            for (size_t i = 0; i < back_edges[slot].size(); ++i) {
                auto [other, pi] = back_edges[slot][i];
                if ((*pi)(current[other]) != a) ++add;
            }
            search(slot + 1, contradictions + add);
        }
    }
};

}  // namespace classical_detail

/// Exact classical value by exhaustive assignment search with contradiction
/// pruning; gray edges do not enter the count. Vertices are visited in BFS
/// order over the colored subgraph so constraints bind early.
inline ClassicalReport classical_value(const LabeledGameGraph& g, double state_budget = 1e9) {
    const int n = g.vertex_count();
    const int d = g.outcome_count();
    if (g.colored_edge_count() == 0) throw invalid_game("classical_value: game has no colored edges");
    double states = 1;
    for (int i = 0; i < n; ++i) {
        states *= d;
        if (states > state_budget) throw resource_limit("classical_value: d^n exceeds the search budget");
    }

    // BFS order over colored adjacency, isolated-from-color vertices last
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, color)
    for (const auto& e : g.edges()) {
        if (e.label.is_gray()) continue;
        adj[e.u].emplace_back(e.v, e.label.color);
        adj[e.v].emplace_back(e.u, e.label.color);
    }
    std::vector<int> order, slot_of(n, -1);
    for (int s = 0; s < n; ++s) {
        if (slot_of[s] >= 0) continue;
        slot_of[s] = static_cast<int>(order.size());
        order.push_back(s);
        size_t qi = order.size() - 1;
        while (qi < order.size()) {
            int u = order[qi++];
            for (auto [v, c] : adj[u])
                if (slot_of[v] < 0) {
                    slot_of[v] = static_cast<int>(order.size());
                    order.push_back(v);
                }
        }
    }

    classical_detail::SearchContext ctx;
    ctx.n = n;
    ctx.d = d;
    ctx.order = order;
    ctx.back_edges.resize(n);
    const auto& perms = g.perms().perms;
    for (const auto& e : g.edges()) {
        if (e.label.is_gray()) continue;
        int su = slot_of[e.u], sv = slot_of[e.v];
        const Permutation* pi = &perms[e.label.color];
        // P1 makes the permutation readable from either end
        if (su < sv)
            ctx.back_edges[sv].emplace_back(su, pi);
        else
            ctx.back_edges[su].emplace_back(sv, pi);
    }
    ctx.best = g.colored_edge_count() + 1;
    ctx.current.assign(n, 0);
    ctx.search(0, 0);

    ClassicalReport rep;
    rep.beta_c = ctx.best;
    rep.gamma_c = g.colored_edge_count() - rep.beta_c;
    rep.omega_c = static_cast<double>(rep.gamma_c) / g.colored_edge_count();
    rep.witness.values.assign(n, 0);
    for (int slot = 0; slot < n; ++slot) rep.witness.values[order[slot]] = ctx.best_values[slot];
    return rep;
}

// --- cycles ------------------------------------------------------------------

struct CycleRecord {
    std::vector<int> vertices;  // v0, v1, ..., v_{t-1}; closes back to v0
    Permutation composed;       // walk composition starting at v0
    int fixed_points = 0;       // = number of consistent assignments of the cycle
};

struct CycleReport {
    std::vector<CycleRecord> cycles;
    int xi_good = 0, xi_bad = 0, xi_ugly = 0;
    bool bipartite_zero_or_d = true;  // for bipartite L_d games every count is 0 or d
};

/// Composition of the edge permutations around a simple cycle, applied from the
/// first listed vertex onward, plus its fixed-point count.
inline std::pair<Permutation, int> cycle_perm(const LabeledGameGraph& g, const std::vector<int>& cycle) {
    if (cycle.size() < 3) throw invalid_argument("cycle_perm: need at least 3 vertices");
    const int t = static_cast<int>(cycle.size());
    Permutation composed = Permutation::identity(g.outcome_count());
    for (int i = 0; i < t; ++i) {
        int u = cycle[i], v = cycle[(i + 1) % t];
        if (!g.has_edge(u, v) || g.label(u, v).is_gray())
            throw invalid_argument("cycle_perm: not a closed walk over colored edges");
        composed = g.perms().perms[g.label(u, v).color].after(composed);
    }
    // distinct vertices
    std::vector<int> sorted = cycle;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw invalid_argument("cycle_perm: repeated vertex");
    return {composed, composed.fixed_point_count()};
}

/// Enumerates every simple cycle of the colored subgraph and classifies each as
/// good (d fixed points), bad (none) or ugly. Cycles are rooted at their lowest
/// vertex and emitted once per orientation class.
inline CycleReport classify_cycles(const LabeledGameGraph& g, long cycle_budget = 100'000) {
    const int n = g.vertex_count();
    const int d = g.outcome_count();
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : g.edges()) {
        if (e.label.is_gray()) continue;
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());

    CycleReport rep;
    const bool check_zero_or_d = g.bipartition().has_value();

    std::vector<int> path;
    std::vector<bool> on_path(n, false);
    auto dfs = [&](auto&& self, int start, int u) -> void {
        for (int v : adj[u]) {
            if (v == start && path.size() >= 3) {
                if (path[1] < path.back()) continue;  // one orientation per cycle
                if (static_cast<long>(rep.cycles.size()) >= cycle_budget)
                    throw resource_limit("classify_cycles: cycle budget exceeded");
                auto [composed, fp] = cycle_perm(g, path);
                CycleRecord rec{path, composed, fp};
                if (fp == d)
                    ++rep.xi_good;
                else if (fp == 0)
                    ++rep.xi_bad;
                else
                    ++rep.xi_ugly;
                if (check_zero_or_d && fp != 0 && fp != d) rep.bipartite_zero_or_d = false;
                rep.cycles.push_back(std::move(rec));
            } else if (v > start && !on_path[v]) {
                on_path[v] = true;
                path.push_back(v);
                self(self, start, v);
                path.pop_back();
                on_path[v] = false;
            }
        }
    };
    for (int s = 0; s < n; ++s) {
        path = {s};
        std::fill(on_path.begin(), on_path.end(), false);
        on_path[s] = true;
        dfs(dfs, s, s);
    }
    return rep;
}

/// The Observation-2 window: with no ugly cycles the count of bad cycles is the
/// claimed exact value, otherwise all but one ugly cycle may need an edge.
inline std::pair<int, int> contradiction_bounds(const CycleReport& rep) {
    if (rep.xi_ugly == 0) return {rep.xi_bad, rep.xi_bad};
    return {rep.xi_bad, rep.xi_bad + rep.xi_ugly - 1};
}

inline std::pair<int, int> contradiction_bounds(const LabeledGameGraph& g) {
    return contradiction_bounds(classify_cycles(g));
}

// --- edge bipartization -------------------------------------------------------

struct BipartizationResult {
    int beta2 = 0;  // |E| - maxcut
    std::vector<std::pair<int, int>> removed;
    std::vector<int> sides;  // optimal bipartition
};

/// beta^(2): fewest edge removals to make the graph bipartite, via the max-cut
/// identity; exhaustive over 2^(n-1) splits.
inline BipartizationResult edge_bipartization_number(const PlainGraph& graph) {
    const int n = graph.vertex_count();
    if (n > 20) throw resource_limit("edge_bipartization: n > 20");
    const auto edges = graph.edge_list();
    int best_cut = -1;
    std::uint32_t best_mask = 0;
    const std::uint32_t limit = n >= 1 ? (1u << (n - 1)) : 1;
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
        const std::uint64_t side1 = static_cast<std::uint64_t>(mask) << 1;  // vertex 0 stays on side 0
        int cut = 0;
        for (int u = 0; u < n; ++u)
            if (!((side1 >> u) & 1ULL)) cut += std::popcount(graph.neighbors(u) & side1);
        if (cut > best_cut) {
            best_cut = cut;
            best_mask = mask;
        }
    }
    BipartizationResult res;
    res.beta2 = static_cast<int>(edges.size()) - best_cut;
    const std::uint64_t side1 = static_cast<std::uint64_t>(best_mask) << 1;
    res.sides.assign(n, 0);
    for (int u = 0; u < n; ++u) res.sides[u] = static_cast<int>((side1 >> u) & 1ULL);
    for (auto [u, v] : edges)
        if (res.sides[u] == res.sides[v]) res.removed.emplace_back(u, v);
    return res;
}

/// Game-level wrapper: valid for the single-anticorrelation-color class where
/// beta^(2) equals the contradiction number exactly.
inline BipartizationResult edge_bipartization(const LabeledGameGraph& g) {
    if (g.outcome_count() != 2) throw unsupported("edge_bipartization: defined for d = 2");
    for (const auto& e : g.edges())
        if (e.label.is_gray() || e.label.color != 1)
            throw unsupported("edge_bipartization: every edge must carry the anticorrelation color");
    PlainGraph u(g.vertex_count());
    for (const auto& e : g.edges()) u.add_edge(e.u, e.v);
    return edge_bipartization_number(u);
}

}  // namespace xord
