#pragma once

#include <vector>

#include "xord/game.hpp"
#include "xord/plain_graph.hpp"

namespace xord {

/// The d-fold cover of (G, K): vertex (i, s) for i in V(G), s in [d], with
/// (i,s) ~ (j,t) iff {i,j} is a colored edge and pi_{ij}(s) = t. Gray edges
/// are skipped. Cover vertex (i, s) sits at index i*d + s.
struct KGGraph {
    int base_n = 0;
    int d = 0;
    PlainGraph cover;

    int vertex_index(int base_vertex, int value) const { return base_vertex * d + value; }
};

inline KGGraph build_kg(const LabeledGameGraph& g) {
    const int n = g.vertex_count();
    const int d = g.outcome_count();
    if (n * d > 64) throw resource_limit("KG cover would exceed 64 vertices");
    KGGraph kg;
    kg.base_n = n;
    kg.d = d;
    kg.cover = PlainGraph(n * d);
    for (const auto& e : g.edges()) {
        if (e.label.is_gray()) continue;
        const auto pi = g.edge_permutation(e);
        for (int s = 0; s < d; ++s) kg.cover.add_edge(kg.vertex_index(e.u, s), kg.vertex_index(e.v, pi(s)));
    }
    return kg;
}

/// beta'_C: the number of connected components of KG isomorphic to G. For a
/// connected total game this equals the count of contradiction-free assignments.
inline int assignment_number(const LabeledGameGraph& g) {
    if (g.has_gray_edges()) throw unsupported("assignment_number requires a total (gray-free) labeling");
    PlainGraph base(g.vertex_count());
    for (const auto& e : g.edges()) base.add_edge(e.u, e.v);
    if (!base.is_connected()) throw unsupported("assignment_number is defined for connected game graphs");

    const KGGraph kg = build_kg(g);
    const auto comp = kg.cover.components();
    int num_components = 0;
    for (int c : comp) num_components = std::max(num_components, c + 1);

    const auto base_canon = canonical_form(base).encoding;
    int count = 0;
    for (int c = 0; c < num_components; ++c) {
        std::vector<int> verts;
        for (int v = 0; v < kg.cover.vertex_count(); ++v)
            if (comp[v] == c) verts.push_back(v);
        if (static_cast<int>(verts.size()) != g.vertex_count()) continue;
        PlainGraph sub(static_cast<int>(verts.size()));
        for (size_t a = 0; a < verts.size(); ++a)
            for (size_t b = a + 1; b < verts.size(); ++b)
                if (kg.cover.has_edge(verts[a], verts[b])) sub.add_edge(static_cast<int>(a), static_cast<int>(b));
        if (canonical_form(sub).encoding == base_canon) ++count;
    }

    // Cross-check: on a connected graph a consistent assignment is determined by
    // the value at vertex 0 (labels are involutions), so count by propagation.
    int by_propagation = 0;
    const int d = g.outcome_count();
    for (int t = 0; t < d; ++t) {
        std::vector<int> value(g.vertex_count(), -1);
        value[0] = t;
        std::vector<int> queue{0};
        while (!queue.empty()) {
            int u = queue.back();
            queue.pop_back();
            for (const auto& e : g.edges()) {
                if (e.u != u && e.v != u) continue;
                int w = (e.u == u) ? e.v : e.u;
                int forced = g.edge_permutation(e)(value[u]);
                if (value[w] < 0) {
                    value[w] = forced;
                    queue.push_back(w);
                }
            }
        }
        bool ok = true;
        for (const auto& e : g.edges())
            if (g.edge_permutation(e)(value[e.u]) != value[e.v]) ok = false;
        by_propagation += ok;
    }
    if (by_propagation != count)
        throw std::logic_error("assignment_number: component count disagrees with propagation count");
    return count;
}

}  // namespace xord
