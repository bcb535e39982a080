#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "xord/error.hpp"
#include "xord/plain_graph.hpp"

namespace xord {

struct GraphFilter {
    bool connected = true;
    int min_degree = 2;
    std::optional<bool> bipartite;
    bool complete_bipartite_only = false;
};

inline bool is_complete_bipartite(const PlainGraph& g) {
    auto sides = g.bipartite_sides();
    if (!sides) return false;
    for (int u = 0; u < g.vertex_count(); ++u)
        for (int v = u + 1; v < g.vertex_count(); ++v)
            if ((*sides)[u] != (*sides)[v] && !g.has_edge(u, v)) return false;
    return true;
}

inline bool passes_filter(const PlainGraph& g, const GraphFilter& f) {
    if (f.connected && !g.is_connected()) return false;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.degree(v) < f.min_degree) return false;
    if (f.bipartite && *f.bipartite != g.bipartite_sides().has_value()) return false;
    if (f.complete_bipartite_only && !is_complete_bipartite(g)) return false;
    return true;
}

/// One representative per isomorphism class of graphs on n vertices matching
/// the filter, in canonical-encoding order. Grown one vertex at a time with
/// canonical dedup at every level.
inline std::vector<PlainGraph> enum_graphs(int n, const GraphFilter& filter = {}) {
    if (n < 1) throw invalid_argument("enum_graphs: n >= 1");
    if (n > 8) throw resource_limit("enum_graphs: n > 8 exceeds the enumeration budget");

    std::vector<PlainGraph> level{PlainGraph(1)};
    for (int k = 2; k <= n; ++k) {
        std::map<std::vector<std::uint64_t>, PlainGraph> next;
        for (const auto& base : level) {
            for (std::uint32_t mask = 0; mask < (1u << (k - 1)); ++mask) {
                PlainGraph g(k);
                for (auto [u, v] : base.edge_list()) g.add_edge(u, v);
                for (int u = 0; u < k - 1; ++u)
                    if ((mask >> u) & 1u) g.add_edge(u, k - 1);
                auto canon = canonical_form(g);
                if (!next.count(canon.encoding)) next.emplace(canon.encoding, g.relabeled(canon.relabeling));
            }
        }
        level.clear();
        for (auto& [enc, g] : next) level.push_back(std::move(g));
    }

    std::vector<PlainGraph> out;
    for (const auto& g : level)
        if (passes_filter(g, filter)) out.push_back(g);
    return out;
}

}  // namespace xord
