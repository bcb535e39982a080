#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xord/game.hpp"
#include "xord/kg.hpp"
#include "xord/plain_graph.hpp"
#include "xord/switching.hpp"

namespace xord {

namespace equiv_detail {

inline PlainGraph underlying(const LabeledGameGraph& g) {
    PlainGraph u(g.vertex_count());
    for (const auto& e : g.edges()) u.add_edge(e.u, e.v);
    return u;
}

// Spanning forest of the colored subgraph; parent[v] = (neighbor, color) along
// the tree, roots listed per component in discovery order.
struct ColoredForest {
    std::vector<int> parent;        // -1 at roots and gray-isolated vertices
    std::vector<int> parent_color;  // color of the tree edge to parent
    std::vector<int> roots;
    std::vector<int> order;  // vertices in BFS discovery order
};

inline ColoredForest colored_forest(const LabeledGameGraph& g) {
    const int n = g.vertex_count();
    ColoredForest f;
    f.parent.assign(n, -1);
    f.parent_color.assign(n, -1);
    std::vector<bool> seen(n, false);
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, color)
    bool any_colored = false;
    std::vector<bool> touches_color(n, false);
    for (const auto& e : g.edges()) {
        if (e.label.is_gray()) continue;
        adj[e.u].emplace_back(e.v, e.label.color);
        adj[e.v].emplace_back(e.u, e.label.color);
        touches_color[e.u] = touches_color[e.v] = true;
        any_colored = true;
    }
    (void)any_colored;
    for (int s = 0; s < n; ++s) {
        if (seen[s] || !touches_color[s]) continue;
        f.roots.push_back(s);
        seen[s] = true;
        std::vector<int> queue{s};
        size_t qi = 0;
        while (qi < queue.size()) {
            int u = queue[qi++];
            f.order.push_back(u);
            for (auto [v, c] : adj[u]) {
                if (seen[v]) continue;
                seen[v] = true;
                f.parent[v] = u;
                f.parent_color[v] = c;
                queue.push_back(v);
            }
        }
    }
    return f;
}

// Label string of g in sorted-edge order after applying the shift vector; gray
// encodes as d.
inline std::vector<int> label_string(const LabeledGameGraph& g, const std::vector<int>& shifts) {
    const int d = g.outcome_count();
    std::vector<std::tuple<int, int, int>> rows;
    for (const auto& e : g.edges()) {
        int sym = e.label.is_gray() ? d : ((e.label.color + shifts[e.u] + shifts[e.v]) % d + d) % d;
        rows.emplace_back(e.u, e.v, sym);
    }
    std::sort(rows.begin(), rows.end());
    std::vector<int> out;
    for (auto& [u, v, sym] : rows) out.push_back(sym);
    return out;
}

// Minimal label string over the whole switching class of g (graph fixed).
// A switching vector is determined by its values at the colored-forest roots,
// so the orbit is scanned with d^(#roots) trials.
inline std::vector<int> min_switching_string(const LabeledGameGraph& g, long budget = 1 << 20) {
    const int d = g.outcome_count();
    const auto forest = colored_forest(g);
    const int n = g.vertex_count();
    long trials = 1;
    for (size_t i = 0; i < forest.roots.size(); ++i) {
        trials *= d;
        if (trials > budget) throw resource_limit("switching orbit enumeration budget exceeded");
    }
    std::vector<int> best;
    std::vector<int> root_vals(forest.roots.size(), 0);
    for (long t = 0; t < trials; ++t) {
        long rem = t;
        for (size_t i = 0; i < root_vals.size(); ++i) {
            root_vals[i] = static_cast<int>(rem % d);
            rem /= d;
        }
        std::vector<int> shifts(n, 0);
        for (size_t i = 0; i < forest.roots.size(); ++i) shifts[forest.roots[i]] = root_vals[i];
        for (int v : forest.order) {
            int p = forest.parent[v];
            if (p < 0) continue;
            // tree edge normalizes to color 0: c + k_p + k_v = 0
            shifts[v] = ((-forest.parent_color[v] - shifts[p]) % d + d) % d;
        }
        auto s = label_string(g, shifts);
        if (best.empty() || s < best) best = std::move(s);
    }
    if (best.empty()) best = label_string(g, std::vector<int>(n, 0));
    return best;
}

}  // namespace equiv_detail

/// Canonical byte encoding of the orbit of (G, K) under vertex permutations and
/// L_d' switchings. Two games encode equally iff they are equivalent.
inline std::vector<std::uint8_t> game_canonical_form(const LabeledGameGraph& g, size_t aut_budget = 100'000) {
    const auto u = equiv_detail::underlying(g);
    const auto canon = canonical_form(u);

    // canonical copy of the underlying graph
    PlainGraph c = u.relabeled(canon.relabeling);
    const auto auts = automorphism_group(c, aut_budget);

    std::vector<int> best_labels;
    for (const auto& alpha : auts) {
        std::vector<int> phi(g.vertex_count());
        for (int v = 0; v < g.vertex_count(); ++v) phi[v] = alpha[canon.relabeling[v]];
        const auto relabeled = apply_vertex_map(g, phi);
        auto s = equiv_detail::min_switching_string(relabeled);
        if (best_labels.empty() || s < best_labels) best_labels = std::move(s);
    }

    std::vector<std::uint8_t> out;
    out.push_back(static_cast<std::uint8_t>(g.outcome_count()));
    out.push_back(static_cast<std::uint8_t>(g.vertex_count()));
    for (auto row : canonical_form(c).encoding)
        for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>((row >> (8 * b)) & 0xff));
    for (int sym : best_labels) out.push_back(static_cast<std::uint8_t>(sym));
    return out;
}

inline std::string to_hex(const std::vector<std::uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xf]);
    }
    return s;
}

/// Equivalence test. Total games use the KG-cover isomorphism characterization;
/// games with gray edges fall back to the orbit encoding, which requires gray
/// edges to match under the isomorphism.
inline bool equivalent(const LabeledGameGraph& g1, const LabeledGameGraph& g2) {
    if (g1.outcome_count() != g2.outcome_count()) throw invalid_argument("equivalent: games have different d");
    if (g1.vertex_count() != g2.vertex_count()) return false;
    if (!g1.has_gray_edges() && !g2.has_gray_edges()) {
        const auto kg1 = build_kg(g1);
        const auto kg2 = build_kg(g2);
        return canonical_form(kg1.cover).encoding == canonical_form(kg2.cover).encoding;
    }
    return game_canonical_form(g1) == game_canonical_form(g2);
}

/// A concrete witness that switch-then-relabel maps g1 onto g2.
struct EquivalenceWitness {
    std::vector<int> vertex_map;  // vertex v of g1 becomes vertex_map[v] of g2
    std::vector<int> shifts;      // switch s(v, sigma_{shifts[v]}) applied before relabeling
};

inline std::optional<EquivalenceWitness> find_equivalence_witness(const LabeledGameGraph& g1,
                                                                  const LabeledGameGraph& g2,
                                                                  size_t aut_budget = 100'000) {
    if (g1.outcome_count() != g2.outcome_count() || g1.vertex_count() != g2.vertex_count()) return std::nullopt;
    const int d = g1.outcome_count();
    const auto u1 = equiv_detail::underlying(g1);
    const auto u2 = equiv_detail::underlying(g2);
    const auto c1 = canonical_form(u1);
    const auto c2 = canonical_form(u2);
    if (c1.encoding != c2.encoding) return std::nullopt;

    PlainGraph c = u1.relabeled(c1.relabeling);
    std::vector<int> inv2(g2.vertex_count());
    for (int v = 0; v < g2.vertex_count(); ++v) inv2[c2.relabeling[v]] = v;

    const auto forest = equiv_detail::colored_forest(g1);
    for (const auto& alpha : automorphism_group(c, aut_budget)) {
        // candidate isomorphism g1 -> g2
        std::vector<int> phi(g1.vertex_count());
        for (int v = 0; v < g1.vertex_count(); ++v) phi[v] = inv2[alpha[c1.relabeling[v]]];
        // gray edges must map to gray edges
        bool ok = true;
        for (const auto& e : g1.edges()) {
            if (!u2.has_edge(phi[e.u], phi[e.v])) {
                ok = false;
                break;
            }
            if (e.label.is_gray() != g2.label(phi[e.u], phi[e.v]).is_gray()) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;

        // solve color2[phi(u), phi(v)] = color1[u,v] + k_u + k_v over the forest
        long trials = 1;
        for (size_t i = 0; i < forest.roots.size(); ++i) trials *= d;
        for (long t = 0; t < trials; ++t) {
            std::vector<int> shifts(g1.vertex_count(), 0);
            long rem = t;
            for (int root : forest.roots) {
                shifts[root] = static_cast<int>(rem % d);
                rem /= d;
            }
            for (int v : forest.order) {
                int p = forest.parent[v];
                if (p < 0) continue;
                int want = g2.label(phi[v], phi[p]).color;
                shifts[v] = ((want - forest.parent_color[v] - shifts[p]) % d + d) % d;
            }
            bool match = true;
            for (const auto& e : g1.edges()) {
                if (e.label.is_gray()) continue;
                int got = ((e.label.color + shifts[e.u] + shifts[e.v]) % d + d) % d;
                if (got != g2.label(phi[e.u], phi[e.v]).color) {
                    match = false;
                    break;
                }
            }
            if (match) return EquivalenceWitness{phi, shifts};
        }
    }
    return std::nullopt;
}

}  // namespace xord
