#pragma once

#include <optional>
#include <vector>

#include "xord/game.hpp"
#include "xord/permutation.hpp"

namespace xord {

/// Switching s(v, sigma): every colored edge at v gets its permutation pi
/// replaced by sigma.pi; gray edges are untouched. With sigma = sigma_k in L_d'
/// this shifts the color c to (c + k) mod d and never leaves L_d.
struct SwitchOp {
    int vertex = 0;
    Permutation sigma;
};

inline LabeledGameGraph apply_switch(const LabeledGameGraph& g, const SwitchOp& op) {
    const int d = g.outcome_count();
    if (op.vertex < 0 || op.vertex >= g.vertex_count()) throw invalid_argument("switch vertex out of range");
    if (op.sigma.degree() != d) throw invalid_argument("switch permutation does not act on [d]");
    LabeledGameGraph out(g.vertex_count(), d, g.bipartition());
    for (const auto& e : g.edges()) {
        EdgeLabel label = e.label;
        if (!label.is_gray() && (e.u == op.vertex || e.v == op.vertex)) {
            const Permutation composed = op.sigma.after(g.perms().perms[label.color]);
            int new_color = -1;
            for (int c = 0; c < d; ++c)
                if (g.perms().perms[c] == composed) {
                    new_color = c;
                    break;
                }
            if (new_color < 0)
                throw invalid_argument("switch permutation leaves the L_d label set; use sigma from L_d'");
            label.color = new_color;
        }
        out.add_edge(e.u, e.v, label);
    }
    return out;
}

/// Shift-switch at each vertex: color of {u,v} becomes (c + k_u + k_v) mod d.
/// Equivalent to applying s(v, sigma_{k_v}) for every v; the switching group is
/// exactly these vectors.
inline LabeledGameGraph apply_switch_vector(const LabeledGameGraph& g, const std::vector<int>& shifts) {
    const int d = g.outcome_count();
    if (static_cast<int>(shifts.size()) != g.vertex_count()) throw invalid_argument("shift vector length mismatch");
    LabeledGameGraph out(g.vertex_count(), d, g.bipartition());
    for (const auto& e : g.edges()) {
        EdgeLabel label = e.label;
        if (!label.is_gray()) label.color = ((label.color + shifts[e.u] + shifts[e.v]) % d + d) % d;
        out.add_edge(e.u, e.v, label);
    }
    return out;
}

/// Relabels vertices: vertex v of g becomes perm[v].
inline LabeledGameGraph apply_vertex_map(const LabeledGameGraph& g, const std::vector<int>& perm,
                                         std::optional<int> keep_bipartition = std::nullopt) {
    LabeledGameGraph out(g.vertex_count(), g.outcome_count(), keep_bipartition);
    for (const auto& e : g.edges()) out.add_edge(perm[e.u], perm[e.v], e.label);
    return out;
}

}  // namespace xord
